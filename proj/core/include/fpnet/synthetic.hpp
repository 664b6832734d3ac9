#pragma once

#include <cstdint>
#include <vector>

#include "fpnet/network.hpp"
#include "fpnet/proposals.hpp"
#include "fpnet/pyramid.hpp"

namespace fpnet {

// A level "owns" a face when the face side, scaled to that level, lands
// within [0.8, 1.25] of the 12-pixel window; same rule for part windows.
constexpr double kMatchLow = 12.0 * 0.8;
constexpr double kMatchHigh = 12.0 * 1.25;

struct PlantedFace {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    double side() const { return ((x2 - x1) + (y2 - y1)) / 2.0; }
    BBox as_bbox() const { return {x1, y1, x2, y2, 1.0, kFaceClass, 1.0}; }
};

struct GroundTruthScene {
    int width = 0;
    int height = 0;
    std::vector<PlantedFace> faces;
};

// Builds per-level heatmaps with ideal responses planted for each face: a
// face peak at the grid cell nearest the face window at the level owning the
// face, and part peaks at the cells nearest each template anchor at the level
// owning the part size. Background cells get uniform noise in [0, noise].
// Throws SceneError when a face is representable neither directly nor through
// its parts.
std::vector<HeatmapSet> plant_heatmaps(const GroundTruthScene& scene,
                                       const std::vector<LevelGeometry>& levels,
                                       const std::vector<PartTemplate>& templates,
                                       double noise, std::uint64_t seed);

// Seeded random scene: 1-4 non-overlapping faces, each sized to be owned by
// some pyramid level either directly or through its parts, placed away from
// borders so inferred boxes stay unclamped.
GroundTruthScene make_random_scene(std::uint64_t seed, int width, int height,
                                   const std::vector<LevelGeometry>& levels,
                                   const std::vector<PartTemplate>& templates);

// True when every face in the scene has a proposal with IoU >= iou_thresh.
bool scene_recovered(const std::vector<BBox>& proposals, const GroundTruthScene& scene,
                     double iou_thresh);

} // namespace fpnet
