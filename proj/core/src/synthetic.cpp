#include "fpnet/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpnet/errors.hpp"
#include "fpnet/random.hpp"

namespace fpnet {

namespace {

int plant_classes(const std::vector<PartTemplate>& templates) {
    int c = kFirstPartClass; // background + face at minimum
    for (const PartTemplate& t : templates)
        c = std::max(c, t.part + 1);
    return c;
}

// Index of the level whose scale puts `side` pixels closest to the 12-pixel
// window, or -1 when no level lands in the match band.
int best_level(const std::vector<LevelGeometry>& levels, double side) {
    int best = -1;
    double best_err = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const double scaled = side * levels[i].scale;
        if (scaled < kMatchLow || scaled > kMatchHigh)
            continue;
        const double err = std::abs(scaled - 12.0);
        if (best < 0 || err < best_err) {
            best = static_cast<int>(i);
            best_err = err;
        }
    }
    return best;
}

int clamp_cell(double v, int limit) {
    return static_cast<int>(std::clamp<long>(std::lround(v), 0L, static_cast<long>(limit - 1)));
}

void plant_peak(std::vector<HeatmapSet>& maps, int level, int cls, int row, int col) {
    HeatmapSet& hs = maps[static_cast<std::size_t>(level)];
    for (std::size_t m = 0; m < hs.maps.size(); ++m)
        hs.maps[m].at(row, col) = (static_cast<int>(m) == cls) ? 1.0f : 0.0f;
}

} // namespace

std::vector<HeatmapSet> plant_heatmaps(const GroundTruthScene& scene,
                                       const std::vector<LevelGeometry>& levels,
                                       const std::vector<PartTemplate>& templates,
                                       double noise, std::uint64_t seed) {
    const int num_classes = plant_classes(templates);
    UniformSource rng(seed);

    std::vector<HeatmapSet> maps;
    maps.reserve(levels.size());
    for (const LevelGeometry& g : levels) {
        int gh = 0, gw = 0;
        heatmap_grid_dims(g.height, g.width, gh, gw);
        if (gh < 1 || gw < 1)
            throw ShapeError("plant_heatmaps: level too small for a heatmap grid");
        HeatmapSet hs;
        hs.level_scale = g.scale;
        hs.image_width = scene.width;
        hs.image_height = scene.height;
        hs.maps.assign(static_cast<std::size_t>(num_classes), Heatmap(gh, gw));
        // background noise; the background class keeps the per-cell sum at 1
        for (int r = 0; r < gh; ++r)
            for (int c = 0; c < gw; ++c) {
                double sum = 0.0;
                for (int cls = 1; cls < num_classes; ++cls) {
                    const double v = rng.next_unit() * noise;
                    hs.maps[static_cast<std::size_t>(cls)].at(r, c) = static_cast<float>(v);
                    sum += v;
                }
                if (sum > 1.0) {
                    for (int cls = 1; cls < num_classes; ++cls)
                        hs.maps[static_cast<std::size_t>(cls)].at(r, c) =
                            static_cast<float>(hs.maps[static_cast<std::size_t>(cls)].at(r, c) / sum);
                    sum = 1.0;
                }
                hs.maps[0].at(r, c) = static_cast<float>(1.0 - sum);
            }
        maps.push_back(std::move(hs));
    }

    for (std::size_t fi = 0; fi < scene.faces.size(); ++fi) {
        const PlantedFace& face = scene.faces[fi];
        const double side = face.side();

        const int face_level = best_level(levels, side);
        if (face_level >= 0) {
            const HeatmapSet& hs = maps[static_cast<std::size_t>(face_level)];
            const double s = levels[static_cast<std::size_t>(face_level)].scale;
            const int row = clamp_cell(face.y1 * s / 2.0, hs.grid_height());
            const int col = clamp_cell(face.x1 * s / 2.0, hs.grid_width());
            plant_peak(maps, face_level, kFaceClass, row, col);
        }

        bool parts_planted = false;
        for (const PartTemplate& t : templates) {
            const int part_level = best_level(levels, side / t.face_ratio);
            if (part_level < 0)
                continue;
            const HeatmapSet& hs = maps[static_cast<std::size_t>(part_level)];
            const double s = levels[static_cast<std::size_t>(part_level)].scale;
            const double cx = face.x1 + t.anchor_x * side;
            const double cy = face.y1 + t.anchor_y * side;
            const int row = clamp_cell((cy * s - 6.0) / 2.0, hs.grid_height());
            const int col = clamp_cell((cx * s - 6.0) / 2.0, hs.grid_width());
            plant_peak(maps, part_level, t.part, row, col);
            parts_planted = true;
        }

        if (face_level < 0 && !parts_planted)
            throw SceneError("plant_heatmaps: face " + std::to_string(fi) + " (side " +
                             std::to_string(side) +
                             ") is representable at no pyramid level, directly or via parts");
    }
    return maps;
}

GroundTruthScene make_random_scene(std::uint64_t seed, int width, int height,
                                   const std::vector<LevelGeometry>& levels,
                                   const std::vector<PartTemplate>& templates) {
    UniformSource rng(seed);
    GroundTruthScene scene;
    scene.width = width;
    scene.height = height;

    // Sizes are drawn inside [0.95, 1.08] of a level's nominal window so the
    // quantized recovery box always clears IoU 0.7 against the truth.
    constexpr double kSizeLow = 0.95;
    constexpr double kSizeHigh = 1.08;

    struct Option {
        int level;
        bool via_parts;
    };
    std::vector<Option> options;
    const double part_ratio = templates.empty() ? 0.0 : templates.front().face_ratio;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const LevelGeometry& g = levels[i];
        int gh = 0, gw = 0;
        heatmap_grid_dims(g.height, g.width, gh, gw);
        // direct: need interior grid cells and the face inside the image
        const double face_side_max = 12.0 * kSizeHigh / g.scale;
        const int max_c = std::min(gw - 2, static_cast<int>(std::floor(
                                               (width * g.scale - 12.0 * kSizeHigh - 1.0) / 2.0)));
        const int max_r = std::min(gh - 2, static_cast<int>(std::floor(
                                               (height * g.scale - 12.0 * kSizeHigh - 1.0) / 2.0)));
        if (max_c >= 1 && max_r >= 1 && face_side_max < std::min(width, height))
            options.push_back({static_cast<int>(i), false});
        // via parts: the inferred boxes reach half a face side beyond the face
        if (part_ratio > 0.0) {
            const double part_face_max = 12.0 * part_ratio * kSizeHigh / g.scale;
            if (2.0 * part_face_max <= std::min(width, height))
                options.push_back({static_cast<int>(i), true});
        }
    }
    if (options.empty())
        throw ConfigError("make_random_scene: no pyramid level can host a face in a " +
                          std::to_string(width) + "x" + std::to_string(height) + " scene");

    const int want = 1 + static_cast<int>(rng.next_below(4));
    for (int fi = 0; fi < want; ++fi) {
        for (int attempt = 0; attempt < 50; ++attempt) {
            const Option opt = options[rng.next_below(options.size())];
            const LevelGeometry& g = levels[static_cast<std::size_t>(opt.level)];
            const double u = rng.next_in(kSizeLow, kSizeHigh);

            PlantedFace face;
            if (!opt.via_parts) {
                int gh = 0, gw = 0;
                heatmap_grid_dims(g.height, g.width, gh, gw);
                const int max_c = std::min(
                    gw - 2,
                    static_cast<int>(std::floor((width * g.scale - 12.0 * kSizeHigh - 1.0) / 2.0)));
                const int max_r = std::min(
                    gh - 2,
                    static_cast<int>(std::floor((height * g.scale - 12.0 * kSizeHigh - 1.0) / 2.0)));
                const int c = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_c)));
                const int r = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_r)));
                const double side = 12.0 * u / g.scale;
                face.x1 = (2.0 * c + rng.next_in(-0.5, 0.5)) / g.scale;
                face.y1 = (2.0 * r + rng.next_in(-0.5, 0.5)) / g.scale;
                face.x2 = face.x1 + side;
                face.y2 = face.y1 + side;
            } else {
                const double side = 12.0 * part_ratio * u / g.scale;
                const double margin = 0.5 * side;
                face.x1 = rng.next_in(margin, width - side - margin);
                face.y1 = rng.next_in(margin, height - side - margin);
                face.x2 = face.x1 + side;
                face.y2 = face.y1 + side;
            }

            bool clashes = false;
            for (const PlantedFace& other : scene.faces) {
                const double pad = 0.3 * std::max(face.side(), other.side());
                if (face.x1 - pad < other.x2 && other.x1 - pad < face.x2 &&
                    face.y1 - pad < other.y2 && other.y1 - pad < face.y2) {
                    clashes = true;
                    break;
                }
            }
            if (!clashes) {
                scene.faces.push_back(face);
                break;
            }
        }
    }
    return scene;
}

bool scene_recovered(const std::vector<BBox>& proposals, const GroundTruthScene& scene,
                     double iou_thresh) {
    for (const PlantedFace& face : scene.faces) {
        const BBox truth = face.as_bbox();
        bool found = false;
        for (const BBox& p : proposals)
            if (iou(p, truth) >= iou_thresh) {
                found = true;
                break;
            }
        if (!found)
            return false;
    }
    return true;
}

} // namespace fpnet
