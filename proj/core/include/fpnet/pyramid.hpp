#pragma once

#include <cstdint>
#include <vector>

#include "fpnet/image.hpp"

namespace fpnet {

// Pyramid schedule. The base scale is 12 / min_face so the smallest face of
// interest fills the network's 12-pixel window at the first level; each
// further level shrinks by scale_factor until a dimension would drop below
// 12. extra_layer additionally inserts a level at half the base scale.
struct PyramidConfig {
    double scale_factor = 0.79;
    double min_face = 40.0;
    bool extra_layer = false;

    double base_scale() const { return 12.0 / min_face; }
};

struct LevelGeometry {
    double scale = 1.0; // level pixels / original pixels
    int height = 0;
    int width = 0;
};

struct PyramidLevel {
    double scale = 1.0;
    Image image;
};

// The level schedule for an original image of the given size, scales strictly
// descending, deduplicated within 1e-6. Throws if the base level itself is
// smaller than 12x12.
std::vector<LevelGeometry> pyramid_geometry(int height, int width, const PyramidConfig& cfg);

// Resizes the image to every scheduled level.
std::vector<PyramidLevel> build_pyramid(const Image& image, const PyramidConfig& cfg);

// Total cells across levels; the proxy for proposal-stage compute cost.
std::uint64_t pyramid_workload(const std::vector<LevelGeometry>& levels);
std::uint64_t pyramid_workload(const std::vector<PyramidLevel>& levels);

// Bilinear resampling with half-pixel-center mapping ((x+0.5)/scale - 0.5).
Image resize_bilinear(const Image& image, int new_h, int new_w);

} // namespace fpnet
