#include "fpnet/pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpnet/errors.hpp"

namespace fpnet {

namespace {

int scaled_dim(int dim, double scale) {
    return static_cast<int>(std::lround(dim * scale));
}

} // namespace

std::vector<LevelGeometry> pyramid_geometry(int height, int width, const PyramidConfig& cfg) {
    if (cfg.min_face < 1.0)
        throw ConfigError("pyramid: min_face must be >= 1, got " + std::to_string(cfg.min_face));
    if (!(cfg.scale_factor > 0.0) || !(cfg.scale_factor < 1.0))
        throw ConfigError("pyramid: scale_factor must be in (0, 1), got " +
                          std::to_string(cfg.scale_factor));

    const double s0 = cfg.base_scale();
    if (scaled_dim(height, s0) < 12 || scaled_dim(width, s0) < 12)
        throw ShapeError("pyramid: " + std::to_string(width) + "x" + std::to_string(height) +
                         " image is below 12x12 at the base scale " + std::to_string(s0));

    std::vector<double> scales;
    for (double s = s0; std::min(scaled_dim(height, s), scaled_dim(width, s)) >= 12;
         s *= cfg.scale_factor)
        scales.push_back(s);

    if (cfg.extra_layer) {
        const double extra = 0.5 * s0;
        if (std::min(scaled_dim(height, extra), scaled_dim(width, extra)) >= 12)
            scales.push_back(extra);
    }

    std::sort(scales.begin(), scales.end(), std::greater<double>());
    scales.erase(std::unique(scales.begin(), scales.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-6; }),
                 scales.end());

    std::vector<LevelGeometry> levels;
    levels.reserve(scales.size());
    for (double s : scales)
        levels.push_back({s, scaled_dim(height, s), scaled_dim(width, s)});
    return levels;
}

std::vector<PyramidLevel> build_pyramid(const Image& image, const PyramidConfig& cfg) {
    const std::vector<LevelGeometry> geometry = pyramid_geometry(image.height, image.width, cfg);
    std::vector<PyramidLevel> levels;
    levels.reserve(geometry.size());
    for (const LevelGeometry& g : geometry)
        levels.push_back({g.scale, resize_bilinear(image, g.height, g.width)});
    return levels;
}

std::uint64_t pyramid_workload(const std::vector<LevelGeometry>& levels) {
    std::uint64_t cells = 0;
    for (const LevelGeometry& g : levels)
        cells += static_cast<std::uint64_t>(g.height) * static_cast<std::uint64_t>(g.width);
    return cells;
}

std::uint64_t pyramid_workload(const std::vector<PyramidLevel>& levels) {
    std::uint64_t cells = 0;
    for (const PyramidLevel& l : levels)
        cells += static_cast<std::uint64_t>(l.image.height) * static_cast<std::uint64_t>(l.image.width);
    return cells;
}

Image resize_bilinear(const Image& image, int new_h, int new_w) {
    if (new_h < 1 || new_w < 1)
        throw ShapeError("resize_bilinear: target size must be >= 1x1");
    if (image.height < 1 || image.width < 1)
        throw ShapeError("resize_bilinear: empty source image");

    if (new_h == image.height && new_w == image.width)
        return image;

    Image out(new_h, new_w, image.channels);
    const double sy = static_cast<double>(image.height) / new_h;
    const double sx = static_cast<double>(image.width) / new_w;
    const int c = image.channels;

    for (int y = 0; y < new_h; ++y) {
        const double src_y = (y + 0.5) * sy - 0.5;
        const double fy = std::clamp(src_y, 0.0, static_cast<double>(image.height - 1));
        const int y0 = static_cast<int>(std::floor(fy));
        const int y1 = std::min(y0 + 1, image.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < new_w; ++x) {
            const double src_x = (x + 0.5) * sx - 0.5;
            const double fx = std::clamp(src_x, 0.0, static_cast<double>(image.width - 1));
            const int x0 = static_cast<int>(std::floor(fx));
            const int x1 = std::min(x0 + 1, image.width - 1);
            const double wx = fx - x0;
            for (int ch = 0; ch < c; ++ch) {
                const double top = image.at(y0, x0, ch) * (1.0 - wx) + image.at(y0, x1, ch) * wx;
                const double bot = image.at(y1, x0, ch) * (1.0 - wx) + image.at(y1, x1, ch) * wx;
                out.at(y, x, ch) = static_cast<float>(top * (1.0 - wy) + bot * wy);
            }
        }
    }
    return out;
}

} // namespace fpnet
