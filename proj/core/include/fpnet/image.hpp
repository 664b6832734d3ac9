#pragma once

#include <cstdint>
#include <vector>

namespace fpnet {

// Planar raster, row-major (row, column, channel), values normalized once to
// [-1, 1] via (v - 127.5) / 127.5 when decoded from 8-bit sources.
struct Image {
    int height = 0;
    int width = 0;
    int channels = 0; // 1 or 3
    std::vector<float> data;

    Image() = default;
    Image(int h, int w, int c)
        : height(h), width(w), channels(c),
          data(static_cast<std::size_t>(h) * w * c, 0.0f) {}

    float& at(int r, int c, int ch) {
        return data[(static_cast<std::size_t>(r) * width + c) * channels + ch];
    }
    float at(int r, int c, int ch) const {
        return data[(static_cast<std::size_t>(r) * width + c) * channels + ch];
    }
};

// 8-bit -> [-1, 1].
inline float normalize_u8(std::uint8_t v) {
    return (static_cast<float>(v) - 127.5f) / 127.5f;
}

// [-1, 1] -> 8-bit, clamped.
std::uint8_t denormalize_u8(float v);

// Grayscale -> 3 identical channels; 3-channel images pass through.
Image expand_to_rgb(const Image& img);

} // namespace fpnet
