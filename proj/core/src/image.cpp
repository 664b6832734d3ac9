#include "fpnet/image.hpp"

#include <algorithm>
#include <cmath>

namespace fpnet {

std::uint8_t denormalize_u8(float v) {
    const float raw = v * 127.5f + 127.5f;
    const long r = std::lround(raw);
    return static_cast<std::uint8_t>(std::clamp(r, 0L, 255L));
}

Image expand_to_rgb(const Image& img) {
    if (img.channels == 3)
        return img;
    Image out(img.height, img.width, 3);
    const std::size_t n = static_cast<std::size_t>(img.height) * img.width;
    for (std::size_t i = 0; i < n; ++i) {
        const float v = img.data[i];
        out.data[i * 3 + 0] = v;
        out.data[i * 3 + 1] = v;
        out.data[i * 3 + 2] = v;
    }
    return out;
}

} // namespace fpnet
