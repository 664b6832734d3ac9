#pragma once

#include <string>

#include "fpnet/image.hpp"

namespace fpnet {

// Decodes a binary PPM (P6) or PGM (P5) file with maxval 255. Grayscale is
// expanded to 3 channels; pixel values come out normalized to [-1, 1].
// Throws ImageError with a distinct kind for bad magic, wrong maxval,
// truncated pixel data, and unreadable files.
Image load_image(const std::string& path);

// Writes a binary PPM (P6), denormalizing back to 8-bit.
void save_ppm(const std::string& path, const Image& img);

} // namespace fpnet
