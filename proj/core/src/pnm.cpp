#include "fpnet/pnm.hpp"

#include <cctype>
#include <fstream>
#include <string>
#include <vector>

#include "fpnet/errors.hpp"

namespace fpnet {

namespace {

// Reads the next header token, skipping whitespace and '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n')
                c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return tok;
}

int parse_dim(const std::string& tok, const char* what) {
    if (tok.empty())
        throw ImageError(ImageError::Kind::BadHeader, std::string("missing ") + what);
    try {
        const int v = std::stoi(tok);
        if (v < 1)
            throw ImageError(ImageError::Kind::BadHeader,
                             std::string("non-positive ") + what + ": " + tok);
        return v;
    } catch (const ImageError&) {
        throw;
    } catch (const std::exception&) {
        throw ImageError(ImageError::Kind::BadHeader,
                         std::string("unparsable ") + what + ": '" + tok + "'");
    }
}

} // namespace

Image load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ImageError(ImageError::Kind::Io, "cannot open image file: " + path);

    const std::string magic = next_token(in);
    int channels = 0;
    if (magic == "P6")
        channels = 3;
    else if (magic == "P5")
        channels = 1;
    else
        throw ImageError(ImageError::Kind::BadMagic,
                         path + ": unsupported magic '" + magic + "' (want P5 or P6)");

    const int width = parse_dim(next_token(in), "width");
    const int height = parse_dim(next_token(in), "height");
    const int maxval = parse_dim(next_token(in), "maxval");
    if (maxval != 255)
        throw ImageError(ImageError::Kind::BadMaxval,
                         path + ": maxval " + std::to_string(maxval) + " unsupported (want 255)");
    // The single whitespace byte after maxval was consumed by the tokenizer.

    const std::size_t n = static_cast<std::size_t>(width) * height * channels;
    std::vector<char> raw(n);
    in.read(raw.data(), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw ImageError(ImageError::Kind::Truncated,
                         path + ": expected " + std::to_string(n) + " pixel bytes, got " +
                             std::to_string(in.gcount()));

    Image img(height, width, channels);
    for (std::size_t i = 0; i < n; ++i)
        img.data[i] = normalize_u8(static_cast<std::uint8_t>(raw[i]));
    if (channels == 1)
        return expand_to_rgb(img);
    return img;
}

void save_ppm(const std::string& path, const Image& img) {
    const Image rgb = expand_to_rgb(img);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ImageError(ImageError::Kind::Io, "cannot open for writing: " + path);
    out << "P6\n" << rgb.width << " " << rgb.height << "\n255\n";
    std::vector<char> raw(rgb.data.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        raw[i] = static_cast<char>(denormalize_u8(rgb.data[i]));
    out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (!out)
        throw ImageError(ImageError::Kind::Io, "write failed: " + path);
}

} // namespace fpnet
