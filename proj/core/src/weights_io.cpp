#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "fpnet/errors.hpp"
#include "fpnet/network.hpp"

namespace fpnet {

namespace {

constexpr char kMagic[4] = {'F', 'P', 'N', 'W'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    // little-endian
    const char bytes[4] = {
        static_cast<char>(v & 0xff),
        static_cast<char>((v >> 8) & 0xff),
        static_cast<char>((v >> 16) & 0xff),
        static_cast<char>((v >> 24) & 0xff),
    };
    out.write(bytes, 4);
}

void put_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

class Reader {
public:
    Reader(std::istream& in, const std::string& path) : in_(in), path_(path) {}

    std::uint32_t u32(const char* what) {
        unsigned char bytes[4];
        read(bytes, 4, what);
        return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
               (static_cast<std::uint32_t>(bytes[2]) << 16) |
               (static_cast<std::uint32_t>(bytes[3]) << 24);
    }

    float f32(const char* what) {
        const std::uint32_t bits = u32(what);
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }

    void f32_array(std::vector<float>& dst, std::size_t n, const char* what) {
        dst.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            dst[i] = f32(what);
    }

    std::string bytes_as_string(std::size_t n, const char* what) {
        std::string s(n, '\0');
        read(s.data(), n, what);
        return s;
    }

    void read(void* dst, std::size_t n, const char* what) {
        in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n)
            throw WeightsError(WeightsError::Kind::Truncated,
                               path_ + ": truncated while reading " + what);
    }

private:
    std::istream& in_;
    const std::string& path_;
};

} // namespace

void save_weights(const NetworkWeights& weights, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw WeightsError(WeightsError::Kind::Io, "cannot open for writing: " + path);

    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(weights.num_classes));
    put_u32(out, static_cast<std::uint32_t>(weights.layers.size()));
    for (const Layer& layer : weights.layers) {
        const LayerSpec& s = layer.spec;
        put_u32(out, static_cast<std::uint32_t>(s.name.size()));
        out.write(s.name.data(), static_cast<std::streamsize>(s.name.size()));
        const char kind = static_cast<char>(s.kind);
        out.write(&kind, 1);
        put_u32(out, static_cast<std::uint32_t>(s.kernel));
        put_u32(out, static_cast<std::uint32_t>(s.stride));
        put_u32(out, static_cast<std::uint32_t>(s.pad));
        put_u32(out, static_cast<std::uint32_t>(s.in_channels));
        put_u32(out, static_cast<std::uint32_t>(s.out_channels));
        if (s.kind == LayerKind::Conv) {
            for (float v : layer.weights)
                put_f32(out, v);
            for (float v : layer.bias)
                put_f32(out, v);
        } else if (s.kind == LayerKind::PRelu) {
            for (float v : layer.slopes)
                put_f32(out, v);
        }
    }
    if (!out)
        throw WeightsError(WeightsError::Kind::Io, "write failed: " + path);
}

NetworkWeights load_weights(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw WeightsError(WeightsError::Kind::Io, "cannot open weight file: " + path);
    Reader r(in, path);

    char magic[4];
    r.read(magic, 4, "magic");
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw WeightsError(WeightsError::Kind::BadMagic, path + ": not a weight file");
    const std::uint32_t version = r.u32("version");
    if (version != kVersion)
        throw WeightsError(WeightsError::Kind::BadVersion,
                           path + ": unsupported format version " + std::to_string(version));
    const std::uint32_t num_classes = r.u32("num_classes");
    if (num_classes < 2 || num_classes > 1024)
        throw WeightsError(WeightsError::Kind::BadHeader,
                           path + ": implausible class count " + std::to_string(num_classes));
    const std::uint32_t layer_count = r.u32("layer_count");

    const std::vector<LayerSpec> canonical = canonical_layer_specs(static_cast<int>(num_classes));
    if (layer_count != canonical.size())
        throw WeightsError(WeightsError::Kind::ShapeMismatch,
                           path + ": expected " + std::to_string(canonical.size()) +
                               " layers, file declares " + std::to_string(layer_count));

    NetworkWeights nw;
    nw.num_classes = static_cast<int>(num_classes);
    for (std::size_t li = 0; li < layer_count; ++li) {
        const std::uint32_t name_len = r.u32("layer name length");
        if (name_len > 256)
            throw WeightsError(WeightsError::Kind::BadHeader,
                               path + ": implausible layer name length " + std::to_string(name_len));
        Layer layer;
        layer.spec.name = r.bytes_as_string(name_len, "layer name");
        unsigned char kind_byte;
        r.read(&kind_byte, 1, "layer kind");
        if (kind_byte > 3)
            throw WeightsError(WeightsError::Kind::BadHeader,
                               path + ": unknown layer kind " + std::to_string(kind_byte));
        layer.spec.kind = static_cast<LayerKind>(kind_byte);
        layer.spec.kernel = static_cast<int>(r.u32("kernel"));
        layer.spec.stride = static_cast<int>(r.u32("stride"));
        layer.spec.pad = static_cast<int>(r.u32("pad"));
        layer.spec.in_channels = static_cast<int>(r.u32("in_channels"));
        layer.spec.out_channels = static_cast<int>(r.u32("out_channels"));

        const LayerSpec& want = canonical[li];
        if (layer.spec.kind != want.kind || layer.spec.kernel != want.kernel ||
            layer.spec.stride != want.stride || layer.spec.pad != want.pad ||
            layer.spec.in_channels != want.in_channels ||
            layer.spec.out_channels != want.out_channels)
            throw WeightsError(WeightsError::Kind::ShapeMismatch,
                               path + ": layer " + std::to_string(li) + " ('" + layer.spec.name +
                                   "') does not match the expected " + want.name + " shape");

        if (layer.spec.kind == LayerKind::Conv) {
            const std::size_t n = static_cast<std::size_t>(want.out_channels) * want.in_channels *
                                  want.kernel * want.kernel;
            r.f32_array(layer.weights, n, "conv kernel values");
            r.f32_array(layer.bias, static_cast<std::size_t>(want.out_channels), "conv biases");
        } else if (layer.spec.kind == LayerKind::PRelu) {
            r.f32_array(layer.slopes, static_cast<std::size_t>(want.out_channels), "prelu slopes");
        }
        nw.layers.push_back(std::move(layer));
    }
    return nw;
}

} // namespace fpnet
