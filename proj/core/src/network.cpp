#include "fpnet/network.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "fpnet/errors.hpp"
#include "fpnet/random.hpp"

namespace fpnet {

std::vector<LayerSpec> canonical_layer_specs(int num_classes) {
    if (num_classes < 2)
        throw ShapeError("network: num_classes must be >= 2, got " + std::to_string(num_classes));
    const int c = num_classes;
    return {
        {"Conv1", LayerKind::Conv, 3, 1, 1, 3, 16},
        {"PReLU1", LayerKind::PRelu, 1, 1, 0, 16, 16},
        {"Pool1", LayerKind::Pool, 3, 2, 0, 16, 16},
        {"Conv2", LayerKind::Conv, 3, 1, 0, 16, 32},
        {"PReLU2", LayerKind::PRelu, 1, 1, 0, 32, 32},
        {"Conv3", LayerKind::Conv, 3, 1, 0, 32, 32},
        {"PReLU3", LayerKind::PRelu, 1, 1, 0, 32, 32},
        {"Conv4", LayerKind::Conv, 2, 1, 0, 32, 64},
        {"PReLU4", LayerKind::PRelu, 1, 1, 0, 64, 64},
        {"Conv5", LayerKind::Conv, 1, 1, 0, 64, c},
        {"Softmax", LayerKind::Softmax, 1, 1, 0, c, c},
    };
}

void heatmap_grid_dims(int level_h, int level_w, int& grid_h, int& grid_w) {
    // pad-1 conv keeps the size, ceil pool halves it, the three valid convs
    // (3x3, 3x3, 2x2) remove 5 cells.
    grid_h = (level_h + 1) / 2 - 5;
    grid_w = (level_w + 1) / 2 - 5;
}

namespace {

Tensor3 image_to_tensor(const Image& image) {
    Tensor3 t(image.height, image.width, image.channels);
    t.data = image.data;
    return t;
}

Tensor3 run_layer(const Layer& layer, const Tensor3& in) {
    switch (layer.spec.kind) {
    case LayerKind::Conv: {
        ConvKernels k;
        k.out_channels = layer.spec.out_channels;
        k.in_channels = layer.spec.in_channels;
        k.kernel = layer.spec.kernel;
        k.weights = layer.weights;
        k.bias = layer.bias;
        return conv2d(in, k, layer.spec.pad, layer.spec.stride);
    }
    case LayerKind::Pool:
        return maxpool(in, layer.spec.kernel, layer.spec.stride);
    case LayerKind::PRelu:
        return prelu(in, layer.slopes);
    case LayerKind::Softmax:
        return softmax_channels(in);
    }
    throw ShapeError("network: unknown layer kind");
}

Tensor3 run_layers(const NetworkWeights& weights, Tensor3 t) {
    for (const Layer& layer : weights.layers)
        t = run_layer(layer, t);
    return t;
}

} // namespace

HeatmapSet forward_fcn(const NetworkWeights& weights, const Image& image) {
    if (image.height < 12 || image.width < 12)
        throw ShapeError("forward_fcn: image must be at least 12x12, got " +
                         std::to_string(image.height) + "x" + std::to_string(image.width));
    if (image.channels != 3)
        throw ShapeError("forward_fcn: image must have 3 channels");

    const Tensor3 out = run_layers(weights, image_to_tensor(image));

    HeatmapSet hs;
    hs.level_scale = 1.0;
    hs.image_width = image.width;
    hs.image_height = image.height;
    hs.maps.reserve(static_cast<std::size_t>(out.channels));
    for (int ch = 0; ch < out.channels; ++ch) {
        Heatmap m(out.height, out.width);
        for (int r = 0; r < out.height; ++r)
            for (int c = 0; c < out.width; ++c)
                m.at(r, c) = out.at(r, c, ch);
        hs.maps.push_back(std::move(m));
    }
    return hs;
}

std::vector<float> forward_patch(const NetworkWeights& weights, const Image& patch) {
    if (patch.height != 12 || patch.width != 12 || patch.channels != 3)
        throw ShapeError("forward_patch: want a 12x12x3 patch, got " +
                         std::to_string(patch.height) + "x" + std::to_string(patch.width) + "x" +
                         std::to_string(patch.channels));
    const Tensor3 out = run_layers(weights, image_to_tensor(patch));
    std::vector<float> probs(static_cast<std::size_t>(out.channels));
    for (int ch = 0; ch < out.channels; ++ch)
        probs[ch] = out.at(0, 0, ch);
    return probs;
}

namespace {

// symmetric in [-r, r]
float next_symmetric(UniformSource& rng, double r) {
    return static_cast<float>((rng.next_unit() * 2.0 - 1.0) * r);
}

} // namespace

NetworkWeights random_weights(std::uint64_t seed, int num_classes) {
    NetworkWeights nw;
    nw.num_classes = num_classes;
    UniformSource rng(seed);
    for (const LayerSpec& spec : canonical_layer_specs(num_classes)) {
        Layer layer;
        layer.spec = spec;
        if (spec.kind == LayerKind::Conv) {
            const std::size_t n = static_cast<std::size_t>(spec.out_channels) * spec.in_channels *
                                  spec.kernel * spec.kernel;
            const double fan_in = static_cast<double>(spec.in_channels) * spec.kernel * spec.kernel;
            const double range = std::sqrt(2.0 / fan_in);
            layer.weights.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                layer.weights[i] = next_symmetric(rng, range);
            layer.bias.resize(static_cast<std::size_t>(spec.out_channels));
            for (float& b : layer.bias)
                b = next_symmetric(rng, 0.1);
        } else if (spec.kind == LayerKind::PRelu) {
            layer.slopes.resize(static_cast<std::size_t>(spec.out_channels));
            for (float& s : layer.slopes)
                s = static_cast<float>(rng.next_open_unit());
        }
        nw.layers.push_back(std::move(layer));
    }
    return nw;
}

} // namespace fpnet
