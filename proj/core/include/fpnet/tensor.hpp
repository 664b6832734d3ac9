#pragma once

#include <cstddef>
#include <vector>

namespace fpnet {

// Dense H x W x C feature map, row-major (row, column, channel), float storage.
// This is the carrier for every intermediate map in the proposal network.
struct Tensor3 {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<float> data;

    Tensor3() = default;
    Tensor3(int h, int w, int c)
        : height(h), width(w), channels(c),
          data(static_cast<std::size_t>(h) * w * c, 0.0f) {}

    float& at(int r, int c, int ch) {
        return data[(static_cast<std::size_t>(r) * width + c) * channels + ch];
    }
    float at(int r, int c, int ch) const {
        return data[(static_cast<std::size_t>(r) * width + c) * channels + ch];
    }
    std::size_t size() const { return data.size(); }
};

// Square conv kernel bank, values in (out, in, ky, kx) order plus one bias per
// output channel. Matches the on-disk weight layout.
struct ConvKernels {
    int out_channels = 0;
    int in_channels = 0;
    int kernel = 0;
    std::vector<float> weights; // out*in*k*k
    std::vector<float> bias;    // out

    float w(int o, int i, int ky, int kx) const {
        return weights[((static_cast<std::size_t>(o) * in_channels + i) * kernel + ky) * kernel + kx];
    }
};

// Cross-correlation with zero padding; accumulates in double, stores float.
// Output size per axis: (n + 2*pad - k) / stride + 1.
Tensor3 conv2d(const Tensor3& input, const ConvKernels& kernels, int pad, int stride);

// Max pooling with ceil-mode output: windows start at every multiple of the
// stride below the input extent, so out = ceil(n / stride); windows at the
// bottom/right borders are truncated and take the max over in-bounds cells
// only. Realizes the 12 -> 6 pooling of the proposal network.
Tensor3 maxpool(const Tensor3& input, int k, int stride);

// Per-channel parametric ReLU: x >= 0 ? x : slope[c] * x.
Tensor3 prelu(const Tensor3& input, const std::vector<float>& slopes);

// Per-location softmax across channels, max-subtracted for stability.
Tensor3 softmax_channels(const Tensor3& input);

} // namespace fpnet
