#include "fpnet/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpnet/errors.hpp"

namespace fpnet {

Tensor3 conv2d(const Tensor3& input, const ConvKernels& kernels, int pad, int stride) {
    if (pad < 0)
        throw ShapeError("conv2d: pad must be >= 0, got " + std::to_string(pad));
    if (stride < 1)
        throw ShapeError("conv2d: stride must be >= 1, got " + std::to_string(stride));
    if (kernels.kernel < 1)
        throw ShapeError("conv2d: kernel must be >= 1, got " + std::to_string(kernels.kernel));
    if (input.channels != kernels.in_channels)
        throw ShapeError("conv2d: input has " + std::to_string(input.channels) +
                         " channels but kernels expect " + std::to_string(kernels.in_channels));
    if (kernels.weights.size() != static_cast<std::size_t>(kernels.out_channels) *
                                      kernels.in_channels * kernels.kernel * kernels.kernel)
        throw ShapeError("conv2d: kernel value array does not match declared shape");
    if (kernels.bias.size() != static_cast<std::size_t>(kernels.out_channels))
        throw ShapeError("conv2d: bias length does not match output channels");

    const int k = kernels.kernel;
    const int out_h = (input.height + 2 * pad - k) / stride + 1;
    const int out_w = (input.width + 2 * pad - k) / stride + 1;
    if (input.height + 2 * pad < k || input.width + 2 * pad < k || out_h < 1 || out_w < 1)
        throw ShapeError("conv2d: empty output for " + std::to_string(input.height) + "x" +
                         std::to_string(input.width) + " input, kernel " + std::to_string(k) +
                         ", pad " + std::to_string(pad) + ", stride " + std::to_string(stride));

    const int in_c = kernels.in_channels;
    const int out_c = kernels.out_channels;

    // Repack kernels to (ky, kx, in, out) so the inner loop runs contiguously
    // over output channels.
    std::vector<float> packed(static_cast<std::size_t>(k) * k * in_c * out_c);
    for (int o = 0; o < out_c; ++o)
        for (int i = 0; i < in_c; ++i)
            for (int ky = 0; ky < k; ++ky)
                for (int kx = 0; kx < k; ++kx)
                    packed[((static_cast<std::size_t>(ky) * k + kx) * in_c + i) * out_c + o] =
                        kernels.w(o, i, ky, kx);

    Tensor3 out(out_h, out_w, out_c);
    std::vector<double> acc(static_cast<std::size_t>(out_c));

    for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
            for (int o = 0; o < out_c; ++o)
                acc[o] = kernels.bias[o];
            const int y0 = oy * stride - pad;
            const int x0 = ox * stride - pad;
            for (int ky = 0; ky < k; ++ky) {
                const int iy = y0 + ky;
                if (iy < 0 || iy >= input.height)
                    continue; // zero padding contributes nothing
                for (int kx = 0; kx < k; ++kx) {
                    const int ix = x0 + kx;
                    if (ix < 0 || ix >= input.width)
                        continue;
                    const float* in_px = &input.data[(static_cast<std::size_t>(iy) * input.width + ix) * in_c];
                    const float* wp = &packed[(static_cast<std::size_t>(ky) * k + kx) * in_c * out_c];
                    for (int i = 0; i < in_c; ++i) {
                        const double v = in_px[i];
                        const float* wrow = wp + static_cast<std::size_t>(i) * out_c;
                        for (int o = 0; o < out_c; ++o)
                            acc[o] += v * wrow[o];
                    }
                }
            }
            float* out_px = &out.data[(static_cast<std::size_t>(oy) * out_w + ox) * out_c];
            for (int o = 0; o < out_c; ++o)
                out_px[o] = static_cast<float>(acc[o]);
        }
    }
    return out;
}

Tensor3 maxpool(const Tensor3& input, int k, int stride) {
    if (k < 1)
        throw ShapeError("maxpool: k must be >= 1, got " + std::to_string(k));
    if (stride < 1)
        throw ShapeError("maxpool: stride must be >= 1, got " + std::to_string(stride));
    if (input.height < 1 || input.width < 1 || input.channels < 1)
        throw ShapeError("maxpool: empty input");

    const int out_h = (input.height + stride - 1) / stride;
    const int out_w = (input.width + stride - 1) / stride;
    const int c = input.channels;

    Tensor3 out(out_h, out_w, c);
    for (int oy = 0; oy < out_h; ++oy) {
        const int y0 = oy * stride;
        const int y1 = std::min(y0 + k, input.height);
        for (int ox = 0; ox < out_w; ++ox) {
            const int x0 = ox * stride;
            const int x1 = std::min(x0 + k, input.width);
            float* out_px = &out.data[(static_cast<std::size_t>(oy) * out_w + ox) * c];
            for (int ch = 0; ch < c; ++ch)
                out_px[ch] = input.at(y0, x0, ch);
            for (int iy = y0; iy < y1; ++iy)
                for (int ix = x0; ix < x1; ++ix) {
                    const float* in_px = &input.data[(static_cast<std::size_t>(iy) * input.width + ix) * c];
                    for (int ch = 0; ch < c; ++ch)
                        out_px[ch] = std::max(out_px[ch], in_px[ch]);
                }
        }
    }
    return out;
}

Tensor3 prelu(const Tensor3& input, const std::vector<float>& slopes) {
    if (slopes.size() != static_cast<std::size_t>(input.channels))
        throw ShapeError("prelu: " + std::to_string(slopes.size()) + " slopes for " +
                         std::to_string(input.channels) + " channels");
    Tensor3 out = input;
    const int c = input.channels;
    const std::size_t n = out.data.size();
    for (std::size_t idx = 0; idx < n; ++idx) {
        const float v = out.data[idx];
        if (v < 0.0f)
            out.data[idx] = slopes[idx % c] * v;
    }
    return out;
}

Tensor3 softmax_channels(const Tensor3& input) {
    if (input.channels < 2)
        throw ShapeError("softmax_channels: need >= 2 channels, got " +
                         std::to_string(input.channels));
    Tensor3 out(input.height, input.width, input.channels);
    const int c = input.channels;
    const std::size_t locations = static_cast<std::size_t>(input.height) * input.width;
    std::vector<double> exps(static_cast<std::size_t>(c));
    for (std::size_t loc = 0; loc < locations; ++loc) {
        const float* in_px = &input.data[loc * c];
        float* out_px = &out.data[loc * c];
        float m = in_px[0];
        for (int ch = 1; ch < c; ++ch)
            m = std::max(m, in_px[ch]);
        double sum = 0.0;
        for (int ch = 0; ch < c; ++ch) {
            exps[ch] = std::exp(static_cast<double>(in_px[ch]) - m);
            sum += exps[ch];
        }
        for (int ch = 0; ch < c; ++ch)
            out_px[ch] = static_cast<float>(exps[ch] / sum);
    }
    return out;
}

} // namespace fpnet
