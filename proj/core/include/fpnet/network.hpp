#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpnet/image.hpp"
#include "fpnet/tensor.hpp"

namespace fpnet {

enum class LayerKind : std::uint8_t { Conv = 0, Pool = 1, PRelu = 2, Softmax = 3 };

struct LayerSpec {
    std::string name;
    LayerKind kind = LayerKind::Conv;
    int kernel = 1;
    int stride = 1;
    int pad = 0;
    int in_channels = 0;
    int out_channels = 0;
};

// One layer of the proposal network: spec plus whatever parameters the kind
// carries (conv: kernel values + biases, prelu: per-channel slopes).
struct Layer {
    LayerSpec spec;
    std::vector<float> weights;
    std::vector<float> bias;
    std::vector<float> slopes;
};

// The proposal network. The layer sequence is always the canonical one
// (conv1 pad-1, prelu, 3x3/2 pool, then three valid convs with prelu, a 1x1
// classifier conv and a channel softmax); only the parameter values and the
// class count vary. Class 0 is background, 1 is the whole face, 2..C-1 are
// facial parts.
struct NetworkWeights {
    int num_classes = 0;
    std::vector<Layer> layers;
};

// Canonical layer sequence for a given class count. Composite stride is 2 and
// the receptive window is 12x12.
std::vector<LayerSpec> canonical_layer_specs(int num_classes);

// Per-class score grids from one fully-convolutional pass, plus the metadata
// needed to map grid cells back to original-image pixels. Grid cell (r, c)
// corresponds to the window with top-left (2c, 2r) and side 12 in level
// pixels.
struct Heatmap {
    int height = 0;
    int width = 0;
    std::vector<float> values;

    Heatmap() = default;
    Heatmap(int h, int w) : height(h), width(w), values(static_cast<std::size_t>(h) * w, 0.0f) {}

    float& at(int r, int c) { return values[static_cast<std::size_t>(r) * width + c]; }
    float at(int r, int c) const { return values[static_cast<std::size_t>(r) * width + c]; }
};

struct HeatmapSet {
    std::vector<Heatmap> maps; // one per class, all the same size
    double level_scale = 1.0;  // level pixels / original pixels
    int stride = 2;
    int window = 12;
    int image_width = 0;  // original image, for box clamping
    int image_height = 0;

    int grid_height() const { return maps.empty() ? 0 : maps[0].height; }
    int grid_width() const { return maps.empty() ? 0 : maps[0].width; }
};

// Heatmap grid dimensions for a level of the given size, following the layer
// arithmetic (pad-1 conv, ceil pool, three valid convs).
void heatmap_grid_dims(int level_h, int level_w, int& grid_h, int& grid_w);

// Runs the network over a whole image (min 12x12) and returns per-class
// probability heatmaps. level_scale/image dims are filled for a standalone
// image; pyramid code overrides them per level.
HeatmapSet forward_fcn(const NetworkWeights& weights, const Image& image);

// Classifies a single normalized 12x12x3 patch; returns C probabilities.
std::vector<float> forward_patch(const NetworkWeights& weights, const Image& patch);

// Deterministic random parameters for the canonical network; conv values are
// uniform in a +-sqrt(2/fan_in) range, prelu slopes in (0, 1).
NetworkWeights random_weights(std::uint64_t seed, int num_classes);

// Binary weight file (magic "FPNW", version 1, little-endian). save/load is
// bit-exact; load failures carry a distinct WeightsError kind.
void save_weights(const NetworkWeights& weights, const std::string& path);
NetworkWeights load_weights(const std::string& path);

} // namespace fpnet
