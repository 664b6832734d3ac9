#pragma once

#include <vector>

#include "fpnet/network.hpp"
#include "fpnet/proposals.hpp"
#include "fpnet/pyramid.hpp"
#include "fpnet/templates.hpp"

namespace fpnet {

struct DetectorConfig {
    PyramidConfig pyramid;
    ProposalConfig proposals;
    std::vector<PartTemplate> templates = default_templates();
};

// Network pass over every pyramid level; each heatmap set carries its level
// scale and the original image dimensions.
std::vector<HeatmapSet> run_pyramid(const NetworkWeights& weights, const Image& image,
                                    const PyramidConfig& cfg);

// Image in, face proposals out: pyramid, per-level heatmaps, proposal
// generation.
std::vector<BBox> detect(const NetworkWeights& weights, const Image& image,
                         const DetectorConfig& cfg);

} // namespace fpnet
