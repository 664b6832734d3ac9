#include "fpnet/detector.hpp"

namespace fpnet {

std::vector<HeatmapSet> run_pyramid(const NetworkWeights& weights, const Image& image,
                                    const PyramidConfig& cfg) {
    std::vector<HeatmapSet> per_level;
    for (const PyramidLevel& level : build_pyramid(image, cfg)) {
        HeatmapSet hs = forward_fcn(weights, level.image);
        hs.level_scale = level.scale;
        hs.image_width = image.width;
        hs.image_height = image.height;
        per_level.push_back(std::move(hs));
    }
    return per_level;
}

std::vector<BBox> detect(const NetworkWeights& weights, const Image& image,
                         const DetectorConfig& cfg) {
    return generate_proposals(run_pyramid(weights, image, cfg.pyramid), cfg.templates,
                              cfg.proposals);
}

} // namespace fpnet
