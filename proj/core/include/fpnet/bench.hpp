#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpnet/detector.hpp"
#include "fpnet/evaluate.hpp"

namespace fpnet {

struct BenchImageRecord {
    std::string path;
    int levels = 0;
    std::uint64_t workload = 0;
    int proposals = 0;
};

struct BenchConfigReport {
    std::string label;
    PyramidConfig pyramid;
    std::vector<BenchImageRecord> images;
    std::uint64_t workload = 0;   // total cells over the set
    int total_levels = 0;
    double set_ms = 0.0;          // median wall time for one pass over the set
    double mean_image_ms = 0.0;
    std::optional<EvalReport> eval;
};

struct BenchReport {
    BenchConfigReport dense;
    BenchConfigReport sparse;
    double workload_ratio = 1.0; // sparse / dense
    int skipped = 0;
    std::vector<std::string> warnings;
};

// Runs the full pipeline over the image set under both pyramid configs and
// reports timing (1 warm-up pass, median of `repeats` timed passes), level
// counts, workload cells and, when annotations are given, recall/precision.
// Unreadable images are skipped with a warning and counted.
BenchReport bench_pyramids(const std::vector<std::string>& image_paths,
                           const NetworkWeights& weights, const PyramidConfig& cfg_dense,
                           const PyramidConfig& cfg_sparse, const ProposalConfig& proposal_cfg,
                           const std::vector<PartTemplate>& templates,
                           const std::vector<AnnotatedImage>& annotations, double eval_iou,
                           int repeats = 5);

} // namespace fpnet
