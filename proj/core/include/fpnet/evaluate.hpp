#pragma once

#include <string>
#include <vector>

#include "fpnet/proposals.hpp"

namespace fpnet {

struct EvalReport {
    int true_positives = 0;
    int false_positives = 0;
    int truth_count = 0;
    int detection_count = 0;
    double recall = 1.0;
    double precision = 1.0;
    double iou_thresh = 0.5;
};

// Greedy matching in descending detection-score order; each truth box matches
// at most once at IoU >= iou_thresh. Empty truth gives recall 1, empty
// detections give precision 1.
EvalReport evaluate(const std::vector<BBox>& detections, const std::vector<BBox>& truth,
                    double iou_thresh);

// Annotation file: per image a header line "<relative-path> <n>" followed by
// n lines "x1 y1 x2 y2". Parse failures carry the offending line number.
struct AnnotatedImage {
    std::string path;
    std::vector<BBox> boxes;
};

std::vector<AnnotatedImage> parse_annotations(const std::string& text);
std::vector<AnnotatedImage> load_annotations(const std::string& path);

} // namespace fpnet
