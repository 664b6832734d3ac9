#pragma once

#include <span>
#include <string>
#include <vector>

#include "fpnet/network.hpp"

namespace fpnet {

// Class-id convention shared across the library.
constexpr int kBackgroundClass = 0;
constexpr int kFaceClass = 1;
constexpr int kFirstPartClass = 2;

// Class name for a given id under a num_classes-wide head (eye/nose/mouth for
// the default 5-class head, "partN" beyond).
std::string class_name(int class_id);
// Inverse of class_name; returns -1 for unknown names.
int class_id_from_name(const std::string& name);

// Axis-aligned box in original-image pixels.
struct BBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;
    double score = 0.0;
    int source = kFaceClass;  // class that produced it
    double level_scale = 1.0; // pyramid level it came from

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }
};

// Geometric rule mapping a detected part window to the face box around it:
// the part center sits at (ax, ay) fractions of the face side, and the face
// side is face_ratio times the part window side.
struct PartTemplate {
    int part = kFirstPartClass;
    double anchor_x = 0.5;
    double anchor_y = 0.5;
    double face_ratio = 3.0;
};

// One merged group of part-inferred boxes: coordinates averaged, scores
// combined as 1 - prod(1 - p_j).
struct MergeCluster {
    std::vector<BBox> members;
    BBox merged; // merged.score carries the combined score
};

struct ProposalConfig {
    double tau_face = 0.6;
    double tau_part = 0.7; // applied to every part class
    double tau_iou = 0.3;  // cluster-membership threshold for the part merge
    int peak_radius = 2;   // heatmap cells
    double face_nms_iou = 0.5;
    double cross_scale_nms_iou = 0.7;
};

struct Peak {
    int row = 0;
    int col = 0;
    float score = 0.0f;
};

// Greedy local-maximum extraction: keep cells with score >= tau, highest
// first (ties by row then column), suppressing anything within Chebyshev
// distance <= radius of an already kept peak.
std::vector<Peak> extract_peaks(const Heatmap& map, double tau, int radius);

// Intersection over union of two boxes, continuous-area convention.
double iou(const BBox& a, const BBox& b);

// Clamps a box to [0, w] x [0, h]; returns false if nothing with positive
// area remains.
bool clamp_bbox(BBox& box, int image_w, int image_h);

// Combined score of a cluster: 1 - prod(1 - p_j), the independent-events rule.
double combine_scores(std::span<const double> scores);

// Face-class peaks -> 12-window boxes mapped through the level scale, clamped
// and greedily NMS-filtered at cfg.face_nms_iou.
std::vector<BBox> face_boxes(const HeatmapSet& heatmaps, const ProposalConfig& cfg);

// Part-class peaks -> face boxes via the templates (one box per template of
// the peak's class), clamped. Throws if a part class has peaks but no
// template.
std::vector<BBox> part_boxes(const HeatmapSet& heatmaps,
                             const std::vector<PartTemplate>& templates,
                             const ProposalConfig& cfg);

// The iterative merge: repeatedly seed with the highest-score remaining box
// (ties lexicographic on coordinates), absorb every remaining box whose IoU
// with the seed exceeds tau_iou, emit the averaged box with the combined
// score, and drop the cluster. Partitions the input.
std::vector<MergeCluster> merge_part_boxes(std::vector<BBox> boxes, double tau_iou);

// Whole heatmap-to-proposal pipeline over all pyramid levels: face boxes per
// level, part boxes gathered across levels and merged, then one cross-scale
// NMS pass. Output sorted by score descending with lexicographic tie-breaks.
std::vector<BBox> generate_proposals(const std::vector<HeatmapSet>& per_level_heatmaps,
                                     const std::vector<PartTemplate>& templates,
                                     const ProposalConfig& cfg);

} // namespace fpnet
