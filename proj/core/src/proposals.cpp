#include "fpnet/proposals.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "fpnet/errors.hpp"

namespace fpnet {

std::string class_name(int class_id) {
    switch (class_id) {
    case kBackgroundClass: return "background";
    case kFaceClass: return "face";
    case 2: return "eye";
    case 3: return "nose";
    case 4: return "mouth";
    default: return "part" + std::to_string(class_id);
    }
}

int class_id_from_name(const std::string& name) {
    if (name == "background") return kBackgroundClass;
    if (name == "face") return kFaceClass;
    if (name == "eye") return 2;
    if (name == "nose") return 3;
    if (name == "mouth") return 4;
    if (name.rfind("part", 0) == 0) {
        try {
            const int id = std::stoi(name.substr(4));
            if (id >= kFirstPartClass)
                return id;
        } catch (const std::exception&) {
        }
    }
    return -1;
}

namespace {

bool lex_less(const BBox& a, const BBox& b) {
    return std::tie(a.x1, a.y1, a.x2, a.y2) < std::tie(b.x1, b.y1, b.x2, b.y2);
}

// score descending, then coordinates ascending; total enough for determinism
bool score_order(const BBox& a, const BBox& b) {
    if (a.score != b.score)
        return a.score > b.score;
    if (lex_less(a, b))
        return true;
    if (lex_less(b, a))
        return false;
    return a.source < b.source;
}

std::vector<BBox> greedy_nms(std::vector<BBox> boxes, double iou_thresh) {
    std::sort(boxes.begin(), boxes.end(), score_order);
    std::vector<BBox> kept;
    for (const BBox& candidate : boxes) {
        bool suppressed = false;
        for (const BBox& k : kept)
            if (iou(candidate, k) > iou_thresh) {
                suppressed = true;
                break;
            }
        if (!suppressed)
            kept.push_back(candidate);
    }
    return kept;
}

} // namespace

std::vector<Peak> extract_peaks(const Heatmap& map, double tau, int radius) {
    if (radius < 1)
        throw ConfigError("extract_peaks: radius must be >= 1, got " + std::to_string(radius));

    std::vector<Peak> candidates;
    for (int r = 0; r < map.height; ++r)
        for (int c = 0; c < map.width; ++c) {
            const float v = map.at(r, c);
            if (v >= tau)
                candidates.push_back({r, c, v});
        }

    std::sort(candidates.begin(), candidates.end(), [](const Peak& a, const Peak& b) {
        if (a.score != b.score)
            return a.score > b.score;
        if (a.row != b.row)
            return a.row < b.row;
        return a.col < b.col;
    });

    std::vector<Peak> kept;
    for (const Peak& p : candidates) {
        bool suppressed = false;
        for (const Peak& k : kept)
            if (std::max(std::abs(p.row - k.row), std::abs(p.col - k.col)) <= radius) {
                suppressed = true;
                break;
            }
        if (!suppressed)
            kept.push_back(p);
    }
    return kept;
}

double iou(const BBox& a, const BBox& b) {
    const double ix = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double iy = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (ix <= 0.0 || iy <= 0.0)
        return 0.0;
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

bool clamp_bbox(BBox& box, int image_w, int image_h) {
    box.x1 = std::clamp(box.x1, 0.0, static_cast<double>(image_w));
    box.x2 = std::clamp(box.x2, 0.0, static_cast<double>(image_w));
    box.y1 = std::clamp(box.y1, 0.0, static_cast<double>(image_h));
    box.y2 = std::clamp(box.y2, 0.0, static_cast<double>(image_h));
    return box.x2 > box.x1 && box.y2 > box.y1;
}

double combine_scores(std::span<const double> scores) {
    double miss = 1.0;
    for (double p : scores)
        miss *= (1.0 - p);
    return 1.0 - miss;
}

std::vector<BBox> face_boxes(const HeatmapSet& heatmaps, const ProposalConfig& cfg) {
    if (heatmaps.maps.size() <= static_cast<std::size_t>(kFaceClass))
        throw ShapeError("face_boxes: heatmap set has no face class map");

    const double inv_scale = 1.0 / heatmaps.level_scale;
    std::vector<BBox> boxes;
    for (const Peak& p : extract_peaks(heatmaps.maps[kFaceClass], cfg.tau_face, cfg.peak_radius)) {
        BBox box;
        box.x1 = 2.0 * p.col * inv_scale;
        box.y1 = 2.0 * p.row * inv_scale;
        box.x2 = (2.0 * p.col + heatmaps.window) * inv_scale;
        box.y2 = (2.0 * p.row + heatmaps.window) * inv_scale;
        box.score = p.score;
        box.source = kFaceClass;
        box.level_scale = heatmaps.level_scale;
        if (clamp_bbox(box, heatmaps.image_width, heatmaps.image_height))
            boxes.push_back(box);
    }
    return greedy_nms(std::move(boxes), cfg.face_nms_iou);
}

std::vector<BBox> part_boxes(const HeatmapSet& heatmaps,
                             const std::vector<PartTemplate>& templates,
                             const ProposalConfig& cfg) {
    const double inv_scale = 1.0 / heatmaps.level_scale;
    const double part_side = heatmaps.window * inv_scale;

    std::vector<BBox> boxes;
    for (int cls = kFirstPartClass; cls < static_cast<int>(heatmaps.maps.size()); ++cls) {
        const std::vector<Peak> peaks =
            extract_peaks(heatmaps.maps[cls], cfg.tau_part, cfg.peak_radius);
        if (peaks.empty())
            continue;
        bool have_template = false;
        for (const PartTemplate& t : templates) {
            if (t.part != cls)
                continue;
            have_template = true;
            for (const Peak& p : peaks) {
                const double cx = (2.0 * p.col + heatmaps.window / 2.0) * inv_scale;
                const double cy = (2.0 * p.row + heatmaps.window / 2.0) * inv_scale;
                const double face_side = t.face_ratio * part_side;
                BBox box;
                box.x1 = cx - t.anchor_x * face_side;
                box.y1 = cy - t.anchor_y * face_side;
                box.x2 = box.x1 + face_side;
                box.y2 = box.y1 + face_side;
                box.score = p.score;
                box.source = cls;
                box.level_scale = heatmaps.level_scale;
                if (clamp_bbox(box, heatmaps.image_width, heatmaps.image_height))
                    boxes.push_back(box);
            }
        }
        if (!have_template)
            throw ConfigError("part_boxes: no template for detected part class '" +
                              class_name(cls) + "'");
    }
    return boxes;
}

std::vector<MergeCluster> merge_part_boxes(std::vector<BBox> boxes, double tau_iou) {
    std::vector<MergeCluster> clusters;
    std::vector<bool> taken(boxes.size(), false);
    std::size_t remaining = boxes.size();

    while (remaining > 0) {
        // seed: highest score, ties lexicographic on coordinates
        std::size_t seed = boxes.size();
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            if (taken[i])
                continue;
            if (seed == boxes.size() || boxes[i].score > boxes[seed].score ||
                (boxes[i].score == boxes[seed].score && lex_less(boxes[i], boxes[seed])))
                seed = i;
        }

        MergeCluster cluster;
        cluster.members.push_back(boxes[seed]);
        taken[seed] = true;
        --remaining;
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            if (taken[i])
                continue;
            if (iou(boxes[seed], boxes[i]) > tau_iou) {
                cluster.members.push_back(boxes[i]);
                taken[i] = true;
                --remaining;
            }
        }

        BBox merged;
        double sx1 = 0.0, sy1 = 0.0, sx2 = 0.0, sy2 = 0.0;
        std::vector<double> scores;
        scores.reserve(cluster.members.size());
        for (const BBox& m : cluster.members) {
            sx1 += m.x1;
            sy1 += m.y1;
            sx2 += m.x2;
            sy2 += m.y2;
            scores.push_back(m.score);
        }
        const double n = static_cast<double>(cluster.members.size());
        merged.x1 = sx1 / n;
        merged.y1 = sy1 / n;
        merged.x2 = sx2 / n;
        merged.y2 = sy2 / n;
        merged.score = combine_scores(scores);
        merged.source = kFaceClass;
        merged.level_scale = boxes[seed].level_scale;
        cluster.merged = merged;
        clusters.push_back(std::move(cluster));
    }
    return clusters;
}

std::vector<BBox> generate_proposals(const std::vector<HeatmapSet>& per_level_heatmaps,
                                     const std::vector<PartTemplate>& templates,
                                     const ProposalConfig& cfg) {
    if (per_level_heatmaps.empty())
        throw ShapeError("generate_proposals: need at least one pyramid level");

    std::vector<BBox> candidates;
    std::vector<BBox> parts;
    for (const HeatmapSet& hs : per_level_heatmaps) {
        for (const BBox& b : face_boxes(hs, cfg))
            candidates.push_back(b);
        for (const BBox& b : part_boxes(hs, templates, cfg))
            parts.push_back(b);
    }

    // canonical order before the merge so results never depend on level order
    std::sort(parts.begin(), parts.end(), score_order);
    for (const MergeCluster& cluster : merge_part_boxes(std::move(parts), cfg.tau_iou))
        candidates.push_back(cluster.merged);

    return greedy_nms(std::move(candidates), cfg.cross_scale_nms_iou);
}

} // namespace fpnet
