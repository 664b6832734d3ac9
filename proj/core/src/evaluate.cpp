#include "fpnet/evaluate.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

#include "fpnet/errors.hpp"

namespace fpnet {

EvalReport evaluate(const std::vector<BBox>& detections, const std::vector<BBox>& truth,
                    double iou_thresh) {
    EvalReport report;
    report.iou_thresh = iou_thresh;
    report.truth_count = static_cast<int>(truth.size());
    report.detection_count = static_cast<int>(detections.size());

    std::vector<BBox> ordered = detections;
    std::stable_sort(ordered.begin(), ordered.end(), [](const BBox& a, const BBox& b) {
        if (a.score != b.score)
            return a.score > b.score;
        return std::tie(a.x1, a.y1, a.x2, a.y2) < std::tie(b.x1, b.y1, b.x2, b.y2);
    });

    std::vector<bool> matched(truth.size(), false);
    for (const BBox& det : ordered) {
        int best = -1;
        double best_iou = 0.0;
        for (std::size_t t = 0; t < truth.size(); ++t) {
            if (matched[t])
                continue;
            const double v = iou(det, truth[t]);
            if (v >= iou_thresh && v > best_iou) {
                best = static_cast<int>(t);
                best_iou = v;
            }
        }
        if (best >= 0) {
            matched[static_cast<std::size_t>(best)] = true;
            ++report.true_positives;
        } else {
            ++report.false_positives;
        }
    }

    report.recall = truth.empty()
                        ? 1.0
                        : static_cast<double>(report.true_positives) / static_cast<double>(truth.size());
    report.precision = detections.empty() ? 1.0
                                          : static_cast<double>(report.true_positives) /
                                                static_cast<double>(detections.size());
    return report;
}

std::vector<AnnotatedImage> parse_annotations(const std::string& text) {
    std::vector<AnnotatedImage> images;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        AnnotatedImage img;
        long n = 0;
        if (!(fields >> img.path >> n))
            throw ParseError(line_no, "expected '<path> <count>' header");
        if (n < 0)
            throw ParseError(line_no, "negative box count");
        for (long i = 0; i < n; ++i) {
            if (!std::getline(in, line))
                throw ParseError(line_no, "file ends inside the box list for '" + img.path + "'");
            ++line_no;
            std::istringstream box_fields(line);
            BBox box;
            if (!(box_fields >> box.x1 >> box.y1 >> box.x2 >> box.y2))
                throw ParseError(line_no, "expected 'x1 y1 x2 y2'");
            if (!(box.x2 > box.x1) || !(box.y2 > box.y1))
                throw ParseError(line_no, "degenerate box");
            box.score = 1.0;
            img.boxes.push_back(box);
        }
        images.push_back(std::move(img));
    }
    return images;
}

std::vector<AnnotatedImage> load_annotations(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open annotation file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_annotations(buf.str());
}

} // namespace fpnet
