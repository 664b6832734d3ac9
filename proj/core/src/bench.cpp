#include "fpnet/bench.hpp"

#include <algorithm>
#include <chrono>

#include "fpnet/errors.hpp"
#include "fpnet/pnm.hpp"

namespace fpnet {

namespace {

using Clock = std::chrono::steady_clock;

double run_config(const std::vector<std::pair<std::string, Image>>& images,
                  const NetworkWeights& weights, const DetectorConfig& cfg,
                  std::vector<std::vector<BBox>>& detections_out) {
    detections_out.clear();
    const auto t0 = Clock::now();
    for (const auto& [path, image] : images)
        detections_out.push_back(detect(weights, image, cfg));
    const auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

BenchConfigReport measure(const std::string& label,
                          const std::vector<std::pair<std::string, Image>>& images,
                          const NetworkWeights& weights, const PyramidConfig& pyramid,
                          const ProposalConfig& proposal_cfg,
                          const std::vector<PartTemplate>& templates,
                          const std::vector<AnnotatedImage>& annotations, double eval_iou,
                          int repeats) {
    BenchConfigReport report;
    report.label = label;
    report.pyramid = pyramid;

    DetectorConfig cfg;
    cfg.pyramid = pyramid;
    cfg.proposals = proposal_cfg;
    cfg.templates = templates;

    std::vector<std::vector<BBox>> detections;
    run_config(images, weights, cfg, detections); // warm-up

    std::vector<double> times;
    const int runs = std::max(repeats, 1);
    for (int i = 0; i < runs; ++i)
        times.push_back(run_config(images, weights, cfg, detections));
    std::sort(times.begin(), times.end());
    report.set_ms = times[times.size() / 2];
    report.mean_image_ms = images.empty() ? 0.0 : report.set_ms / static_cast<double>(images.size());

    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto geometry = pyramid_geometry(images[i].second.height, images[i].second.width, pyramid);
        BenchImageRecord rec;
        rec.path = images[i].first;
        rec.levels = static_cast<int>(geometry.size());
        rec.workload = pyramid_workload(geometry);
        rec.proposals = static_cast<int>(detections[i].size());
        report.workload += rec.workload;
        report.total_levels += rec.levels;
        report.images.push_back(std::move(rec));
    }

    if (!annotations.empty()) {
        // pool matches across the set
        EvalReport pooled;
        pooled.iou_thresh = eval_iou;
        pooled.recall = 1.0;
        pooled.precision = 1.0;
        int tp = 0, fp = 0, truths = 0, dets = 0;
        for (std::size_t i = 0; i < images.size(); ++i) {
            const auto ann = std::find_if(annotations.begin(), annotations.end(),
                                          [&](const AnnotatedImage& a) { return a.path == images[i].first; });
            const std::vector<BBox> truth = ann == annotations.end() ? std::vector<BBox>{} : ann->boxes;
            const EvalReport r = evaluate(detections[i], truth, eval_iou);
            tp += r.true_positives;
            fp += r.false_positives;
            truths += r.truth_count;
            dets += r.detection_count;
        }
        pooled.true_positives = tp;
        pooled.false_positives = fp;
        pooled.truth_count = truths;
        pooled.detection_count = dets;
        pooled.recall = truths == 0 ? 1.0 : static_cast<double>(tp) / truths;
        pooled.precision = dets == 0 ? 1.0 : static_cast<double>(tp) / dets;
        report.eval = pooled;
    }
    return report;
}

} // namespace

BenchReport bench_pyramids(const std::vector<std::string>& image_paths,
                           const NetworkWeights& weights, const PyramidConfig& cfg_dense,
                           const PyramidConfig& cfg_sparse, const ProposalConfig& proposal_cfg,
                           const std::vector<PartTemplate>& templates,
                           const std::vector<AnnotatedImage>& annotations, double eval_iou,
                           int repeats) {
    BenchReport report;

    std::vector<std::pair<std::string, Image>> images;
    for (const std::string& path : image_paths) {
        try {
            Image img = load_image(path);
            // an image below the base scale of either schedule cannot be timed
            (void)pyramid_geometry(img.height, img.width, cfg_dense);
            (void)pyramid_geometry(img.height, img.width, cfg_sparse);
            images.emplace_back(path, std::move(img));
        } catch (const Error& e) {
            ++report.skipped;
            report.warnings.push_back(std::string("skipping ") + path + ": " + e.what());
        }
    }

    report.dense = measure("dense", images, weights, cfg_dense, proposal_cfg, templates,
                           annotations, eval_iou, repeats);
    report.sparse = measure("sparse", images, weights, cfg_sparse, proposal_cfg, templates,
                            annotations, eval_iou, repeats);
    report.workload_ratio = report.dense.workload == 0
                                ? 1.0
                                : static_cast<double>(report.sparse.workload) /
                                      static_cast<double>(report.dense.workload);
    return report;
}

} // namespace fpnet
