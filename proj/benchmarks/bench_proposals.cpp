#include <benchmark/benchmark.h>

#include "fpnet/proposals.hpp"
#include "fpnet/pyramid.hpp"
#include "fpnet/random.hpp"
#include "fpnet/synthetic.hpp"
#include "fpnet/templates.hpp"

using namespace fpnet;

namespace {

void BM_extract_peaks(benchmark::State& state) {
    UniformSource rng(1);
    Heatmap map(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
    for (float& v : map.values)
        v = static_cast<float>(rng.next_unit());
    for (auto _ : state) {
        auto peaks = extract_peaks(map, 0.6, 2);
        benchmark::DoNotOptimize(peaks);
    }
}
BENCHMARK(BM_extract_peaks)->Arg(50)->Arg(200);

void BM_merge_part_boxes(benchmark::State& state) {
    UniformSource rng(2);
    std::vector<BBox> boxes;
    for (int i = 0; i < state.range(0); ++i) {
        BBox b;
        b.x1 = rng.next_in(0, 300);
        b.y1 = rng.next_in(0, 300);
        b.x2 = b.x1 + rng.next_in(10, 60);
        b.y2 = b.y1 + rng.next_in(10, 60);
        b.score = rng.next_unit();
        boxes.push_back(b);
    }
    for (auto _ : state) {
        auto clusters = merge_part_boxes(boxes, 0.3);
        benchmark::DoNotOptimize(clusters);
    }
}
BENCHMARK(BM_merge_part_boxes)->Arg(30)->Arg(200);

void BM_generate_proposals_planted(benchmark::State& state) {
    PyramidConfig pyr;
    pyr.scale_factor = 0.25;
    pyr.min_face = 10;
    pyr.extra_layer = true;
    const auto levels = pyramid_geometry(480, 640, pyr);
    const auto templates = default_templates();
    const GroundTruthScene scene = make_random_scene(3, 640, 480, levels, templates);
    const auto maps = plant_heatmaps(scene, levels, templates, 0.3, 4);
    ProposalConfig cfg;
    for (auto _ : state) {
        auto proposals = generate_proposals(maps, templates, cfg);
        benchmark::DoNotOptimize(proposals);
    }
}
BENCHMARK(BM_generate_proposals_planted);

} // namespace
