#include <benchmark/benchmark.h>

#include "fpnet/pyramid.hpp"
#include "fpnet/random.hpp"

using namespace fpnet;

namespace {

Image random_image(std::uint64_t seed, int h, int w) {
    UniformSource rng(seed);
    Image img(h, w, 3);
    for (float& v : img.data)
        v = static_cast<float>(rng.next_in(-1.0, 1.0));
    return img;
}

void BM_resize_bilinear_halve(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const Image img = random_image(1, side, side);
    for (auto _ : state) {
        Image out = resize_bilinear(img, side / 2, side / 2);
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side) * side);
}
BENCHMARK(BM_resize_bilinear_halve)->Arg(480)->Arg(1080);

void BM_build_pyramid(benchmark::State& state) {
    const Image img = random_image(2, 480, 640);
    PyramidConfig cfg;
    cfg.min_face = 10;
    cfg.scale_factor = state.range(0) == 0 ? 0.79 : 0.25;
    cfg.extra_layer = state.range(0) != 0;
    for (auto _ : state) {
        auto levels = build_pyramid(img, cfg);
        benchmark::DoNotOptimize(levels);
    }
    state.SetLabel(state.range(0) == 0 ? "dense f=0.79" : "sparse f=0.25+extra");
}
BENCHMARK(BM_build_pyramid)->Arg(0)->Arg(1);

} // namespace
