#include <benchmark/benchmark.h>

#include "fpnet/network.hpp"
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

void BM_forward_patch(benchmark::State& state) {
    const NetworkWeights nw = random_weights(1, 5);
    const Image patch = random_image(2, 12, 12);
    for (auto _ : state) {
        auto probs = forward_patch(nw, patch);
        benchmark::DoNotOptimize(probs);
    }
}
BENCHMARK(BM_forward_patch);

void BM_forward_fcn(benchmark::State& state) {
    const NetworkWeights nw = random_weights(1, 5);
    const int side = static_cast<int>(state.range(0));
    const Image img = random_image(3, side, side);
    for (auto _ : state) {
        auto maps = forward_fcn(nw, img);
        benchmark::DoNotOptimize(maps);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side) * side);
}
BENCHMARK(BM_forward_fcn)->Arg(40)->Arg(80)->Arg(160);

} // namespace
