// Acceptance suite: one line per criterion, nonzero exit if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fpnet/errors.hpp"
#include "fpnet/network.hpp"
#include "fpnet/proposals.hpp"
#include "fpnet/pyramid.hpp"
#include "fpnet/random.hpp"
#include "fpnet/synthetic.hpp"
#include "fpnet/templates.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

using namespace fpnet;

namespace {

struct Criterion {
    Criterion(const char* id_, const char* summary_) : id(id_), summary(summary_) {}

    const char* id;
    const char* summary;
    bool passed = false;
    std::string detail;
    std::string extra; // multi-line supporting output, printed under the verdict
    double seconds = 0.0;
};

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// A1: the whole-image pass equals the sliding context-window pass on every
// interior cell, 20 weight sets x 20 images, tolerance 1e-5 relative.
Criterion run_a1() {
    Criterion c{"A1", "fcn equivalence vs sliding context windows"};
    Timer timer;
    double worst = 0.0;
    long cells = 0;
    bool ok = true;

    std::vector<NetworkWeights> weight_sets;
    for (std::uint64_t w = 0; w < 20; ++w)
        weight_sets.push_back(random_weights(1000 + w, 5));
    std::vector<Image> images;
    for (std::uint64_t i = 0; i < 20; ++i) {
        UniformSource rng(2000 + i);
        images.push_back(testsup::random_image(rng, 40, 40));
    }

    for (const NetworkWeights& nw : weight_sets) {
        for (const Image& img : images) {
            const HeatmapSet hs = forward_fcn(nw, img);
            for (int r = 0; r < hs.grid_height() && ok; ++r)
                for (int cgrid = 0; cgrid < hs.grid_width() && ok; ++cgrid) {
                    if (2 * r + 12 > img.height - 1 || 2 * cgrid + 12 > img.width - 1)
                        continue; // non-interior
                    const std::vector<float> want =
                        oracle::crop_forward_reference(nw, img, r, cgrid);
                    ++cells;
                    for (int cls = 0; cls < 5; ++cls) {
                        const double a = hs.maps[static_cast<std::size_t>(cls)].at(r, cgrid);
                        const double b = want[static_cast<std::size_t>(cls)];
                        const double rel =
                            std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
                        worst = std::max(worst, rel);
                        if (std::abs(a - b) > 1e-5 * std::max(std::abs(a), std::abs(b)) + 1e-12)
                            ok = false;
                    }
                }
            if (!ok)
                break;
        }
        if (!ok)
            break;
    }
    c.passed = ok;
    c.seconds = timer.seconds();
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%ld interior cells over 400 weight/image pairs, max rel err %.2e",
                  cells, worst);
    c.detail = buf;
    return c;
}

// A2: the iterative merge equals the verbatim reference on 1000 random sets.
Criterion run_a2() {
    Criterion c{"A2", "box merge matches the brute-force reference"};
    Timer timer;
    UniformSource rng(3000);
    bool ok = true;
    int sets = 0;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        const int n = 3 + static_cast<int>(rng.next_below(28));
        std::vector<BBox> boxes;
        for (int i = 0; i < n; ++i)
            boxes.push_back(testsup::random_box(rng));
        const double tau = rng.next_in(0.05, 0.8);

        const auto got = merge_part_boxes(boxes, tau);
        const auto want = oracle::merge_reference(boxes, tau);
        ++sets;
        if (got.size() != want.size()) {
            ok = false;
            break;
        }
        std::size_t members = 0;
        for (std::size_t i = 0; i < got.size() && ok; ++i) {
            if (got[i].members.size() != want[i].members.size()) {
                ok = false;
                break;
            }
            members += got[i].members.size();
            for (std::size_t m = 0; m < got[i].members.size(); ++m)
                if (got[i].members[m].x1 != want[i].members[m].x1 ||
                    got[i].members[m].score != want[i].members[m].score)
                    ok = false;
            if (std::abs(got[i].merged.x1 - want[i].x1) > 1e-9 ||
                std::abs(got[i].merged.y1 - want[i].y1) > 1e-9 ||
                std::abs(got[i].merged.x2 - want[i].x2) > 1e-9 ||
                std::abs(got[i].merged.y2 - want[i].y2) > 1e-9 ||
                std::abs(got[i].merged.score - want[i].score) > 1e-12)
                ok = false;
        }
        if (members != boxes.size())
            ok = false; // not a partition
    }
    c.passed = ok;
    c.seconds = timer.seconds();
    c.detail = std::to_string(sets) + " random box sets, coords 1e-9, scores 1e-12";
    return c;
}

// A3: score-combination properties over 1e4 random multisets.
Criterion run_a3() {
    Criterion c{"A3", "independent-events score combination properties"};
    Timer timer;
    UniformSource rng(4000);
    bool ok = combine_scores(std::vector<double>{0.5, 0.5}) == 0.75;
    for (int trial = 0; trial < 10000 && ok; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_below(10));
        std::vector<double> scores;
        double max_p = 0.0;
        for (int i = 0; i < n; ++i) {
            scores.push_back(rng.next_unit());
            max_p = std::max(max_p, scores.back());
        }
        const double merged = combine_scores(scores);
        if (merged < max_p - 1e-12 || merged > 1.0 + 1e-12)
            ok = false;
        scores.push_back(rng.next_unit());
        if (combine_scores(scores) < merged - 1e-12)
            ok = false; // adding a member decreased the score
    }
    c.passed = ok;
    c.seconds = timer.seconds();
    c.detail = "10000 multisets: range, monotonicity, exact 0.75 for {0.5, 0.5}";
    return c;
}

// A4: sparse-over-dense workload ratio for 1280x720, min face 10.
Criterion run_a4() {
    Criterion c{"A4", "sparse pyramid halves the workload at 1280x720"};
    Timer timer;

    PyramidConfig dense;
    dense.scale_factor = 0.79;
    dense.min_face = 10;
    PyramidConfig sparse;
    sparse.scale_factor = 0.25;
    sparse.min_face = 10;
    sparse.extra_layer = true;

    const auto dense_levels = pyramid_geometry(720, 1280, dense);
    const auto sparse_levels = pyramid_geometry(720, 1280, sparse);
    const std::uint64_t dense_cells = pyramid_workload(dense_levels);
    const std::uint64_t sparse_cells = pyramid_workload(sparse_levels);
    const double ratio = static_cast<double>(sparse_cells) / static_cast<double>(dense_cells);

    auto level_line = [](const char* label, const std::vector<LevelGeometry>& levels) {
        std::string line = "       " + std::string(label) + " levels (" +
                           std::to_string(levels.size()) + "):";
        for (const LevelGeometry& g : levels) {
            char cell[64];
            std::snprintf(cell, sizeof(cell), " %.6g[%dx%d]", g.scale, g.width, g.height);
            line += cell;
        }
        return line + "\n";
    };
    c.extra = level_line("dense f=0.79", dense_levels) +
              level_line("sparse f=0.25+extra", sparse_levels);
    char wl[160];
    std::snprintf(wl, sizeof(wl), "       workload: sparse %llu / dense %llu = %.6f\n",
                  static_cast<unsigned long long>(sparse_cells),
                  static_cast<unsigned long long>(dense_cells), ratio);
    c.extra += wl;

    c.passed = ratio <= 0.5;
    c.seconds = timer.seconds();
    char buf[96];
    std::snprintf(buf, sizeof(buf), "workload ratio %.6f (required <= 0.5)", ratio);
    c.detail = buf;
    return c;
}

// A5: planted-scene recovery, noisy and clean.
Criterion run_a5() {
    Criterion c{"A5", "synthetic scenes recovered at IoU 0.7"};
    Timer timer;
    const auto templates = default_templates();
    PyramidConfig pyr;
    pyr.scale_factor = 0.25;
    pyr.min_face = 10;
    pyr.extra_layer = true;
    const auto levels = pyramid_geometry(480, 640, pyr);
    ProposalConfig cfg; // defaults

    int noisy_ok = 0;
    int clean_ok = 0;
    const int scenes = 200;
    for (int s = 0; s < scenes; ++s) {
        const std::uint64_t seed = 5000 + static_cast<std::uint64_t>(s);
        const GroundTruthScene scene = make_random_scene(seed, 640, 480, levels, templates);

        const auto noisy = plant_heatmaps(scene, levels, templates, 0.3, seed * 13 + 1);
        if (scene_recovered(generate_proposals(noisy, templates, cfg), scene, 0.7))
            ++noisy_ok;

        const auto clean = plant_heatmaps(scene, levels, templates, 0.0, seed * 13 + 2);
        if (scene_recovered(generate_proposals(clean, templates, cfg), scene, 0.7))
            ++clean_ok;
    }

    const double noisy_rate = static_cast<double>(noisy_ok) / scenes;
    c.passed = noisy_rate >= 0.95 && clean_ok == scenes;
    c.seconds = timer.seconds();
    char buf[128];
    std::snprintf(buf, sizeof(buf), "noise 0.3: %d/%d (need >= 95%%); zero noise: %d/%d (need all)",
                  noisy_ok, scenes, clean_ok, scenes);
    c.detail = buf;
    return c;
}

// A6: peak extraction equals the quadratic oracle on 500 random grids.
Criterion run_a6() {
    Criterion c{"A6", "peak extraction matches the quadratic oracle"};
    Timer timer;
    UniformSource rng(6000);
    bool ok = true;
    for (int trial = 0; trial < 500 && ok; ++trial) {
        Heatmap map(50, 50);
        for (float& v : map.values)
            v = static_cast<float>(rng.next_unit());
        const double tau = rng.next_in(0.2, 0.9);
        const int radius = 1 + static_cast<int>(rng.next_below(3));
        const auto got = extract_peaks(map, tau, radius);
        const auto want = oracle::extract_peaks_reference(map, tau, radius);
        if (got.size() != want.size()) {
            ok = false;
            break;
        }
        for (std::size_t i = 0; i < got.size(); ++i)
            if (got[i].row != want[i].row || got[i].col != want[i].col ||
                got[i].score != want[i].score)
                ok = false;
    }
    c.passed = ok;
    c.seconds = timer.seconds();
    c.detail = "500 random 50x50 grids, exact agreement";
    return c;
}

// A7: weight-file roundtrips are bit-exact; corruption gives typed errors.
Criterion run_a7() {
    Criterion c{"A7", "weight serialization roundtrip and typed failures"};
    Timer timer;
    UniformSource rng(7000);
    bool ok = true;

    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };

    const std::string path_a = testsup::temp_path("acc_w_a.fpnw");
    const std::string path_b = testsup::temp_path("acc_w_b.fpnw");
    for (int trial = 0; trial < 50 && ok; ++trial) {
        const int classes = 2 + static_cast<int>(rng.next_below(8));
        const NetworkWeights nw = random_weights(rng.next_u64(), classes);
        save_weights(nw, path_a);
        const NetworkWeights back = load_weights(path_a);
        save_weights(back, path_b);
        if (slurp(path_a) != slurp(path_b))
            ok = false;
        if (back.num_classes != classes)
            ok = false;
    }

    // corruption: every truncation length and a few byte smashes must throw
    // a WeightsError, never crash or succeed silently
    int typed = 0, wrong = 0;
    {
        const NetworkWeights nw = random_weights(123, 5);
        save_weights(nw, path_a);
        const std::string good = slurp(path_a);
        auto expect_error = [&](const std::string& bytes) {
            std::ofstream out(path_a, std::ios::binary);
            out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            out.close();
            try {
                (void)load_weights(path_a);
                ++wrong; // parsed garbage
            } catch (const WeightsError&) {
                ++typed;
            } catch (...) {
                ++wrong;
            }
        };
        for (std::size_t len : {std::size_t{0}, std::size_t{3}, std::size_t{4}, std::size_t{11},
                                std::size_t{16}, std::size_t{25}, good.size() / 2,
                                good.size() - 1})
            expect_error(good.substr(0, len));
        for (std::size_t pos : {std::size_t{0}, std::size_t{4}, std::size_t{8}, std::size_t{12},
                                std::size_t{26}}) {
            std::string bad = good;
            bad[pos] = static_cast<char>(bad[pos] + 17);
            expect_error(bad);
        }
        if (wrong != 0)
            ok = false;
    }
    std::remove(path_a.c_str());
    std::remove(path_b.c_str());

    c.passed = ok;
    c.seconds = timer.seconds();
    char buf[96];
    std::snprintf(buf, sizeof(buf), "50 roundtrips bit-exact; %d corruptions all typed", typed);
    c.detail = buf;
    return c;
}

} // namespace

int main() {
    std::vector<Criterion> results;
    results.push_back(run_a1());
    results.push_back(run_a2());
    results.push_back(run_a3());
    results.push_back(run_a4());
    results.push_back(run_a5());
    results.push_back(run_a6());
    results.push_back(run_a7());

    int passed = 0;
    for (const Criterion& c : results) {
        std::printf("[%s] %s  %s: %s (%.2f s)\n", c.id, c.passed ? "PASS" : "FAIL", c.summary,
                    c.detail.c_str(), c.seconds);
        if (!c.extra.empty())
            std::fputs(c.extra.c_str(), stdout);
        if (c.passed)
            ++passed;
    }
    std::printf("acceptance: %d/%zu criteria passed\n", passed, results.size());
    return passed == static_cast<int>(results.size()) ? 0 : 1;
}
