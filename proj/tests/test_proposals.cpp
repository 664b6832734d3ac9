#include "doctest.h"

#include <algorithm>

#include "fpnet/errors.hpp"
#include "fpnet/proposals.hpp"
#include "fpnet/templates.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

using namespace fpnet;

namespace {

HeatmapSet empty_set(int classes, int gh, int gw, double scale, int img_w, int img_h) {
    HeatmapSet hs;
    hs.level_scale = scale;
    hs.image_width = img_w;
    hs.image_height = img_h;
    hs.maps.assign(static_cast<std::size_t>(classes), Heatmap(gh, gw));
    return hs;
}

} // namespace

TEST_CASE("extract_peaks on an all-zero map is empty") {
    Heatmap map(20, 20);
    CHECK(extract_peaks(map, 0.5, 2).empty());
}

TEST_CASE("extract_peaks keeps a single hot cell") {
    Heatmap map(10, 10);
    map.at(4, 7) = 0.9f;
    const auto peaks = extract_peaks(map, 0.5, 2);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].row == 4);
    CHECK(peaks[0].col == 7);
    CHECK(peaks[0].score == 0.9f);
}

TEST_CASE("extract_peaks matches the quadratic reference") {
    UniformSource rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        Heatmap map(50, 50);
        for (float& v : map.values)
            v = static_cast<float>(rng.next_unit());
        const double tau = rng.next_in(0.3, 0.9);
        const int radius = 1 + static_cast<int>(rng.next_below(3));
        const auto got = extract_peaks(map, tau, radius);
        const auto want = oracle::extract_peaks_reference(map, tau, radius);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].row == want[i].row);
            CHECK(got[i].col == want[i].col);
            CHECK(got[i].score == want[i].score);
        }
    }
}

TEST_CASE("extract_peaks output is sorted and spread") {
    UniformSource rng(42);
    Heatmap map(40, 40);
    for (float& v : map.values)
        v = static_cast<float>(rng.next_unit());
    const int radius = 2;
    const auto peaks = extract_peaks(map, 0.2, radius);
    for (std::size_t i = 1; i < peaks.size(); ++i)
        CHECK(peaks[i - 1].score >= peaks[i].score);
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        CHECK(peaks[i].score >= 0.2f);
        for (std::size_t j = i + 1; j < peaks.size(); ++j) {
            const int cheb = std::max(std::abs(peaks[i].row - peaks[j].row),
                                      std::abs(peaks[i].col - peaks[j].col));
            CHECK(cheb > radius);
        }
    }
}

TEST_CASE("iou basics") {
    const BBox a{0, 0, 10, 10, 1.0, 1, 1.0};
    CHECK(iou(a, a) == doctest::Approx(1.0));
    const BBox b{20, 20, 30, 30, 1.0, 1, 1.0};
    CHECK(iou(a, b) == 0.0);
    const BBox c{5, 0, 15, 10, 1.0, 1, 1.0};
    CHECK(iou(a, c) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(iou(c, a) == iou(a, c));
}

TEST_CASE("iou is symmetric and bounded on random boxes") {
    UniformSource rng(43);
    for (int i = 0; i < 200; ++i) {
        const BBox a = testsup::random_box(rng);
        const BBox b = testsup::random_box(rng);
        const double v = iou(a, b);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v == iou(b, a));
    }
}

TEST_CASE("face_boxes maps grid cells through the level scale") {
    ProposalConfig cfg;

    SUBCASE("no peaks, no boxes") {
        const HeatmapSet hs = empty_set(5, 10, 10, 1.0, 100, 100);
        CHECK(face_boxes(hs, cfg).empty());
    }
    SUBCASE("origin cell at unit scale") {
        HeatmapSet hs = empty_set(5, 10, 10, 1.0, 100, 100);
        hs.maps[kFaceClass].at(0, 0) = 0.8f;
        const auto boxes = face_boxes(hs, cfg);
        REQUIRE(boxes.size() == 1);
        CHECK(boxes[0].x1 == 0.0);
        CHECK(boxes[0].y1 == 0.0);
        CHECK(boxes[0].x2 == 12.0);
        CHECK(boxes[0].y2 == 12.0);
        CHECK(boxes[0].score == doctest::Approx(0.8).epsilon(1e-6));
        CHECK(boxes[0].source == kFaceClass);
    }
    SUBCASE("cell (3,5) at half scale") {
        HeatmapSet hs = empty_set(5, 10, 10, 0.5, 100, 100);
        hs.maps[kFaceClass].at(3, 5) = 0.9f;
        const auto boxes = face_boxes(hs, cfg);
        REQUIRE(boxes.size() == 1);
        CHECK(boxes[0].x1 == doctest::Approx(20.0));
        CHECK(boxes[0].y1 == doctest::Approx(12.0));
        CHECK(boxes[0].x2 == doctest::Approx(44.0));
        CHECK(boxes[0].y2 == doctest::Approx(36.0));
    }
    SUBCASE("edge boxes are clamped to the image") {
        HeatmapSet hs = empty_set(5, 10, 10, 1.0, 24, 24);
        hs.maps[kFaceClass].at(9, 9) = 0.9f; // window (18..30) clamps to 24
        const auto boxes = face_boxes(hs, cfg);
        REQUIRE(boxes.size() == 1);
        CHECK(boxes[0].x2 == 24.0);
        CHECK(boxes[0].y2 == 24.0);
    }
    SUBCASE("overlapping peaks collapse under NMS") {
        HeatmapSet hs = empty_set(5, 10, 10, 1.0, 100, 100);
        hs.maps[kFaceClass].at(2, 2) = 0.9f;
        hs.maps[kFaceClass].at(2, 6) = 0.8f; // windows overlap by 4/20 < 0.5 iou: kept
        hs.maps[kFaceClass].at(5, 2) = 0.7f;
        const auto boxes = face_boxes(hs, cfg);
        for (std::size_t i = 0; i < boxes.size(); ++i)
            for (std::size_t j = i + 1; j < boxes.size(); ++j)
                CHECK(iou(boxes[i], boxes[j]) <= cfg.face_nms_iou);
    }
}

TEST_CASE("part_boxes applies the geometric templates") {
    ProposalConfig cfg;
    const auto templates = default_templates();

    SUBCASE("nose template arithmetic") {
        // part center (60, 60): cell (27, 27) since centers sit at 2c + 6
        HeatmapSet hs = empty_set(5, 40, 40, 1.0, 200, 200);
        hs.maps[class_id_from_name("nose")].at(27, 27) = 0.95f;
        const auto boxes = part_boxes(hs, templates, cfg);
        REQUIRE(boxes.size() == 1);
        CHECK(boxes[0].x1 == doctest::Approx(42.0).epsilon(1e-9));
        CHECK(boxes[0].y1 == doctest::Approx(37.68).epsilon(1e-9));
        CHECK(boxes[0].x2 - boxes[0].x1 == doctest::Approx(36.0).epsilon(1e-9));
        CHECK(boxes[0].y2 - boxes[0].y1 == doctest::Approx(36.0).epsilon(1e-9));
        CHECK(boxes[0].source == class_id_from_name("nose"));
    }
    SUBCASE("no peaks, no boxes") {
        const HeatmapSet hs = empty_set(5, 40, 40, 1.0, 200, 200);
        CHECK(part_boxes(hs, templates, cfg).empty());
    }
    SUBCASE("one eye peak emits two mirror boxes") {
        HeatmapSet hs = empty_set(5, 40, 40, 1.0, 200, 200);
        hs.maps[class_id_from_name("eye")].at(27, 27) = 0.95f;
        const auto boxes = part_boxes(hs, templates, cfg);
        REQUIRE(boxes.size() == 2);
        const double cx = 60.0;
        // reflections of each other about the part center
        CHECK(boxes[0].x1 - cx == doctest::Approx(-(boxes[1].x2 - cx)).epsilon(1e-9));
        CHECK(boxes[0].x2 - cx == doctest::Approx(-(boxes[1].x1 - cx)).epsilon(1e-9));
        CHECK(boxes[0].y1 == doctest::Approx(boxes[1].y1).epsilon(1e-9));
        CHECK(boxes[0].y2 == doctest::Approx(boxes[1].y2).epsilon(1e-9));
    }
    SUBCASE("missing template is an error") {
        HeatmapSet hs = empty_set(5, 40, 40, 1.0, 200, 200);
        hs.maps[class_id_from_name("mouth")].at(10, 10) = 0.9f;
        const std::vector<PartTemplate> eyes_only = {templates[0], templates[1]};
        CHECK_THROWS_AS(part_boxes(hs, eyes_only, cfg), ConfigError);
    }
}

TEST_CASE("combine_scores follows the independent-events rule") {
    CHECK(combine_scores(std::vector<double>{0.5}) == doctest::Approx(0.5));
    CHECK(combine_scores(std::vector<double>{0.5, 0.5}) == 0.75);
    CHECK(combine_scores(std::vector<double>{}) == 0.0);
    CHECK(combine_scores(std::vector<double>{1.0, 0.2}) == doctest::Approx(1.0));

    UniformSource rng(44);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> scores;
        const int n = 1 + static_cast<int>(rng.next_below(8));
        double max_p = 0.0;
        for (int i = 0; i < n; ++i) {
            scores.push_back(rng.next_unit());
            max_p = std::max(max_p, scores.back());
        }
        const double merged = combine_scores(scores);
        CHECK(merged >= max_p - 1e-12);
        CHECK(merged <= 1.0 + 1e-12);
        // adding a member never decreases the score
        std::vector<double> extended = scores;
        extended.push_back(rng.next_unit());
        CHECK(combine_scores(extended) >= merged - 1e-12);
        // a zero-score member changes nothing
        std::vector<double> padded = scores;
        padded.push_back(0.0);
        CHECK(combine_scores(padded) == doctest::Approx(merged).epsilon(1e-15));
    }
}

TEST_CASE("merge_part_boxes single and pair cases") {
    SUBCASE("one box is its own cluster") {
        const BBox b{10, 10, 20, 20, 0.6, 2, 1.0};
        const auto clusters = merge_part_boxes({b}, 0.3);
        REQUIRE(clusters.size() == 1);
        CHECK(clusters[0].members.size() == 1);
        CHECK(clusters[0].merged.x1 == 10.0);
        CHECK(clusters[0].merged.y2 == 20.0);
        CHECK(clusters[0].merged.score == doctest::Approx(0.6).epsilon(1e-12));
    }
    SUBCASE("two identical boxes merge to 0.75") {
        const BBox b{10, 10, 20, 20, 0.5, 2, 1.0};
        const auto clusters = merge_part_boxes({b, b}, 0.3);
        REQUIRE(clusters.size() == 1);
        CHECK(clusters[0].members.size() == 2);
        CHECK(clusters[0].merged.x1 == 10.0);
        CHECK(clusters[0].merged.score == 0.75);
    }
}

TEST_CASE("merge_part_boxes matches the verbatim reference") {
    UniformSource rng(45);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng.next_below(28));
        std::vector<BBox> boxes;
        for (int i = 0; i < n; ++i)
            boxes.push_back(testsup::random_box(rng));
        const double tau = rng.next_in(0.1, 0.7);

        const auto got = merge_part_boxes(boxes, tau);
        const auto want = oracle::merge_reference(boxes, tau);
        REQUIRE(got.size() == want.size());
        std::size_t total_members = 0;
        for (std::size_t i = 0; i < got.size(); ++i) {
            REQUIRE(got[i].members.size() == want[i].members.size());
            total_members += got[i].members.size();
            for (std::size_t m = 0; m < got[i].members.size(); ++m) {
                CHECK(got[i].members[m].x1 == want[i].members[m].x1);
                CHECK(got[i].members[m].score == want[i].members[m].score);
            }
            CHECK(std::abs(got[i].merged.x1 - want[i].x1) <= 1e-9);
            CHECK(std::abs(got[i].merged.y1 - want[i].y1) <= 1e-9);
            CHECK(std::abs(got[i].merged.x2 - want[i].x2) <= 1e-9);
            CHECK(std::abs(got[i].merged.y2 - want[i].y2) <= 1e-9);
            CHECK(std::abs(got[i].merged.score - want[i].score) <= 1e-12);
        }
        CHECK(total_members == boxes.size()); // partition
    }
}

TEST_CASE("merged coordinates stay within the member envelope") {
    UniformSource rng(46);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<BBox> boxes;
        const int n = 2 + static_cast<int>(rng.next_below(10));
        for (int i = 0; i < n; ++i)
            boxes.push_back(testsup::random_box(rng));
        for (const MergeCluster& cluster : merge_part_boxes(boxes, 0.3)) {
            double lo_x1 = 1e30, hi_x1 = -1e30;
            double max_p = 0.0;
            for (const BBox& m : cluster.members) {
                lo_x1 = std::min(lo_x1, m.x1);
                hi_x1 = std::max(hi_x1, m.x1);
                max_p = std::max(max_p, m.score);
            }
            CHECK(cluster.merged.x1 >= lo_x1 - 1e-12);
            CHECK(cluster.merged.x1 <= hi_x1 + 1e-12);
            CHECK(cluster.merged.score >= max_p - 1e-12);
            CHECK(cluster.merged.score <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("generate_proposals unions faces with merged parts") {
    ProposalConfig cfg;
    const auto templates = default_templates();

    SUBCASE("empty everywhere") {
        std::vector<HeatmapSet> levels{empty_set(5, 12, 12, 1.0, 100, 100),
                                       empty_set(5, 6, 6, 0.5, 100, 100)};
        CHECK(generate_proposals(levels, templates, cfg).empty());
    }
    SUBCASE("a lone face peak passes through") {
        std::vector<HeatmapSet> levels{empty_set(5, 12, 12, 1.0, 100, 100)};
        levels[0].maps[kFaceClass].at(4, 4) = 0.9f;
        const auto got = generate_proposals(levels, templates, cfg);
        const auto direct = face_boxes(levels[0], cfg);
        REQUIRE(got.size() == 1);
        REQUIRE(direct.size() == 1);
        CHECK(got[0].x1 == direct[0].x1);
        CHECK(got[0].score == direct[0].score);
    }
    SUBCASE("deterministic across repeated runs and level order") {
        UniformSource rng(47);
        std::vector<HeatmapSet> levels{empty_set(5, 20, 20, 1.0, 200, 200),
                                       empty_set(5, 10, 10, 0.5, 200, 200)};
        for (HeatmapSet& hs : levels)
            for (std::size_t cls = 1; cls < hs.maps.size(); ++cls)
                for (float& v : hs.maps[cls].values)
                    v = static_cast<float>(rng.next_unit());
        const auto a = generate_proposals(levels, templates, cfg);
        const auto b = generate_proposals(levels, templates, cfg);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].x1 == b[i].x1);
            CHECK(a[i].score == b[i].score);
        }
        // swapped level order changes nothing
        std::vector<HeatmapSet> swapped{levels[1], levels[0]};
        const auto c = generate_proposals(swapped, templates, cfg);
        REQUIRE(c.size() == a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].x1 == c[i].x1);
            CHECK(a[i].score == c[i].score);
        }
        // output is score-sorted
        for (std::size_t i = 1; i < a.size(); ++i)
            CHECK(a[i - 1].score >= a[i].score);
    }
    SUBCASE("at least one level required") {
        CHECK_THROWS_AS(generate_proposals({}, templates, cfg), ShapeError);
    }
}

TEST_CASE("template files parse and validate") {
    const auto parsed = parse_templates("# comment\n"
                                        "eye 0.31 0.40 3.0\n"
                                        "eye 0.69 0.40 3.0\n"
                                        "\n"
                                        "nose 0.50 0.62 3.0  # trailing comment\n"
                                        "mouth 0.50 0.80 3.0\n");
    REQUIRE(parsed.size() == 4);
    CHECK(parsed[0].part == class_id_from_name("eye"));
    CHECK(parsed[2].anchor_y == doctest::Approx(0.62));

    CHECK_THROWS_AS(parse_templates("face 0.5 0.5 3.0\n"), ParseError);
    CHECK_THROWS_AS(parse_templates("nose 0.5 0.5\n"), ParseError);
    CHECK_THROWS_AS(parse_templates("nose 1.5 0.5 3.0\n"), ParseError);
    CHECK_THROWS_AS(parse_templates("nose 0.5 0.5 -1.0\n"), ParseError);
    try {
        parse_templates("eye 0.31 0.40 3.0\nbogus 0.5 0.5 3.0\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}
