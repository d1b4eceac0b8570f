#include <doctest.h>

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "eitmap/errors.hpp"
#include "eitmap/segmentation.hpp"
#include "support/testutil.hpp"

using namespace eitmap;

namespace {

PixelMap random_possibility_map(std::mt19937& rng, std::size_t width, std::size_t height) {
    PixelMap map(PixelKind::Possibility, width, height);
    for (double& v : map.values)
        v = (rng() >> 8) / double(1 << 24);
    return map;
}

} // namespace

TEST_CASE("the shipped thresholds") {
    const SegmentationConfig cfg;
    CHECK(cfg.ventilation_threshold == 0.31);
    CHECK(cfg.perfusion_threshold == 0.28);
    CHECK(cfg.reference_threshold == 0.1);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("segmentation config validation") {
    SegmentationConfig cfg;
    cfg.ventilation_threshold = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ThresholdOutOfRange);
    cfg = SegmentationConfig{};
    cfg.perfusion_threshold = -0.1;
    CHECK_THROWS_AS(cfg.validate(), ThresholdOutOfRange);
}

TEST_CASE("thresholding is inclusive at the cut") {
    const PixelMap map =
        testutil::make_map(PixelKind::Possibility, 3, 1, {0.1, 0.5, 0.9});
    const PixelMap mask = threshold_map(map, 0.5);
    CHECK(mask.kind == PixelKind::Binary);
    CHECK(mask.values == std::vector<double>{0.0, 1.0, 1.0});
}

TEST_CASE("threshold edge values") {
    const PixelMap map =
        testutil::make_map(PixelKind::Possibility, 3, 1, {0.0, 0.4, 1.0});
    CHECK(threshold_map(map, 0.0).values == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(threshold_map(map, 1.0).values == std::vector<double>{0.0, 0.0, 1.0});
}

TEST_CASE("threshold input validation") {
    const PixelMap map = testutil::make_map(PixelKind::Possibility, 1, 1, {0.5});
    CHECK_THROWS_AS(threshold_map(map, -0.01), ThresholdOutOfRange);
    CHECK_THROWS_AS(threshold_map(map, 1.01), ThresholdOutOfRange);
    const PixelMap raw = testutil::make_map(PixelKind::Amplitude, 1, 1, {3.0});
    CHECK_THROWS_AS(threshold_map(raw, 0.5), KindMismatch);
}

TEST_CASE("mask union is a pixel-wise OR") {
    const PixelMap a = testutil::make_map(PixelKind::Binary, 4, 1, {0.0, 1.0, 0.0, 1.0});
    const PixelMap b = testutil::make_map(PixelKind::Binary, 4, 1, {0.0, 0.0, 1.0, 1.0});
    const PixelMap u = union_mask(a, b);
    CHECK(u.kind == PixelKind::Binary);
    CHECK(u.values == std::vector<double>{0.0, 1.0, 1.0, 1.0});
    // Idempotent, and the empty mask is the identity.
    CHECK(union_mask(a, a).values == a.values);
    const PixelMap zeros = testutil::make_map(PixelKind::Binary, 4, 1, {0, 0, 0, 0});
    CHECK(union_mask(a, zeros).values == a.values);
}

TEST_CASE("mask union rejects mismatched arguments") {
    const PixelMap a = testutil::make_map(PixelKind::Binary, 2, 1, {0.0, 1.0});
    const PixelMap fuzzy = testutil::make_map(PixelKind::Possibility, 2, 1, {0.0, 1.0});
    CHECK_THROWS_AS(union_mask(a, fuzzy), KindMismatch);
    const PixelMap other = testutil::make_map(PixelKind::Binary, 1, 2, {0.0, 1.0});
    CHECK_THROWS_AS(union_mask(a, other), KindMismatch);
}

TEST_CASE("three-region labels follow the threshold outcomes") {
    const SegmentationConfig cfg; // 0.31 / 0.28
    const PixelMap vent =
        testutil::make_map(PixelKind::Possibility, 4, 1, {0.5, 0.1, 0.5, 0.05});
    const PixelMap perf =
        testutil::make_map(PixelKind::Possibility, 4, 1, {0.5, 0.5, 0.1, 0.02});
    const PixelMap seg = three_region_segment(vent, perf, cfg);
    CHECK(seg.kind == PixelKind::RegionLabel);
    CHECK(seg.values[0] == kRegionMatched);
    CHECK(seg.values[1] == kRegionPerfused);
    CHECK(seg.values[2] == kRegionVentilated);
    CHECK(seg.values[3] == kRegionBackground);
}

TEST_CASE("thresholding is antitone in the threshold") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const PixelMap map = random_possibility_map(rng, 8, 8);
        const double t1 = (rng() >> 8) / double(1 << 24);
        const double t2 = (rng() >> 8) / double(1 << 24);
        const double lo = std::min(t1, t2);
        const double hi = std::max(t1, t2);
        const PixelMap coarse = threshold_map(map, hi);
        const PixelMap fine = threshold_map(map, lo);
        for (std::size_t p = 0; p < map.size(); ++p) {
            // Raising the threshold can only clear pixels.
            CHECK(coarse.values[p] <= fine.values[p]);
        }
    }
}

TEST_CASE("segmentation algebra holds on random map pairs") {
    std::mt19937 rng(99);
    SegmentationConfig cfg;
    for (int trial = 0; trial < 100; ++trial) {
        const PixelMap vent = random_possibility_map(rng, 8, 8);
        const PixelMap perf = random_possibility_map(rng, 8, 8);
        cfg.ventilation_threshold = (rng() >> 8) / double(1 << 24);
        cfg.perfusion_threshold = (rng() >> 8) / double(1 << 24);

        const PixelMap vent_mask = threshold_map(vent, cfg.ventilation_threshold);
        const PixelMap perf_mask = threshold_map(perf, cfg.perfusion_threshold);
        const PixelMap lung = union_mask(vent_mask, perf_mask);
        const PixelMap seg = three_region_segment(vent, perf, cfg);

        for (std::size_t p = 0; p < seg.size(); ++p) {
            const bool v = vent_mask.values[p] == 1.0;
            const bool q = perf_mask.values[p] == 1.0;
            const double label = seg.values[p];
            // The four labels partition the pixels according to the masks.
            if (v && q)
                CHECK(label == kRegionMatched);
            else if (q)
                CHECK(label == kRegionPerfused);
            else if (v)
                CHECK(label == kRegionVentilated);
            else
                CHECK(label == kRegionBackground);
            // Any non-background label lies inside the union mask and
            // background lies outside it.
            CHECK((label != kRegionBackground) == (lung.values[p] == 1.0));
        }
    }
}

TEST_CASE("three-region segmentation validates its inputs") {
    const SegmentationConfig cfg;
    const PixelMap vent = testutil::make_map(PixelKind::Possibility, 2, 1, {0.5, 0.1});
    const PixelMap other = testutil::make_map(PixelKind::Possibility, 1, 2, {0.5, 0.1});
    CHECK_THROWS_AS(three_region_segment(vent, other, cfg), KindMismatch);

    SegmentationConfig bad;
    bad.perfusion_threshold = 2.0;
    const PixelMap perf = testutil::make_map(PixelKind::Possibility, 2, 1, {0.5, 0.1});
    CHECK_THROWS_AS(three_region_segment(vent, perf, bad), ThresholdOutOfRange);
}
