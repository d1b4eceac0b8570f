#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "eitmap/dataio.hpp"
#include "eitmap/errors.hpp"
#include "eitmap/evaluation.hpp"
#include "support/testutil.hpp"

using namespace eitmap;

namespace {

const std::filesystem::path kFixtures = EITMAP_FIXTURE_DIR;

PixelMap random_binary_map(std::mt19937& rng, std::size_t width, std::size_t height) {
    PixelMap map(PixelKind::Binary, width, height);
    for (double& v : map.values)
        v = rng() % 2 ? 1.0 : 0.0;
    return map;
}

PixelMap as_possibility(const PixelMap& binary) {
    PixelMap map = binary;
    map.kind = PixelKind::Possibility;
    return map;
}

} // namespace

TEST_CASE("the hand-counted four-by-four fixture") {
    const PixelMap ref = load_pixel_map_csv(kFixtures / "ref_4x4.csv", PixelKind::Binary);
    const PixelMap mask = load_pixel_map_csv(kFixtures / "mask_4x4.csv", PixelKind::Binary);
    REQUIRE(ref.width == 4);
    REQUIRE(ref.height == 4);
    // 6 reference positives, 3 hit; 10 negatives, 2 falsely marked.
    CHECK(sensitivity(mask, ref) == 0.5);
    CHECK(specificity(mask, ref) == 0.8);
}

TEST_CASE("a perfect mask scores ones, its complement zeros") {
    std::mt19937 rng(3);
    const PixelMap ref = random_binary_map(rng, 8, 8);
    CHECK(sensitivity(ref, ref) == 1.0);
    CHECK(specificity(ref, ref) == 1.0);

    PixelMap inverted = ref;
    for (double& v : inverted.values)
        v = 1.0 - v;
    CHECK(sensitivity(inverted, ref) == 0.0);
    CHECK(specificity(inverted, ref) == 0.0);
}

TEST_CASE("degenerate references are rejected") {
    const PixelMap mask = testutil::make_map(PixelKind::Binary, 2, 1, {1.0, 0.0});
    const PixelMap none = testutil::make_map(PixelKind::Binary, 2, 1, {0.0, 0.0});
    const PixelMap all = testutil::make_map(PixelKind::Binary, 2, 1, {1.0, 1.0});
    CHECK_THROWS_AS(sensitivity(mask, none), EmptyReference);
    CHECK_THROWS_AS(specificity(mask, all), FullReference);
    // The other direction each is fine.
    CHECK(sensitivity(mask, all) == 0.5);
    CHECK(specificity(mask, none) == 0.5);
}

TEST_CASE("score inputs must be binary maps of equal size") {
    const PixelMap mask = testutil::make_map(PixelKind::Binary, 2, 1, {1.0, 0.0});
    const PixelMap fuzzy = testutil::make_map(PixelKind::Possibility, 2, 1, {1.0, 0.0});
    const PixelMap other = testutil::make_map(PixelKind::Binary, 1, 2, {1.0, 0.0});
    CHECK_THROWS_AS(sensitivity(fuzzy, mask), KindMismatch);
    CHECK_THROWS_AS(sensitivity(mask, fuzzy), KindMismatch);
    CHECK_THROWS_AS(specificity(mask, other), KindMismatch);
}

TEST_CASE("a map identical to the reference sweeps to AUC 1") {
    std::mt19937 rng(17);
    const PixelMap ref = random_binary_map(rng, 8, 8);
    const RocCurve curve = roc_curve(as_possibility(ref), ref);
    CHECK(curve.auc == 1.0);
    REQUIRE(curve.points.size() == 19); // 0.1 to 1.0 in steps of 0.05
    for (const RocPoint& pt : curve.points) {
        CHECK(pt.sensitivity == 1.0);
        CHECK(pt.specificity == 1.0);
    }
}

TEST_CASE("a map inverted against the reference sweeps to AUC 0") {
    std::mt19937 rng(18);
    const PixelMap ref = random_binary_map(rng, 8, 8);
    PixelMap inverted = as_possibility(ref);
    for (double& v : inverted.values)
        v = 1.0 - v;
    CHECK(roc_curve(inverted, ref).auc == 0.0);
}

TEST_CASE("an all-ones map lands on the diagonal") {
    std::mt19937 rng(19);
    const PixelMap ref = random_binary_map(rng, 8, 8);
    const PixelMap ones = testutil::make_map(PixelKind::Possibility, 8, 8,
                                             std::vector<double>(64, 1.0));
    // Every threshold yields sensitivity 1 at specificity 0; with the two
    // anchor corners the curve is the diagonal.
    CHECK(roc_curve(ones, ref).auc == 0.5);
}

TEST_CASE("an uninformative map scores near one half") {
    for (std::uint32_t seed = 1; seed <= 5; ++seed) {
        std::mt19937 rng(seed);
        const PixelMap ref = random_binary_map(rng, 32, 32);
        PixelMap map(PixelKind::Possibility, 32, 32);
        for (double& v : map.values)
            v = (rng() >> 8) / double(1 << 24);
        const double auc = roc_curve(map, ref).auc;
        CAPTURE(seed);
        CHECK(auc > 0.4);
        CHECK(auc < 0.6);
    }
}

TEST_CASE("the sweep is monotone in the expected directions") {
    std::mt19937 rng(23);
    const PixelMap ref = random_binary_map(rng, 16, 16);
    PixelMap map(PixelKind::Possibility, 16, 16);
    for (double& v : map.values)
        v = (rng() >> 8) / double(1 << 24);
    const RocCurve curve = roc_curve(map, ref);
    REQUIRE(curve.points.size() == 19);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        CHECK(curve.points[i].threshold > curve.points[i - 1].threshold);
        // A stricter threshold can only lower sensitivity and raise
        // specificity.
        CHECK(curve.points[i].sensitivity <= curve.points[i - 1].sensitivity);
        CHECK(curve.points[i].specificity >= curve.points[i - 1].specificity);
    }
    CHECK(curve.auc >= 0.0);
    CHECK(curve.auc <= 1.0);
}

TEST_CASE("AUC is invariant under a strictly monotone transform") {
    std::mt19937 rng(29);
    const PixelMap ref = random_binary_map(rng, 16, 16);
    PixelMap map(PixelKind::Possibility, 16, 16);
    for (double& v : map.values)
        v = static_cast<double>(rng() % 11) / 10.0; // a coarse value grid

    PixelMap transformed = map;
    for (double& v : transformed.values)
        v = std::sqrt(v);

    // A sweep dense enough to see every distinct value on both scales.
    const double auc_plain = roc_curve(map, ref, 0.0, 1.0, 0.005).auc;
    const double auc_transformed = roc_curve(transformed, ref, 0.0, 1.0, 0.005).auc;
    CHECK(auc_plain == doctest::Approx(auc_transformed).epsilon(1e-12));
}

TEST_CASE("sweep parameters are validated") {
    const PixelMap ref = testutil::make_map(PixelKind::Binary, 2, 1, {1.0, 0.0});
    const PixelMap map = testutil::make_map(PixelKind::Possibility, 2, 1, {0.9, 0.1});
    CHECK_THROWS_AS(roc_curve(map, ref, 0.1, 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(roc_curve(map, ref, 0.1, 1.0, -0.05), ConfigError);
    CHECK_THROWS_AS(roc_curve(map, ref, 0.9, 0.1, 0.05), ConfigError);
}

TEST_CASE("the ROC CSV carries every sweep point and the AUC") {
    testutil::TempDir dir("evaluation_roc_csv");
    std::mt19937 rng(31);
    const PixelMap ref = random_binary_map(rng, 8, 8);
    const RocCurve curve = roc_curve(as_possibility(ref), ref);
    write_roc_csv(curve, dir / "roc.csv");

    const std::string text = testutil::slurp(dir / "roc.csv");
    CHECK(text.rfind("threshold,sensitivity,specificity\n", 0) == 0);
    CHECK(text.find("# auc=1") != std::string::npos);
    std::size_t lines = 0;
    for (char ch : text)
        if (ch == '\n')
            ++lines;
    CHECK(lines == 1 + 19 + 1); // header, points, AUC comment
}
