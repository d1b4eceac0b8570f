#include "eitmap/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "eitmap/segmentation.hpp"

namespace eitmap {

namespace {

void check_pair(const PixelMap& mask, const PixelMap& ref, const char* where) {
    if (mask.kind != PixelKind::Binary)
        throw KindMismatch(std::string(where) + ": mask must be binary, got " +
                           to_string(mask.kind));
    if (ref.kind != PixelKind::Binary)
        throw KindMismatch(std::string(where) + ": reference must be binary, got " +
                           to_string(ref.kind));
    if (mask.width != ref.width || mask.height != ref.height)
        throw KindMismatch(std::string(where) + ": mask and reference disagree on dimensions");
}

} // namespace

double sensitivity(const PixelMap& mask, const PixelMap& ref) {
    check_pair(mask, ref, "sensitivity");
    std::size_t ref_positive = 0;
    std::size_t hit = 0;
    for (std::size_t i = 0; i < ref.values.size(); ++i) {
        if (ref.values[i] != 0.0) {
            ++ref_positive;
            if (mask.values[i] != 0.0)
                ++hit;
        }
    }
    if (ref_positive == 0)
        throw EmptyReference("sensitivity: reference has no positive pixels");
    return static_cast<double>(hit) / static_cast<double>(ref_positive);
}

double specificity(const PixelMap& mask, const PixelMap& ref) {
    check_pair(mask, ref, "specificity");
    std::size_t ref_negative = 0;
    std::size_t miss = 0;
    for (std::size_t i = 0; i < ref.values.size(); ++i) {
        if (ref.values[i] == 0.0) {
            ++ref_negative;
            if (mask.values[i] == 0.0)
                ++miss;
        }
    }
    if (ref_negative == 0)
        throw FullReference("specificity: reference has no negative pixels");
    return static_cast<double>(miss) / static_cast<double>(ref_negative);
}

RocCurve roc_curve(const PixelMap& map, const PixelMap& ref, double t_start, double t_end,
                   double t_step) {
    if (!(t_step > 0.0))
        throw ConfigError("roc_curve: t_step must be positive");
    if (!(t_start <= t_end))
        throw ConfigError("roc_curve: t_start must not exceed t_end");

    RocCurve curve;
    const auto steps =
        static_cast<std::size_t>(std::floor((t_end - t_start) / t_step + 1e-9)) + 1;
    for (std::size_t i = 0; i < steps; ++i) {
        // Accumulated rounding can push the last point a few ULPs past t_end.
        const double t = std::min(t_start + static_cast<double>(i) * t_step, t_end);
        const PixelMap mask = threshold_map(map, t);
        curve.points.push_back({t, sensitivity(mask, ref), specificity(mask, ref)});
    }

    // Trapezoid over ROC space, anchored at the corners.
    std::vector<std::pair<double, double>> xy;
    xy.reserve(curve.points.size() + 2);
    xy.emplace_back(0.0, 0.0);
    xy.emplace_back(1.0, 1.0);
    for (const RocPoint& p : curve.points)
        xy.emplace_back(1.0 - p.specificity, p.sensitivity);
    std::sort(xy.begin(), xy.end());
    xy.erase(std::unique(xy.begin(), xy.end()), xy.end());

    double auc = 0.0;
    for (std::size_t i = 1; i < xy.size(); ++i)
        auc += (xy[i].first - xy[i - 1].first) * (xy[i].second + xy[i - 1].second) * 0.5;
    curve.auc = auc;
    return curve;
}

void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoFailure("cannot open " + path.string() + " for writing");
    out << "threshold,sensitivity,specificity\n";
    char buf[128];
    for (const RocPoint& p : curve.points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.threshold, p.sensitivity,
                      p.specificity);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "# auc=%.17g\n", curve.auc);
    out << buf;
    if (!out)
        throw IoFailure("write failed on " + path.string());
}

} // namespace eitmap
