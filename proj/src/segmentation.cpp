#include "eitmap/segmentation.hpp"

#include <string>

namespace eitmap {

namespace {

void check_threshold(double t, const char* name) {
    if (!(t >= 0.0 && t <= 1.0))
        throw ThresholdOutOfRange(std::string(name) + " must lie in [0,1], got " +
                                  std::to_string(t));
}

void check_gradable(const PixelMap& map, const char* where) {
    if (map.kind != PixelKind::Normalized && map.kind != PixelKind::Possibility &&
        map.kind != PixelKind::Binary)
        throw KindMismatch(std::string(where) + ": cannot threshold a " + to_string(map.kind) +
                           " map");
}

} // namespace

void SegmentationConfig::validate() const {
    check_threshold(ventilation_threshold, "ventilation_threshold");
    check_threshold(perfusion_threshold, "perfusion_threshold");
    check_threshold(reference_threshold, "reference_threshold");
}

PixelMap threshold_map(const PixelMap& map, double t) {
    check_threshold(t, "threshold");
    check_gradable(map, "threshold_map");
    PixelMap out(PixelKind::Binary, map.width, map.height);
    for (std::size_t i = 0; i < map.values.size(); ++i)
        out.values[i] = map.values[i] >= t ? 1.0 : 0.0;
    return out;
}

PixelMap union_mask(const PixelMap& a, const PixelMap& b) {
    if (a.kind != PixelKind::Binary || b.kind != PixelKind::Binary)
        throw KindMismatch("union_mask: both maps must be binary");
    if (a.width != b.width || a.height != b.height)
        throw KindMismatch("union_mask: masks disagree on image dimensions");
    PixelMap out(PixelKind::Binary, a.width, a.height);
    for (std::size_t i = 0; i < a.values.size(); ++i)
        out.values[i] = (a.values[i] != 0.0 || b.values[i] != 0.0) ? 1.0 : 0.0;
    return out;
}

PixelMap three_region_segment(const PixelMap& vent, const PixelMap& perf,
                              const SegmentationConfig& cfg) {
    cfg.validate();
    check_gradable(vent, "three_region_segment(vent)");
    check_gradable(perf, "three_region_segment(perf)");
    if (vent.width != perf.width || vent.height != perf.height)
        throw KindMismatch("three_region_segment: maps disagree on image dimensions");

    PixelMap out(PixelKind::RegionLabel, vent.width, vent.height);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const bool v = vent.values[i] >= cfg.ventilation_threshold;
        const bool p = perf.values[i] >= cfg.perfusion_threshold;
        if (v && p)
            out.values[i] = kRegionMatched;
        else if (p)
            out.values[i] = kRegionPerfused;
        else if (v)
            out.values[i] = kRegionVentilated;
        else
            out.values[i] = kRegionBackground;
    }
    return out;
}

} // namespace eitmap
