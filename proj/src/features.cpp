#include "eitmap/features.hpp"

#include <algorithm>

namespace eitmap {

PixelMap amplitude_map(const MeanCycle& cycle) {
    if (cycle.length() < 2)
        throw EmptyInput("amplitude_map: cycle needs at least 2 frames");
    const std::size_t pixels = cycle.width * cycle.height;
    PixelMap map(PixelKind::Amplitude, cycle.width, cycle.height);
    for (std::size_t p = 0; p < pixels; ++p) {
        double lo = cycle.frames[0][p];
        double hi = lo;
        for (std::size_t k = 1; k < cycle.length(); ++k) {
            const double v = cycle.frames[k][p];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        map.values[p] = hi - lo;
    }
    return map;
}

PixelMap normalize_map(const PixelMap& map) {
    double max = 0.0;
    for (double v : map.values) {
        if (v < 0.0)
            throw NegativeInput("normalize_map: negative value " + std::to_string(v));
        max = std::max(max, v);
    }
    PixelMap out(PixelKind::Normalized, map.width, map.height);
    if (max > 0.0)
        for (std::size_t i = 0; i < map.values.size(); ++i)
            out.values[i] = map.values[i] / max;
    return out;
}

PixelMap time_delay_map(const MeanCycle& cycle) {
    if (cycle.source_kind != TriggerKind::Cardiac)
        throw KindMismatch("time_delay_map: needs a cardiac mean cycle, got " +
                           to_string(cycle.source_kind));
    if (cycle.length() < 2)
        throw EmptyInput("time_delay_map: cycle needs at least 2 frames");
    const std::size_t pixels = cycle.width * cycle.height;
    const std::size_t L = cycle.length();
    PixelMap map(PixelKind::TimeDelay, cycle.width, cycle.height);
    for (std::size_t p = 0; p < pixels; ++p) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < L; ++k)
            if (cycle.frames[k][p] > cycle.frames[best][p])
                best = k;
        map.values[p] = static_cast<double>(best) / static_cast<double>(L);
    }
    return map;
}

PixelMap position_map(std::size_t width, std::size_t height) {
    PixelMap map(PixelKind::Binary, width, height);
    for (std::size_t r = 0; r < height; ++r)
        for (std::size_t c = 0; c < width; ++c)
            map.at(r, c) = r < height / 2 ? 0.0 : 1.0;
    return map;
}

FeatureBundle make_features(const MeanCycle& cardiac, const MeanCycle& respiratory) {
    if (cardiac.source_kind != TriggerKind::Cardiac)
        throw KindMismatch("make_features: first cycle must be cardiac");
    if (respiratory.source_kind != TriggerKind::Respiratory)
        throw KindMismatch("make_features: second cycle must be respiratory");
    if (cardiac.width != respiratory.width || cardiac.height != respiratory.height)
        throw KindMismatch("make_features: cycles disagree on image dimensions");

    FeatureBundle features;
    features.perfusion_amplitude = normalize_map(amplitude_map(cardiac));
    features.ventilation_amplitude = normalize_map(amplitude_map(respiratory));
    features.time_delay = time_delay_map(cardiac);
    features.position = position_map(cardiac.width, cardiac.height);
    return features;
}

} // namespace eitmap
