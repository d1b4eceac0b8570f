#ifndef EITMAP_FEATURES_HPP
#define EITMAP_FEATURES_HPP

#include "eitmap/gating.hpp"
#include "eitmap/types.hpp"

namespace eitmap {

/// Per-pixel antecedent inputs for the fuzzy models.
struct FeatureBundle {
    PixelMap perfusion_amplitude;  // normalized, from the cardiac mean cycle
    PixelMap ventilation_amplitude; // normalized, from the respiratory mean cycle
    PixelMap time_delay;           // normalized phase of the cardiac peak, [0,1)
    PixelMap position;             // 0 = anterior, 1 = posterior
};

/// Per pixel: max - min over the cycle frames.
PixelMap amplitude_map(const MeanCycle& cycle);

/// Divides by the map maximum (result max exactly 1); an all-zero map stays
/// all zeros. Negative values are rejected.
PixelMap normalize_map(const PixelMap& map);

/// Per pixel: index of the cycle maximum divided by cycle length, in [0,1).
/// Ties resolve to the earliest frame. Cardiac cycles only.
PixelMap time_delay_map(const MeanCycle& cycle);

/// Upper half of the grid (rows below height/2) is anterior (0), the rest
/// posterior (1).
PixelMap position_map(std::size_t width = kGridWidth, std::size_t height = kGridHeight);

FeatureBundle make_features(const MeanCycle& cardiac, const MeanCycle& respiratory);

} // namespace eitmap

#endif
