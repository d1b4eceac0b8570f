#ifndef EITMAP_MODELS_HPP
#define EITMAP_MODELS_HPP

#include <vector>

#include "eitmap/features.hpp"
#include "eitmap/fuzzy.hpp"
#include "eitmap/types.hpp"

namespace eitmap {

/// The three per-pixel fuzzy models. Input variable names are fixed:
/// heart uses {perfusion_amplitude, time_delay, position}; the lung models
/// use {<x>_amplitude, heart_possibility_norm}. Output domains are [0,1].
struct ModelSuite {
    RuleBase heart;
    RuleBase perfusion;
    RuleBase ventilation;

    /// The built-in rule bases (identical to the files under config/).
    static const ModelSuite& defaults();
};

/// Runs the heart rule base once per pixel over the feature maps.
PixelMap heart_image(const FeatureBundle& features, const RuleBase& rb);

/// Min-max normalization to [0,1]; a constant map becomes all zeros.
PixelMap normalize_heart(const PixelMap& map);

/// Runs a lung rule base (perfusion or ventilation) per pixel on an
/// amplitude map and the normalized heart possibility map.
PixelMap lung_image(const PixelMap& amplitude, const PixelMap& heart_norm, const RuleBase& rb);

/// Pixel-by-pixel median; an even count averages the two middle values.
PixelMap median_image(const std::vector<PixelMap>& maps);

} // namespace eitmap

#endif
