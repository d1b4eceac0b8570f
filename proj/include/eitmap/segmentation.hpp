#ifndef EITMAP_SEGMENTATION_HPP
#define EITMAP_SEGMENTATION_HPP

#include "eitmap/types.hpp"

namespace eitmap {

struct SegmentationConfig {
    double ventilation_threshold = 0.31;
    double perfusion_threshold = 0.28;
    double reference_threshold = 0.1; // binarizes the reference image for ROC

    void validate() const;
};

/// Binary mask: 1 where value >= t (inclusive), else 0.
PixelMap threshold_map(const PixelMap& map, double t);

/// Pixel-wise logical OR of two binary masks.
PixelMap union_mask(const PixelMap& a, const PixelMap& b);

/// Labels every pixel: matched (1) where both maps pass their thresholds,
/// predominantly_perfused (2) where only perfusion does,
/// predominantly_ventilated (3) where only ventilation does, background (0)
/// otherwise.
PixelMap three_region_segment(const PixelMap& vent, const PixelMap& perf,
                              const SegmentationConfig& cfg);

} // namespace eitmap

#endif
