#ifndef EITMAP_EVALUATION_HPP
#define EITMAP_EVALUATION_HPP

#include <filesystem>
#include <vector>

#include "eitmap/types.hpp"

namespace eitmap {

/// |mask AND ref| / |ref|. The reference needs at least one positive pixel.
double sensitivity(const PixelMap& mask, const PixelMap& ref);

/// |NOT mask AND NOT ref| / |NOT ref|. The reference needs at least one
/// negative pixel.
double specificity(const PixelMap& mask, const PixelMap& ref);

struct RocPoint {
    double threshold = 0.0;
    double sensitivity = 0.0;
    double specificity = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points; // thresholds strictly increasing
    double auc = 0.0;
};

/// Sweeps thresholds t_start, t_start+t_step, ... up to t_end, thresholding
/// `map` against each and scoring it against `ref`. AUC is the trapezoidal
/// area over the (1-specificity, sensitivity) points augmented with the
/// (0,0) and (1,1) corners, sorted by x and deduplicated.
RocCurve roc_curve(const PixelMap& map, const PixelMap& ref, double t_start = 0.1,
                   double t_end = 1.0, double t_step = 0.05);

/// CSV: header `threshold,sensitivity,specificity`, one row per sweep point,
/// then a final comment line `# auc=<value>`.
void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path);

} // namespace eitmap

#endif
