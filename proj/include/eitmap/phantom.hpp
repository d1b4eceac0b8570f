#ifndef EITMAP_PHANTOM_HPP
#define EITMAP_PHANTOM_HPP

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "eitmap/types.hpp"

namespace eitmap {

struct EllipseRegion {
    double center_row = 0.0;
    double center_col = 0.0;
    double semi_row = 1.0;
    double semi_col = 1.0;

    bool contains(std::size_t row, std::size_t col) const {
        const double dr = (static_cast<double>(row) - center_row) / semi_row;
        const double dc = (static_cast<double>(col) - center_col) / semi_col;
        return dr * dr + dc * dc <= 1.0;
    }
};

/// Synthetic acquisition parameters. Defaults give a 400 s recording at
/// 50 frames/s with a 100/min heartbeat and 20/min ventilation, a heart that
/// sits fully in the anterior half and two lungs spanning both halves.
struct PhantomConfig {
    double sample_rate = 50.0;          // frames per second
    std::size_t duration_frames = 20000;
    double respiratory_rate = 20.0;     // cycles per minute
    double cardiac_rate = 100.0;        // cycles per minute
    EllipseRegion heart_region{10.0, 16.0, 4.0, 4.5};
    EllipseRegion left_lung_region{18.0, 8.0, 8.5, 5.5};
    EllipseRegion right_lung_region{18.0, 24.0, 8.5, 5.5};
    double ventilation_gain = 1.0;      // impedance units, arbitrary
    double lung_perfusion_gain = 0.3;
    double heart_gain = 0.5;
    double lung_perfusion_phase_lag = 0.3; // fraction of a cardiac cycle
    double noise_sigma = 0.1;           // 10% of the ventilation amplitude
    double baseline = 10.0;             // constant impedance offset
    std::uint32_t seed = 42;

    void validate() const;
};

struct PhantomDataset {
    FrameSequence frames;
    TriggerTrain cardiac_triggers;
    TriggerTrain respiratory_triggers;
    PixelMap truth_heart;
    PixelMap truth_lung;
    PixelMap truth_perfused_lung;
    PixelMap truth_ventilated_lung;
    PixelMap saline_reference; // perfusion reference analog: 1 in lung, 0 outside
};

/// Reproducible Gaussian stream: mt19937 uniforms mapped by the Box-Muller
/// transform. Spelled out (rather than std::normal_distribution) because the
/// standard leaves that distribution's algorithm implementation-defined.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint32_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(rng_()) + 0.5) / 4294967296.0;
        const double u2 = (static_cast<double>(rng_()) + 0.5) / 4294967296.0;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.141592653589793 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    std::mt19937 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Per pixel p and frame k:
///   baseline
///   + [p in heart] * heart_gain * c(phase_c)
///   + [p in lung]  * (ventilation_gain * r(phase_r)
///                     + lung_perfusion_gain * c(phase_c - lag))
///   + noise_sigma * z(k, p)
/// where c is a raised-cosine pulse over the first 40% of the cardiac cycle
/// (peak at phase 0.2) and r a raised cosine over the full respiratory cycle
/// (peak at phase 0.5). Triggers mark exact cycle starts. Deterministic for
/// a given config.
PhantomDataset generate_phantom(const PhantomConfig& cfg);

// Phantom configs are plain JSON with the field names above; regions nest as
// {"center_row", "center_col", "semi_row", "semi_col"}.
PhantomConfig parse_phantom_config(const std::string& json_text,
                                   const std::string& origin = "phantom config");
std::string serialize_phantom_config(const PhantomConfig& cfg);
PhantomConfig load_phantom_config(const std::filesystem::path& path);

/// Writes frames.eitf, cardiac_triggers.txt, respiratory_triggers.txt, the
/// four truth-mask CSVs and saline_reference.csv (each with a PGM preview)
/// into `dir`, creating it if needed.
void write_phantom_dataset(const PhantomDataset& dataset, const std::filesystem::path& dir);

} // namespace eitmap

#endif
