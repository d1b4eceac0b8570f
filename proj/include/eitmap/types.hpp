#ifndef EITMAP_TYPES_HPP
#define EITMAP_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "eitmap/errors.hpp"

namespace eitmap {

// The pipeline works on 32x32 images; the file formats and the map/evaluation
// operations accept other sizes so that small fixtures stay testable.
inline constexpr std::size_t kGridWidth = 32;
inline constexpr std::size_t kGridHeight = 32;
inline constexpr std::size_t kGridPixels = kGridWidth * kGridHeight;

/// Time series of impedance images. Pixel order is row-major with pixel 1 at
/// the upper-left corner; values are stored as they appear on disk (f32).
struct FrameSequence {
    std::size_t width = kGridWidth;
    std::size_t height = kGridHeight;
    double sample_rate = 0.0; // frames per second
    std::vector<std::vector<float>> frames;

    std::size_t pixel_count() const { return width * height; }
    std::size_t frame_count() const { return frames.size(); }

    void validate() const {
        if (width == 0 || height == 0)
            throw MalformedHeader("frame sequence: zero dimension");
        if (!(sample_rate > 0.0))
            throw MalformedHeader("frame sequence: sample_rate must be > 0");
        if (frames.empty())
            throw MalformedHeader("frame sequence: no frames");
        for (const auto& f : frames)
            if (f.size() != pixel_count())
                throw MalformedHeader("frame sequence: frame size does not match dimensions");
    }
};

enum class TriggerKind { Cardiac, Respiratory };

std::string to_string(TriggerKind kind);

/// Ordered event indices (R-wave or inspiration start) into a FrameSequence.
struct TriggerTrain {
    TriggerKind kind = TriggerKind::Cardiac;
    std::vector<std::size_t> indices; // strictly increasing, 0-based

    void validate() const {
        for (std::size_t i = 1; i < indices.size(); ++i)
            if (indices[i] <= indices[i - 1])
                throw NonMonotonicTriggers("trigger indices must be strictly increasing");
    }
};

enum class PixelKind {
    Amplitude,
    Normalized,
    TimeDelay,
    Possibility,
    Binary,
    RegionLabel,
};

std::string to_string(PixelKind kind);

// Region labels used by PixelKind::RegionLabel maps.
inline constexpr double kRegionBackground = 0.0;
inline constexpr double kRegionMatched = 1.0;
inline constexpr double kRegionPerfused = 2.0;
inline constexpr double kRegionVentilated = 3.0;

/// A scalar field over the image grid (amplitude, time delay, possibility,
/// binary mask or region label), same pixel-order convention as FrameSequence.
struct PixelMap {
    std::size_t width = kGridWidth;
    std::size_t height = kGridHeight;
    PixelKind kind = PixelKind::Amplitude;
    std::vector<double> values;

    PixelMap() = default;
    PixelMap(PixelKind k, std::size_t w, std::size_t h, double fill = 0.0)
        : width(w), height(h), kind(k), values(w * h, fill) {}

    static PixelMap grid(PixelKind k, double fill = 0.0) {
        return PixelMap(k, kGridWidth, kGridHeight, fill);
    }

    std::size_t size() const { return values.size(); }
    double& at(std::size_t row, std::size_t col) { return values[row * width + col]; }
    double at(std::size_t row, std::size_t col) const { return values[row * width + col]; }

    void validate() const;
};

} // namespace eitmap

#endif
