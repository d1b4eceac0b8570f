#include "eitmap/types.hpp"

namespace eitmap {

std::string to_string(TriggerKind kind) {
    return kind == TriggerKind::Cardiac ? "cardiac" : "respiratory";
}

std::string to_string(PixelKind kind) {
    switch (kind) {
    case PixelKind::Amplitude: return "amplitude";
    case PixelKind::Normalized: return "normalized";
    case PixelKind::TimeDelay: return "time_delay";
    case PixelKind::Possibility: return "possibility";
    case PixelKind::Binary: return "binary";
    case PixelKind::RegionLabel: return "region_label";
    }
    return "unknown";
}

void PixelMap::validate() const {
    if (width == 0 || height == 0)
        throw KindMismatch("pixel map: zero dimension");
    if (values.size() != width * height)
        throw KindMismatch("pixel map: value count does not match dimensions");
    switch (kind) {
    case PixelKind::Amplitude:
        break;
    case PixelKind::Normalized:
    case PixelKind::Possibility:
        for (double v : values)
            if (!(v >= 0.0 && v <= 1.0))
                throw KindMismatch(to_string(kind) + " map values must lie in [0,1]");
        break;
    case PixelKind::TimeDelay:
        for (double v : values)
            if (!(v >= 0.0 && v < 1.0))
                throw KindMismatch("time_delay map values must lie in [0,1)");
        break;
    case PixelKind::Binary:
        for (double v : values)
            if (v != 0.0 && v != 1.0)
                throw KindMismatch("binary map values must be 0 or 1");
        break;
    case PixelKind::RegionLabel:
        for (double v : values)
            if (v != 0.0 && v != 1.0 && v != 2.0 && v != 3.0)
                throw KindMismatch("region_label map values must be one of 0,1,2,3");
        break;
    }
}

} // namespace eitmap
