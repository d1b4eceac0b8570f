#ifndef EITMAP_DATAIO_HPP
#define EITMAP_DATAIO_HPP

#include <filesystem>

#include "eitmap/types.hpp"

namespace eitmap {

// EITF binary layout: magic "EITF", u32 LE width, u32 LE height,
// u32 LE frame_count, f64 LE sample_rate, then frame_count*width*height
// f32 LE pixel values (row-major, frame-major).

FrameSequence load_frame_sequence(const std::filesystem::path& path);
void write_frame_sequence(const FrameSequence& seq, const std::filesystem::path& path);

// Trigger file: UTF-8 text, line 1 is "cardiac" or "respiratory",
// each following line one decimal frame index.
TriggerTrain load_trigger_train(const std::filesystem::path& path);
void write_trigger_train(const TriggerTrain& train, const std::filesystem::path& path);

/// Writes the map twice: `csv_path` as full-precision CSV (authoritative)
/// and the same stem with a .pgm extension as an 8-bit grayscale preview.
/// Grayscale is min->0, max->255 (constant maps come out all zeros), except
/// region_label maps which use the fixed levels 0/170/85/255 for labels
/// 0/1/2/3.
void write_pixel_map(const PixelMap& map, const std::filesystem::path& csv_path);

/// Reads a CSV written by write_pixel_map. The kind is not stored in the
/// file; the caller states it and values are checked against its invariant.
PixelMap load_pixel_map_csv(const std::filesystem::path& path, PixelKind kind);

} // namespace eitmap

#endif
