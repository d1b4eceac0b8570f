#ifndef EITMAP_GATING_HPP
#define EITMAP_GATING_HPP

#include <vector>

#include "eitmap/types.hpp"

namespace eitmap {

/// Frames between two consecutive triggers, [t_i, t_i+1).
struct Cycle {
    std::size_t start_index = 0;
    std::vector<std::vector<float>> frames;

    std::size_t length() const { return frames.size(); }
};

struct CycleSet {
    TriggerKind kind = TriggerKind::Cardiac;
    std::size_t width = kGridWidth;
    std::size_t height = kGridHeight;
    double sample_rate = 0.0;
    std::vector<Cycle> cycles;
    std::size_t dropped_short = 0; // cycles discarded for being < 2 frames
};

/// One averaged cycle: every source cycle resampled to a common length and
/// averaged frame-by-frame, pixel-by-pixel.
struct MeanCycle {
    TriggerKind source_kind = TriggerKind::Cardiac;
    std::size_t width = kGridWidth;
    std::size_t height = kGridHeight;
    double sample_rate = 0.0;
    std::size_t cycle_count = 0;
    std::vector<std::vector<double>> frames;

    std::size_t length() const { return frames.size(); }
};

/// Slices seq into cycles between consecutive triggers. Frames before the
/// first and after the last trigger are discarded; cycles shorter than 2
/// frames are dropped and counted in dropped_short.
CycleSet extract_cycles(const FrameSequence& seq, const TriggerTrain& triggers);

/// Rounded median cycle length — the default resampling target.
std::size_t suggested_target_length(const CycleSet& set);

/// Averages all cycles of the set after phase-normalized linear resampling
/// to target_length. Resampling is periodic: target frame k sits at phase
/// k/target_length, interpolated between source frames floor(x) and
/// (floor(x)+1) mod L where x = k*L/target_length. target_length == L is the
/// identity.
MeanCycle mean_cycle(const CycleSet& set, std::size_t target_length);

/// Partitions the cycles into consecutive groups of group_size and averages
/// each group; a trailing partial group is kept and identifiable by its
/// cycle_count < group_size.
std::vector<MeanCycle> gated_series(const FrameSequence& seq, const TriggerTrain& triggers,
                                    std::size_t group_size, std::size_t target_length);

} // namespace eitmap

#endif
