#include "eitmap/gating.hpp"

#include <algorithm>
#include <cmath>

namespace eitmap {

CycleSet extract_cycles(const FrameSequence& seq, const TriggerTrain& triggers) {
    seq.validate();
    triggers.validate();
    for (std::size_t idx : triggers.indices)
        if (idx >= seq.frame_count())
            throw TriggerOutOfRange("trigger index " + std::to_string(idx) +
                                    " beyond the last frame (" +
                                    std::to_string(seq.frame_count()) + " frames)");
    if (triggers.indices.size() < 2)
        throw NoCompleteCycle("need at least 2 triggers to close a cycle, got " +
                              std::to_string(triggers.indices.size()));

    CycleSet set;
    set.kind = triggers.kind;
    set.width = seq.width;
    set.height = seq.height;
    set.sample_rate = seq.sample_rate;
    for (std::size_t i = 0; i + 1 < triggers.indices.size(); ++i) {
        const std::size_t begin = triggers.indices[i];
        const std::size_t end = triggers.indices[i + 1];
        if (end - begin < 2) {
            ++set.dropped_short;
            continue;
        }
        Cycle cycle;
        cycle.start_index = begin;
        cycle.frames.assign(seq.frames.begin() + static_cast<std::ptrdiff_t>(begin),
                            seq.frames.begin() + static_cast<std::ptrdiff_t>(end));
        set.cycles.push_back(std::move(cycle));
    }
    if (set.cycles.empty())
        throw NoCompleteCycle("all " + std::to_string(set.dropped_short) +
                              " cycles were shorter than 2 frames");
    return set;
}

std::size_t suggested_target_length(const CycleSet& set) {
    if (set.cycles.empty())
        throw EmptyInput("suggested_target_length: no cycles");
    std::vector<std::size_t> lengths;
    lengths.reserve(set.cycles.size());
    for (const Cycle& c : set.cycles)
        lengths.push_back(c.length());
    std::sort(lengths.begin(), lengths.end());
    const std::size_t n = lengths.size();
    double median;
    if (n % 2 == 1)
        median = static_cast<double>(lengths[n / 2]);
    else
        median = 0.5 * (static_cast<double>(lengths[n / 2 - 1]) +
                        static_cast<double>(lengths[n / 2]));
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(median)));
}

namespace {

// Periodic phase-normalized linear resampling of one cycle to length target.
void accumulate_resampled(const Cycle& cycle, std::size_t target, std::size_t pixels,
                          std::vector<std::vector<double>>& acc) {
    const std::size_t L = cycle.length();
    for (std::size_t k = 0; k < target; ++k) {
        const double x = static_cast<double>(k) * static_cast<double>(L) /
                         static_cast<double>(target);
        const std::size_t j0 = static_cast<std::size_t>(x);
        const double frac = x - static_cast<double>(j0);
        const std::size_t j1 = (j0 + 1) % L;
        const auto& f0 = cycle.frames[j0];
        const auto& f1 = cycle.frames[j1];
        auto& out = acc[k];
        for (std::size_t p = 0; p < pixels; ++p)
            out[p] += (1.0 - frac) * static_cast<double>(f0[p]) +
                      frac * static_cast<double>(f1[p]);
    }
}

MeanCycle mean_cycle_range(const CycleSet& set, std::size_t first, std::size_t count,
                           std::size_t target_length) {
    const std::size_t pixels = set.width * set.height;
    std::vector<std::vector<double>> acc(target_length, std::vector<double>(pixels, 0.0));
    for (std::size_t i = first; i < first + count; ++i)
        accumulate_resampled(set.cycles[i], target_length, pixels, acc);
    const double inv = 1.0 / static_cast<double>(count);
    for (auto& frame : acc)
        for (double& v : frame)
            v *= inv;

    MeanCycle mean;
    mean.source_kind = set.kind;
    mean.width = set.width;
    mean.height = set.height;
    mean.sample_rate = set.sample_rate;
    mean.cycle_count = count;
    mean.frames = std::move(acc);
    return mean;
}

} // namespace

MeanCycle mean_cycle(const CycleSet& set, std::size_t target_length) {
    if (set.cycles.empty())
        throw EmptyInput("mean_cycle: no cycles to average");
    if (target_length < 2)
        throw ConfigError("mean_cycle: target_length must be at least 2");
    return mean_cycle_range(set, 0, set.cycles.size(), target_length);
}

std::vector<MeanCycle> gated_series(const FrameSequence& seq, const TriggerTrain& triggers,
                                    std::size_t group_size, std::size_t target_length) {
    if (group_size < 1)
        throw ConfigError("gated_series: group_size must be at least 1");
    const CycleSet set = extract_cycles(seq, triggers);
    const std::size_t target = target_length != 0 ? target_length : suggested_target_length(set);
    if (target < 2)
        throw ConfigError("gated_series: target_length must be at least 2");

    std::vector<MeanCycle> means;
    for (std::size_t first = 0; first < set.cycles.size(); first += group_size) {
        const std::size_t count = std::min(group_size, set.cycles.size() - first);
        means.push_back(mean_cycle_range(set, first, count, target));
    }
    return means;
}

} // namespace eitmap
