#include "eitmap/models.hpp"

#include <algorithm>
#include <set>

#include "default_rule_bases.hpp"

namespace eitmap {

const ModelSuite& ModelSuite::defaults() {
    static const ModelSuite suite = [] {
        ModelSuite s;
        s.heart = parse_rule_base(embedded::kHeartRulesJson, "built-in heart rules");
        s.perfusion =
            parse_rule_base(embedded::kLungPerfusionRulesJson, "built-in perfusion rules");
        s.ventilation =
            parse_rule_base(embedded::kLungVentilationRulesJson, "built-in ventilation rules");
        return s;
    }();
    return suite;
}

namespace {

void require_unit_output(const RuleBase& rb, const char* which) {
    if (rb.output.domain_min != 0.0 || rb.output.domain_max != 1.0)
        throw RuleBaseMismatch(std::string(which) +
                               ": output domain must be [0,1] to produce a possibility map");
}

void require_same_grid(const PixelMap& a, const PixelMap& b, const char* which) {
    if (a.width != b.width || a.height != b.height)
        throw KindMismatch(std::string(which) + ": maps disagree on image dimensions");
}

} // namespace

PixelMap heart_image(const FeatureBundle& features, const RuleBase& rb) {
    std::set<std::string> names;
    for (const auto& var : rb.inputs)
        names.insert(var.name);
    if (names != std::set<std::string>{"perfusion_amplitude", "time_delay", "position"})
        throw RuleBaseMismatch(
            "heart_image: rule base inputs must be exactly "
            "{perfusion_amplitude, time_delay, position}");
    require_unit_output(rb, "heart_image");
    require_same_grid(features.perfusion_amplitude, features.time_delay, "heart_image");
    require_same_grid(features.perfusion_amplitude, features.position, "heart_image");

    const PixelMap& amp = features.perfusion_amplitude;
    PixelMap out(PixelKind::Possibility, amp.width, amp.height);
    std::map<std::string, double> inputs;
    for (std::size_t p = 0; p < out.size(); ++p) {
        inputs["perfusion_amplitude"] = amp.values[p];
        inputs["time_delay"] = features.time_delay.values[p];
        inputs["position"] = features.position.values[p];
        out.values[p] = mamdani_evaluate(rb, inputs).value;
    }
    return out;
}

PixelMap normalize_heart(const PixelMap& map) {
    if (map.kind != PixelKind::Possibility)
        throw KindMismatch("normalize_heart: expected a possibility map, got " +
                           to_string(map.kind));
    const auto [lo_it, hi_it] = std::minmax_element(map.values.begin(), map.values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    PixelMap out(PixelKind::Normalized, map.width, map.height);
    if (hi > lo)
        for (std::size_t i = 0; i < map.values.size(); ++i)
            out.values[i] = (map.values[i] - lo) / (hi - lo);
    return out;
}

PixelMap lung_image(const PixelMap& amplitude, const PixelMap& heart_norm, const RuleBase& rb) {
    if (amplitude.kind != PixelKind::Normalized)
        throw KindMismatch("lung_image: amplitude map must be normalized, got " +
                           to_string(amplitude.kind));
    if (heart_norm.kind != PixelKind::Normalized)
        throw KindMismatch("lung_image: heart map must be normalized, got " +
                           to_string(heart_norm.kind));
    require_same_grid(amplitude, heart_norm, "lung_image");

    if (rb.inputs.size() != 2)
        throw RuleBaseMismatch("lung_image: rule base must have exactly 2 inputs");
    std::string amplitude_name;
    bool has_heart = false;
    for (const auto& var : rb.inputs) {
        if (var.name == "heart_possibility_norm")
            has_heart = true;
        else if (var.name.ends_with("_amplitude"))
            amplitude_name = var.name;
    }
    if (!has_heart || amplitude_name.empty())
        throw RuleBaseMismatch(
            "lung_image: rule base inputs must be an *_amplitude variable and "
            "heart_possibility_norm");
    require_unit_output(rb, "lung_image");

    PixelMap out(PixelKind::Possibility, amplitude.width, amplitude.height);
    std::map<std::string, double> inputs;
    for (std::size_t p = 0; p < out.size(); ++p) {
        inputs[amplitude_name] = amplitude.values[p];
        inputs["heart_possibility_norm"] = heart_norm.values[p];
        out.values[p] = mamdani_evaluate(rb, inputs).value;
    }
    return out;
}

PixelMap median_image(const std::vector<PixelMap>& maps) {
    if (maps.empty())
        throw EmptyInput("median_image: no maps");
    const PixelMap& first = maps.front();
    for (const PixelMap& m : maps) {
        if (m.kind != first.kind)
            throw KindMismatch("median_image: mixed map kinds (" + to_string(first.kind) +
                               " vs " + to_string(m.kind) + ")");
        require_same_grid(first, m, "median_image");
    }

    PixelMap out(first.kind, first.width, first.height);
    std::vector<double> column(maps.size());
    for (std::size_t p = 0; p < out.size(); ++p) {
        for (std::size_t i = 0; i < maps.size(); ++i)
            column[i] = maps[i].values[p];
        std::sort(column.begin(), column.end());
        const std::size_t n = column.size();
        out.values[p] = n % 2 == 1 ? column[n / 2]
                                   : 0.5 * (column[n / 2 - 1] + column[n / 2]);
    }
    return out;
}

} // namespace eitmap
