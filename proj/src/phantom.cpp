#include "eitmap/phantom.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eitmap/dataio.hpp"

namespace eitmap {

namespace {

constexpr double kPi = 3.141592653589793;

// Raised-cosine pulse over the first 40% of the cycle, peak 1 at phase 0.2.
double cardiac_pulse(double phase) {
    if (phase >= 0.4)
        return 0.0;
    return 0.5 * (1.0 - std::cos(2.0 * kPi * phase / 0.4));
}

// Raised cosine over the full cycle, 0 at the trigger, peak 1 at phase 0.5.
double respiratory_wave(double phase) {
    return 0.5 * (1.0 - std::cos(2.0 * kPi * phase));
}

void check_region(const EllipseRegion& region, const char* name) {
    if (!(region.semi_row > 0.0) || !(region.semi_col > 0.0))
        throw RegionOutOfGrid(std::string(name) + ": semi-axes must be positive");
    if (region.center_row - region.semi_row < 0.0 ||
        region.center_row + region.semi_row > static_cast<double>(kGridHeight - 1) ||
        region.center_col - region.semi_col < 0.0 ||
        region.center_col + region.semi_col > static_cast<double>(kGridWidth - 1))
        throw RegionOutOfGrid(std::string(name) + ": ellipse leaves the 32x32 grid");
}

TriggerTrain make_triggers(TriggerKind kind, double period_frames, std::size_t duration) {
    TriggerTrain train;
    train.kind = kind;
    for (std::size_t i = 0;; ++i) {
        const auto idx =
            static_cast<std::size_t>(std::llround(static_cast<double>(i) * period_frames));
        if (idx >= duration)
            break;
        train.indices.push_back(idx);
    }
    return train;
}

} // namespace

void PhantomConfig::validate() const {
    if (!(sample_rate > 0.0))
        throw ConfigError("phantom: sample_rate must be positive");
    if (duration_frames < 1)
        throw ConfigError("phantom: duration_frames must be at least 1");
    if (!(respiratory_rate > 0.0) || !(cardiac_rate > 0.0))
        throw ConfigError("phantom: rates must be positive");
    if (ventilation_gain < 0.0 || lung_perfusion_gain < 0.0 || heart_gain < 0.0)
        throw ConfigError("phantom: gains must be non-negative");
    if (noise_sigma < 0.0)
        throw ConfigError("phantom: noise_sigma must be non-negative");
    if (lung_perfusion_phase_lag < 0.0 || lung_perfusion_phase_lag >= 1.0)
        throw ConfigError("phantom: lung_perfusion_phase_lag must lie in [0,1)");
    if (sample_rate * 60.0 / cardiac_rate < 2.0)
        throw ConfigError("phantom: cardiac_rate too high for the sample rate "
                          "(cycles need at least 2 frames)");
    if (sample_rate * 60.0 / respiratory_rate < 2.0)
        throw ConfigError("phantom: respiratory_rate too high for the sample rate");
    check_region(heart_region, "heart_region");
    check_region(left_lung_region, "left_lung_region");
    check_region(right_lung_region, "right_lung_region");
}

PhantomDataset generate_phantom(const PhantomConfig& cfg) {
    cfg.validate();

    PhantomDataset data;
    data.truth_heart = PixelMap::grid(PixelKind::Binary);
    data.truth_lung = PixelMap::grid(PixelKind::Binary);
    data.saline_reference = PixelMap::grid(PixelKind::Normalized);
    std::vector<bool> in_heart(kGridPixels, false);
    std::vector<bool> in_lung(kGridPixels, false);
    for (std::size_t r = 0; r < kGridHeight; ++r) {
        for (std::size_t c = 0; c < kGridWidth; ++c) {
            const std::size_t p = r * kGridWidth + c;
            in_heart[p] = cfg.heart_region.contains(r, c);
            in_lung[p] =
                cfg.left_lung_region.contains(r, c) || cfg.right_lung_region.contains(r, c);
            data.truth_heart.values[p] = in_heart[p] ? 1.0 : 0.0;
            data.truth_lung.values[p] = in_lung[p] ? 1.0 : 0.0;
            data.saline_reference.values[p] = in_lung[p] ? 1.0 : 0.0;
        }
    }
    data.truth_perfused_lung = data.truth_lung;
    data.truth_ventilated_lung = data.truth_lung;
    data.truth_perfused_lung.kind = PixelKind::Binary;
    data.truth_ventilated_lung.kind = PixelKind::Binary;

    const double cardiac_period = cfg.sample_rate * 60.0 / cfg.cardiac_rate;    // frames
    const double respiratory_period = cfg.sample_rate * 60.0 / cfg.respiratory_rate;
    data.cardiac_triggers = make_triggers(TriggerKind::Cardiac, cardiac_period,
                                          cfg.duration_frames);
    data.respiratory_triggers = make_triggers(TriggerKind::Respiratory, respiratory_period,
                                              cfg.duration_frames);

    data.frames.width = kGridWidth;
    data.frames.height = kGridHeight;
    data.frames.sample_rate = cfg.sample_rate;
    data.frames.frames.resize(cfg.duration_frames);

    GaussianStream noise(cfg.seed);
    for (std::size_t k = 0; k < cfg.duration_frames; ++k) {
        const double cardiac_phase =
            std::fmod(static_cast<double>(k) / cardiac_period, 1.0);
        const double respiratory_phase =
            std::fmod(static_cast<double>(k) / respiratory_period, 1.0);
        const double lagged_phase =
            std::fmod(cardiac_phase - cfg.lung_perfusion_phase_lag + 1.0, 1.0);
        const double heart_term = cfg.heart_gain * cardiac_pulse(cardiac_phase);
        const double lung_term = cfg.ventilation_gain * respiratory_wave(respiratory_phase) +
                                 cfg.lung_perfusion_gain * cardiac_pulse(lagged_phase);

        auto& frame = data.frames.frames[k];
        frame.resize(kGridPixels);
        for (std::size_t p = 0; p < kGridPixels; ++p) {
            double v = cfg.baseline;
            if (in_heart[p])
                v += heart_term;
            if (in_lung[p])
                v += lung_term;
            if (cfg.noise_sigma > 0.0)
                v += cfg.noise_sigma * noise.next();
            frame[p] = static_cast<float>(v);
        }
    }
    return data;
}

// ---------------------------------------------------------------------------
// JSON config

namespace {

using nlohmann::json;

double get_number(const json& j, const char* key, double fallback, const std::string& origin) {
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number())
        throw ConfigError(origin + "." + key + ": expected a number");
    return j[key].get<double>();
}

EllipseRegion get_region(const json& j, const char* key, const EllipseRegion& fallback,
                         const std::string& origin) {
    if (!j.contains(key))
        return fallback;
    const json& r = j[key];
    if (!r.is_object())
        throw ConfigError(origin + "." + key + ": expected an object");
    EllipseRegion region;
    const std::string path = origin + "." + key;
    region.center_row = get_number(r, "center_row", fallback.center_row, path);
    region.center_col = get_number(r, "center_col", fallback.center_col, path);
    region.semi_row = get_number(r, "semi_row", fallback.semi_row, path);
    region.semi_col = get_number(r, "semi_col", fallback.semi_col, path);
    return region;
}

json region_to_json(const EllipseRegion& region) {
    return {{"center_row", region.center_row},
            {"center_col", region.center_col},
            {"semi_row", region.semi_row},
            {"semi_col", region.semi_col}};
}

} // namespace

PhantomConfig parse_phantom_config(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object())
        throw ConfigError(origin + ": expected a JSON object");

    PhantomConfig cfg;
    cfg.sample_rate = get_number(doc, "sample_rate", cfg.sample_rate, origin);
    if (doc.contains("duration_frames")) {
        if (!doc["duration_frames"].is_number_unsigned())
            throw ConfigError(origin + ".duration_frames: expected a non-negative integer");
        cfg.duration_frames = doc["duration_frames"].get<std::size_t>();
    }
    cfg.respiratory_rate = get_number(doc, "respiratory_rate", cfg.respiratory_rate, origin);
    cfg.cardiac_rate = get_number(doc, "cardiac_rate", cfg.cardiac_rate, origin);
    cfg.heart_region = get_region(doc, "heart_region", cfg.heart_region, origin);
    cfg.left_lung_region = get_region(doc, "left_lung_region", cfg.left_lung_region, origin);
    cfg.right_lung_region = get_region(doc, "right_lung_region", cfg.right_lung_region, origin);
    cfg.ventilation_gain = get_number(doc, "ventilation_gain", cfg.ventilation_gain, origin);
    cfg.lung_perfusion_gain =
        get_number(doc, "lung_perfusion_gain", cfg.lung_perfusion_gain, origin);
    cfg.heart_gain = get_number(doc, "heart_gain", cfg.heart_gain, origin);
    cfg.lung_perfusion_phase_lag =
        get_number(doc, "lung_perfusion_phase_lag", cfg.lung_perfusion_phase_lag, origin);
    cfg.noise_sigma = get_number(doc, "noise_sigma", cfg.noise_sigma, origin);
    cfg.baseline = get_number(doc, "baseline", cfg.baseline, origin);
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned())
            throw ConfigError(origin + ".seed: expected a non-negative integer");
        cfg.seed = doc["seed"].get<std::uint32_t>();
    }
    cfg.validate();
    return cfg;
}

std::string serialize_phantom_config(const PhantomConfig& cfg) {
    const json doc = {{"sample_rate", cfg.sample_rate},
                      {"duration_frames", cfg.duration_frames},
                      {"respiratory_rate", cfg.respiratory_rate},
                      {"cardiac_rate", cfg.cardiac_rate},
                      {"heart_region", region_to_json(cfg.heart_region)},
                      {"left_lung_region", region_to_json(cfg.left_lung_region)},
                      {"right_lung_region", region_to_json(cfg.right_lung_region)},
                      {"ventilation_gain", cfg.ventilation_gain},
                      {"lung_perfusion_gain", cfg.lung_perfusion_gain},
                      {"heart_gain", cfg.heart_gain},
                      {"lung_perfusion_phase_lag", cfg.lung_perfusion_phase_lag},
                      {"noise_sigma", cfg.noise_sigma},
                      {"baseline", cfg.baseline},
                      {"seed", cfg.seed}};
    return doc.dump(2) + "\n";
}

PhantomConfig load_phantom_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open phantom config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_phantom_config(std::move(buf).str(), path.string());
}

void write_phantom_dataset(const PhantomDataset& dataset, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_frame_sequence(dataset.frames, dir / "frames.eitf");
    write_trigger_train(dataset.cardiac_triggers, dir / "cardiac_triggers.txt");
    write_trigger_train(dataset.respiratory_triggers, dir / "respiratory_triggers.txt");
    write_pixel_map(dataset.truth_heart, dir / "truth_heart.csv");
    write_pixel_map(dataset.truth_lung, dir / "truth_lung.csv");
    write_pixel_map(dataset.truth_perfused_lung, dir / "truth_perfused_lung.csv");
    write_pixel_map(dataset.truth_ventilated_lung, dir / "truth_ventilated_lung.csv");
    write_pixel_map(dataset.saline_reference, dir / "saline_reference.csv");
}

} // namespace eitmap
