#include "eitmap/pipeline.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eitmap/dataio.hpp"
#include "eitmap/evaluation.hpp"
#include "eitmap/features.hpp"
#include "eitmap/gating.hpp"
#include "eitmap/models.hpp"

namespace eitmap {

namespace {

using nlohmann::json;

// Re-throws any library error with the stage name prefixed, preserving the
// category (and therefore the CLI exit code).
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError("stage " + name + ": " + e.what());
    } catch (const ModelError& e) {
        throw ModelError("stage " + name + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError("stage " + name + ": " + e.what());
    } catch (const std::exception& e) {
        throw DataError("stage " + name + ": " + e.what());
    }
}

std::string get_string(const json& j, const char* key, const std::string& fallback,
                       const std::string& origin) {
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_string())
        throw ConfigError(origin + "." + key + ": expected a string");
    return j[key].get<std::string>();
}

double get_number(const json& j, const char* key, double fallback, const std::string& origin) {
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number())
        throw ConfigError(origin + "." + key + ": expected a number");
    return j[key].get<double>();
}

std::size_t get_count(const json& j, const char* key, std::size_t fallback,
                      const std::string& origin) {
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number_unsigned())
        throw ConfigError(origin + "." + key + ": expected a non-negative integer");
    return j[key].get<std::size_t>();
}

} // namespace

PipelineConfig parse_pipeline_config(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object())
        throw ConfigError(origin + ": expected a JSON object");

    PipelineConfig cfg;
    if (doc.contains("acquisitions")) {
        if (!doc["acquisitions"].is_array())
            throw ConfigError(origin + ".acquisitions: expected an array");
        for (std::size_t i = 0; i < doc["acquisitions"].size(); ++i) {
            const std::string path = origin + ".acquisitions[" + std::to_string(i) + "]";
            const json& a = doc["acquisitions"][i];
            if (!a.is_object())
                throw ConfigError(path + ": expected an object");
            AcquisitionPaths acq;
            acq.frames = get_string(a, "frames", "", path);
            acq.cardiac_triggers = get_string(a, "cardiac_triggers", "", path);
            acq.respiratory_triggers = get_string(a, "respiratory_triggers", "", path);
            if (acq.frames.empty() || acq.cardiac_triggers.empty() ||
                acq.respiratory_triggers.empty())
                throw ConfigError(path + ": needs frames, cardiac_triggers and "
                                         "respiratory_triggers paths");
            cfg.acquisitions.push_back(std::move(acq));
        }
    }
    cfg.acquisition_count = get_count(doc, "acquisition_count", cfg.acquisition_count, origin);
    if (doc.contains("rule_bases")) {
        const json& rb = doc["rule_bases"];
        if (!rb.is_object())
            throw ConfigError(origin + ".rule_bases: expected an object");
        const std::string path = origin + ".rule_bases";
        cfg.heart_rules = get_string(rb, "heart", "", path);
        cfg.perfusion_rules = get_string(rb, "perfusion", "", path);
        cfg.ventilation_rules = get_string(rb, "ventilation", "", path);
    }
    if (doc.contains("segmentation")) {
        const json& seg = doc["segmentation"];
        if (!seg.is_object())
            throw ConfigError(origin + ".segmentation: expected an object");
        const std::string path = origin + ".segmentation";
        cfg.segmentation.ventilation_threshold = get_number(
            seg, "ventilation_threshold", cfg.segmentation.ventilation_threshold, path);
        cfg.segmentation.perfusion_threshold =
            get_number(seg, "perfusion_threshold", cfg.segmentation.perfusion_threshold, path);
        cfg.segmentation.reference_threshold =
            get_number(seg, "reference_threshold", cfg.segmentation.reference_threshold, path);
    }
    if (doc.contains("roc")) {
        const json& roc = doc["roc"];
        if (!roc.is_object())
            throw ConfigError(origin + ".roc: expected an object");
        const std::string path = origin + ".roc";
        cfg.roc_start = get_number(roc, "start", cfg.roc_start, path);
        cfg.roc_end = get_number(roc, "end", cfg.roc_end, path);
        cfg.roc_step = get_number(roc, "step", cfg.roc_step, path);
    }
    cfg.reference = get_string(doc, "reference", "", origin);
    cfg.output_dir = get_string(doc, "output_dir", "", origin);
    cfg.gate_target_length = get_count(doc, "gate_target_length", cfg.gate_target_length, origin);
    return cfg;
}

std::string serialize_pipeline_config(const PipelineConfig& cfg) {
    json acquisitions = json::array();
    for (const AcquisitionPaths& a : cfg.acquisitions)
        acquisitions.push_back({{"frames", a.frames.string()},
                                {"cardiac_triggers", a.cardiac_triggers.string()},
                                {"respiratory_triggers", a.respiratory_triggers.string()}});
    const json doc = {
        {"acquisitions", acquisitions},
        {"acquisition_count", cfg.acquisition_count},
        {"rule_bases",
         {{"heart", cfg.heart_rules.string()},
          {"perfusion", cfg.perfusion_rules.string()},
          {"ventilation", cfg.ventilation_rules.string()}}},
        {"segmentation",
         {{"ventilation_threshold", cfg.segmentation.ventilation_threshold},
          {"perfusion_threshold", cfg.segmentation.perfusion_threshold},
          {"reference_threshold", cfg.segmentation.reference_threshold}}},
        {"roc", {{"start", cfg.roc_start}, {"end", cfg.roc_end}, {"step", cfg.roc_step}}},
        {"reference", cfg.reference.string()},
        {"output_dir", cfg.output_dir.string()},
        {"gate_target_length", cfg.gate_target_length}};
    return doc.dump(2) + "\n";
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open pipeline config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_pipeline_config(std::move(buf).str(), path.string());
}

std::string pipeline_config_hash(const PipelineConfig& cfg) {
    PipelineConfig canonical = cfg;
    canonical.output_dir.clear(); // the output location does not shape the outputs
    const std::string bytes = serialize_pipeline_config(canonical);
    std::uint64_t h = 1469598103934665603ull; // FNV-1a 64
    for (const unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void run_pipeline(const PipelineConfig& cfg) {
    stage("configure", [&] {
        if (cfg.acquisitions.empty())
            throw ConfigError("no acquisitions listed");
        if (cfg.acquisition_count != 0 && cfg.acquisition_count != cfg.acquisitions.size())
            throw ConfigError("acquisition_count is " + std::to_string(cfg.acquisition_count) +
                              " but " + std::to_string(cfg.acquisitions.size()) +
                              " acquisitions are listed");
        if (cfg.reference.empty())
            throw ConfigError("no reference image configured");
        if (cfg.output_dir.empty())
            throw ConfigError("no output directory configured");
        cfg.segmentation.validate();
        std::filesystem::create_directories(cfg.output_dir);
    });

    const ModelSuite& defaults = ModelSuite::defaults();
    const RuleBase heart_rb = stage("load-rule-bases", [&] {
        return cfg.heart_rules.empty() ? defaults.heart : load_rule_base(cfg.heart_rules);
    });
    const RuleBase perfusion_rb = stage("load-rule-bases", [&] {
        return cfg.perfusion_rules.empty() ? defaults.perfusion
                                           : load_rule_base(cfg.perfusion_rules);
    });
    const RuleBase ventilation_rb = stage("load-rule-bases", [&] {
        return cfg.ventilation_rules.empty() ? defaults.ventilation
                                             : load_rule_base(cfg.ventilation_rules);
    });

    const std::filesystem::path& out = cfg.output_dir;
    std::vector<PixelMap> heart_maps;
    std::vector<PixelMap> perfusion_maps;
    std::vector<PixelMap> ventilation_maps;

    for (std::size_t i = 0; i < cfg.acquisitions.size(); ++i) {
        const AcquisitionPaths& acq = cfg.acquisitions[i];
        const std::string tag = "acq" + std::to_string(i + 1) + "_";
        const std::string which = " (acquisition " + std::to_string(i + 1) + ")";

        const auto [cardiac_mean, respiratory_mean] = stage("gate" + which, [&] {
            const FrameSequence seq = load_frame_sequence(acq.frames);
            if (seq.width != kGridWidth || seq.height != kGridHeight)
                throw MalformedHeader(acq.frames.string() + ": the pipeline expects " +
                                      std::to_string(kGridWidth) + "x" +
                                      std::to_string(kGridHeight) + " frames, got " +
                                      std::to_string(seq.width) + "x" +
                                      std::to_string(seq.height));
            const TriggerTrain cardiac = load_trigger_train(acq.cardiac_triggers);
            if (cardiac.kind != TriggerKind::Cardiac)
                throw KindMismatch(acq.cardiac_triggers.string() +
                                   ": expected cardiac triggers");
            const TriggerTrain respiratory = load_trigger_train(acq.respiratory_triggers);
            if (respiratory.kind != TriggerKind::Respiratory)
                throw KindMismatch(acq.respiratory_triggers.string() +
                                   ": expected respiratory triggers");

            const CycleSet cardiac_cycles = extract_cycles(seq, cardiac);
            const CycleSet respiratory_cycles = extract_cycles(seq, respiratory);
            const std::size_t cardiac_target = cfg.gate_target_length != 0
                                                   ? cfg.gate_target_length
                                                   : suggested_target_length(cardiac_cycles);
            const std::size_t respiratory_target =
                cfg.gate_target_length != 0 ? cfg.gate_target_length
                                            : suggested_target_length(respiratory_cycles);
            return std::make_pair(mean_cycle(cardiac_cycles, cardiac_target),
                                  mean_cycle(respiratory_cycles, respiratory_target));
        });

        const FeatureBundle features = stage("features" + which, [&] {
            FeatureBundle f = make_features(cardiac_mean, respiratory_mean);
            write_pixel_map(f.perfusion_amplitude, out / (tag + "perfusion_amplitude.csv"));
            write_pixel_map(f.ventilation_amplitude, out / (tag + "ventilation_amplitude.csv"));
            write_pixel_map(f.time_delay, out / (tag + "time_delay.csv"));
            if (i == 0)
                write_pixel_map(f.position, out / "position.csv");
            return f;
        });

        stage("infer" + which, [&] {
            PixelMap heart = heart_image(features, heart_rb);
            write_pixel_map(heart, out / (tag + "heart_possibility.csv"));
            const PixelMap heart_norm = normalize_heart(heart);
            write_pixel_map(heart_norm, out / (tag + "heart_possibility_norm.csv"));
            PixelMap perfusion = lung_image(features.perfusion_amplitude, heart_norm,
                                            perfusion_rb);
            write_pixel_map(perfusion, out / (tag + "perfusion_possibility.csv"));
            PixelMap ventilation = lung_image(features.ventilation_amplitude, heart_norm,
                                              ventilation_rb);
            write_pixel_map(ventilation, out / (tag + "ventilation_possibility.csv"));
            heart_maps.push_back(std::move(heart));
            perfusion_maps.push_back(std::move(perfusion));
            ventilation_maps.push_back(std::move(ventilation));
            return 0;
        });
    }

    const auto [median_perfusion, median_ventilation] = stage("median", [&] {
        const PixelMap median_heart = median_image(heart_maps);
        write_pixel_map(median_heart, out / "median_heart_possibility.csv");
        PixelMap perfusion = median_image(perfusion_maps);
        write_pixel_map(perfusion, out / "median_perfusion_possibility.csv");
        PixelMap ventilation = median_image(ventilation_maps);
        write_pixel_map(ventilation, out / "median_ventilation_possibility.csv");
        return std::make_pair(std::move(perfusion), std::move(ventilation));
    });

    stage("segment", [&] {
        const PixelMap perfusion_mask =
            threshold_map(median_perfusion, cfg.segmentation.perfusion_threshold);
        const PixelMap ventilation_mask =
            threshold_map(median_ventilation, cfg.segmentation.ventilation_threshold);
        write_pixel_map(perfusion_mask, out / "mask_perfusion.csv");
        write_pixel_map(ventilation_mask, out / "mask_ventilation.csv");
        write_pixel_map(union_mask(perfusion_mask, ventilation_mask), out / "lung_union.csv");
        write_pixel_map(three_region_segment(median_ventilation, median_perfusion,
                                             cfg.segmentation),
                        out / "segmented.csv");
        return 0;
    });

    stage("evaluate", [&] {
        const PixelMap reference = load_pixel_map_csv(cfg.reference, PixelKind::Normalized);
        const PixelMap reference_mask =
            threshold_map(reference, cfg.segmentation.reference_threshold);
        const RocCurve curve = roc_curve(median_perfusion, reference_mask, cfg.roc_start,
                                         cfg.roc_end, cfg.roc_step);
        write_roc_csv(curve, out / "roc.csv");
        return 0;
    });

    stage("manifest", [&] {
        const json manifest = {{"tool", "eitmap"},
                               {"version", kToolVersion},
                               {"config_hash", pipeline_config_hash(cfg)},
                               {"acquisitions", cfg.acquisitions.size()}};
        std::ofstream f(out / "manifest.json", std::ios::trunc);
        if (!f)
            throw IoFailure("cannot open manifest.json for writing");
        f << manifest.dump(2) << "\n";
        if (!f)
            throw IoFailure("write failed on manifest.json");
        return 0;
    });
}

} // namespace eitmap
