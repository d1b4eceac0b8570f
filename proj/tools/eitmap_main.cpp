#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eitmap/dataio.hpp"
#include "eitmap/evaluation.hpp"
#include "eitmap/features.hpp"
#include "eitmap/gating.hpp"
#include "eitmap/models.hpp"
#include "eitmap/phantom.hpp"
#include "eitmap/pipeline.hpp"
#include "eitmap/segmentation.hpp"

namespace {

using namespace eitmap;

FrameSequence to_sequence(const MeanCycle& mean) {
    FrameSequence seq;
    seq.width = mean.width;
    seq.height = mean.height;
    seq.sample_rate = mean.sample_rate;
    seq.frames.reserve(mean.length());
    for (const auto& frame : mean.frames) {
        std::vector<float> f(frame.size());
        for (std::size_t i = 0; i < frame.size(); ++i)
            f[i] = static_cast<float>(frame[i]);
        seq.frames.push_back(std::move(f));
    }
    return seq;
}

MeanCycle to_mean_cycle(const FrameSequence& seq, TriggerKind kind) {
    MeanCycle mean;
    mean.source_kind = kind;
    mean.width = seq.width;
    mean.height = seq.height;
    mean.sample_rate = seq.sample_rate;
    mean.cycle_count = 1; // unknown once serialized; irrelevant for features
    mean.frames.reserve(seq.frame_count());
    for (const auto& frame : seq.frames)
        mean.frames.emplace_back(frame.begin(), frame.end());
    return mean;
}

void require_option(const std::string& value, const char* name) {
    if (value.empty())
        throw ConfigError(std::string(name) + " is required");
}

struct PhantomArgs {
    std::string out, config;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool print_defaults = false;
};

struct GateArgs {
    std::string frames, triggers, out;
    std::size_t group_size = 0;    // 0 = all cycles in one group
    std::size_t target_length = 0; // 0 = median cycle length
};

struct FeaturesArgs {
    std::string cardiac, respiratory, out;
};

struct InferArgs {
    std::string features, out, heart_rules, perfusion_rules, ventilation_rules;
};

struct SegmentArgs {
    std::string ventilation, perfusion, out;
    SegmentationConfig cfg;
};

struct EvaluateArgs {
    std::string map, reference, out;
    double reference_threshold = 0.1;
    double start = 0.1, end = 1.0, step = 0.05;
};

struct PipelineArgs {
    std::string config, out;
    bool print_defaults = false;
};

void run_phantom(const PhantomArgs& args) {
    if (args.print_defaults) {
        std::cout << serialize_phantom_config(PhantomConfig{});
        return;
    }
    require_option(args.out, "--out");
    PhantomConfig cfg =
        args.config.empty() ? PhantomConfig{} : load_phantom_config(args.config);
    if (args.seed_given)
        cfg.seed = static_cast<std::uint32_t>(args.seed);
    cfg.validate();
    const PhantomDataset data = generate_phantom(cfg);
    write_phantom_dataset(data, args.out);
    std::ofstream f(std::filesystem::path(args.out) / "phantom_config.json", std::ios::trunc);
    f << serialize_phantom_config(cfg);
    std::cout << "phantom written to " << args.out << " (" << data.frames.frame_count()
              << " frames, " << data.cardiac_triggers.indices.size() << " cardiac / "
              << data.respiratory_triggers.indices.size() << " respiratory triggers)\n";
}

void run_gate(const GateArgs& args) {
    require_option(args.frames, "--frames");
    require_option(args.triggers, "--triggers");
    require_option(args.out, "--out");
    const FrameSequence seq = load_frame_sequence(args.frames);
    const TriggerTrain triggers = load_trigger_train(args.triggers);
    std::filesystem::create_directories(args.out);

    std::vector<MeanCycle> means;
    if (args.group_size == 0) {
        const CycleSet set = extract_cycles(seq, triggers);
        const std::size_t target =
            args.target_length != 0 ? args.target_length : suggested_target_length(set);
        means.push_back(mean_cycle(set, target));
    } else {
        means = gated_series(seq, triggers, args.group_size, args.target_length);
    }
    for (std::size_t i = 0; i < means.size(); ++i) {
        char name[40];
        std::snprintf(name, sizeof(name), "mean_cycle_%03zu.eitf", i);
        write_frame_sequence(to_sequence(means[i]), std::filesystem::path(args.out) / name);
    }
    std::cout << "wrote " << means.size() << " mean " << to_string(triggers.kind)
              << " cycle(s) to " << args.out << "\n";
}

void run_features(const FeaturesArgs& args) {
    require_option(args.cardiac, "--cardiac");
    require_option(args.respiratory, "--respiratory");
    require_option(args.out, "--out");
    const MeanCycle cardiac =
        to_mean_cycle(load_frame_sequence(args.cardiac), TriggerKind::Cardiac);
    const MeanCycle respiratory =
        to_mean_cycle(load_frame_sequence(args.respiratory), TriggerKind::Respiratory);
    const FeatureBundle features = make_features(cardiac, respiratory);
    const std::filesystem::path out = args.out;
    std::filesystem::create_directories(out);
    write_pixel_map(features.perfusion_amplitude, out / "perfusion_amplitude.csv");
    write_pixel_map(features.ventilation_amplitude, out / "ventilation_amplitude.csv");
    write_pixel_map(features.time_delay, out / "time_delay.csv");
    write_pixel_map(features.position, out / "position.csv");
    std::cout << "features written to " << args.out << "\n";
}

void run_infer(const InferArgs& args) {
    require_option(args.features, "--features");
    require_option(args.out, "--out");
    const std::filesystem::path in = args.features;
    FeatureBundle features;
    features.perfusion_amplitude =
        load_pixel_map_csv(in / "perfusion_amplitude.csv", PixelKind::Normalized);
    features.ventilation_amplitude =
        load_pixel_map_csv(in / "ventilation_amplitude.csv", PixelKind::Normalized);
    features.time_delay = load_pixel_map_csv(in / "time_delay.csv", PixelKind::TimeDelay);
    features.position = load_pixel_map_csv(in / "position.csv", PixelKind::Binary);

    const ModelSuite& defaults = ModelSuite::defaults();
    const RuleBase heart_rb =
        args.heart_rules.empty() ? defaults.heart : load_rule_base(args.heart_rules);
    const RuleBase perfusion_rb =
        args.perfusion_rules.empty() ? defaults.perfusion : load_rule_base(args.perfusion_rules);
    const RuleBase ventilation_rb = args.ventilation_rules.empty()
                                        ? defaults.ventilation
                                        : load_rule_base(args.ventilation_rules);

    const std::filesystem::path out = args.out;
    std::filesystem::create_directories(out);
    const PixelMap heart = heart_image(features, heart_rb);
    write_pixel_map(heart, out / "heart_possibility.csv");
    const PixelMap heart_norm = normalize_heart(heart);
    write_pixel_map(heart_norm, out / "heart_possibility_norm.csv");
    write_pixel_map(lung_image(features.perfusion_amplitude, heart_norm, perfusion_rb),
                    out / "perfusion_possibility.csv");
    write_pixel_map(lung_image(features.ventilation_amplitude, heart_norm, ventilation_rb),
                    out / "ventilation_possibility.csv");
    std::cout << "possibility maps written to " << args.out << "\n";
}

void run_segment(const SegmentArgs& args) {
    require_option(args.ventilation, "--ventilation");
    require_option(args.perfusion, "--perfusion");
    require_option(args.out, "--out");
    const PixelMap vent = load_pixel_map_csv(args.ventilation, PixelKind::Possibility);
    const PixelMap perf = load_pixel_map_csv(args.perfusion, PixelKind::Possibility);
    const std::filesystem::path out = args.out;
    std::filesystem::create_directories(out);
    const PixelMap vent_mask = threshold_map(vent, args.cfg.ventilation_threshold);
    const PixelMap perf_mask = threshold_map(perf, args.cfg.perfusion_threshold);
    write_pixel_map(vent_mask, out / "mask_ventilation.csv");
    write_pixel_map(perf_mask, out / "mask_perfusion.csv");
    write_pixel_map(union_mask(perf_mask, vent_mask), out / "lung_union.csv");
    write_pixel_map(three_region_segment(vent, perf, args.cfg), out / "segmented.csv");
    std::cout << "segmentation written to " << args.out << "\n";
}

void run_evaluate(const EvaluateArgs& args) {
    require_option(args.map, "--map");
    require_option(args.reference, "--reference");
    require_option(args.out, "--out");
    const PixelMap map = load_pixel_map_csv(args.map, PixelKind::Possibility);
    const PixelMap reference = load_pixel_map_csv(args.reference, PixelKind::Normalized);
    const PixelMap reference_mask = threshold_map(reference, args.reference_threshold);
    const RocCurve curve = roc_curve(map, reference_mask, args.start, args.end, args.step);
    write_roc_csv(curve, args.out);
    std::printf("auc=%.17g\n", curve.auc);
}

void run_pipeline_cmd(const PipelineArgs& args) {
    if (args.print_defaults) {
        std::cout << serialize_pipeline_config(PipelineConfig{});
        return;
    }
    require_option(args.config, "--config");
    PipelineConfig cfg = load_pipeline_config(args.config);
    if (!args.out.empty())
        cfg.output_dir = args.out;
    run_pipeline(cfg);
    std::cout << "pipeline complete: " << cfg.output_dir.string() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"EIT heart/lung fuzzy mapping pipeline"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    PhantomArgs phantom_args;
    auto* phantom_cmd = app.add_subcommand("phantom", "Generate a synthetic dataset");
    phantom_cmd->add_option("--out", phantom_args.out, "Output directory");
    phantom_cmd->add_option("--config", phantom_args.config, "Phantom config JSON");
    phantom_cmd->add_option("--seed", phantom_args.seed, "Override the config seed")
        ->check(CLI::Range(std::uint64_t{0}, std::uint64_t{4294967295}));
    phantom_cmd->add_flag("--print-default-config", phantom_args.print_defaults,
                          "Print the built-in config and exit");

    GateArgs gate_args;
    auto* gate_cmd = app.add_subcommand("gate", "Extract mean cycles from a frame sequence");
    gate_cmd->add_option("--frames", gate_args.frames, "EITF frame sequence");
    gate_cmd->add_option("--triggers", gate_args.triggers, "Trigger train file");
    gate_cmd->add_option("--out", gate_args.out, "Output directory");
    gate_cmd->add_option("--group-size", gate_args.group_size,
                         "Cycles per mean cycle (0 = all cycles in one)");
    gate_cmd->add_option("--target-length", gate_args.target_length,
                         "Resampling length (0 = median cycle length)");

    FeaturesArgs features_args;
    auto* features_cmd = app.add_subcommand("features", "Derive fuzzy-model inputs");
    features_cmd->add_option("--cardiac", features_args.cardiac, "Mean cardiac cycle (EITF)");
    features_cmd->add_option("--respiratory", features_args.respiratory,
                             "Mean respiratory cycle (EITF)");
    features_cmd->add_option("--out", features_args.out, "Output directory");

    InferArgs infer_args;
    auto* infer_cmd = app.add_subcommand("infer", "Run the fuzzy models per pixel");
    infer_cmd->add_option("--features", infer_args.features,
                          "Directory holding the feature CSVs");
    infer_cmd->add_option("--out", infer_args.out, "Output directory");
    infer_cmd->add_option("--heart-rules", infer_args.heart_rules,
                          "Heart rule base (default: built-in)");
    infer_cmd->add_option("--perfusion-rules", infer_args.perfusion_rules,
                          "Perfusion rule base (default: built-in)");
    infer_cmd->add_option("--ventilation-rules", infer_args.ventilation_rules,
                          "Ventilation rule base (default: built-in)");

    SegmentArgs segment_args;
    auto* segment_cmd = app.add_subcommand("segment", "Threshold possibility maps into regions");
    segment_cmd->add_option("--ventilation", segment_args.ventilation,
                            "Ventilation possibility CSV");
    segment_cmd->add_option("--perfusion", segment_args.perfusion, "Perfusion possibility CSV");
    segment_cmd->add_option("--out", segment_args.out, "Output directory");
    segment_cmd->add_option("--ventilation-threshold", segment_args.cfg.ventilation_threshold,
                            "Default 0.31");
    segment_cmd->add_option("--perfusion-threshold", segment_args.cfg.perfusion_threshold,
                            "Default 0.28");

    EvaluateArgs evaluate_args;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "ROC sweep against a reference image");
    evaluate_cmd->add_option("--map", evaluate_args.map, "Possibility map CSV");
    evaluate_cmd->add_option("--reference", evaluate_args.reference,
                             "Reference image CSV (normalized)");
    evaluate_cmd->add_option("--out", evaluate_args.out, "Output ROC CSV path");
    evaluate_cmd->add_option("--reference-threshold", evaluate_args.reference_threshold,
                             "Binarization threshold for the reference (default 0.1)");
    evaluate_cmd->add_option("--start", evaluate_args.start, "Sweep start (default 0.1)");
    evaluate_cmd->add_option("--end", evaluate_args.end, "Sweep end (default 1.0)");
    evaluate_cmd->add_option("--step", evaluate_args.step, "Sweep step (default 0.05)");

    PipelineArgs pipeline_args;
    auto* pipeline_cmd = app.add_subcommand("pipeline", "Run the full analysis");
    pipeline_cmd->add_option("--config", pipeline_args.config, "Pipeline config JSON");
    pipeline_cmd->add_option("--out", pipeline_args.out,
                             "Output directory (overrides the config)");
    pipeline_cmd->add_flag("--print-default-config", pipeline_args.print_defaults,
                           "Print a config template and exit");

    phantom_args.seed_given = false;
    try {
        app.parse(argc, argv);
        phantom_args.seed_given = phantom_cmd->count("--seed") > 0;
        if (phantom_cmd->parsed())
            run_phantom(phantom_args);
        else if (gate_cmd->parsed())
            run_gate(gate_args);
        else if (features_cmd->parsed())
            run_features(features_args);
        else if (infer_cmd->parsed())
            run_infer(infer_args);
        else if (segment_cmd->parsed())
            run_segment(segment_args);
        else if (evaluate_cmd->parsed())
            run_evaluate(evaluate_args);
        else if (pipeline_cmd->parsed())
            run_pipeline_cmd(pipeline_args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the message
        return 1;    // bad invocation = configuration error
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
