#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "eitmap/dataio.hpp"
#include "eitmap/errors.hpp"
#include "eitmap/phantom.hpp"
#include "eitmap/pipeline.hpp"
#include "support/testutil.hpp"

using namespace eitmap;
namespace fs = std::filesystem;
using testutil::throws_containing;

namespace {

// Two short synthetic acquisitions, generated once and shared by the tests.
struct MiniStudy {
    testutil::TempDir dir{"pipeline_mini_study"};
    std::vector<AcquisitionPaths> acquisitions;
    fs::path reference;

    MiniStudy() {
        PhantomConfig cfg;
        cfg.duration_frames = 1500;
        cfg.noise_sigma = 0.05;
        for (std::uint32_t i = 0; i < 2; ++i) {
            cfg.seed = 42 + i;
            const fs::path acq_dir = dir / ("acq" + std::to_string(i));
            write_phantom_dataset(generate_phantom(cfg), acq_dir);
            acquisitions.push_back({acq_dir / "frames.eitf", acq_dir / "cardiac_triggers.txt",
                                    acq_dir / "respiratory_triggers.txt"});
        }
        reference = dir / "acq0" / "saline_reference.csv";
    }

    PipelineConfig config(const fs::path& out) const {
        PipelineConfig cfg;
        cfg.acquisitions = acquisitions;
        cfg.acquisition_count = 2;
        cfg.reference = reference;
        cfg.output_dir = out;
        return cfg;
    }
};

const MiniStudy& mini_study() {
    static MiniStudy study;
    return study;
}

std::vector<fs::path> sorted_files(const fs::path& root) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file())
            files.push_back(fs::relative(entry.path(), root));
    std::sort(files.begin(), files.end());
    return files;
}

} // namespace

TEST_CASE("pipeline config JSON round-trips") {
    PipelineConfig cfg;
    cfg.acquisitions = {{"a/frames.eitf", "a/c.txt", "a/r.txt"},
                        {"b/frames.eitf", "b/c.txt", "b/r.txt"}};
    cfg.acquisition_count = 2;
    cfg.heart_rules = "heart.json";
    cfg.segmentation.perfusion_threshold = 0.4;
    cfg.roc_step = 0.01;
    cfg.reference = "ref.csv";
    cfg.output_dir = "out";
    cfg.gate_target_length = 40;

    const PipelineConfig back = parse_pipeline_config(serialize_pipeline_config(cfg));
    REQUIRE(back.acquisitions.size() == 2);
    CHECK(back.acquisitions[1].frames == "b/frames.eitf");
    CHECK(back.acquisitions[1].respiratory_triggers == "b/r.txt");
    CHECK(back.acquisition_count == 2);
    CHECK(back.heart_rules == "heart.json");
    CHECK(back.perfusion_rules.empty());
    CHECK(back.segmentation.perfusion_threshold == 0.4);
    CHECK(back.segmentation.ventilation_threshold == 0.31);
    CHECK(back.roc_step == 0.01);
    CHECK(back.reference == "ref.csv");
    CHECK(back.output_dir == "out");
    CHECK(back.gate_target_length == 40);
}

TEST_CASE("pipeline config parse errors name the field") {
    CHECK(throws_containing<ConfigError>([] { parse_pipeline_config("{oops", "cfg"); },
                                         "invalid JSON"));
    CHECK(throws_containing<ConfigError>(
        [] { parse_pipeline_config(R"({"acquisitions": 5})", "cfg"); }, "acquisitions"));
    CHECK(throws_containing<ConfigError>(
        [] { parse_pipeline_config(R"({"acquisitions": [{"frames": "f"}]})", "cfg"); },
        "acquisitions[0]"));
    CHECK(throws_containing<ConfigError>(
        [] { parse_pipeline_config(R"({"acquisition_count": -1})", "cfg"); },
        "acquisition_count"));
    CHECK(throws_containing<ConfigError>(
        [] { parse_pipeline_config(R"({"roc": {"step": "tiny"}})", "cfg"); }, "step"));
}

TEST_CASE("the config hash ignores the output location but nothing else") {
    const MiniStudy& study = mini_study();
    const PipelineConfig a = study.config("out_a");
    const PipelineConfig b = study.config("out_b");
    CHECK(pipeline_config_hash(a) == pipeline_config_hash(b));

    PipelineConfig c = a;
    c.segmentation.perfusion_threshold += 0.01;
    CHECK(pipeline_config_hash(c) != pipeline_config_hash(a));

    PipelineConfig d = a;
    d.gate_target_length = 33;
    CHECK(pipeline_config_hash(d) != pipeline_config_hash(a));
}

TEST_CASE("the pipeline writes the full result tree") {
    const MiniStudy& study = mini_study();
    const fs::path out = study.dir / "out";
    run_pipeline(study.config(out));

    for (const char* name :
         {"acq1_perfusion_amplitude.csv", "acq1_ventilation_amplitude.csv",
          "acq1_time_delay.csv", "acq2_perfusion_amplitude.csv", "position.csv",
          "acq1_heart_possibility.csv", "acq1_heart_possibility_norm.csv",
          "acq1_perfusion_possibility.csv", "acq1_ventilation_possibility.csv",
          "median_heart_possibility.csv", "median_perfusion_possibility.csv",
          "median_ventilation_possibility.csv", "mask_perfusion.csv", "mask_ventilation.csv",
          "lung_union.csv", "segmented.csv", "roc.csv", "manifest.json"}) {
        CAPTURE(name);
        CHECK(fs::exists(out / name));
    }
    // Previews ride along with every map.
    CHECK(fs::exists(out / "segmented.pgm"));
    CHECK(fs::exists(out / "median_perfusion_possibility.pgm"));

    const PixelMap median =
        load_pixel_map_csv(out / "median_perfusion_possibility.csv", PixelKind::Possibility);
    CHECK(median.width == 32);
    CHECK(median.height == 32);
    CHECK_NOTHROW(load_pixel_map_csv(out / "segmented.csv", PixelKind::RegionLabel));
    CHECK_NOTHROW(load_pixel_map_csv(out / "mask_perfusion.csv", PixelKind::Binary));

    const std::string roc = testutil::slurp(out / "roc.csv");
    CHECK(roc.rfind("threshold,sensitivity,specificity\n", 0) == 0);
    CHECK(roc.find("# auc=") != std::string::npos);

    const std::string manifest = testutil::slurp(out / "manifest.json");
    CHECK(manifest.find("\"config_hash\"") != std::string::npos);
    CHECK(manifest.find(pipeline_config_hash(study.config(out))) != std::string::npos);
    CHECK(manifest.find("\"version\"") != std::string::npos);
}

TEST_CASE("two runs on the same inputs are byte-identical") {
    const MiniStudy& study = mini_study();
    const fs::path out1 = study.dir / "det1";
    const fs::path out2 = study.dir / "det2";
    run_pipeline(study.config(out1));
    run_pipeline(study.config(out2));

    const auto files1 = sorted_files(out1);
    const auto files2 = sorted_files(out2);
    REQUIRE(files1 == files2);
    REQUIRE_FALSE(files1.empty());
    for (const auto& rel : files1) {
        CAPTURE(rel.string());
        CHECK(testutil::slurp(out1 / rel) == testutil::slurp(out2 / rel));
    }
}

TEST_CASE("pipeline errors carry the failing stage") {
    const MiniStudy& study = mini_study();

    SUBCASE("mismatched acquisition count") {
        PipelineConfig cfg = study.config(study.dir / "err");
        cfg.acquisition_count = 7;
        CHECK(throws_containing<ConfigError>([&] { run_pipeline(cfg); }, "stage configure"));
    }
    SUBCASE("missing reference") {
        PipelineConfig cfg = study.config(study.dir / "err");
        cfg.reference.clear();
        CHECK(throws_containing<ConfigError>([&] { run_pipeline(cfg); }, "reference"));
    }
    SUBCASE("missing frames file") {
        PipelineConfig cfg = study.config(study.dir / "err");
        cfg.acquisitions[1].frames = study.dir / "nowhere.eitf";
        CHECK(throws_containing<DataError>([&] { run_pipeline(cfg); },
                                           "stage gate (acquisition 2)"));
    }
    SUBCASE("swapped trigger kinds") {
        PipelineConfig cfg = study.config(study.dir / "err");
        std::swap(cfg.acquisitions[0].cardiac_triggers,
                  cfg.acquisitions[0].respiratory_triggers);
        CHECK(throws_containing<DataError>([&] { run_pipeline(cfg); }, "expected cardiac"));
    }
    SUBCASE("missing rule-base file") {
        PipelineConfig cfg = study.config(study.dir / "err");
        cfg.heart_rules = study.dir / "nowhere.json";
        CHECK(throws_containing<ConfigError>([&] { run_pipeline(cfg); },
                                             "stage load-rule-bases"));
    }
    SUBCASE("frames must be 32x32") {
        PipelineConfig cfg = study.config(study.dir / "err");
        const FrameSequence tiny = testutil::make_sequence(
            2, 2, 50.0, {{1.0f, 2.0f, 3.0f, 4.0f}, {1.0f, 2.0f, 3.0f, 4.0f}});
        write_frame_sequence(tiny, study.dir / "tiny.eitf");
        cfg.acquisitions[0].frames = study.dir / "tiny.eitf";
        // Stage boundaries rethrow by category, so the leaf type is DataError.
        CHECK(throws_containing<DataError>([&] { run_pipeline(cfg); }, "32x32"));
        CHECK(throws_containing<DataError>([&] { run_pipeline(cfg); }, "got 2x2"));
    }
}

TEST_CASE("acquisition count zero accepts any listing") {
    const MiniStudy& study = mini_study();
    PipelineConfig cfg = study.config(study.dir / "out_flexible");
    cfg.acquisition_count = 0;
    CHECK_NOTHROW(run_pipeline(cfg));
}

TEST_CASE("pipeline config files load") {
    const MiniStudy& study = mini_study();
    const PipelineConfig cfg = study.config(study.dir / "out_file");
    const fs::path cfg_path = study.dir / "pipeline.json";
    testutil::spit(cfg_path, serialize_pipeline_config(cfg));
    const PipelineConfig loaded = load_pipeline_config(cfg_path);
    CHECK(loaded.acquisitions.size() == cfg.acquisitions.size());
    CHECK(loaded.reference == cfg.reference);
    CHECK(pipeline_config_hash(loaded) == pipeline_config_hash(cfg));
    CHECK_THROWS_AS(load_pipeline_config(study.dir / "nowhere.json"), ConfigError);
}
