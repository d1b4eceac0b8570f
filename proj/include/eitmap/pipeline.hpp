#ifndef EITMAP_PIPELINE_HPP
#define EITMAP_PIPELINE_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "eitmap/segmentation.hpp"

namespace eitmap {

inline constexpr const char* kToolVersion = "1.0.0";

struct AcquisitionPaths {
    std::filesystem::path frames;
    std::filesystem::path cardiac_triggers;
    std::filesystem::path respiratory_triggers;
};

struct PipelineConfig {
    std::vector<AcquisitionPaths> acquisitions;
    // Expected number of acquisitions; 0 accepts however many are listed.
    std::size_t acquisition_count = 7;
    // Rule-base files; empty paths select the built-in defaults.
    std::filesystem::path heart_rules;
    std::filesystem::path perfusion_rules;
    std::filesystem::path ventilation_rules;
    SegmentationConfig segmentation;
    double roc_start = 0.1;
    double roc_end = 1.0;
    double roc_step = 0.05;
    // Perfusion reference image (normalized CSV); binarized at
    // segmentation.reference_threshold before the ROC sweep.
    std::filesystem::path reference;
    std::filesystem::path output_dir;
    // Resampling length for mean cycles; 0 uses the median cycle length.
    std::size_t gate_target_length = 0;
};

PipelineConfig parse_pipeline_config(const std::string& json_text,
                                     const std::string& origin = "pipeline config");
std::string serialize_pipeline_config(const PipelineConfig& cfg);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Hash recorded in the run manifest; covers everything that determines the
/// outputs (so not the output directory itself).
std::string pipeline_config_hash(const PipelineConfig& cfg);

/// Full run: per acquisition gate -> features -> heart/perfusion/ventilation
/// images, then medians across acquisitions, segmentation and the ROC sweep
/// against the reference. All maps land in cfg.output_dir as CSV+PGM along
/// with roc.csv and manifest.json. Errors carry the failing stage's name.
void run_pipeline(const PipelineConfig& cfg);

} // namespace eitmap

#endif
