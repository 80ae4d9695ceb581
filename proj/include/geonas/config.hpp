#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "geonas/arch.hpp"
#include "geonas/geo.hpp"
#include "geonas/train.hpp"
#include "geonas/tuner.hpp"

namespace geonas::pipeline {

/// Settings of one tuning phase (forward or inverse).
struct PhaseConfig {
    std::string strategy = "bayesian";  // grid | random | bayesian
    arch::HyperparamSet reference_h;
    double cutoff_factor = 1.1;  // trial loss_cutoff = factor * reference loss
    tuner::SearchBudget budget;
    nn::TrainConfig train;
};

/// Everything a run needs; parsed from one JSON config file, with CLI flag
/// overrides applied on top.
struct PipelineConfig {
    std::filesystem::path out_dir = "run";
    uint64_t seed = 1;
    int width = 8;
    bool deterministic_timing = true;  // log wall_seconds as 0.0 for byte-stable outputs

    // dataset
    int tuning_count = 2000;
    int full_count = 20000;
    int calibration_count = 100000;
    double calibration_padding = 0.05;
    std::string tuning_file = "tuning.ds";
    std::string full_file = "full.ds";
    std::string validation_file = "validation.ds";

    geo::ToolConfig tool;
    arch::SearchSpace forward_space = arch::SearchSpace::forward_space();
    arch::SearchSpace inverse_space = arch::SearchSpace::inverse_space();

    PhaseConfig forward;
    PhaseConfig inverse;
    nn::TrainConfig final_train;

    PipelineConfig();

    std::filesystem::path tuning_path() const { return out_dir / tuning_file; }
    std::filesystem::path full_path() const { return out_dir / full_file; }
    std::filesystem::path validation_path() const { return out_dir / validation_file; }

    /// Stable under key reordering in the source file: hashes the
    /// canonical (alphabetically sorted) JSON rendering.
    uint64_t config_hash() const;

    /// Canonical JSON rendering of the effective configuration.
    std::string to_json() const;

    void validate() const;
};

/// Parse a config file; unknown keys are rejected with their path, bad
/// values name the offending field.
PipelineConfig load_config(const std::filesystem::path& path);

/// Parse a hyperparameter override like {"n":3,"k0":3,"k1":3,"l":7}.
arch::HyperparamSet parse_point_json(const std::string& text, const arch::SearchSpace& space);

}  // namespace geonas::pipeline
