#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nodecount/classifier.hpp"
#include "nodecount/dataset.hpp"
#include "nodecount/generator.hpp"

namespace nodecount {

struct SubsampleConfig {
    std::string name = "full";
    std::optional<SubsampleSpec> spec;  // absent keeps every example
};

/// One batch experiment: a data source plus a grid of
/// (classifier x feature subset x subsample) cells, each evaluated with
/// stratified k-fold cross-validation.
struct ExperimentConfig {
    std::optional<std::string> csv_path;
    std::optional<GeneratorConfig> generator;
    std::vector<FeatureSubset> subsets;
    std::vector<ClassifierSpec> classifiers;
    std::vector<SubsampleConfig> subsamples{SubsampleConfig{}};
    int fold_count = 5;
    std::uint64_t seed = 42;
    int jobs = 1;
    bool emit_svg = false;
};

/// Throws ConfigError on malformed or contradictory input. `seed_override`
/// replaces the file's seed (and the generator seed unless the file pins one).
ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                         std::optional<std::uint64_t> seed_override = {});

GeneratorConfig parse_generator_config(const nlohmann::json& j,
                                       std::optional<std::uint64_t> default_seed = {});

nlohmann::ordered_json config_to_json(const ExperimentConfig& config);
nlohmann::ordered_json generator_to_json(const GeneratorConfig& config);

/// Runs every grid cell, writes report.json plus one ROC CSV per cell (and
/// optional SVG charts) under out_dir, and returns the report. Deterministic
/// for a fixed config and seed, independent of the job count.
nlohmann::ordered_json run_experiment(const ExperimentConfig& config,
                                      const std::string& out_dir);

} // namespace nodecount
