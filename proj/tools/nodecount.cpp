// nodecount: estimate how many nodes are simultaneously receiving data in an
// 802.11 cell from client-side observables. Subcommands cover the four
// activities of the toolkit: generate a synthetic measurement campaign,
// evaluate a classifier grid with cross-validation, propagate node-count
// confusion into ETA error (delta), and characterize class overlap
// (calibrate).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "nodecount/dataset.hpp"
#include "nodecount/errors.hpp"
#include "nodecount/eta_error.hpp"
#include "nodecount/experiment.hpp"
#include "nodecount/generator.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nodecount::ConfigError("cannot open config file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw nodecount::ConfigError(path + ": " + e.what());
    }
}

void print_matrix(const std::array<std::array<double, 4>, 4>& m, const char* row_prefix) {
    std::printf("        N=1     N=2     N=3     N=4\n");
    for (int a = 0; a < 4; ++a) {
        std::printf("%s%d", row_prefix, a + 1);
        for (int b = 0; b < 4; ++b) std::printf("  %6.4f", m[a][b]);
        std::printf("\n");
    }
}

int run_generate(const std::optional<std::string>& config_path,
                 const std::string& out_path,
                 const std::optional<std::uint64_t>& seed,
                 const std::optional<int>& repetitions) {
    nodecount::GeneratorConfig config =
        config_path ? nodecount::parse_generator_config(load_json_file(*config_path))
                    : nodecount::GeneratorConfig::defaults();
    if (seed) config.seed = *seed;
    if (repetitions) config.repetitions = *repetitions;
    nodecount::validate(config);
    const nodecount::Dataset dataset = nodecount::generate(config);
    nodecount::write_csv(dataset, out_path);
    std::printf("wrote %zu examples to %s\n", dataset.size(), out_path.c_str());
    return 0;
}

int run_evaluate(const std::string& config_path, const std::string& out_dir,
                 const std::optional<std::uint64_t>& seed, int jobs, bool svg) {
    nodecount::ExperimentConfig config =
        nodecount::parse_experiment_config(load_json_file(config_path), seed);
    config.jobs = jobs;
    config.emit_svg = svg;
    const nlohmann::ordered_json report = nodecount::run_experiment(config, out_dir);
    std::size_t warning_count = 0;
    for (const auto& cell : report.at("cells"))
        warning_count += cell.at("warnings").size();
    if (warning_count > 0)
        std::fprintf(stderr, "warning: %zu cell warning(s), see report.json\n", warning_count);
    std::printf("wrote %zu cells to %s/report.json\n", report.at("cells").size(),
                out_dir.c_str());
    return 0;
}

int run_delta(const std::string& errors_path, const std::string& dist_path,
              const std::optional<std::string>& out_path) {
    const nodecount::ErrorMatrix errors = nodecount::load_error_matrix(errors_path);
    const nodecount::PredictionDistribution dist =
        nodecount::load_prediction_distribution(dist_path);
    const nodecount::WeightedError result = nodecount::weighted_error(errors, dist);

    for (int n = 0; n < 4; ++n) {
        if (result.delta_sd)
            std::printf("delta[%d] = %.4f  (sd %.4f)\n", n + 1, result.delta[n],
                        (*result.delta_sd)[n]);
        else
            std::printf("delta[%d] = %.4f\n", n + 1, result.delta[n]);
    }
    std::printf("delta = {%.2f, %.2f, %.2f, %.2f}\n", result.delta[0], result.delta[1],
                result.delta[2], result.delta[3]);

    if (out_path) {
        nlohmann::ordered_json j;
        j["delta"] = result.delta;
        if (result.delta_sd) j["delta_sd"] = *result.delta_sd;
        std::ofstream out(*out_path);
        if (!out) throw nodecount::DataError("cannot write file: " + *out_path);
        out << j.dump(2) << '\n';
    }
    return 0;
}

int run_calibrate(const std::optional<std::string>& config_path,
                  const std::optional<std::string>& csv_path,
                  const std::optional<std::string>& out_path) {
    if (config_path && csv_path)
        throw nodecount::ConfigError("calibrate: give either --config or --csv, not both");
    nodecount::Dataset dataset = [&]() {
        if (csv_path) return nodecount::load_csv(*csv_path);
        nodecount::GeneratorConfig config =
            config_path ? nodecount::parse_generator_config(load_json_file(*config_path))
                        : nodecount::GeneratorConfig::defaults();
        return nodecount::generate(config);
    }();

    const nodecount::OverlapReport report = nodecount::calibration_report(dataset);
    std::printf("ETA class-overlap report (Bhattacharyya coefficient, %zu examples)\n",
                dataset.size());
    std::printf("pooled marginals:\n");
    print_matrix(report.pooled, "  N=");
    std::printf("within (power, distance) cells:\n");
    print_matrix(report.within_cell, "  N=");

    if (out_path) {
        nlohmann::ordered_json j;
        j["pooled"] = report.pooled;
        j["within_cell"] = report.within_cell;
        std::ofstream out(*out_path);
        if (!out) throw nodecount::DataError("cannot write file: " + *out_path);
        out << j.dump(2) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"node-count inference toolkit for 802.11 measurement data"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "generate a synthetic measurement CSV");
    std::string gen_out;
    std::optional<std::string> gen_config;
    std::optional<std::uint64_t> gen_seed;
    std::optional<int> gen_repetitions;
    generate->add_option("--config", gen_config, "generator config JSON");
    generate->add_option("--out", gen_out, "output CSV path")->required();
    generate->add_option("--seed", gen_seed, "override generator seed");
    generate->add_option("--repetitions", gen_repetitions, "override repetitions per cell");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "run a cross-validated classifier grid");
    std::string eval_config;
    std::string eval_out;
    std::optional<std::uint64_t> eval_seed;
    int eval_jobs = 1;
    bool eval_svg = false;
    evaluate->add_option("--config", eval_config, "experiment config JSON")->required();
    evaluate->add_option("--out", eval_out, "output directory")->required();
    evaluate->add_option("--seed", eval_seed, "override experiment seed");
    evaluate->add_option("--jobs", eval_jobs, "worker threads for grid cells")
        ->check(CLI::PositiveNumber);
    evaluate->add_flag("--svg", eval_svg, "also emit ROC charts as SVG");

    // delta
    auto* delta = app.add_subcommand(
        "delta", "weighted average ETA error from an error matrix and a prediction distribution");
    std::string delta_errors;
    std::string delta_dist;
    std::optional<std::string> delta_out;
    delta->add_option("--errors", delta_errors, "4x4 percentage error matrix CSV")->required();
    delta->add_option("--dist", delta_dist, "4x4 prediction distribution CSV")->required();
    delta->add_option("--out", delta_out, "also write the result as JSON");

    // calibrate
    auto* calibrate =
        app.add_subcommand("calibrate", "class-overlap report for a dataset or generator config");
    std::optional<std::string> cal_config;
    std::optional<std::string> cal_csv;
    std::optional<std::string> cal_out;
    calibrate->add_option("--config", cal_config, "generator config JSON");
    calibrate->add_option("--csv", cal_csv, "measurement CSV to characterize");
    calibrate->add_option("--out", cal_out, "also write the report as JSON");

    try {
        app.parse(argc, argv);
        if (generate->parsed())
            return run_generate(gen_config, gen_out, gen_seed, gen_repetitions);
        if (evaluate->parsed())
            return run_evaluate(eval_config, eval_out, eval_seed, eval_jobs, eval_svg);
        if (delta->parsed()) return run_delta(delta_errors, delta_dist, delta_out);
        if (calibrate->parsed()) return run_calibrate(cal_config, cal_csv, cal_out);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfigError;
    } catch (const nodecount::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const nodecount::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitDataError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
