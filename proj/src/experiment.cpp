#include "nodecount/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "nodecount/errors.hpp"
#include "nodecount/eta_error.hpp"
#include "nodecount/evaluation.hpp"
#include "nodecount/metrics.hpp"

namespace nodecount {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void ensure_keys(const json& j, const std::vector<std::string>& allowed,
                 const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
T require(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": key '" + key + "' has the wrong type");
    }
}

template <typename T>
T value_or(const json& j, const std::string& key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": key '" + key + "' has the wrong type");
    }
}

ClassifierSpec parse_classifier(const json& j) {
    const std::string type = require<std::string>(j, "type", "classifier");
    ClassifierSpec spec;
    if (type == "nb") {
        ensure_keys(j, {"type", "likelihood", "prior", "conditioned"}, "nb classifier");
        NaiveBayesSpec nb;
        const std::string likelihood =
            value_or<std::string>(j, "likelihood", "gaussian", "nb classifier");
        if (likelihood == "gaussian")
            nb.likelihood = Likelihood::kGaussian;
        else if (likelihood == "poisson")
            nb.likelihood = Likelihood::kPoisson;
        else
            throw ConfigError("nb classifier: unknown likelihood '" + likelihood + "'");
        const std::string prior = value_or<std::string>(j, "prior", "prior", "nb classifier");
        if (prior == "uniform")
            nb.prior = Prior::kUniform;
        else if (prior == "prior" || prior == "empirical")
            nb.prior = Prior::kEmpirical;
        else
            throw ConfigError("nb classifier: unknown prior '" + prior + "'");
        nb.conditioned = value_or<bool>(j, "conditioned", true, "nb classifier");
        spec.config = nb;
    } else if (type == "svm") {
        ensure_keys(j, {"type", "kernel", "cost", "gamma", "weighted", "tolerance",
                        "max_iterations"},
                    "svm classifier");
        SvmSpec svm;
        const std::string kernel = value_or<std::string>(j, "kernel", "rbf", "svm classifier");
        if (kernel == "linear")
            svm.kernel = KernelKind::kLinear;
        else if (kernel == "rbf")
            svm.kernel = KernelKind::kRbf;
        else
            throw ConfigError("svm classifier: unknown kernel '" + kernel + "'");
        svm.cost = value_or<double>(j, "cost", 1.0, "svm classifier");
        if (!(svm.cost > 0.0)) throw ConfigError("svm classifier: cost must be positive");
        if (j.contains("gamma")) {
            svm.gamma = require<double>(j, "gamma", "svm classifier");
            if (!(*svm.gamma > 0.0)) throw ConfigError("svm classifier: gamma must be positive");
        }
        svm.weighted = value_or<bool>(j, "weighted", false, "svm classifier");
        svm.tolerance = value_or<double>(j, "tolerance", 1e-3, "svm classifier");
        if (!(svm.tolerance > 0.0))
            throw ConfigError("svm classifier: tolerance must be positive");
        svm.max_iterations =
            value_or<std::size_t>(j, "max_iterations", 100000, "svm classifier");
        spec.config = svm;
    } else if (type == "knn") {
        ensure_keys(j, {"type", "k"}, "knn classifier");
        KnnSpec knn;
        knn.k = value_or<int>(j, "k", 5, "knn classifier");
        if (knn.k < 1) throw ConfigError("knn classifier: k must be at least 1");
        spec.config = knn;
    } else {
        throw ConfigError("classifier: unknown type '" + type + "' (expected nb, svm or knn)");
    }
    return spec;
}

ordered_json classifier_to_json(const ClassifierSpec& spec) {
    ordered_json j;
    if (const auto* nb = std::get_if<NaiveBayesSpec>(&spec.config)) {
        j["type"] = "nb";
        j["likelihood"] = to_string(nb->likelihood);
        j["prior"] = to_string(nb->prior);
        j["conditioned"] = nb->conditioned;
    } else if (const auto* svm = std::get_if<SvmSpec>(&spec.config)) {
        j["type"] = "svm";
        j["kernel"] = to_string(svm->kernel);
        j["cost"] = svm->cost;
        if (svm->gamma) j["gamma"] = *svm->gamma;
        j["weighted"] = svm->weighted;
        j["tolerance"] = svm->tolerance;
        j["max_iterations"] = svm->max_iterations;
    } else {
        const auto& knn = std::get<KnnSpec>(spec.config);
        j["type"] = "knn";
        j["k"] = knn.k;
    }
    return j;
}

SubsampleConfig parse_subsample(const json& j, std::uint64_t default_seed) {
    ensure_keys(j, {"name", "fractions", "seed"}, "subsample");
    SubsampleConfig config;
    if (!j.contains("fractions")) {
        config.name = value_or<std::string>(j, "name", "full", "subsample");
        return config;
    }
    const auto fractions = require<std::vector<double>>(j, "fractions", "subsample");
    if (fractions.size() != kNumClasses)
        throw ConfigError("subsample: fractions must list 4 values (classes N=1..4)");
    SubsampleSpec spec;
    for (int c = 0; c < kNumClasses; ++c) {
        if (!(fractions[c] > 0.0) || fractions[c] > 1.0)
            throw ConfigError("subsample: fractions must lie in (0, 1]");
        spec.fraction[c] = fractions[c];
    }
    spec.seed = value_or<std::uint64_t>(j, "seed", default_seed, "subsample");
    std::string default_name;
    for (int c = 0; c < kNumClasses; ++c) {
        if (c) default_name += "-";
        default_name += std::to_string(static_cast<int>(std::lround(spec.fraction[c] * 100)));
    }
    config.name = value_or<std::string>(j, "name", default_name, "subsample");
    config.spec = spec;
    return config;
}

std::string sanitize_file_component(std::string s) {
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return s;
}

ordered_json scaling_to_json(const ScalingParams& params) {
    ordered_json j;
    j["mean"] = params.mean;
    j["stddev"] = params.stddev;
    j["zero_variance"] = params.zero_variance;
    return j;
}

/// Minimal self-contained line chart; enough to eyeball a ROC sweep.
void write_roc_svg(const RocCurve& curve, const std::string& path) {
    constexpr int kSize = 480;
    constexpr int kMargin = 40;
    constexpr int kPlot = kSize - 2 * kMargin;
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    auto px = [&](double fpr) { return kMargin + fpr * kPlot; };
    auto py = [&](double tpr) { return kSize - kMargin - tpr * kPlot; };
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kSize << "' height='" << kSize
        << "'>\n";
    out << "<rect x='" << kMargin << "' y='" << kMargin << "' width='" << kPlot << "' height='"
        << kPlot << "' fill='white' stroke='black'/>\n";
    out << "<line x1='" << px(0) << "' y1='" << py(0) << "' x2='" << px(1) << "' y2='" << py(1)
        << "' stroke='gray' stroke-dasharray='4'/>\n";
    out << "<polyline fill='none' stroke='steelblue' stroke-width='1.5' points='";
    for (const auto& p : curve.points) out << px(p.fpr) << ',' << py(p.tpr) << ' ';
    out << "'/>\n";
    out << "<text x='" << kSize / 2 << "' y='" << kSize - 8
        << "' text-anchor='middle' font-size='12'>false positive rate</text>\n";
    out << "<text x='12' y='" << kSize / 2 << "' text-anchor='middle' font-size='12' "
        << "transform='rotate(-90 12 " << kSize / 2 << ")'>true positive rate</text>\n";
    out << "</svg>\n";
}

struct Cell {
    std::size_t subsample_index;
    FeatureSubset subset;
    std::size_t classifier_index;
};

} // namespace

GeneratorConfig parse_generator_config(const json& j,
                                       std::optional<std::uint64_t> default_seed) {
    ensure_keys(j,
                {"file_size_mb", "contention_exponent", "repetitions", "seed", "rate_mbps",
                 "noise_sigma"},
                "generator");
    GeneratorConfig config = GeneratorConfig::defaults();
    config.file_size_mb = value_or<double>(j, "file_size_mb", config.file_size_mb, "generator");
    config.contention_exponent =
        value_or<double>(j, "contention_exponent", config.contention_exponent, "generator");
    config.repetitions = value_or<int>(j, "repetitions", config.repetitions, "generator");
    if (default_seed) config.seed = *default_seed;
    config.seed = value_or<std::uint64_t>(j, "seed", config.seed, "generator");

    if (j.contains("rate_mbps")) {
        const json& rates = j.at("rate_mbps");
        if (!rates.is_object()) throw ConfigError("generator: rate_mbps must be an object");
        for (const auto& [power_key, per_distance] : rates.items()) {
            const int power = std::atoi(power_key.c_str());
            if (!per_distance.is_object())
                throw ConfigError("generator: rate_mbps entries must map distance to rate");
            for (const auto& [dist_key, rate] : per_distance.items()) {
                const int dist = std::atoi(dist_key.c_str());
                config.rate_mbps[{power, dist}] = rate.get<double>();
            }
        }
    }
    if (j.contains("noise_sigma")) {
        const json& noise = j.at("noise_sigma");
        if (!noise.is_object()) throw ConfigError("generator: noise_sigma must be an object");
        for (const auto& [channel_key, per_tod] : noise.items()) {
            const int channel = std::atoi(channel_key.c_str());
            if (!per_tod.is_object())
                throw ConfigError("generator: noise_sigma entries must map time of day to sigma");
            for (const auto& [tod_key, sigma] : per_tod.items()) {
                TimeOfDay tod;
                try {
                    tod = parse_time_of_day(tod_key);
                } catch (const DataError& e) {
                    throw ConfigError(std::string("generator: ") + e.what());
                }
                config.noise_sigma[{channel, tod}] = sigma.get<double>();
            }
        }
    }
    try {
        validate(config);
    } catch (const ConfigError&) {
        throw;
    }
    return config;
}

ordered_json generator_to_json(const GeneratorConfig& config) {
    ordered_json j;
    j["file_size_mb"] = config.file_size_mb;
    j["contention_exponent"] = config.contention_exponent;
    j["repetitions"] = config.repetitions;
    j["seed"] = config.seed;
    ordered_json rates;
    for (int power : kTxPowerLevelsDbm) {
        ordered_json per_distance;
        for (int dist : kDistancesM)
            per_distance[std::to_string(dist)] = config.rate_mbps.at({power, dist});
        rates[std::to_string(power)] = std::move(per_distance);
    }
    j["rate_mbps"] = std::move(rates);
    ordered_json noise;
    for (int channel : kChannels) {
        ordered_json per_tod;
        for (TimeOfDay tod : kTimesOfDay)
            per_tod[to_string(tod)] = config.noise_sigma.at({channel, tod});
        noise[std::to_string(channel)] = std::move(per_tod);
    }
    j["noise_sigma"] = std::move(noise);
    return j;
}

ExperimentConfig parse_experiment_config(const json& j,
                                         std::optional<std::uint64_t> seed_override) {
    ensure_keys(j, {"data", "features", "classifiers", "subsamples", "folds", "seed"},
                "experiment");
    ExperimentConfig config;
    config.seed = value_or<std::uint64_t>(j, "seed", config.seed, "experiment");
    if (seed_override) config.seed = *seed_override;
    config.fold_count = value_or<int>(j, "folds", config.fold_count, "experiment");
    if (config.fold_count < 2) throw ConfigError("experiment: folds must be at least 2");

    if (!j.contains("data")) throw ConfigError("experiment: missing key 'data'");
    const json& data = j.at("data");
    ensure_keys(data, {"csv", "generator"}, "experiment data");
    if (data.contains("csv") == data.contains("generator"))
        throw ConfigError("experiment data: give exactly one of 'csv' or 'generator'");
    if (data.contains("csv")) {
        config.csv_path = require<std::string>(data, "csv", "experiment data");
    } else {
        config.generator = parse_generator_config(data.at("generator"), config.seed);
    }

    const auto features = require<std::vector<std::string>>(j, "features", "experiment");
    if (features.empty()) throw ConfigError("experiment: at least one feature subset required");
    for (const std::string& name : features) config.subsets.push_back(parse_feature_subset(name));

    if (!j.contains("classifiers") || !j.at("classifiers").is_array() ||
        j.at("classifiers").empty())
        throw ConfigError("experiment: at least one classifier required");
    for (const json& c : j.at("classifiers")) config.classifiers.push_back(parse_classifier(c));

    if (j.contains("subsamples")) {
        if (!j.at("subsamples").is_array() || j.at("subsamples").empty())
            throw ConfigError("experiment: subsamples must be a non-empty array");
        config.subsamples.clear();
        for (const json& s : j.at("subsamples"))
            config.subsamples.push_back(parse_subsample(s, config.seed));
    }
    return config;
}

ordered_json config_to_json(const ExperimentConfig& config) {
    ordered_json j;
    ordered_json data;
    if (config.csv_path)
        data["csv"] = *config.csv_path;
    else
        data["generator"] = generator_to_json(*config.generator);
    j["data"] = std::move(data);
    ordered_json features = ordered_json::array();
    for (FeatureSubset s : config.subsets) features.push_back(to_string(s));
    j["features"] = std::move(features);
    ordered_json classifiers = ordered_json::array();
    for (const ClassifierSpec& c : config.classifiers)
        classifiers.push_back(classifier_to_json(c));
    j["classifiers"] = std::move(classifiers);
    ordered_json subsamples = ordered_json::array();
    for (const SubsampleConfig& s : config.subsamples) {
        ordered_json entry;
        entry["name"] = s.name;
        if (s.spec) {
            entry["fractions"] = s.spec->fraction;
            entry["seed"] = s.spec->seed;
        }
        subsamples.push_back(std::move(entry));
    }
    j["subsamples"] = std::move(subsamples);
    j["folds"] = config.fold_count;
    j["seed"] = config.seed;
    return j;
}

ordered_json run_experiment(const ExperimentConfig& config, const std::string& out_dir) {
    if (config.subsets.empty() || config.classifiers.empty())
        throw ConfigError("experiment: at least one classifier and one feature subset required");
    std::filesystem::create_directories(out_dir);

    const Dataset base = config.csv_path ? load_csv(*config.csv_path)
                                         : generate(*config.generator);

    // Subsample once per subsample config, then share folds across the grid.
    std::vector<Dataset> datasets;
    std::vector<FoldPlan> plans;
    for (const SubsampleConfig& sub : config.subsamples) {
        Dataset ds = sub.spec ? subsample(base, *sub.spec) : base;
        plans.push_back(make_folds(ds, config.fold_count, config.seed));
        datasets.push_back(std::move(ds));
    }

    std::vector<Cell> cells;
    for (std::size_t s = 0; s < config.subsamples.size(); ++s)
        for (FeatureSubset subset : config.subsets)
            for (std::size_t c = 0; c < config.classifiers.size(); ++c)
                cells.push_back({s, subset, c});

    std::vector<ordered_json> cell_reports(cells.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure_message;
    std::mutex failure_mutex;

    auto worker = [&]() {
        while (!failed.load()) {
            const std::size_t index = next.fetch_add(1);
            if (index >= cells.size()) return;
            const Cell& cell = cells[index];
            try {
                const Dataset projected = project(datasets[cell.subsample_index], cell.subset);
                const ClassifierSpec& spec = config.classifiers[cell.classifier_index];
                const CrossValidationResult cv =
                    cross_validate(projected, plans[cell.subsample_index], spec);

                const RocCurve roc = roc_curve(projected.labels(), cv.scores);
                const std::string cell_name = sanitize_file_component(
                    spec.name() + "_" + to_string(cell.subset) + "_" +
                    config.subsamples[cell.subsample_index].name);
                const std::string roc_file = "roc_" + cell_name + ".csv";
                write_roc_csv(roc, out_dir + "/" + roc_file);
                if (config.emit_svg)
                    write_roc_svg(roc, out_dir + "/roc_" + cell_name + ".svg");

                const PredictionDistribution dist = empirical_distribution(cv.pooled_confusion);

                ordered_json cj;
                cj["classifier"] = spec.name();
                cj["features"] = to_string(cell.subset);
                cj["subsample"] = config.subsamples[cell.subsample_index].name;
                ordered_json per_class = ordered_json::array();
                for (int c = 0; c < kNumClasses; ++c) {
                    ordered_json entry;
                    entry["n"] = c + 1;
                    entry["f1_mean"] = cv.f1_mean[c];
                    entry["f1_sd"] = cv.f1_sd[c];
                    entry["precision"] = cv.precision[c];
                    entry["recall"] = cv.recall[c];
                    per_class.push_back(std::move(entry));
                }
                cj["per_class"] = std::move(per_class);
                cj["macro_f1"] = cv.macro_f1_mean;
                cj["macro_f1_sd"] = cv.macro_f1_sd;
                ordered_json confusion_rows = ordered_json::array();
                for (int t = 0; t < kNumClasses; ++t) {
                    ordered_json row = ordered_json::array();
                    for (int p = 0; p < kNumClasses; ++p)
                        row.push_back(cv.pooled_confusion.counts[t][p]);
                    confusion_rows.push_back(std::move(row));
                }
                cj["confusion"] = std::move(confusion_rows);
                cj["roc"] = roc_file;
                cj["auc"] = roc.auc;
                cj["fpr_at_tpr95"] = fpr_at_tpr(roc, 0.95);
                ordered_json dist_rows = ordered_json::array();
                for (int n = 0; n < kNumClasses; ++n) {
                    ordered_json row = ordered_json::array();
                    for (int k = 0; k < kNumClasses; ++k) row.push_back(dist.p[n][k]);
                    dist_rows.push_back(std::move(row));
                }
                cj["pred_distribution"] = std::move(dist_rows);
                if (!cv.fold_scalings.empty()) {
                    ordered_json scalings = ordered_json::array();
                    for (const ScalingParams& params : cv.fold_scalings)
                        scalings.push_back(scaling_to_json(params));
                    cj["scaling"] = std::move(scalings);
                }
                cj["warnings"] = cv.warnings;
                cell_reports[index] = std::move(cj);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failure_message = e.what();
                failed.store(true);
                return;
            }
        }
    };

    const int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failed.load()) throw DataError("experiment cell failed: " + failure_message);

    ordered_json report;
    report["config_echo"] = config_to_json(config);
    ordered_json cells_json = ordered_json::array();
    for (ordered_json& cj : cell_reports) cells_json.push_back(std::move(cj));
    report["cells"] = std::move(cells_json);

    std::ofstream out(out_dir + "/report.json");
    if (!out) throw DataError("cannot write report to " + out_dir);
    out << report.dump(2) << '\n';
    if (!out) throw DataError("report write failed in " + out_dir);
    return report;
}

} // namespace nodecount
