// Acceptance suite: executes every release criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nodecount/classifier.hpp"
#include "nodecount/dataset.hpp"
#include "nodecount/eta_error.hpp"
#include "nodecount/evaluation.hpp"
#include "nodecount/generator.hpp"
#include "nodecount/metrics.hpp"
#include "nodecount/naive_bayes.hpp"
#include "nodecount/rng.hpp"
#include "nodecount/svm.hpp"
#include "../oracles.hpp"

using namespace nodecount;

namespace {

const std::string kBin = NODECOUNT_BIN_PATH;
const std::string kData = NODECOUNT_DATA_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string temp_dir(const std::string& name) {
    const auto dir = std::filesystem::current_path() / "acceptance_tmp" / name;
    std::filesystem::create_directories(dir);
    return dir.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_cli(const std::string& args, const std::string& stdout_path) {
    const std::string command = kBin + " " + args + " > " + stdout_path + " 2>&1";
    return std::system(command.c_str());
}

// --------------------------------------------------------------------------
// criterion 1: delta reproduction from the bundled reference tables

Outcome criterion_delta() {
    Outcome outcome;
    const auto start = Clock::now();
    const std::string out = temp_dir("delta") + "/stdout.txt";
    const int rc = run_cli("delta --errors " + kData + "/reference_eta_errors.csv --dist " +
                               kData + "/reference_prediction_distribution.csv",
                           out);
    const double elapsed = seconds_since(start);
    if (rc != 0) return {false, "delta subcommand exited with " + std::to_string(rc)};

    const std::string text = read_file(out);
    const std::array<double, 4> expected = {10.3, 10.5, 13.4, 9.2};
    std::array<double, 4> got{};
    for (int n = 0; n < 4; ++n) {
        const std::string needle = "delta[" + std::to_string(n + 1) + "] = ";
        const auto pos = text.find(needle);
        if (pos == std::string::npos) return {false, "missing '" + needle + "' in output"};
        got[n] = std::strtod(text.c_str() + pos + needle.size(), nullptr);
        if (std::abs(got[n] - expected[n]) > 0.2)
            return {false, "delta[" + std::to_string(n + 1) + "] = " + std::to_string(got[n]) +
                               ", expected " + std::to_string(expected[n]) + " +/- 0.2"};
    }
    if (elapsed >= 1.0) return {false, "took " + std::to_string(elapsed) + " s (limit 1 s)"};
    char buf[160];
    std::snprintf(buf, sizeof(buf), "{%.2f, %.2f, %.2f, %.2f} in %.2f s", got[0], got[1], got[2],
                  got[3], elapsed);
    outcome.detail = buf;
    return outcome;
}

// --------------------------------------------------------------------------
// criterion 2: solver vs brute-force dual oracle + KKT on 50 random problems

Outcome criterion_svm_oracle() {
    const auto start = Clock::now();
    Rng rng(20260808);
    const double costs[] = {0.1, 1.0, 10.0};
    double worst_rel = 0.0;
    double worst_kkt = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 3 + rng.below(6);  // up to 8 points
        const std::size_t dims = 1 + rng.below(3);
        FeatureMatrix x(m, dims);
        std::vector<int> y(m);
        bool pos = false;
        bool neg = false;
        do {
            pos = neg = false;
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < dims; ++j) x.at(i, j) = 4.0 * rng.unit() - 2.0;
                y[i] = rng.unit() < 0.5 ? 1 : -1;
                (y[i] == 1 ? pos : neg) = true;
            }
        } while (!pos || !neg);
        const Kernel kernel = (trial % 2 == 0)
                                  ? Kernel{KernelKind::kLinear, 1.0}
                                  : Kernel{KernelKind::kRbf, 0.3 + 1.5 * rng.unit()};
        const double cost = costs[trial % 3];

        const DualSolution solution =
            solve_dual(x, y, kernel, cost, {1.0, 1.0}, {1e-6, 200000, 4096, 512});
        if (!solution.converged) return {false, "solver failed to converge on a toy problem"};

        std::vector<std::vector<double>> k(m, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) k[i][j] = kernel(x.row(i), x.row(j), dims);
        const double oracle =
            oracles::dual_active_set_maximum(k, y, std::vector<double>(m, cost));
        const double rel =
            std::abs(solution.objective - oracle) / std::max(1.0, std::abs(oracle));
        worst_rel = std::max(worst_rel, rel);
        if (rel > 1e-3)
            return {false, "objective " + std::to_string(solution.objective) + " vs oracle " +
                               std::to_string(oracle)};

        // KKT residuals with the model bias
        for (std::size_t i = 0; i < m; ++i) {
            double u = solution.model.bias;
            for (std::size_t j = 0; j < m; ++j)
                u += solution.alpha[j] * y[j] * k[j][i];
            const double yf = y[i] * u;
            double violation = 0.0;
            if (solution.alpha[i] <= 0.0)
                violation = 1.0 - yf;
            else if (solution.alpha[i] >= cost)
                violation = yf - 1.0;
            else
                violation = std::abs(yf - 1.0);
            worst_kkt = std::max(worst_kkt, violation);
            if (violation > 1e-3)
                return {false, "KKT violation " + std::to_string(violation) + " on trial " +
                                   std::to_string(trial)};
        }
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 30.0) return {false, "took " + std::to_string(elapsed) + " s (limit 30 s)"};
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "50 problems, worst rel gap %.2e, worst KKT %.2e, %.2f s", worst_rel,
                  worst_kkt, elapsed);
    return {true, buf};
}

// --------------------------------------------------------------------------
// criterion 3: analytic two-point instance at C = 1e6

Outcome criterion_svm_analytic() {
    FeatureMatrix x(2, 1);
    x.at(0, 0) = 0.0;
    x.at(1, 0) = 2.0;
    const DualSolution solution = solve_dual(x, {-1, 1}, Kernel{KernelKind::kLinear}, 1e6);
    double w = 0.0;
    for (int i = 0; i < 2; ++i) w += solution.alpha[i] * (i == 0 ? -1 : 1) * x.at(i, 0);
    if (std::abs(w - 1.0) > 1e-4)
        return {false, "w = " + std::to_string(w) + ", expected 1"};
    if (std::abs(solution.model.bias + 1.0) > 1e-4)
        return {false, "b = " + std::to_string(solution.model.bias) + ", expected -1"};
    char buf[96];
    std::snprintf(buf, sizeof(buf), "w = %.6f, b = %.6f", w, solution.model.bias);
    return {true, buf};
}

// --------------------------------------------------------------------------
// criterion 4: naive bayes analytic posteriors and MAP/ML equivalence

Outcome criterion_nb_analytic() {
    Rng rng(404);
    double worst = 0.0;
    for (int instance = 0; instance < 40; ++instance) {
        // two live Gaussians plus two parked far away
        const double m1 = 10.0 * rng.unit() - 5.0;
        const double m2 = m1 + 0.5 + 8.0 * rng.unit();
        const double v1 = 0.2 + 4.0 * rng.unit();
        const double v2 = 0.2 + 4.0 * rng.unit();
        NaiveBayesModel model;
        model.config = {Likelihood::kGaussian, Prior::kUniform, false};
        model.n_features = 1;
        model.prior = {0.25, 0.25, 0.25, 0.25};
        model.feature_gaussians[0] = {{m1, v1}};
        model.feature_gaussians[1] = {{m2, v2}};
        model.feature_gaussians[2] = {{m1 + 500.0, v1}};
        model.feature_gaussians[3] = {{m2 + 900.0, v2}};

        for (int probe = 0; probe < 25; ++probe) {
            const double v = m1 - 3.0 + (m2 - m1 + 6.0) * rng.unit();
            const auto post = model.posterior(&v, 1);
            const std::array<std::pair<double, double>, 4> params = {
                std::pair{m1, v1}, {m2, v2}, {m1 + 500.0, v1}, {m2 + 900.0, v2}};
            for (int c = 0; c < 4; ++c) {
                const long double expected =
                    std::log(0.25L) +
                    oracles::gaussian_log_pdf_ld(v, params[c].first, params[c].second);
                const double diff =
                    std::abs(post.log_unnormalized[c] - static_cast<double>(expected));
                const double rel = diff / std::max(1.0, std::abs(static_cast<double>(expected)));
                worst = std::max(worst, rel);
                if (rel > 1e-9)
                    return {false, "log-posterior off by relative " + std::to_string(rel)};
            }
        }
    }

    // uniform-prior MAP equals the ML decision on 1000 probes of a fitted model
    FeatureMatrix x(48, 1);
    std::vector<int> y(48);
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 12; ++r) {
            x.at(c * 12 + r, 0) = 12.0 * c + 4.0 * rng.unit();
            y[c * 12 + r] = c + 1;
        }
    const NaiveBayesModel uniform = fit_naive_bayes(
        x, y, layout_of(FeatureSubset::kEtaOnly), {Likelihood::kGaussian, Prior::kUniform, false});
    for (int probe = 0; probe < 1000; ++probe) {
        const double v = 60.0 * rng.unit() - 6.0;
        int ml = 1;
        double best = -1e300;
        for (int c = 0; c < 4; ++c) {
            const auto& g = uniform.feature_gaussians[c][0];
            const double ll =
                static_cast<double>(oracles::gaussian_log_pdf_ld(v, g.mean, g.var));
            if (ll > best) {
                best = ll;
                ml = c + 1;
            }
        }
        if (uniform.predict(&v, 1) != ml)
            return {false, "MAP with uniform prior disagreed with ML at x = " +
                               std::to_string(v)};
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst relative log-posterior error %.2e", worst);
    return {true, buf};
}

// --------------------------------------------------------------------------
// criterion 5: knn exactness against the full-sort reference

Outcome criterion_knn_exact() {
    Rng rng(505);
    std::size_t checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 10 + rng.below(491);  // up to 500 points
        const std::size_t dims = 1 + rng.below(3);
        FeatureMatrix x(m, dims);
        std::vector<int> y(m);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < dims; ++j) x.at(i, j) = 30.0 * rng.unit() - 15.0;
            y[i] = 1 + static_cast<int>(rng.below(4));
        }
        const int k = 1 + static_cast<int>(rng.below(std::min<std::size_t>(m, 15)));
        const KnnModel model = KnnModel::fit(x, y, k);
        for (int probe = 0; probe < 10; ++probe) {
            std::vector<double> q(dims);
            for (double& value : q) value = 34.0 * rng.unit() - 17.0;
            ++checked;
            if (model.predict(q.data(), dims).label != oracles::knn_full_sort(x, y, k, q.data()))
                return {false, "mismatch on trial " + std::to_string(trial)};
        }
    }
    return {true, std::to_string(checked) + " probes agreed"};
}

// --------------------------------------------------------------------------
// criterion 6: metrics suite

Outcome criterion_metrics() {
    ConfusionMatrix half;
    half.counts[0][0] = 1;
    half.counts[0][1] = 1;
    half.counts[1][0] = 1;
    half.counts[1][1] = 1;
    if (std::abs(f1_per_class(half).per_class[0].f1 - 0.5) > 1e-12)
        return {false, "P=R=0.5 did not give F1=0.5"};

    ConfusionMatrix diag;
    for (int c = 0; c < 4; ++c) diag.counts[c][c] = 9;
    if (std::abs(f1_per_class(diag).macro_f1 - 1.0) > 1e-12)
        return {false, "diagonal confusion did not give macro F1 = 1"};

    Rng rng(606);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 10 + rng.below(191);
        std::vector<BinaryInstance> instances(m);
        std::vector<bool> positive(m);
        std::vector<double> scores(m);
        for (std::size_t i = 0; i < m; ++i) {
            positive[i] = rng.unit() < 0.5;
            scores[i] = std::round(rng.unit() * 12.0) / 12.0;
            instances[i] = {scores[i], static_cast<bool>(positive[i])};
        }
        positive[0] = true;
        instances[0].positive = true;
        positive[1] = false;
        instances[1].positive = false;
        const double trapezoid = roc_from_binary(instances).auc;
        const double pairs = oracles::auc_pair_count(positive, scores);
        if (std::abs(trapezoid - pairs) > 1e-9)
            return {false, "AUC " + std::to_string(trapezoid) + " vs pair count " +
                               std::to_string(pairs)};
    }

    const RocCurve perfect =
        roc_from_binary({{0.9, true}, {0.8, true}, {0.2, false}, {0.1, false}});
    if (perfect.auc != 1.0) return {false, "perfect scores gave AUC != 1"};
    const RocCurve flat =
        roc_from_binary({{0.5, true}, {0.5, true}, {0.5, false}, {0.5, false}});
    if (flat.auc != 0.5) return {false, "uninformative scores gave AUC != 0.5"};
    if (std::abs(fpr_at_tpr(flat, 0.95) - 0.95) > 1e-12)
        return {false, "diagonal curve fpr@tpr=0.95 != 0.95"};
    return {true, "F1 hand values, AUC equivalence, exact endpoint curves"};
}

// --------------------------------------------------------------------------
// criteria 7 and 8 share the generated campaign

struct StudyResults {
    // [classifier][subset] -> cross-validation result
    std::map<std::string, std::map<std::string, CrossValidationResult>> cells;
};

Outcome criterion_replication() {
    const auto start = Clock::now();
    GeneratorConfig gen = GeneratorConfig::defaults();
    gen.seed = 42;
    const Dataset base = generate(gen);
    const FoldPlan plan = make_folds(base, 5, 42);

    std::vector<std::pair<std::string, ClassifierSpec>> classifiers;
    {
        ClassifierSpec nb;
        nb.config = NaiveBayesSpec{Likelihood::kGaussian, Prior::kEmpirical, true};
        ClassifierSpec svm_l;
        svm_l.config = SvmSpec{KernelKind::kLinear, 1.0, std::nullopt, false, 1e-3, 100000};
        ClassifierSpec svm_r;
        svm_r.config = SvmSpec{KernelKind::kRbf, 1.0, std::nullopt, false, 1e-3, 100000};
        ClassifierSpec knn;
        knn.config = KnnSpec{5};
        classifiers = {{"nb", nb}, {"svm-l", svm_l}, {"svm-r", svm_r}, {"knn", knn}};
    }

    std::map<std::string, std::map<std::string, CrossValidationResult>> results;
    for (const auto& [name, spec] : classifiers) {
        for (FeatureSubset subset : kAllFeatureSubsets) {
            const Dataset projected = project(base, subset);
            results[name][to_string(subset)] = cross_validate(projected, plan, spec);
        }
    }

    std::string detail;
    const std::string full = to_string(FeatureSubset::kEtaPowerDistance);
    for (const auto& [name, spec] : classifiers) {
        (void)spec;
        const CrossValidationResult& cv = results[name][full];
        int best = 0;
        int worst = 0;
        for (int c = 1; c < 4; ++c) {
            if (cv.f1_mean[c] > cv.f1_mean[best]) best = c;
            if (cv.f1_mean[c] < cv.f1_mean[worst]) worst = c;
        }
        if (best != 0)
            return {false, name + ": class N=1 is not the best (F1 " +
                               std::to_string(cv.f1_mean[best]) + " at N=" +
                               std::to_string(best + 1) + ")"};
        if (worst != 2)
            return {false, name + ": class N=3 is not the hardest (worst is N=" +
                               std::to_string(worst + 1) + ")"};
        detail += name + " macro " + std::to_string(cv.macro_f1_mean).substr(0, 5) + "  ";
    }

    if (results["svm-r"][full].macro_f1_mean < 0.85)
        return {false, "svm-r macro F1 " + std::to_string(results["svm-r"][full].macro_f1_mean) +
                           " < 0.85"};
    if (results["knn"][full].macro_f1_mean < 0.85)
        return {false,
                "knn macro F1 " + std::to_string(results["knn"][full].macro_f1_mean) + " < 0.85"};

    const std::string eta_only = to_string(FeatureSubset::kEtaOnly);
    for (const auto& [name, spec] : classifiers) {
        (void)spec;
        const double baseline = results[name][eta_only].macro_f1_mean;
        for (FeatureSubset subset :
             {FeatureSubset::kEtaPower, FeatureSubset::kEtaDistance,
              FeatureSubset::kEtaPowerDistance}) {
            const double macro = results[name][to_string(subset)].macro_f1_mean;
            if (macro < baseline - 0.02)
                return {false, name + " on " + to_string(subset) + ": macro " +
                                   std::to_string(macro) + " fell more than 0.02 below eta-only " +
                                   std::to_string(baseline)};
        }
    }

    const double elapsed = seconds_since(start);
    if (elapsed >= 300.0) return {false, "took " + std::to_string(elapsed) + " s (limit 300 s)"};
    char buf[64];
    std::snprintf(buf, sizeof(buf), "(%.0f s)", elapsed);
    return {true, detail + buf};
}

Outcome criterion_unbalanced() {
    GeneratorConfig gen = GeneratorConfig::defaults();
    gen.seed = 42;
    const Dataset base = generate(gen);

    SubsampleSpec spec_a;
    spec_a.seed = 42;
    spec_a.fraction = {0.10, 0.20, 0.50, 1.00};
    const Dataset sub_a = subsample(base, spec_a);
    if (sub_a.class_counts() != std::array<std::size_t, 4>{135, 270, 675, 1350})
        return {false, "10-20-50-100 counts off"};

    SubsampleSpec spec_b;
    spec_b.seed = 42;
    spec_b.fraction = {0.20, 0.30, 0.40, 1.00};
    if (subsample(base, spec_b).class_counts() != std::array<std::size_t, 4>{270, 405, 540, 1350})
        return {false, "20-30-40-100 counts off"};

    // the unbalanced protocol runs on the ETA feature alone
    const Dataset projected = project(sub_a, FeatureSubset::kEtaOnly);
    const FoldPlan plan = make_folds(projected, 5, 42);
    ClassifierSpec with_prior;
    with_prior.config = NaiveBayesSpec{Likelihood::kGaussian, Prior::kEmpirical, true};
    ClassifierSpec uniform;
    uniform.config = NaiveBayesSpec{Likelihood::kGaussian, Prior::kUniform, true};
    const double macro_prior = cross_validate(projected, plan, with_prior).macro_f1_mean;
    const double macro_uniform = cross_validate(projected, plan, uniform).macro_f1_mean;
    if (macro_prior < macro_uniform)
        return {false, "NB prior macro " + std::to_string(macro_prior) +
                           " < NB uniform macro " + std::to_string(macro_uniform)};
    char buf[96];
    std::snprintf(buf, sizeof(buf), "counts exact; NB prior %.3f >= NB uniform %.3f",
                  macro_prior, macro_uniform);
    return {true, buf};
}

// --------------------------------------------------------------------------
// criterion 9: byte-identical reports through the CLI

Outcome criterion_determinism() {
    const std::string dir = temp_dir("determinism");
    const std::string config_path = dir + "/config.json";
    {
        std::ofstream out(config_path);
        out << R"({
            "data": {"generator": {"repetitions": 2, "seed": 5}},
            "features": ["eta", "eta_power_distance"],
            "classifiers": [
                {"type": "knn", "k": 5},
                {"type": "svm", "kernel": "linear", "cost": 1.0},
                {"type": "nb", "likelihood": "gaussian", "prior": "prior"}
            ],
            "subsamples": [{"name": "full"}, {"fractions": [0.2, 0.3, 0.4, 1.0]}],
            "folds": 5,
            "seed": 5
        })";
    }
    const std::string run1 = dir + "/run1";
    const std::string run2 = dir + "/run2";
    if (run_cli("evaluate --config " + config_path + " --out " + run1, dir + "/log1.txt") != 0)
        return {false, "first evaluate run failed"};
    if (run_cli("evaluate --config " + config_path + " --out " + run2 + " --jobs 2",
                dir + "/log2.txt") != 0)
        return {false, "second evaluate run failed"};
    const std::string a = read_file(run1 + "/report.json");
    const std::string b = read_file(run2 + "/report.json");
    if (a.empty()) return {false, "empty report"};
    if (a != b) return {false, "reports differ between identical runs"};
    return {true, std::to_string(a.size()) + " byte reports identical (serial vs 2 jobs)"};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"delta reproduction from bundled reference tables", criterion_delta},
        {"svm dual objective and KKT vs brute-force oracle", criterion_svm_oracle},
        {"svm analytic two-point instance (w=1, b=-1)", criterion_svm_analytic},
        {"naive bayes analytic posteriors and MAP=ML", criterion_nb_analytic},
        {"knn exactness vs full-sort reference", criterion_knn_exact},
        {"metrics suite (F1, AUC equivalence, cutoffs)", criterion_metrics},
        {"qualitative replication on the calibrated generator", criterion_replication},
        {"unbalanced protocol (subsample counts, NB prior ordering)", criterion_unbalanced},
        {"deterministic byte-identical reports", criterion_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %zu: %s%s%s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), outcome.detail.empty() ? "" : " — ",
                    outcome.detail.c_str());
        std::fflush(stdout);
        failures += outcome.pass ? 0 : 1;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
