#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nodecount/types.hpp"

namespace nodecount {

enum class KernelKind { kLinear, kRbf };

std::string to_string(KernelKind kind);

struct Kernel {
    KernelKind kind = KernelKind::kLinear;
    double gamma = 1.0;  // RBF only

    double operator()(const double* u, const double* v, std::size_t n) const;
};

/// Soft-margin binary SVM in dual form. Only rows with a strictly positive
/// multiplier are stored; sv_coef holds alpha_i * y_i.
struct BinarySvmModel {
    FeatureMatrix support_vectors;
    std::vector<double> sv_coef;
    double bias = 0.0;
    Kernel kernel;
    double cost = 1.0;
    std::pair<int, int> class_pair{1, 2};  // (positive N, negative N)
    bool converged = true;
    std::size_t iterations = 0;
};

/// Pre-sign decision value: sum_i alpha_i y_i k(sv_i, x) + b.
/// Throws std::invalid_argument on dimension mismatch.
double decision_value(const BinarySvmModel& model, const double* x, std::size_t n);

struct SolverOptions {
    double tolerance = 1e-3;
    std::size_t max_iterations = 100000;
    /// Full Gram matrix is cached up to this many rows; beyond it single
    /// kernel rows are cached with LRU eviction.
    std::size_t full_cache_limit = 4096;
    std::size_t lru_cache_rows = 512;
};

struct DualSolution {
    BinarySvmModel model;
    std::vector<double> alpha;  // per training row, in [0, C_i]
    double objective = 0.0;     // dual objective at alpha
    bool converged = true;
    std::size_t iterations = 0;
};

/// Maximizes sum_i alpha_i - 1/2 sum_ij y_i y_j alpha_i alpha_j k(x_i, x_j)
/// subject to 0 <= alpha_i <= C_i and sum_i alpha_i y_i = 0, by repeatedly
/// solving the two-variable subproblem of the maximal-KKT-violating pair.
/// Per-example cost C_i = cost * class_weight(+1 or -1 side). Labels must be
/// +1/-1 with both classes present. A run that exhausts max_iterations
/// returns the best iterate with converged = false.
DualSolution solve_dual(const FeatureMatrix& x, const std::vector<int>& y, const Kernel& kernel,
                        double cost, std::pair<double, double> class_weight = {1.0, 1.0},
                        const SolverOptions& options = {});

enum class SvmWeighting { kNone, kInverseFrequency };

/// weight_k = mean_class_count / count_k, so every class carries the same
/// total cost mass; all ones for balanced data.
std::array<double, kNumClasses> inverse_frequency_weights(
    const std::array<std::size_t, kNumClasses>& counts);

/// One binary model per unordered class pair, 6 for 4 classes, ordered
/// (1,2),(1,3),(1,4),(2,3),(2,4),(3,4). The smaller node count is the
/// positive side of each pair.
struct OvoSvmModel {
    std::vector<BinarySvmModel> models;
    std::array<double, kNumClasses> class_weight{1.0, 1.0, 1.0, 1.0};
    bool all_converged = true;
};

/// Throws std::invalid_argument unless all four classes are present.
OvoSvmModel fit_ovo(const FeatureMatrix& x, const std::vector<int>& y, const Kernel& kernel,
                    double cost, SvmWeighting weighting, const SolverOptions& options = {});

struct OvoPrediction {
    int label = 1;
    std::array<int, kNumClasses> votes{};
    /// Vote count plus the logistic-squashed sum of signed decision values;
    /// ranks candidates for ROC analysis.
    std::array<double, kNumClasses> scores{};
};

/// Majority vote over the 6 binary models. Vote ties break toward the class
/// with the larger signed-margin sum, then toward the smaller node count.
OvoPrediction predict_ovo(const OvoSvmModel& model, const double* x, std::size_t n);

} // namespace nodecount
