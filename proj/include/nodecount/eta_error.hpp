#pragma once

#include <array>
#include <optional>
#include <string>

#include "nodecount/metrics.hpp"
#include "nodecount/types.hpp"

namespace nodecount {

/// Percentage mean ETA-prediction errors indexed (actual node count, node
/// count assumed by the predictor), with optional per-cell standard
/// deviations.
struct ErrorMatrix {
    std::array<std::array<double, kNumClasses>, kNumClasses> mean{};
    std::optional<std::array<std::array<double, kNumClasses>, kNumClasses>> sd;
};

/// Row-stochastic matrix p[n][k] = P[predicted = k+1 | actual = n+1].
struct PredictionDistribution {
    std::array<std::array<double, kNumClasses>, kNumClasses> p{};
};

/// Validates entries in [0,1] and row sums within `tolerance` of 1, then
/// renormalizes each row exactly (printed reference tables carry 4-decimal
/// rounding). Throws std::invalid_argument on violations.
PredictionDistribution make_distribution(
    const std::array<std::array<double, kNumClasses>, kNumClasses>& rows,
    double tolerance = 1e-3);

/// p[n][k] = cm[n][k] / row_sum(n). Throws std::invalid_argument when a true
/// class has no examples.
PredictionDistribution empirical_distribution(const ConfusionMatrix& cm);

struct WeightedError {
    std::array<double, kNumClasses> delta{};  // percent, per actual node count
    /// First-order propagation of the per-cell sds under the same weights,
    /// assuming independent cells; present only when the matrix carries sds.
    std::optional<std::array<double, kNumClasses>> delta_sd;
};

/// delta_n = sum_k p[n][k] * err[n][k].
WeightedError weighted_error(const ErrorMatrix& err, const PredictionDistribution& dist);

/// CSV with one header row and four data rows. Four columns (means only) or
/// eight columns (mean, sd interleaved per predicted class).
ErrorMatrix load_error_matrix(const std::string& path);

/// CSV with one header row and four rows of four probabilities.
PredictionDistribution load_prediction_distribution(const std::string& path);

} // namespace nodecount
