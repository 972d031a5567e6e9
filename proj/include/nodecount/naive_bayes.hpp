#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "nodecount/types.hpp"

namespace nodecount {

enum class Likelihood { kGaussian, kPoisson };
enum class Prior { kUniform, kEmpirical };

std::string to_string(Likelihood kind);
std::string to_string(Prior kind);

struct NaiveBayesConfig {
    Likelihood likelihood = Likelihood::kGaussian;
    Prior prior = Prior::kEmpirical;
    /// When true, categorical network parameters (tx power, distance) select
    /// per-(class, category) ETA likelihood parameters instead of entering as
    /// independent features. The category itself contributes no
    /// class-dependent term. Poisson always uses this treatment: the pmf
    /// applies to the discretized ETA only.
    bool conditioned = true;
};

/// Per-class likelihood parameters and prior. All probability arithmetic runs
/// in log space.
struct NaiveBayesModel {
    struct Gaussian {
        double mean = 0.0;
        double var = 1.0;
    };
    /// ETA parameters of one (class) or (class, category) cell; `rate` is the
    /// Poisson rate over integer-rounded seconds.
    struct EtaCell {
        double mean = 0.0;
        double var = 1.0;
        double rate = 1.0;
    };

    NaiveBayesConfig config;
    std::size_t n_features = 0;
    std::size_t eta_column = 0;
    std::vector<std::size_t> categorical_columns;
    std::array<double, kNumClasses> prior{0.25, 0.25, 0.25, 0.25};

    /// Independent-feature mode: one Gaussian per (class, column).
    std::array<std::vector<Gaussian>, kNumClasses> feature_gaussians;
    /// Conditional mode: ETA parameters per categorical key; key values are
    /// the raw categorical column entries in column order.
    std::array<std::map<std::vector<double>, EtaCell>, kNumClasses> cells;
    /// Unconditioned per-class ETA parameters; used for cells with fewer than
    /// two training examples and for unseen categories.
    std::array<EtaCell, kNumClasses> fallback;

    struct PosteriorResult {
        std::array<double, kNumClasses> log_unnormalized{};
        std::array<double, kNumClasses> probability{};  // sums to 1
    };

    /// Throws std::invalid_argument on dimension mismatch.
    PosteriorResult posterior(const double* x, std::size_t n) const;

    /// MAP decision; exact ties resolve toward the smaller node count.
    int predict(const double* x, std::size_t n) const;
};

/// Estimates per-class parameters from the training rows. Requires every
/// class present, with at least two examples per class under the Gaussian
/// likelihood; throws std::invalid_argument otherwise.
NaiveBayesModel fit_naive_bayes(const FeatureMatrix& x, const std::vector<int>& y,
                                const FeatureLayout& layout, const NaiveBayesConfig& config);

} // namespace nodecount
