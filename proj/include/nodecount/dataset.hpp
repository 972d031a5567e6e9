#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nodecount/types.hpp"

namespace nodecount {

/// Immutable collection of labeled experiments plus the active feature
/// subset. The matrix view is M x n with n = dimension(subset).
class Dataset {
public:
    Dataset() = default;
    /// Validates every example; throws DataError on the first violation.
    Dataset(std::vector<LabeledExample> examples, FeatureSubset subset);

    std::size_t size() const { return examples_.size(); }
    bool empty() const { return examples_.empty(); }
    FeatureSubset subset() const { return subset_; }
    const std::vector<LabeledExample>& examples() const { return examples_; }
    const LabeledExample& operator[](std::size_t i) const { return examples_[i]; }

    FeatureMatrix matrix() const;
    std::vector<int> labels() const;
    /// Counts per node-count class, index 0 holds N=1.
    std::array<std::size_t, kNumClasses> class_counts() const;

private:
    std::vector<LabeledExample> examples_;
    FeatureSubset subset_ = FeatureSubset::kEtaPowerDistance;
};

/// CSV schema: header "eta_s,tx_power_dbm,distance_m,channel,time_of_day,n_nodes",
/// UTF-8, '.' decimal separator. Errors report line number and field.
Dataset load_csv(const std::string& path);
void write_csv(const Dataset& dataset, const std::string& path);

/// Same examples, different feature view. Labels and row count unchanged.
Dataset project(const Dataset& dataset, FeatureSubset subset);

/// Stratified fold assignment: per-class counts differ by at most one across
/// folds. Deterministic given the seed.
struct FoldPlan {
    int fold_count = 5;
    std::vector<int> assignment;  // fold index per example, in [0, fold_count)
    std::uint64_t seed = 0;
};

/// Throws std::invalid_argument if fold_count < 2 or any class has fewer
/// examples than fold_count.
FoldPlan make_folds(const Dataset& dataset, int fold_count, std::uint64_t seed);

/// Per-class keep fractions in (0, 1], index 0 holds N=1.
struct SubsampleSpec {
    std::array<double, kNumClasses> fraction{1.0, 1.0, 1.0, 1.0};
    std::uint64_t seed = 0;
};

/// Keeps round_half_up(count * fraction) examples per class, sampled without
/// replacement. Under a fixed seed a smaller fraction selects a subset of a
/// larger fraction's selection; original example order is preserved.
Dataset subsample(const Dataset& dataset, const SubsampleSpec& spec);

struct ScalingParams {
    std::vector<double> mean;
    std::vector<double> stddev;          // sample sd; 1.0 where zero_variance
    std::vector<bool> zero_variance;     // feature fell back to centering only
};

struct StandardizeResult {
    FeatureMatrix train;
    FeatureMatrix test;
    ScalingParams params;
};

/// Centers and scales each feature to sample mean 0 / sample sd 1 using the
/// training rows only; the test matrix is transformed with the training
/// parameters. Zero-variance features are centered and flagged.
StandardizeResult standardize(const FeatureMatrix& train, const FeatureMatrix& test);

/// Applies previously fitted parameters to a single feature vector in place.
void apply_scaling(const ScalingParams& params, double* x, std::size_t n);

} // namespace nodecount
