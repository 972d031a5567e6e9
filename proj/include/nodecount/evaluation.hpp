#pragma once

#include <array>
#include <string>
#include <vector>

#include "nodecount/classifier.hpp"
#include "nodecount/dataset.hpp"
#include "nodecount/metrics.hpp"

namespace nodecount {

/// Outcome of one k-fold evaluation: per-fold F1 reports plus predictions and
/// ranking scores for every example, gathered when its fold was held out.
struct CrossValidationResult {
    std::vector<F1Report> per_fold;
    ConfusionMatrix pooled_confusion;          // every example counted once
    std::vector<int> predictions;              // original dataset order
    std::vector<std::array<double, kNumClasses>> scores;
    std::vector<ScalingParams> fold_scalings;  // empty for raw-feature models

    std::array<double, kNumClasses> f1_mean{};
    std::array<double, kNumClasses> f1_sd{};   // sample sd over folds
    std::array<double, kNumClasses> precision{};  // from pooled confusion
    std::array<double, kNumClasses> recall{};
    double macro_f1_mean = 0.0;
    double macro_f1_sd = 0.0;

    std::vector<std::string> warnings;
};

/// Trains on the folds outside each held-out fold (standardizing on them when
/// the classifier asks for it) and evaluates on the held-out fold.
CrossValidationResult cross_validate(const Dataset& dataset, const FoldPlan& plan,
                                     const ClassifierSpec& spec);

} // namespace nodecount
