#include "nodecount/evaluation.hpp"

#include <cmath>
#include <stdexcept>

namespace nodecount {

namespace {

void mean_and_sample_sd(const std::vector<double>& values, double& mean, double& sd) {
    mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    if (values.size() < 2) {
        sd = 0.0;
        return;
    }
    double ss = 0.0;
    for (double v : values) {
        const double d = v - mean;
        ss += d * d;
    }
    sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
}

} // namespace

CrossValidationResult cross_validate(const Dataset& dataset, const FoldPlan& plan,
                                     const ClassifierSpec& spec) {
    if (plan.assignment.size() != dataset.size())
        throw std::invalid_argument("cross_validate: fold plan does not match dataset");

    const FeatureMatrix full = dataset.matrix();
    const std::vector<int> labels = dataset.labels();
    const FeatureLayout layout = layout_of(dataset.subset());

    CrossValidationResult result;
    result.predictions.assign(dataset.size(), 0);
    result.scores.assign(dataset.size(), {});

    for (int fold = 0; fold < plan.fold_count; ++fold) {
        std::vector<std::size_t> train_idx;
        std::vector<std::size_t> test_idx;
        for (std::size_t i = 0; i < dataset.size(); ++i)
            (plan.assignment[i] == fold ? test_idx : train_idx).push_back(i);
        if (train_idx.empty() || test_idx.empty())
            throw std::invalid_argument("cross_validate: fold " + std::to_string(fold) +
                                        " leaves train or test empty");

        FeatureMatrix train_x(train_idx.size(), full.cols);
        std::vector<int> train_y(train_idx.size());
        for (std::size_t r = 0; r < train_idx.size(); ++r) {
            const std::size_t i = train_idx[r];
            std::copy(full.row(i), full.row(i) + full.cols, train_x.row(r));
            train_y[r] = labels[i];
        }
        FeatureMatrix test_x(test_idx.size(), full.cols);
        std::vector<int> test_y(test_idx.size());
        for (std::size_t r = 0; r < test_idx.size(); ++r) {
            const std::size_t i = test_idx[r];
            std::copy(full.row(i), full.row(i) + full.cols, test_x.row(r));
            test_y[r] = labels[i];
        }

        if (spec.wants_standardized()) {
            StandardizeResult scaled = standardize(train_x, test_x);
            train_x = std::move(scaled.train);
            test_x = std::move(scaled.test);
            result.fold_scalings.push_back(std::move(scaled.params));
        }

        const auto model = fit_classifier(spec, train_x, train_y, layout);
        for (const std::string& w : model->warnings())
            result.warnings.push_back("fold " + std::to_string(fold) + ": " + w);

        std::vector<int> fold_pred(test_idx.size());
        for (std::size_t r = 0; r < test_idx.size(); ++r) {
            const double* row = test_x.row(r);
            fold_pred[r] = model->predict(row, test_x.cols);
            result.predictions[test_idx[r]] = fold_pred[r];
            result.scores[test_idx[r]] = model->class_scores(row, test_x.cols);
        }
        result.per_fold.push_back(f1_per_class(confusion(test_y, fold_pred)));
    }

    result.pooled_confusion = confusion(dataset.labels(), result.predictions);
    const F1Report pooled = f1_per_class(result.pooled_confusion);
    for (int c = 0; c < kNumClasses; ++c) {
        result.precision[c] = pooled.per_class[c].precision;
        result.recall[c] = pooled.per_class[c].recall;
        std::vector<double> f1s;
        for (const F1Report& fold : result.per_fold) f1s.push_back(fold.per_class[c].f1);
        mean_and_sample_sd(f1s, result.f1_mean[c], result.f1_sd[c]);
    }
    std::vector<double> macros;
    for (const F1Report& fold : result.per_fold) macros.push_back(fold.macro_f1);
    mean_and_sample_sd(macros, result.macro_f1_mean, result.macro_f1_sd);
    return result;
}

} // namespace nodecount
