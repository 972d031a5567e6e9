#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nodecount/knn.hpp"
#include "nodecount/naive_bayes.hpp"
#include "nodecount/svm.hpp"
#include "nodecount/types.hpp"

namespace nodecount {

struct NaiveBayesSpec {
    Likelihood likelihood = Likelihood::kGaussian;
    Prior prior = Prior::kEmpirical;
    bool conditioned = true;
};

struct SvmSpec {
    KernelKind kernel = KernelKind::kRbf;
    double cost = 1.0;
    std::optional<double> gamma;  // default 1/n
    bool weighted = false;
    double tolerance = 1e-3;
    std::size_t max_iterations = 100000;
};

struct KnnSpec {
    int k = 5;
};

/// One configured classifier of the experiment grid. Naive Bayes consumes raw
/// features (the Poisson pmf needs ETA in whole seconds); SVM and kNN train on
/// standardized features.
struct ClassifierSpec {
    std::variant<NaiveBayesSpec, SvmSpec, KnnSpec> config = SvmSpec{};

    std::string name() const;
    bool wants_standardized() const;
};

/// Unified prediction surface over the three model families.
class TrainedClassifier {
public:
    virtual ~TrainedClassifier() = default;
    virtual int predict(const double* x, std::size_t n) const = 0;
    /// Per-class ranking scores for ROC analysis: NB posterior probability,
    /// SVM votes plus squashed margins, kNN neighbor fractions.
    virtual std::array<double, kNumClasses> class_scores(const double* x,
                                                         std::size_t n) const = 0;
    virtual std::vector<std::string> warnings() const { return {}; }
};

std::unique_ptr<TrainedClassifier> fit_classifier(const ClassifierSpec& spec,
                                                  const FeatureMatrix& x,
                                                  const std::vector<int>& y,
                                                  const FeatureLayout& layout);

} // namespace nodecount
