#include "nodecount/classifier.hpp"

#include <cmath>
#include <sstream>

namespace nodecount {

namespace {

std::string format_number(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

class NaiveBayesClassifier final : public TrainedClassifier {
public:
    explicit NaiveBayesClassifier(NaiveBayesModel model) : model_(std::move(model)) {}

    int predict(const double* x, std::size_t n) const override { return model_.predict(x, n); }

    std::array<double, kNumClasses> class_scores(const double* x, std::size_t n) const override {
        return model_.posterior(x, n).probability;
    }

private:
    NaiveBayesModel model_;
};

class OvoSvmClassifier final : public TrainedClassifier {
public:
    explicit OvoSvmClassifier(OvoSvmModel model) : model_(std::move(model)) {}

    int predict(const double* x, std::size_t n) const override {
        return predict_ovo(model_, x, n).label;
    }

    std::array<double, kNumClasses> class_scores(const double* x, std::size_t n) const override {
        return predict_ovo(model_, x, n).scores;
    }

    std::vector<std::string> warnings() const override {
        std::vector<std::string> out;
        for (const BinarySvmModel& binary : model_.models) {
            if (binary.converged) continue;
            out.push_back("svm pair (" + std::to_string(binary.class_pair.first) + "," +
                          std::to_string(binary.class_pair.second) +
                          ") hit the iteration budget before converging");
        }
        return out;
    }

private:
    OvoSvmModel model_;
};

class KnnClassifier final : public TrainedClassifier {
public:
    explicit KnnClassifier(KnnModel model) : model_(std::move(model)) {}

    int predict(const double* x, std::size_t n) const override {
        return model_.predict(x, n).label;
    }

    std::array<double, kNumClasses> class_scores(const double* x, std::size_t n) const override {
        return model_.predict(x, n).class_fraction;
    }

private:
    KnnModel model_;
};

} // namespace

std::string ClassifierSpec::name() const {
    if (const auto* nb = std::get_if<NaiveBayesSpec>(&config)) {
        return "nb-" + to_string(nb->likelihood) + "-" + to_string(nb->prior) +
               (nb->conditioned ? "-cond" : "-naive");
    }
    if (const auto* svm = std::get_if<SvmSpec>(&config)) {
        std::string name = "svm-" + to_string(svm->kernel) + "-c" + format_number(svm->cost);
        if (svm->gamma) name += "-g" + format_number(*svm->gamma);
        if (svm->weighted) name += "-weighted";
        return name;
    }
    const auto& knn = std::get<KnnSpec>(config);
    return "knn-" + std::to_string(knn.k);
}

bool ClassifierSpec::wants_standardized() const {
    return !std::holds_alternative<NaiveBayesSpec>(config);
}

std::unique_ptr<TrainedClassifier> fit_classifier(const ClassifierSpec& spec,
                                                  const FeatureMatrix& x,
                                                  const std::vector<int>& y,
                                                  const FeatureLayout& layout) {
    if (const auto* nb = std::get_if<NaiveBayesSpec>(&spec.config)) {
        NaiveBayesConfig config{nb->likelihood, nb->prior, nb->conditioned};
        return std::make_unique<NaiveBayesClassifier>(fit_naive_bayes(x, y, layout, config));
    }
    if (const auto* svm = std::get_if<SvmSpec>(&spec.config)) {
        Kernel kernel;
        kernel.kind = svm->kernel;
        kernel.gamma = svm->gamma.value_or(1.0 / static_cast<double>(x.cols));
        SolverOptions options;
        options.tolerance = svm->tolerance;
        options.max_iterations = svm->max_iterations;
        const SvmWeighting weighting =
            svm->weighted ? SvmWeighting::kInverseFrequency : SvmWeighting::kNone;
        return std::make_unique<OvoSvmClassifier>(
            fit_ovo(x, y, kernel, svm->cost, weighting, options));
    }
    const auto& knn = std::get<KnnSpec>(spec.config);
    return std::make_unique<KnnClassifier>(KnnModel::fit(x, y, knn.k));
}

} // namespace nodecount
