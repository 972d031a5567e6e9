#pragma once

#include <array>
#include <vector>

#include "nodecount/types.hpp"

namespace nodecount {

/// Lazy learner: stores the training rows verbatim and classifies by majority
/// label among the k nearest under the Euclidean metric.
class KnnModel {
public:
    /// Throws std::invalid_argument when k < 1 or k > number of rows.
    static KnnModel fit(const FeatureMatrix& x, const std::vector<int>& y, int k);

    struct Prediction {
        int label = 1;
        /// Neighbor vote fraction per class; serves as the ROC score.
        std::array<double, kNumClasses> class_fraction{};
    };

    /// Exact k-nearest by linear scan. Distance ties break by training-set
    /// order; label ties break by smaller mean neighbor distance, then by
    /// smaller node count.
    Prediction predict(const double* x, std::size_t n) const;

    int k() const { return k_; }
    std::size_t size() const { return x_.rows; }
    const FeatureMatrix& stored() const { return x_; }
    const std::vector<int>& stored_labels() const { return y_; }

private:
    FeatureMatrix x_;
    std::vector<int> y_;
    int k_ = 1;
};

} // namespace nodecount
