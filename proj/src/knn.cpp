#include "nodecount/knn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nodecount {

KnnModel KnnModel::fit(const FeatureMatrix& x, const std::vector<int>& y, int k) {
    if (x.rows == 0 || x.rows != y.size())
        throw std::invalid_argument("knn: row/label count mismatch or empty training set");
    if (k < 1 || static_cast<std::size_t>(k) > x.rows)
        throw std::invalid_argument("knn: k=" + std::to_string(k) + " outside 1.." +
                                    std::to_string(x.rows));
    for (int label : y)
        if (label < 1 || label > kNumClasses)
            throw std::invalid_argument("knn: label outside 1..4");
    KnnModel model;
    model.x_ = x;
    model.y_ = y;
    model.k_ = k;
    return model;
}

KnnModel::Prediction KnnModel::predict(const double* x, std::size_t n) const {
    if (n != x_.cols)
        throw std::invalid_argument("knn predict: expected " + std::to_string(x_.cols) +
                                    " features, got " + std::to_string(n));

    std::vector<std::pair<double, std::size_t>> dist(x_.rows);
    for (std::size_t i = 0; i < x_.rows; ++i) {
        const double* row = x_.row(i);
        double d2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = row[j] - x[j];
            d2 += d * d;
        }
        dist[i] = {d2, i};
    }
    const std::size_t k = static_cast<std::size_t>(k_);
    std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
    std::sort(dist.begin(), dist.begin() + k);

    Prediction prediction;
    std::array<int, kNumClasses> votes{};
    std::array<double, kNumClasses> dist_sum{};
    for (std::size_t r = 0; r < k; ++r) {
        const int label = y_[dist[r].second];
        ++votes[label - 1];
        dist_sum[label - 1] += std::sqrt(dist[r].first);
    }

    int best = 1;
    for (int c = 2; c <= kNumClasses; ++c) {
        const int vc = votes[c - 1];
        const int vb = votes[best - 1];
        if (vc > vb) {
            best = c;
        } else if (vc == vb && vc > 0) {
            const double mean_c = dist_sum[c - 1] / vc;
            const double mean_b = dist_sum[best - 1] / vb;
            if (mean_c < mean_b) best = c;
        }
    }
    prediction.label = best;
    for (int c = 0; c < kNumClasses; ++c)
        prediction.class_fraction[c] = static_cast<double>(votes[c]) / static_cast<double>(k);
    return prediction;
}

} // namespace nodecount
