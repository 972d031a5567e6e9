#include "nodecount/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <stdexcept>
#include <unordered_map>

namespace nodecount {

namespace {

constexpr double kAlphaSnap = 1e-12;

/// Gram matrix access with two backing strategies: the full symmetric matrix
/// for problem sizes where it comfortably fits, otherwise an LRU cache of
/// kernel rows.
class KernelCache {
public:
    KernelCache(const FeatureMatrix& x, const Kernel& kernel, const SolverOptions& options)
        : x_(x), kernel_(kernel), lru_limit_(std::max<std::size_t>(2, options.lru_cache_rows)) {
        full_ = x.rows <= options.full_cache_limit;
        if (full_) {
            gram_.assign(x.rows * x.rows, 0.0);
            for (std::size_t i = 0; i < x.rows; ++i) {
                for (std::size_t j = 0; j <= i; ++j) {
                    const double k = kernel_(x_.row(i), x_.row(j), x_.cols);
                    gram_[i * x.rows + j] = k;
                    gram_[j * x.rows + i] = k;
                }
            }
        }
    }

    const double* row(std::size_t i) {
        if (full_) return gram_.data() + i * x_.rows;
        auto it = index_.find(i);
        if (it != index_.end()) {
            order_.splice(order_.begin(), order_, it->second.first);
            return it->second.second.data();
        }
        if (order_.size() >= lru_limit_) {
            index_.erase(order_.back());
            order_.pop_back();
        }
        std::vector<double> values(x_.rows);
        for (std::size_t j = 0; j < x_.rows; ++j)
            values[j] = kernel_(x_.row(i), x_.row(j), x_.cols);
        order_.push_front(i);
        auto [pos, inserted] = index_.emplace(i, std::pair{order_.begin(), std::move(values)});
        (void)inserted;
        return pos->second.second.data();
    }

private:
    const FeatureMatrix& x_;
    Kernel kernel_;
    bool full_ = false;
    std::vector<double> gram_;
    std::size_t lru_limit_;
    std::list<std::size_t> order_;
    std::unordered_map<std::size_t, std::pair<std::list<std::size_t>::iterator,
                                              std::vector<double>>> index_;
};

} // namespace

std::string to_string(KernelKind kind) {
    return kind == KernelKind::kLinear ? "linear" : "rbf";
}

double Kernel::operator()(const double* u, const double* v, std::size_t n) const {
    if (kind == KernelKind::kLinear) {
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) dot += u[j] * v[j];
        return dot;
    }
    double dist2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = u[j] - v[j];
        dist2 += d * d;
    }
    return std::exp(-gamma * dist2);
}

double decision_value(const BinarySvmModel& model, const double* x, std::size_t n) {
    if (n != model.support_vectors.cols)
        throw std::invalid_argument("decision_value: expected " +
                                    std::to_string(model.support_vectors.cols) +
                                    " features, got " + std::to_string(n));
    double sum = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.rows; ++i)
        sum += model.sv_coef[i] * model.kernel(model.support_vectors.row(i), x, n);
    return sum;
}

DualSolution solve_dual(const FeatureMatrix& x, const std::vector<int>& y, const Kernel& kernel,
                        double cost, std::pair<double, double> class_weight,
                        const SolverOptions& options) {
    const std::size_t m = x.rows;
    if (m == 0 || y.size() != m)
        throw std::invalid_argument("solve_dual: row/label count mismatch");
    if (!(cost > 0.0)) throw std::invalid_argument("solve_dual: cost must be positive");
    bool has_pos = false;
    bool has_neg = false;
    for (int label : y) {
        if (label == 1)
            has_pos = true;
        else if (label == -1)
            has_neg = true;
        else
            throw std::invalid_argument("solve_dual: labels must be +1 or -1");
    }
    if (!has_pos || !has_neg)
        throw std::invalid_argument("solve_dual: both classes must be present");

    std::vector<double> box(m);
    for (std::size_t i = 0; i < m; ++i)
        box[i] = cost * (y[i] == 1 ? class_weight.first : class_weight.second);

    KernelCache cache(x, kernel, options);

    // F_i = y_i - u_i with u_i = sum_j alpha_j y_j K_ij; at alpha = 0, F = y.
    std::vector<double> alpha(m, 0.0);
    std::vector<double> f(m);
    for (std::size_t i = 0; i < m; ++i) f[i] = static_cast<double>(y[i]);

    auto in_up = [&](std::size_t t) {
        return (y[t] == 1 && alpha[t] < box[t]) || (y[t] == -1 && alpha[t] > 0.0);
    };
    auto in_low = [&](std::size_t t) {
        return (y[t] == -1 && alpha[t] < box[t]) || (y[t] == 1 && alpha[t] > 0.0);
    };

    std::size_t iterations = 0;
    bool converged = false;
    double b_up = 0.0;
    double b_low = 0.0;

    while (true) {
        // maximal violating pair
        double f_max = -std::numeric_limits<double>::infinity();
        double f_min = std::numeric_limits<double>::infinity();
        std::size_t i = m;
        std::size_t j = m;
        for (std::size_t t = 0; t < m; ++t) {
            if (in_up(t) && f[t] > f_max) {
                f_max = f[t];
                i = t;
            }
            if (in_low(t) && f[t] < f_min) {
                f_min = f[t];
                j = t;
            }
        }
        b_up = f_max;
        b_low = f_min;
        if (i == m || j == m || f_max - f_min <= options.tolerance) {
            converged = true;
            break;
        }
        if (iterations >= options.max_iterations) break;
        ++iterations;

        const double* row_i = cache.row(i);
        const double* row_j = cache.row(j);

        // two-variable subproblem along alpha_i += y_i*d, alpha_j -= y_j*d
        const double eta = row_i[i] + row_j[j] - 2.0 * row_i[j];
        const double bound_i = (y[i] == 1) ? box[i] - alpha[i] : alpha[i];
        const double bound_j = (y[j] == 1) ? alpha[j] : box[j] - alpha[j];
        double step = std::min(bound_i, bound_j);
        if (eta > kAlphaSnap) step = std::min(step, (f_max - f_min) / eta);

        alpha[i] += y[i] * step;
        alpha[j] -= y[j] * step;
        for (std::size_t t : {i, j}) {
            if (alpha[t] < kAlphaSnap) alpha[t] = 0.0;
            if (alpha[t] > box[t] - kAlphaSnap) alpha[t] = box[t];
        }
        for (std::size_t t = 0; t < m; ++t) f[t] -= step * (row_i[t] - row_j[t]);
    }

    DualSolution solution;
    solution.alpha = alpha;
    solution.converged = converged;
    solution.iterations = iterations;

    // dual objective: sum alpha - 1/2 sum alpha_i y_i u_i, u_i = y_i - F_i
    double objective = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double u_i = static_cast<double>(y[i]) - f[i];
        objective += alpha[i] - 0.5 * alpha[i] * y[i] * u_i;
    }
    solution.objective = objective;

    BinarySvmModel& model = solution.model;
    model.kernel = kernel;
    model.cost = cost;
    model.converged = converged;
    model.iterations = iterations;
    model.bias = 0.5 * (b_up + b_low);

    std::size_t sv_count = 0;
    for (double a : alpha) sv_count += (a > 0.0) ? 1 : 0;
    model.support_vectors = FeatureMatrix(sv_count, x.cols);
    model.sv_coef.reserve(sv_count);
    std::size_t out = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (alpha[i] <= 0.0) continue;
        std::copy(x.row(i), x.row(i) + x.cols, model.support_vectors.row(out));
        model.sv_coef.push_back(alpha[i] * y[i]);
        ++out;
    }
    return solution;
}

std::array<double, kNumClasses> inverse_frequency_weights(
    const std::array<std::size_t, kNumClasses>& counts) {
    double total = 0.0;
    for (std::size_t c : counts) total += static_cast<double>(c);
    const double mean = total / kNumClasses;
    std::array<double, kNumClasses> weights{};
    for (int c = 0; c < kNumClasses; ++c) {
        if (counts[c] == 0)
            throw std::invalid_argument("inverse_frequency_weights: class N=" +
                                        std::to_string(c + 1) + " has no examples");
        weights[c] = mean / static_cast<double>(counts[c]);
    }
    return weights;
}

OvoSvmModel fit_ovo(const FeatureMatrix& x, const std::vector<int>& y, const Kernel& kernel,
                    double cost, SvmWeighting weighting, const SolverOptions& options) {
    if (x.rows != y.size()) throw std::invalid_argument("fit_ovo: row/label count mismatch");
    std::array<std::size_t, kNumClasses> counts{};
    for (int label : y) {
        if (label < 1 || label > kNumClasses)
            throw std::invalid_argument("fit_ovo: label outside 1..4");
        ++counts[label - 1];
    }
    for (int c = 0; c < kNumClasses; ++c)
        if (counts[c] == 0)
            throw std::invalid_argument("fit_ovo: class N=" + std::to_string(c + 1) +
                                        " absent from training set");

    OvoSvmModel ovo;
    ovo.class_weight = (weighting == SvmWeighting::kInverseFrequency)
                           ? inverse_frequency_weights(counts)
                           : std::array<double, kNumClasses>{1.0, 1.0, 1.0, 1.0};

    for (int a = 1; a <= kNumClasses; ++a) {
        for (int b = a + 1; b <= kNumClasses; ++b) {
            std::vector<std::size_t> rows;
            for (std::size_t i = 0; i < y.size(); ++i)
                if (y[i] == a || y[i] == b) rows.push_back(i);
            FeatureMatrix pair_x(rows.size(), x.cols);
            std::vector<int> pair_y(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                std::copy(x.row(rows[r]), x.row(rows[r]) + x.cols, pair_x.row(r));
                pair_y[r] = (y[rows[r]] == a) ? 1 : -1;
            }
            DualSolution solution =
                solve_dual(pair_x, pair_y, kernel, cost,
                           {ovo.class_weight[a - 1], ovo.class_weight[b - 1]}, options);
            solution.model.class_pair = {a, b};
            ovo.all_converged = ovo.all_converged && solution.converged;
            ovo.models.push_back(std::move(solution.model));
        }
    }
    return ovo;
}

OvoPrediction predict_ovo(const OvoSvmModel& model, const double* x, std::size_t n) {
    OvoPrediction prediction;
    std::array<double, kNumClasses> margin{};
    for (const BinarySvmModel& binary : model.models) {
        const double value = decision_value(binary, x, n);
        const auto [pos, neg] = binary.class_pair;
        if (value >= 0.0)
            ++prediction.votes[pos - 1];
        else
            ++prediction.votes[neg - 1];
        margin[pos - 1] += value;
        margin[neg - 1] -= value;
    }

    int best = 1;
    for (int c = 2; c <= kNumClasses; ++c) {
        if (prediction.votes[c - 1] > prediction.votes[best - 1] ||
            (prediction.votes[c - 1] == prediction.votes[best - 1] &&
             margin[c - 1] > margin[best - 1]))
            best = c;
    }
    prediction.label = best;
    for (int c = 0; c < kNumClasses; ++c)
        prediction.scores[c] =
            static_cast<double>(prediction.votes[c]) + 1.0 / (1.0 + std::exp(-margin[c]));
    return prediction;
}

} // namespace nodecount
