#include "nodecount/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nodecount {

namespace {

// guards against degenerate spikes from aggressively subsampled cells
constexpr double kVarianceFloor = 1e-6;
constexpr double kRateFloor = 1e-9;
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

double gaussian_log_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * (kLogTwoPi + std::log(var) + d * d / var);
}

double poisson_log_pmf(double eta, double rate) {
    const double k = std::max(0.0, std::round(eta));
    return k * std::log(rate) - rate - std::lgamma(k + 1.0);
}

double eta_log_likelihood(const NaiveBayesModel::EtaCell& cell, Likelihood kind, double eta) {
    if (kind == Likelihood::kPoisson) return poisson_log_pmf(eta, cell.rate);
    return gaussian_log_pdf(eta, cell.mean, cell.var);
}

NaiveBayesModel::EtaCell fit_eta_cell(const std::vector<double>& etas) {
    NaiveBayesModel::EtaCell cell;
    double sum = 0.0;
    for (double e : etas) sum += e;
    cell.mean = sum / static_cast<double>(etas.size());
    double ss = 0.0;
    for (double e : etas) {
        const double d = e - cell.mean;
        ss += d * d;
    }
    cell.var = (etas.size() > 1)
                   ? std::max(ss / static_cast<double>(etas.size() - 1), kVarianceFloor)
                   : kVarianceFloor;
    double rate_sum = 0.0;
    for (double e : etas) rate_sum += std::max(0.0, std::round(e));
    cell.rate = std::max(rate_sum / static_cast<double>(etas.size()), kRateFloor);
    return cell;
}

} // namespace

std::string to_string(Likelihood kind) {
    return kind == Likelihood::kGaussian ? "gaussian" : "poisson";
}

std::string to_string(Prior kind) {
    return kind == Prior::kUniform ? "uniform" : "prior";
}

NaiveBayesModel fit_naive_bayes(const FeatureMatrix& x, const std::vector<int>& y,
                                const FeatureLayout& layout, const NaiveBayesConfig& config) {
    if (x.rows != y.size())
        throw std::invalid_argument("fit_naive_bayes: row/label count mismatch");
    if (layout.eta_column >= x.cols)
        throw std::invalid_argument("fit_naive_bayes: eta column outside matrix");

    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < x.rows; ++i) {
        if (y[i] < 1 || y[i] > kNumClasses)
            throw std::invalid_argument("fit_naive_bayes: label outside 1..4");
        by_class[y[i] - 1].push_back(i);
    }
    for (int c = 0; c < kNumClasses; ++c) {
        if (by_class[c].empty())
            throw std::invalid_argument("fit_naive_bayes: class N=" + std::to_string(c + 1) +
                                        " absent from training set");
        if (config.likelihood == Likelihood::kGaussian && by_class[c].size() < 2)
            throw std::invalid_argument("fit_naive_bayes: class N=" + std::to_string(c + 1) +
                                        " needs at least 2 examples for variance estimation");
    }

    NaiveBayesModel model;
    model.config = config;
    model.n_features = x.cols;
    model.eta_column = layout.eta_column;
    model.categorical_columns = layout.categorical_columns;

    for (int c = 0; c < kNumClasses; ++c) {
        model.prior[c] = (config.prior == Prior::kUniform)
                             ? 1.0 / kNumClasses
                             : static_cast<double>(by_class[c].size()) /
                                   static_cast<double>(x.rows);
    }

    const bool conditioned = config.conditioned || config.likelihood == Likelihood::kPoisson;

    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<double> etas;
        etas.reserve(by_class[c].size());
        for (std::size_t i : by_class[c]) etas.push_back(x.at(i, model.eta_column));
        model.fallback[c] = fit_eta_cell(etas);

        if (!conditioned) {
            // independent Gaussian per column
            model.feature_gaussians[c].resize(x.cols);
            for (std::size_t j = 0; j < x.cols; ++j) {
                std::vector<double> column;
                column.reserve(by_class[c].size());
                for (std::size_t i : by_class[c]) column.push_back(x.at(i, j));
                const NaiveBayesModel::EtaCell fitted = fit_eta_cell(column);
                model.feature_gaussians[c][j] = {fitted.mean, fitted.var};
            }
        } else if (!model.categorical_columns.empty()) {
            std::map<std::vector<double>, std::vector<double>> groups;
            for (std::size_t i : by_class[c]) {
                std::vector<double> key;
                key.reserve(model.categorical_columns.size());
                for (std::size_t j : model.categorical_columns) key.push_back(x.at(i, j));
                groups[key].push_back(x.at(i, model.eta_column));
            }
            for (const auto& [key, group_etas] : groups) {
                if (group_etas.size() < 2) continue;  // fall back to the class model
                model.cells[c][key] = fit_eta_cell(group_etas);
            }
        }
    }
    return model;
}

NaiveBayesModel::PosteriorResult NaiveBayesModel::posterior(const double* x,
                                                            std::size_t n) const {
    if (n != n_features)
        throw std::invalid_argument("posterior: expected " + std::to_string(n_features) +
                                    " features, got " + std::to_string(n));
    const bool conditioned = config.conditioned || config.likelihood == Likelihood::kPoisson;

    PosteriorResult result;
    for (int c = 0; c < kNumClasses; ++c) {
        double log_lik = 0.0;
        if (!conditioned) {
            for (std::size_t j = 0; j < n_features; ++j) {
                const Gaussian& g = feature_gaussians[c][j];
                log_lik += gaussian_log_pdf(x[j], g.mean, g.var);
            }
        } else {
            const EtaCell* cell = &fallback[c];
            if (!categorical_columns.empty()) {
                std::vector<double> key;
                key.reserve(categorical_columns.size());
                for (std::size_t j : categorical_columns) key.push_back(x[j]);
                auto it = cells[c].find(key);
                if (it != cells[c].end()) cell = &it->second;
            }
            log_lik = eta_log_likelihood(*cell, config.likelihood, x[eta_column]);
        }
        result.log_unnormalized[c] = std::log(prior[c]) + log_lik;
    }

    const double max_log =
        *std::max_element(result.log_unnormalized.begin(), result.log_unnormalized.end());
    double sum = 0.0;
    for (int c = 0; c < kNumClasses; ++c) {
        result.probability[c] = std::exp(result.log_unnormalized[c] - max_log);
        sum += result.probability[c];
    }
    for (double& p : result.probability) p /= sum;
    return result;
}

int NaiveBayesModel::predict(const double* x, std::size_t n) const {
    const PosteriorResult post = posterior(x, n);
    int best = 1;
    for (int c = 1; c < kNumClasses; ++c)
        if (post.log_unnormalized[c] > post.log_unnormalized[best - 1]) best = c + 1;
    return best;
}

} // namespace nodecount
