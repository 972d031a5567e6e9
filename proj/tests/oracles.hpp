// Test-only reference implementations, deliberately independent of the
// library code paths they check.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "nodecount/types.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// dense linear algebra helpers

/// Gaussian elimination with partial pivoting; returns false when singular.
inline bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> b,
                         std::vector<double>& out) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-12) return false;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double sum = b[row];
        for (std::size_t c = row + 1; c < n; ++c) sum -= a[row][c] * out[c];
        out[row] = sum / a[row][row];
    }
    return true;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> sym_eigenvalues(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a[p][q]));
        if (off < 1e-14) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i][i];
    return eig;
}

// ---------------------------------------------------------------------------
// SVM dual oracle

inline double dual_objective(const std::vector<std::vector<double>>& k,
                             const std::vector<int>& y, const std::vector<double>& alpha) {
    const std::size_t m = y.size();
    double obj = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        obj += alpha[i];
        for (std::size_t j = 0; j < m; ++j)
            obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * k[i][j];
    }
    return obj;
}

/// Exact maximizer of the dual over the feasible polytope by enumerating all
/// 3^m active-set assignments (each alpha at 0, at its upper bound, or free)
/// and solving the stationarity system on every face. Practical for m <= 8.
inline double dual_active_set_maximum(const std::vector<std::vector<double>>& k,
                                      const std::vector<int>& y,
                                      const std::vector<double>& c) {
    const std::size_t m = y.size();
    double best = 0.0;  // alpha = 0 is always feasible with objective 0
    std::vector<int> state(m, 0);

    std::size_t combos = 1;
    for (std::size_t i = 0; i < m; ++i) combos *= 3;

    for (std::size_t mask = 0; mask < combos; ++mask) {
        std::size_t rest = mask;
        std::vector<std::size_t> free_idx;
        std::vector<double> alpha(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            state[i] = static_cast<int>(rest % 3);
            rest /= 3;
            if (state[i] == 1) alpha[i] = c[i];
            if (state[i] == 2) free_idx.push_back(i);
        }

        double bound_eq = 0.0;  // sum of y_i alpha_i over bound variables
        for (std::size_t i = 0; i < m; ++i)
            if (state[i] != 2) bound_eq += y[i] * alpha[i];

        if (free_idx.empty()) {
            if (std::abs(bound_eq) > 1e-9) continue;
        } else {
            const std::size_t f = free_idx.size();
            std::vector<std::vector<double>> a(f + 1, std::vector<double>(f + 1, 0.0));
            std::vector<double> rhs(f + 1, 0.0);
            for (std::size_t r = 0; r < f; ++r) {
                const std::size_t i = free_idx[r];
                for (std::size_t s = 0; s < f; ++s) {
                    const std::size_t j = free_idx[s];
                    a[r][s] = y[i] * y[j] * k[i][j];
                }
                a[r][f] = y[i];
                a[f][r] = y[i];
                double fixed_term = 0.0;
                for (std::size_t j = 0; j < m; ++j)
                    if (state[j] != 2) fixed_term += y[i] * y[j] * k[i][j] * alpha[j];
                rhs[r] = 1.0 - fixed_term;
            }
            rhs[f] = -bound_eq;

            std::vector<double> solution;
            if (!solve_linear(a, rhs, solution)) continue;
            bool feasible = true;
            for (std::size_t r = 0; r < f; ++r) {
                const std::size_t i = free_idx[r];
                if (solution[r] < -1e-9 || solution[r] > c[i] + 1e-9) {
                    feasible = false;
                    break;
                }
                alpha[i] = std::clamp(solution[r], 0.0, c[i]);
            }
            if (!feasible) continue;
        }
        best = std::max(best, dual_objective(k, y, alpha));
    }
    return best;
}

/// Literal grid search over the first m-1 multipliers with the last solved
/// from the equality constraint. Only sensible for m <= 4.
inline double dual_grid_maximum(const std::vector<std::vector<double>>& k,
                                const std::vector<int>& y, const std::vector<double>& c,
                                int steps) {
    const std::size_t m = y.size();
    double best = 0.0;
    std::vector<double> alpha(m, 0.0);

    std::vector<int> grid(m - 1, 0);
    while (true) {
        double partial = 0.0;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            alpha[i] = c[i] * grid[i] / steps;
            partial += y[i] * alpha[i];
        }
        const double last = -static_cast<double>(y[m - 1]) * partial;
        if (last >= -1e-12 && last <= c[m - 1] + 1e-12) {
            alpha[m - 1] = std::clamp(last, 0.0, c[m - 1]);
            best = std::max(best, dual_objective(k, y, alpha));
        }
        std::size_t pos = 0;
        while (pos < grid.size() && ++grid[pos] > steps) grid[pos++] = 0;
        if (pos == grid.size()) break;
    }
    return best;
}

// ---------------------------------------------------------------------------
// kNN full-sort reference

inline int knn_full_sort(const nodecount::FeatureMatrix& x, const std::vector<int>& y, int k,
                         const double* query) {
    std::vector<std::pair<double, std::size_t>> all(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.cols; ++j) {
            const double d = x.at(i, j) - query[j];
            d2 += d * d;
        }
        all[i] = {d2, i};
    }
    std::sort(all.begin(), all.end());

    std::array<int, nodecount::kNumClasses> votes{};
    std::array<double, nodecount::kNumClasses> dist_sum{};
    for (int r = 0; r < k; ++r) {
        const int label = y[all[r].second];
        ++votes[label - 1];
        dist_sum[label - 1] += std::sqrt(all[r].first);
    }
    int best = 1;
    for (int cls = 2; cls <= nodecount::kNumClasses; ++cls) {
        const int vc = votes[cls - 1];
        const int vb = votes[best - 1];
        if (vc > vb ||
            (vc == vb && vc > 0 && dist_sum[cls - 1] / vc < dist_sum[best - 1] / vb))
            best = cls;
    }
    return best;
}

// ---------------------------------------------------------------------------
// AUC by Mann-Whitney pair counting (ties get half credit)

inline double auc_pair_count(const std::vector<bool>& positive,
                             const std::vector<double>& scores) {
    double numerator = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < positive.size(); ++i) {
        if (!positive[i]) continue;
        for (std::size_t j = 0; j < positive.size(); ++j) {
            if (positive[j]) continue;
            ++pairs;
            if (scores[i] > scores[j])
                numerator += 1.0;
            else if (scores[i] == scores[j])
                numerator += 0.5;
        }
    }
    return numerator / static_cast<double>(pairs);
}

// ---------------------------------------------------------------------------
// Gaussian log-density in extended precision

inline long double gaussian_log_pdf_ld(long double x, long double mean, long double var) {
    const long double kLogTwoPi = 1.837877066409345483560659472811235279723L;
    const long double d = x - mean;
    return -0.5L * (kLogTwoPi + std::log(var) + d * d / var);
}

} // namespace oracles
