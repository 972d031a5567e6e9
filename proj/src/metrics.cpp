#include "nodecount/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "nodecount/errors.hpp"

namespace nodecount {

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t sum = 0;
    for (const auto& row : counts)
        for (std::uint64_t v : row) sum += v;
    return sum;
}

std::uint64_t ConfusionMatrix::row_sum(int true_class) const {
    const auto& row = counts[true_class];
    return std::accumulate(row.begin(), row.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::col_sum(int pred_class) const {
    std::uint64_t sum = 0;
    for (const auto& row : counts) sum += row[pred_class];
    return sum;
}

ConfusionMatrix confusion(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted) {
    if (true_labels.size() != predicted.size())
        throw std::invalid_argument("confusion: label/prediction length mismatch");
    if (true_labels.empty())
        throw std::invalid_argument("confusion: empty input");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        const int t = true_labels[i];
        const int p = predicted[i];
        if (t < 1 || t > kNumClasses || p < 1 || p > kNumClasses)
            throw std::invalid_argument("confusion: label outside 1..4");
        ++cm.counts[t - 1][p - 1];
    }
    return cm;
}

F1Report f1_per_class(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw std::invalid_argument("f1_per_class: empty matrix");
    F1Report report;
    double macro_sum = 0.0;
    for (int c = 0; c < kNumClasses; ++c) {
        ClassMetrics& m = report.per_class[c];
        const std::uint64_t tp = cm.counts[c][c];
        const std::uint64_t col = cm.col_sum(c);
        const std::uint64_t row = cm.row_sum(c);
        m.precision = (col > 0) ? static_cast<double>(tp) / static_cast<double>(col) : 0.0;
        m.recall = (row > 0) ? static_cast<double>(tp) / static_cast<double>(row) : 0.0;
        m.f1 = (m.precision + m.recall > 0.0)
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        m.degenerate = (col == 0 && row == 0);
        macro_sum += m.f1;
    }
    report.macro_f1 = macro_sum / kNumClasses;
    return report;
}

RocCurve roc_from_binary(std::vector<BinaryInstance> instances) {
    std::uint64_t total_pos = 0;
    for (const BinaryInstance& inst : instances) {
        if (!std::isfinite(inst.score))
            throw std::invalid_argument("roc: non-finite score");
        total_pos += inst.positive ? 1 : 0;
    }
    const std::uint64_t total_neg = instances.size() - total_pos;
    if (total_pos == 0 || total_neg == 0)
        throw std::invalid_argument("roc: needs at least one positive and one negative");

    std::stable_sort(instances.begin(), instances.end(),
                     [](const BinaryInstance& a, const BinaryInstance& b) {
                         return a.score > b.score;
                     });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0});
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::size_t i = 0;
    while (i < instances.size()) {
        const double threshold = instances[i].score;
        while (i < instances.size() && instances[i].score == threshold) {
            if (instances[i].positive)
                ++tp;
            else
                ++fp;
            ++i;
        }
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(total_neg),
                                static_cast<double>(tp) / static_cast<double>(total_pos)});
    }
    // exact endpoints regardless of float division residue
    curve.points.back() = {1.0, 1.0};

    double auc = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const auto& a = curve.points[k - 1];
        const auto& b = curve.points[k];
        auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
    }
    curve.auc = auc;
    return curve;
}

RocCurve roc_curve(const std::vector<int>& true_labels,
                   const std::vector<std::array<double, kNumClasses>>& scores,
                   RocAveraging averaging) {
    (void)averaging;  // only micro averaging is defined
    if (true_labels.size() != scores.size())
        throw std::invalid_argument("roc_curve: label/score length mismatch");
    if (true_labels.empty()) throw std::invalid_argument("roc_curve: empty input");
    const bool single_class =
        std::all_of(true_labels.begin(), true_labels.end(),
                    [&](int l) { return l == true_labels.front(); });
    if (single_class)
        throw std::invalid_argument("roc_curve: all examples share one class, TPR undefined");

    std::vector<BinaryInstance> pool;
    pool.reserve(true_labels.size() * kNumClasses);
    for (std::size_t i = 0; i < true_labels.size(); ++i)
        for (int c = 0; c < kNumClasses; ++c)
            pool.push_back({scores[i][c], true_labels[i] == c + 1});
    return roc_from_binary(std::move(pool));
}

double fpr_at_tpr(const RocCurve& curve, double target_tpr) {
    if (!(target_tpr > 0.0) || target_tpr > 1.0)
        throw std::invalid_argument("fpr_at_tpr: target must lie in (0, 1]");
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        if (curve.points[i].tpr >= target_tpr) {
            if (i == 0 || curve.points[i].tpr == target_tpr) return curve.points[i].fpr;
            const auto& lo = curve.points[i - 1];
            const auto& hi = curve.points[i];
            const double span = hi.tpr - lo.tpr;
            if (span <= 0.0) return hi.fpr;
            return lo.fpr + (target_tpr - lo.tpr) / span * (hi.fpr - lo.fpr);
        }
    }
    return 1.0;  // unreachable for valid curves: (1,1) endpoint always matches
}

void write_roc_csv(const RocCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    auto fmt = [](double v) {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        (void)ec;
        return std::string(buf, ptr);
    };
    out << "fpr,tpr\n";
    for (const auto& p : curve.points) out << fmt(p.fpr) << ',' << fmt(p.tpr) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

} // namespace nodecount
