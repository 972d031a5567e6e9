#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nodecount/types.hpp"

namespace nodecount {

/// Counts indexed (true N, predicted N), zero-based internally.
struct ConfusionMatrix {
    std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts{};

    std::uint64_t total() const;
    std::uint64_t row_sum(int true_class) const;   // true_class in 0..3
    std::uint64_t col_sum(int pred_class) const;
};

/// Throws std::invalid_argument on length mismatch or empty input.
ConfusionMatrix confusion(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted);

struct ClassMetrics {
    double precision = 0.0;  // 0 when the class was never predicted
    double recall = 0.0;
    double f1 = 0.0;         // 0 when precision + recall == 0
    bool degenerate = false; // no true instances and no predictions
};

struct F1Report {
    std::array<ClassMetrics, kNumClasses> per_class{};
    double macro_f1 = 0.0;   // unweighted mean over the four classes
};

F1Report f1_per_class(const ConfusionMatrix& cm);

/// Ordered ROC sweep from (0,0) to (1,1); FPR and TPR are both
/// non-decreasing along the list. AUC by the trapezoid rule.
struct RocCurve {
    struct Point {
        double fpr;
        double tpr;
    };
    std::vector<Point> points;
    double auc = 0.0;
};

enum class RocAveraging { kMicro };

struct BinaryInstance {
    double score;
    bool positive;
};

/// ROC sweep over pooled binary instances; thresholds at every distinct
/// score. Requires at least one positive and one negative.
RocCurve roc_from_binary(std::vector<BinaryInstance> instances);

/// Micro-averaged one-vs-rest curve: every (example, class) pair becomes one
/// pooled binary instance scored by scores[i][class]. Throws
/// std::invalid_argument when all true labels are a single class.
RocCurve roc_curve(const std::vector<int>& true_labels,
                   const std::vector<std::array<double, kNumClasses>>& scores,
                   RocAveraging averaging = RocAveraging::kMicro);

/// Smallest FPR with TPR >= target, linearly interpolating between adjacent
/// sweep points. The (1,1) endpoint guarantees existence.
double fpr_at_tpr(const RocCurve& curve, double target_tpr);

void write_roc_csv(const RocCurve& curve, const std::string& path);

} // namespace nodecount
