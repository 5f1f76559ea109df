#pragma once

#include <span>

namespace ppimesh {

/// Mann-Whitney U of the positives: pairs (positive, negative) where the
/// positive scores higher, ties counting one half. Uses tie-averaged ranks.
double mann_whitney_u(std::span<const double> scores, std::span<const int> labels);

/// Area under the ROC curve, U / (P N). Requires both classes. U is a
/// half-integer, so the quotient is correctly rounded and
/// auc(s, y) + auc(s, 1 - y) rounds to exactly 1.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct PrecisionRecall {
  double precision;  // 1.0 when nothing is predicted positive
  double recall;
};

/// A row is predicted positive iff its score is strictly above the threshold.
PrecisionRecall precision_recall(std::span<const double> scores, std::span<const int> labels,
                                 double threshold);

}  // namespace ppimesh
