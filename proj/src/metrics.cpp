#include "ppimesh/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ppimesh {

namespace {

struct ClassCounts {
  double positives = 0;
  double negatives = 0;
};

ClassCounts check_scored_set(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
  if (scores.empty()) throw std::invalid_argument("empty scored set");
  ClassCounts counts;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) counts.positives += 1;
    else if (labels[i] == 0) counts.negatives += 1;
    else throw std::invalid_argument("labels must be 0 or 1");
    if (std::isnan(scores[i])) throw std::invalid_argument("NaN score");
  }
  if (counts.positives == 0 || counts.negatives == 0) {
    throw std::invalid_argument("AUC needs at least one positive and one negative");
  }
  return counts;
}

}  // namespace

double mann_whitney_u(std::span<const double> scores, std::span<const int> labels) {
  const auto counts = check_scored_set(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Ranks are 1-based; a tie block [begin, end) shares the mean rank (begin + 1 + end) / 2.
  double positive_rank_sum = 0.0;
  for (std::size_t begin = 0; begin < order.size();) {
    std::size_t end = begin + 1;
    while (end < order.size() && scores[order[end]] == scores[order[begin]]) ++end;
    const double rank = 0.5 * static_cast<double>(begin + 1 + end);
    for (std::size_t t = begin; t < end; ++t) {
      if (labels[order[t]] == 1) positive_rank_sum += rank;
    }
    begin = end;
  }
  return positive_rank_sum - counts.positives * (counts.positives + 1) / 2;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  const auto counts = check_scored_set(scores, labels);
  const double pairs = counts.positives * counts.negatives;
  return mann_whitney_u(scores, labels) / pairs;
}

PrecisionRecall precision_recall(std::span<const double> scores, std::span<const int> labels,
                                 double threshold) {
  check_scored_set(scores, labels);
  if (!std::isfinite(threshold)) throw std::invalid_argument("threshold must be finite");
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] > threshold;
    if (labels[i] == 1) (predicted ? tp : fn) += 1;
    else if (predicted) fp += 1;
  }
  return {tp + fp > 0 ? tp / (tp + fp) : 1.0, tp / (tp + fn)};
}

}  // namespace ppimesh
