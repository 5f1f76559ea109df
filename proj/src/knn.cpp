#include "ppimesh/knn.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppimesh {

KnnModel knn_train(FeatureMatrix features, Labels labels, const KnnConfig& cfg) {
  if (labels.empty()) throw std::invalid_argument("knn_train: empty training set");
  if (features.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw std::invalid_argument("knn_train: feature rows and labels differ in count");
  }
  if (cfg.k < 1) throw std::invalid_argument("knn_train: k must be >= 1");
  if (static_cast<std::size_t>(cfg.k) > labels.size()) {
    throw std::invalid_argument("knn_train: k = " + std::to_string(cfg.k) + " exceeds " +
                                std::to_string(labels.size()) + " training rows");
  }
  require_binary_labels(labels);
  return KnnModel{std::move(features), std::move(labels), cfg.k};
}

double knn_score(const KnnModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const auto n = model.features.rows();
  const auto dims = model.features.cols();
  if (x.size() != dims) {
    throw std::invalid_argument("knn_score: expected " + std::to_string(dims) + " features, got " +
                                std::to_string(x.size()));
  }
  // Squared distances rank identically to Euclidean ones.
  std::vector<double> distance(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r) {
    const double* row = model.features.row(r).data();
    double sum = 0.0;
    for (Eigen::Index c = 0; c < dims; ++c) {
      const double d = row[c] - x[c];
      sum += d * d;
    }
    distance[static_cast<std::size_t>(r)] = sum;
  }
  std::vector<double> sorted = distance;
  const auto kth = sorted.begin() + (model.k - 1);
  std::nth_element(sorted.begin(), kth, sorted.end());
  const double cutoff = *kth;
  std::size_t included = 0;
  std::size_t positive = 0;
  for (std::size_t r = 0; r < distance.size(); ++r) {
    if (distance[r] <= cutoff) {
      ++included;
      positive += static_cast<std::size_t>(model.labels[r]);
    }
  }
  return static_cast<double>(positive) / static_cast<double>(included);
}

Eigen::VectorXd knn_score_rows(const KnnModel& model, const FeatureMatrix& x) {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out[r] = knn_score(model, x.row(r).transpose());
  return out;
}

}  // namespace ppimesh
