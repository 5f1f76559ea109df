#pragma once

#include "ppimesh/common.hpp"

#include <Eigen/Core>

namespace ppimesh {

struct KnnConfig {
  int k = 5;
};

/// Lazy learner: the training rows are kept verbatim, duplicates included.
struct KnnModel {
  FeatureMatrix features;
  Labels labels;
  int k = 5;
};

KnnModel knn_train(FeatureMatrix features, Labels labels, const KnnConfig& cfg);

/// Fraction of positive labels among the k nearest rows (Euclidean). Every
/// row tied with the k-th distance is included in the average.
double knn_score(const KnnModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
Eigen::VectorXd knn_score_rows(const KnnModel& model, const FeatureMatrix& x);

}  // namespace ppimesh
