#pragma once

#include "ppimesh/common.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <vector>

namespace ppimesh {

struct SvmConfig {
  double c = 10.0;
  double gamma = 1e-3;
  double tol = 1e-3;          // KKT tolerance on y f(x)
  long max_iterations = 0;    // 0: max(10'000'000, 100 n)
  std::uint64_t seed = 0;     // tie-breaking order in working-set selection
  std::size_t full_kernel_limit = 10'000;  // precompute the whole kernel matrix up to this many rows
  std::size_t row_cache_mb = 512;          // LRU row cache budget above the limit
};

void validate(const SvmConfig& cfg);

// Soft-margin RBF SVM. Only rows with a positive dual coefficient are kept.
struct SvmModel {
  FeatureMatrix support_vectors;
  Eigen::VectorXd dual_coefficients;  // alpha_i * y_i, y in {-1, +1}
  std::vector<std::size_t> support_indices;  // rows of the training matrix
  double bias = 0.0;
  double gamma = 1e-3;
  double c = 10.0;

  // Training diagnostics.
  bool converged = true;
  long iterations = 0;
  std::size_t kkt_violations = 0;
  double dual_objective = 0.0;
};

/// State visible after each SMO step; used by tests to check the solver's invariants.
struct SmoStep {
  long iteration;
  const Eigen::VectorXd& alpha;
  const std::vector<double>& y;
  double dual_objective;
};
using SmoObserver = std::function<void(const SmoStep&)>;

/// Solves the dual QP  max sum(a) - 1/2 sum a_i a_j y_i y_j K_ij,  0 <= a <= C,
/// sum a_i y_i = 0  by sequential minimal optimization. Labels are 0/1.
SvmModel svm_train(const FeatureMatrix& x, const Labels& labels, const SvmConfig& cfg,
                   const SmoObserver& observer = {});

/// f(x) = sum_i coef_i K(sv_i, x) + b
double svm_decision(const SvmModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
Eigen::VectorXd svm_decision_rows(const SvmModel& model, const FeatureMatrix& x);

/// Logistic map of the decision value into (0, 1).
double logistic(double value);
double svm_score(const SvmModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
Eigen::VectorXd svm_score_rows(const SvmModel& model, const FeatureMatrix& x);

}  // namespace ppimesh
