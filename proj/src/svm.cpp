#include "ppimesh/svm.hpp"

#include "ppimesh/kernel.hpp"
#include "ppimesh/rng.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <iostream>
#include <limits>
#include <list>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace ppimesh {

namespace {

constexpr double kTau = 1e-12;  // curvature floor for coincident points

// Kernel rows for the training set. Small problems get the full matrix up
// front; larger ones compute rows on demand behind an LRU cache.
class KernelRows {
 public:
  KernelRows(const FeatureMatrix& x, const SvmConfig& cfg)
      : x_(x), gamma_(cfg.gamma), squared_norms_(x.rowwise().squaredNorm()) {
    const auto n = static_cast<std::size_t>(x.rows());
    if (n <= cfg.full_kernel_limit) {
      full_ = true;
      Eigen::MatrixXd gram = x * x.transpose();
      matrix_.resize(x.rows(), x.rows());
      for (Eigen::Index j = 0; j < x.rows(); ++j) {
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
          matrix_(i, j) = entry(gram(i, j), i, j);
        }
        matrix_(j, j) = 1.0;
      }
    } else {
      const std::size_t bytes_per_row = n * sizeof(double);
      capacity_ = std::max<std::size_t>(2, cfg.row_cache_mb * 1024 * 1024 / bytes_per_row);
    }
  }

  Eigen::Ref<const Eigen::VectorXd> row(Eigen::Index i) {
    if (full_) return matrix_.col(i);
    if (auto it = cache_.find(i); it != cache_.end()) {
      recency_.splice(recency_.begin(), recency_, it->second.second);
      return it->second.first;
    }
    if (cache_.size() >= capacity_) {
      cache_.erase(recency_.back());
      recency_.pop_back();
    }
    Eigen::VectorXd values = x_ * x_.row(i).transpose();
    for (Eigen::Index j = 0; j < values.size(); ++j) values[j] = entry(values[j], i, j);
    values[i] = 1.0;
    recency_.push_front(i);
    auto [it, inserted] = cache_.emplace(i, std::make_pair(std::move(values), recency_.begin()));
    return it->second.first;
  }

 private:
  double entry(double dot, Eigen::Index i, Eigen::Index j) const {
    const double distance = std::max(0.0, squared_norms_[i] + squared_norms_[j] - 2.0 * dot);
    return std::exp(-gamma_ * distance);
  }

  const FeatureMatrix& x_;
  double gamma_;
  Eigen::VectorXd squared_norms_;
  bool full_ = false;
  Eigen::MatrixXd matrix_;  // symmetric, read by column
  std::size_t capacity_ = 0;
  std::list<Eigen::Index> recency_;
  std::unordered_map<Eigen::Index, std::pair<Eigen::VectorXd, std::list<Eigen::Index>::iterator>> cache_;
};

double dual_objective(const Eigen::VectorXd& alpha, const Eigen::VectorXd& gradient) {
  // With G = Q a - 1:  sum(a) - 1/2 a'Qa = -1/2 sum a_t (G_t - 1)
  return -0.5 * alpha.dot((gradient.array() - 1.0).matrix());
}

}  // namespace

void validate(const SvmConfig& cfg) {
  if (!(cfg.c > 0.0)) throw std::invalid_argument("SVM penalty C must be positive");
  if (!(cfg.gamma > 0.0)) throw std::invalid_argument("SVM gamma must be positive");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("SVM tolerance must be positive");
  if (cfg.max_iterations < 0) throw std::invalid_argument("SVM iteration bound must be >= 0");
}

SvmModel svm_train(const FeatureMatrix& x, const Labels& labels, const SvmConfig& cfg,
                   const SmoObserver& observer) {
  validate(cfg);
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (x.rows() != n) throw std::invalid_argument("svm_train: feature rows and labels differ in count");
  if (n < 2) throw std::invalid_argument("svm_train: need at least two rows");
  require_binary_labels(labels);
  const auto positives = std::count(labels.begin(), labels.end(), 1);
  if (positives == 0 || positives == n) throw std::invalid_argument("svm_train: both classes are required");

  const double c = cfg.c;
  std::vector<double> y(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < n; ++t) y[static_cast<std::size_t>(t)] = labels[static_cast<std::size_t>(t)] == 1 ? 1.0 : -1.0;
  auto yv = [&y](Eigen::Index t) { return y[static_cast<std::size_t>(t)]; };

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd gradient = Eigen::VectorXd::Constant(n, -1.0);
  KernelRows kernel(x, cfg);

  // Scan order is a seeded permutation so exact ties resolve reproducibly.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(cfg.seed);
  rng.shuffle(order.begin(), order.end());

  auto in_up = [&](Eigen::Index t) { return yv(t) > 0 ? alpha[t] < c : alpha[t] > 0; };
  auto in_low = [&](Eigen::Index t) { return yv(t) > 0 ? alpha[t] > 0 : alpha[t] < c; };

  const long max_iterations = cfg.max_iterations > 0
      ? cfg.max_iterations
      : std::max<long>(10'000'000, 100 * static_cast<long>(n));

  SvmModel model;
  model.gamma = cfg.gamma;
  model.c = c;
  model.converged = false;
  long iteration = 0;
  double violation_max = 0.0;
  double violation_min = 0.0;
  while (true) {
    // Working pair: i is the largest KKT violator in I_up; j minimizes
    // -y G over I_low, i.e. maximizes |E_i - E_j| among feasible partners.
    Eigen::Index i = -1;
    Eigen::Index j = -1;
    violation_max = -std::numeric_limits<double>::infinity();
    violation_min = std::numeric_limits<double>::infinity();
    for (auto t : order) {
      const double v = -yv(t) * gradient[t];
      if (in_up(t) && v > violation_max) {
        violation_max = v;
        i = t;
      }
      if (in_low(t) && v < violation_min) {
        violation_min = v;
        j = t;
      }
    }
    if (i < 0 || j < 0 || violation_max - violation_min <= cfg.tol) {
      model.converged = true;
      break;
    }
    if (iteration >= max_iterations) break;
    ++iteration;

    const auto row_i = kernel.row(i);
    const auto row_j = kernel.row(j);
    const double k_ij = row_i[j];
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (yv(i) != yv(j)) {
      double curvature = 2.0 - 2.0 * k_ij;
      if (curvature <= 0) curvature = kTau;
      const double delta = (-gradient[i] - gradient[j]) / curvature;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
      }
      if (diff > 0) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
      } else {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
      }
    } else {
      double curvature = 2.0 - 2.0 * k_ij;
      if (curvature <= 0) curvature = kTau;
      const double delta = (gradient[i] - gradient[j]) / curvature;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
      } else {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
      }
      if (sum > c) {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
      }
    }

    const double step_i = (alpha[i] - old_i) * yv(i);
    const double step_j = (alpha[j] - old_j) * yv(j);
    for (Eigen::Index t = 0; t < n; ++t) {
      gradient[t] += yv(t) * (row_i[t] * step_i + row_j[t] * step_j);
    }

#ifndef NDEBUG
    double balance = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) balance += alpha[t] * yv(t);
    assert(std::abs(balance) <= 1e-8 * std::max(1.0, c));
    assert(alpha.minCoeff() >= 0.0 && alpha.maxCoeff() <= c);
#endif
    if (observer) observer(SmoStep{iteration, alpha, y, dual_objective(alpha, gradient)});
  }

  // Bias: mean of -y G over free vectors, else the middle of the feasible interval.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    if (alpha[t] > 0 && alpha[t] < c) {
      free_sum += -yv(t) * gradient[t];
      ++free_count;
    }
  }
  model.bias = free_count > 0 ? free_sum / static_cast<double>(free_count)
                              : 0.5 * (violation_max + violation_min);
  if (!std::isfinite(model.bias)) model.bias = 0.0;

  for (Eigen::Index t = 0; t < n; ++t) {
    const double margin = yv(t) * (model.bias + yv(t) * gradient[t]);  // y f(x) - 1
    const bool ok = alpha[t] <= 0 ? margin >= -cfg.tol
                  : alpha[t] >= c ? margin <= cfg.tol
                  : std::abs(margin) <= cfg.tol;
    if (!ok) ++model.kkt_violations;
  }
  model.iterations = iteration;
  model.dual_objective = dual_objective(alpha, gradient);
  if (!model.converged) {
    std::clog << "warning: SMO stopped after " << iteration << " iterations with "
              << model.kkt_violations << " KKT violations\n";
  }

  for (Eigen::Index t = 0; t < n; ++t) {
    if (alpha[t] > 0) model.support_indices.push_back(static_cast<std::size_t>(t));
  }
  const auto count = static_cast<Eigen::Index>(model.support_indices.size());
  model.support_vectors.resize(count, x.cols());
  model.dual_coefficients.resize(count);
  for (Eigen::Index s = 0; s < count; ++s) {
    const auto t = static_cast<Eigen::Index>(model.support_indices[static_cast<std::size_t>(s)]);
    model.support_vectors.row(s) = x.row(t);
    model.dual_coefficients[s] = alpha[t] * yv(t);
  }
  return model;
}

double svm_decision(const SvmModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (model.support_vectors.rows() > 0 && x.size() != model.support_vectors.cols()) {
    throw std::invalid_argument("svm_decision: expected " + std::to_string(model.support_vectors.cols()) +
                                " features, got " + std::to_string(x.size()));
  }
  double sum = 0.0;
  for (Eigen::Index s = 0; s < model.support_vectors.rows(); ++s) {
    sum += model.dual_coefficients[s] * rbf_kernel(model.support_vectors.row(s).transpose(), x, model.gamma);
  }
  return sum + model.bias;
}

Eigen::VectorXd svm_decision_rows(const SvmModel& model, const FeatureMatrix& x) {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out[r] = svm_decision(model, x.row(r).transpose());
  return out;
}

double logistic(double value) {
  if (value >= 0) return 1.0 / (1.0 + std::exp(-value));
  const double e = std::exp(value);
  return e / (1.0 + e);
}

double svm_score(const SvmModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return logistic(svm_decision(model, x));
}

Eigen::VectorXd svm_score_rows(const SvmModel& model, const FeatureMatrix& x) {
  Eigen::VectorXd out = svm_decision_rows(model, x);
  for (auto& v : out) v = logistic(v);
  return out;
}

}  // namespace ppimesh
