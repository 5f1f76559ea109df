#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ppimesh {

/// Row-per-sample feature storage. Row-major so a sample is contiguous.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Labels = std::vector<int>;

/// Malformed or inconsistent input data (bad files, unknown ids, infeasible requests).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid combination of command-line or configuration options.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Throws std::invalid_argument unless every label is 0 or 1.
void require_binary_labels(const Labels& labels);

}  // namespace ppimesh

namespace ppimesh {

/// Unordered protein (or term) pair stored with the lexicographically smaller id first.
using PairKey = std::pair<std::string, std::string>;

inline PairKey canonical_pair(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

}  // namespace ppimesh
