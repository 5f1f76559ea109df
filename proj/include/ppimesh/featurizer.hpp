#pragma once

#include "ppimesh/common.hpp"
#include "ppimesh/seq_codec.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ppimesh {

enum class Normalization {
  z_score_per_position,  // fitted on training rows, see Normalizer
  z_score_per_signal,    // each protein vector centered and scaled on its own
  none,
};

Normalization parse_normalization(std::string_view text);
std::string to_string(Normalization mode);

struct FeaturizerConfig {
  int f = 300;  // frequencies kept per protein; a pair has 2f features
  Normalization normalization = Normalization::z_score_per_position;
};

/// Forward DCT of the category signal, first f coefficients kept (zero
/// padded when the sequence is shorter), then reconstructed over f samples.
/// Per-signal z-scoring is applied here; per-position scaling is fitted later.
Eigen::VectorXd featurize_protein(const CategorySignal& signal, const FeaturizerConfig& cfg);

/// Concatenates two per-protein vectors, smaller id first.
Eigen::VectorXd featurize_pair(std::string_view id_a, const Eigen::VectorXd& a,
                               std::string_view id_b, const Eigen::VectorXd& b);

using ProteinFeatures = std::map<std::string, Eigen::VectorXd, std::less<>>;

/// Encodes and featurizes every record. Parallel over proteins.
ProteinFeatures featurize_corpus(const std::vector<ProteinRecord>& records,
                                 const FeaturizerConfig& cfg, AlphabetMode mode, int jobs = 1);

/// One canonical pair-feature row per pair. Unknown ids raise DataError naming all of them.
FeatureMatrix build_pair_matrix(const std::vector<PairKey>& pairs, const ProteinFeatures& features);

// Per-position standardization fitted on training rows only. Positions with
// zero variance pass through unchanged.
class Normalizer {
 public:
  Normalizer() = default;
  Normalizer(Eigen::VectorXd mean, Eigen::VectorXd scale);

  static Normalizer fit(const FeatureMatrix& rows);
  static Normalizer identity(Eigen::Index dimension);

  FeatureMatrix apply(const FeatureMatrix& rows) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& row) const;

  Eigen::Index dimension() const { return mean_.size(); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& scale() const { return scale_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd scale_;
};

/// Pair features with identifiers and labels (-1 when unlabeled).
struct FeatureTable {
  std::vector<PairKey> pairs;
  Labels labels;
  FeatureMatrix x;
};

/// Header row then one row per pair: id_a, id_b, label, f1..f2F. Unlabeled rows print "NA".
void write_feature_table(std::ostream& out, const FeatureTable& table);
FeatureTable read_feature_table(std::istream& in);

}  // namespace ppimesh
