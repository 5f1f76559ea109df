#pragma once

#include "ppimesh/classifier.hpp"
#include "ppimesh/common.hpp"
#include "ppimesh/featurizer.hpp"
#include "ppimesh/seq_codec.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

namespace ppimesh {

/// Stratified assignment of instances to folds.
struct FoldPlan {
  std::size_t n = 0;
  int k_folds = 5;
  std::uint64_t seed = 0;
  std::vector<int> assignments;  // instance -> fold

  std::vector<std::size_t> test_indices(int fold) const;
  std::vector<std::size_t> train_indices(int fold) const;
};

/// Each class is shuffled with the seed and dealt round-robin across folds,
/// continuing the deal where the previous class stopped so fold sizes balance.
FoldPlan make_folds(const Labels& labels, int k_folds, std::uint64_t seed);

struct FoldMetrics {
  double precision = 0;
  double recall = 0;
  double auc = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

struct CvOptions {
  int k_folds = 5;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  Normalization normalization = Normalization::z_score_per_position;
  int jobs = 1;
};

struct CvReport {
  std::vector<FoldMetrics> folds;
  FoldMetrics mean;
  std::vector<double> held_out_scores;  // by instance, each scored by the fold that held it out
};

/// Per fold: normalization and model are fitted on the training rows only,
/// then the held-out rows are scored.
CvReport cross_validate(const FeatureMatrix& x, const Labels& labels, const ClassifierConfig& cfg,
                        const CvOptions& options);

/// Rows (and labels) selected by index, in the given order.
FeatureMatrix take_rows(const FeatureMatrix& x, std::span<const std::size_t> rows);
Labels take_labels(const Labels& labels, std::span<const std::size_t> rows);

struct GridCell {
  double c;
  double gamma;
  double mean_auc;
};

struct GridResult {
  std::vector<GridCell> cells;  // C-major, gamma-minor order
  std::size_t best = 0;
};

std::vector<double> default_c_grid();      // 1e-2 .. 1e6, decades
std::vector<double> default_gamma_grid();  // 1e-9 .. 1e2, decades

/// Exhaustive C x gamma search by cross-validated AUC. Ties favor smaller C, then smaller gamma.
GridResult grid_search(const FeatureMatrix& x, const Labels& labels, const std::vector<double>& c_grid,
                       const std::vector<double>& gamma_grid, const SvmConfig& base,
                       const CvOptions& options);

struct SweepRow {
  int value;
  double mean_auc;
};

/// Labeled pairs over encoded sequences, re-featurized per frequency budget.
struct SequenceCorpus {
  std::map<std::string, CategorySignal, std::less<>> signals;
  std::vector<PairKey> pairs;
  Labels labels;
};

std::vector<SweepRow> sweep_feature_count(const SequenceCorpus& corpus, const std::vector<int>& f_values,
                                          const ClassifierConfig& cfg, const CvOptions& options,
                                          Normalization signal_normalization = Normalization::none);

std::vector<SweepRow> sweep_k(const FeatureMatrix& x, const Labels& labels,
                              const std::vector<int>& k_values, const CvOptions& options);

void write_cv_report(std::ostream& out, const CvReport& report);
void write_grid(std::ostream& out, const GridResult& grid);
/// Header "<name>\tmean_auc", one row per swept value.
void write_sweep(std::ostream& out, const std::string& name, const std::vector<SweepRow>& rows);

}  // namespace ppimesh
