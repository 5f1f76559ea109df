#include "ppimesh/validation.hpp"

#include "ppimesh/metrics.hpp"
#include "ppimesh/parallel.hpp"
#include "ppimesh/rng.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace ppimesh {

std::vector<std::size_t> FoldPlan::test_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan make_folds(const Labels& labels, int k_folds, std::uint64_t seed) {
  if (k_folds < 2) throw std::invalid_argument("make_folds: need at least 2 folds");
  require_binary_labels(labels);
  const auto k = static_cast<std::size_t>(k_folds);
  if (labels.size() < k) {
    throw std::invalid_argument("make_folds: " + std::to_string(labels.size()) + " instances cannot fill " +
                                std::to_string(k_folds) + " folds");
  }
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  for (int cls : {1, 0}) {
    if (by_class[cls].size() < k) {
      throw std::invalid_argument("make_folds: class " + std::to_string(cls) + " has " +
                                  std::to_string(by_class[cls].size()) + " members, fewer than " +
                                  std::to_string(k_folds) + " folds");
    }
  }
  FoldPlan plan{labels.size(), k_folds, seed, std::vector<int>(labels.size(), -1)};
  Rng rng(seed);
  std::size_t dealt = 0;
  for (int cls : {1, 0}) {
    auto& members = by_class[cls];
    rng.shuffle(members.begin(), members.end());
    for (auto i : members) plan.assignments[i] = static_cast<int>(dealt++ % k);
  }
  return plan;
}

FeatureMatrix take_rows(const FeatureMatrix& x, std::span<const std::size_t> rows) {
  FeatureMatrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(rows[r]));
  return out;
}

Labels take_labels(const Labels& labels, std::span<const std::size_t> rows) {
  Labels out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(labels[r]);
  return out;
}

CvReport cross_validate(const FeatureMatrix& x, const Labels& labels, const ClassifierConfig& cfg,
                        const CvOptions& options) {
  if (x.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw std::invalid_argument("cross_validate: feature rows and labels differ in count");
  }
  const auto plan = make_folds(labels, options.k_folds, options.seed);
  CvReport report;
  report.folds.resize(static_cast<std::size_t>(options.k_folds));
  report.held_out_scores.assign(labels.size(), 0.0);

  parallel_for(report.folds.size(), options.jobs, [&](std::size_t fold) {
    const auto train = plan.train_indices(static_cast<int>(fold));
    const auto test = plan.test_indices(static_cast<int>(fold));
    const auto train_labels = take_labels(labels, train);
    const auto test_labels = take_labels(labels, test);
    const auto positives = std::count(train_labels.begin(), train_labels.end(), 1);
    if (positives == 0 || positives == static_cast<long>(train_labels.size())) {
      throw std::invalid_argument("cross_validate: training split of fold " + std::to_string(fold) +
                                  " has a single class");
    }
    const auto model = fit_classifier(take_rows(x, train), train_labels, cfg, options.normalization);
    const Eigen::VectorXd scores = model.score_rows(take_rows(x, test));
    const std::span<const double> s(scores.data(), static_cast<std::size_t>(scores.size()));
    const auto pr = precision_recall(s, test_labels, options.threshold);
    report.folds[fold] = {pr.precision, pr.recall, roc_auc(s, test_labels), train.size(), test.size()};
    for (std::size_t t = 0; t < test.size(); ++t) report.held_out_scores[test[t]] = scores[static_cast<Eigen::Index>(t)];
  });

  const double k = static_cast<double>(report.folds.size());
  for (const auto& f : report.folds) {
    report.mean.precision += f.precision / k;
    report.mean.recall += f.recall / k;
    report.mean.auc += f.auc / k;
    report.mean.n_train += f.n_train;
    report.mean.n_test += f.n_test;
  }
  report.mean.n_train /= report.folds.size();
  report.mean.n_test /= report.folds.size();
  return report;
}

std::vector<double> default_c_grid() {
  std::vector<double> grid;
  for (int e = -2; e <= 6; ++e) grid.push_back(std::pow(10.0, e));
  return grid;
}

std::vector<double> default_gamma_grid() {
  std::vector<double> grid;
  for (int e = -9; e <= 2; ++e) grid.push_back(std::pow(10.0, e));
  return grid;
}

GridResult grid_search(const FeatureMatrix& x, const Labels& labels, const std::vector<double>& c_grid,
                       const std::vector<double>& gamma_grid, const SvmConfig& base,
                       const CvOptions& options) {
  if (c_grid.empty() || gamma_grid.empty()) throw std::invalid_argument("grid_search: empty grid");
  GridResult result;
  for (double c : c_grid) {
    for (double g : gamma_grid) result.cells.push_back({c, g, 0.0});
  }
  CvOptions inner = options;
  inner.jobs = 1;
  parallel_for(result.cells.size(), options.jobs, [&](std::size_t i) {
    SvmConfig cfg = base;
    cfg.c = result.cells[i].c;
    cfg.gamma = result.cells[i].gamma;
    result.cells[i].mean_auc = cross_validate(x, labels, cfg, inner).mean.auc;
  });
  for (std::size_t i = 1; i < result.cells.size(); ++i) {
    const auto& a = result.cells[i];
    const auto& best = result.cells[result.best];
    const bool better = a.mean_auc > best.mean_auc ||
                        (a.mean_auc == best.mean_auc &&
                         (a.c < best.c || (a.c == best.c && a.gamma < best.gamma)));
    if (better) result.best = i;
  }
  return result;
}

std::vector<SweepRow> sweep_feature_count(const SequenceCorpus& corpus, const std::vector<int>& f_values,
                                          const ClassifierConfig& cfg, const CvOptions& options,
                                          Normalization signal_normalization) {
  if (f_values.empty()) throw std::invalid_argument("sweep_feature_count: no frequency budgets");
  std::vector<SweepRow> rows;
  for (int f : f_values) {
    FeaturizerConfig fcfg{f, signal_normalization == Normalization::z_score_per_signal
                                 ? Normalization::z_score_per_signal
                                 : Normalization::none};
    ProteinFeatures features;
    for (const auto& [id, signal] : corpus.signals) features.emplace(id, featurize_protein(signal, fcfg));
    const auto x = build_pair_matrix(corpus.pairs, features);
    rows.push_back({f, cross_validate(x, corpus.labels, cfg, options).mean.auc});
  }
  return rows;
}

std::vector<SweepRow> sweep_k(const FeatureMatrix& x, const Labels& labels,
                              const std::vector<int>& k_values, const CvOptions& options) {
  if (k_values.empty()) throw std::invalid_argument("sweep_k: no k values");
  std::vector<SweepRow> rows(k_values.size());
  CvOptions inner = options;
  inner.jobs = 1;
  parallel_for(k_values.size(), options.jobs, [&](std::size_t i) {
    rows[i] = {k_values[i], cross_validate(x, labels, KnnConfig{k_values[i]}, inner).mean.auc};
  });
  return rows;
}

void write_cv_report(std::ostream& out, const CvReport& report) {
  out << "fold\tprecision\trecall\tauc\tn_train\tn_test\n";
  auto row = [&out](const std::string& name, const FoldMetrics& m) {
    out << name << '\t' << format_double(m.precision) << '\t' << format_double(m.recall) << '\t'
        << format_double(m.auc) << '\t' << m.n_train << '\t' << m.n_test << '\n';
  };
  for (std::size_t i = 0; i < report.folds.size(); ++i) row(std::to_string(i + 1), report.folds[i]);
  row("mean", report.mean);
}

void write_grid(std::ostream& out, const GridResult& grid) {
  out << "C\tgamma\tmean_auc\n";
  for (const auto& cell : grid.cells) {
    out << format_double(cell.c) << '\t' << format_double(cell.gamma) << '\t' << format_double(cell.mean_auc) << '\n';
  }
  const auto& best = grid.cells[grid.best];
  out << "# argmax\tC=" << format_double(best.c) << "\tgamma=" << format_double(best.gamma)
      << "\tmean_auc=" << format_double(best.mean_auc) << '\n';
}

void write_sweep(std::ostream& out, const std::string& name, const std::vector<SweepRow>& rows) {
  out << name << "\tmean_auc\n";
  for (const auto& r : rows) out << r.value << '\t' << format_double(r.mean_auc) << '\n';
}

}  // namespace ppimesh
