// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "ppimesh/classifier.hpp"
#include "ppimesh/dataset.hpp"
#include "ppimesh/dct.hpp"
#include "ppimesh/featurizer.hpp"
#include "ppimesh/knn.hpp"
#include "ppimesh/mesh.hpp"
#include "ppimesh/metrics.hpp"
#include "ppimesh/svm.hpp"
#include "ppimesh/synthetic.hpp"
#include "ppimesh/validation.hpp"

#include "mesh_fixture.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace ppimesh;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages of a criterion.
class Ledger {
 public:
  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(std::string summary) const {
    if (failures_ > 0) summary += "; " + std::to_string(failures_) + " failure(s): " + messages_;
    return {failures_ == 0, summary};
  }

 private:
  int failures_ = 0;
  std::string messages_;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::vector<double>> rows_of(const FeatureMatrix& x) {
  std::vector<std::vector<double>> out;
  for (Eigen::Index r = 0; r < x.rows(); ++r) out.emplace_back(x.row(r).data(), x.row(r).data() + x.cols());
  return out;
}

double max_abs_diff(const Eigen::VectorXd& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[static_cast<std::size_t>(i)]));
  return worst;
}

Outcome dct_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<int> length(1, 64), category(1, 7);
  std::normal_distribution<double> normal;
  Ledger ledger;
  double worst_forward = 0, worst_inverse = 0, worst_round = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = length(gen);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = trial % 2 == 0 ? category(gen) : normal(gen);
    const Eigen::Map<const Eigen::VectorXd> xv(x.data(), n);
    const auto spectrum = dct_forward(xv);
    const auto forward = oracle::dct_forward(x);
    const double scale = std::max(1e-300, xv.cwiseAbs().maxCoeff() * std::sqrt(double(n)));
    const double ef = max_abs_diff(spectrum.y, forward) / scale;

    std::vector<double> y(static_cast<std::size_t>(n));
    for (auto& v : y) v = normal(gen);
    CoefficientVector<double> cv{Eigen::Map<const Eigen::VectorXd>(y.data(), n), n};
    const auto inverse = oracle::dct_inverse(y);
    const double yscale = std::max(1e-300, cv.y.cwiseAbs().maxCoeff() * std::sqrt(double(n)));
    const double ei = max_abs_diff(dct_inverse(cv), inverse) / yscale;

    const double er = (dct_inverse(spectrum) - xv).cwiseAbs().maxCoeff() / std::max(1e-300, xv.cwiseAbs().maxCoeff());
    worst_forward = std::max(worst_forward, ef);
    worst_inverse = std::max(worst_inverse, ei);
    worst_round = std::max(worst_round, er);
    ledger.require(ef <= 1e-12, "forward N=" + std::to_string(n) + " rel " + fmt(ef));
    ledger.require(ei <= 1e-12, "inverse N=" + std::to_string(n) + " rel " + fmt(ei));
    ledger.require(er <= 1e-10, "round trip N=" + std::to_string(n) + " rel " + fmt(er));
  }
  const double elapsed = seconds_since(start);
  ledger.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s");
  return ledger.outcome("1000 signals, max rel err forward " + fmt(worst_forward, 2) + ", inverse " +
                        fmt(worst_inverse, 2) + ", round trip " + fmt(worst_round, 2) + ", " + fmt(elapsed, 3) + " s");
}

Outcome parseval_and_compaction() {
  std::mt19937_64 gen(102);
  std::uniform_int_distribution<int> length(1, 400), category(1, 7);
  std::normal_distribution<double> normal;
  Ledger ledger;
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = length(gen);
    Eigen::VectorXd x(n);
    for (auto& v : x) v = trial % 2 == 0 ? category(gen) : normal(gen);
    const auto spectrum = dct_forward(x);
    const double energy = x.squaredNorm();
    const double rel = std::abs(energy - spectrum.y.squaredNorm()) / std::max(1e-300, energy);
    worst = std::max(worst, rel);
    ledger.require(rel <= 1e-9, "Parseval N=" + std::to_string(n) + " rel " + fmt(rel));

    std::vector<int> budgets;
    for (int f = 1; f < n; f += std::max(1, n / 40)) budgets.push_back(f);
    budgets.push_back(n);
    double previous = std::numeric_limits<double>::infinity();
    for (int f : budgets) {
      const auto reconstruction = dct_inverse(truncate_or_pad(truncate_or_pad(spectrum, f), n));
      const double err = (x - reconstruction).norm();
      ledger.require(err <= previous + 1e-12 * std::sqrt(energy), "compaction N=" + std::to_string(n) + " f=" + std::to_string(f));
      previous = err;
    }
    ledger.require(previous <= 1e-9 * std::sqrt(energy), "full reconstruction N=" + std::to_string(n));
  }
  return ledger.outcome("1000 signals, worst Parseval rel err " + fmt(worst, 2) + ", reconstruction error non-increasing in f");
}

Outcome smo_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 gen(103);
  std::uniform_int_distribution<int> size(4, 50), dim(2, 10), pick(0, 3), pick3(0, 2);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> shift(0.0, 1.5);
  Ledger ledger;
  double worst = 0;
  std::size_t kkt_checks = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(gen);
    const int d = dim(gen);
    const double s = shift(gen);
    FeatureMatrix x(n, d);
    Labels y(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
      y[static_cast<std::size_t>(r)] = r % 2 == 0 ? 1 : 0;
      for (int c = 0; c < d; ++c) x(r, c) = normal(gen) + (r % 2 == 0 ? s : -s);
    }
    SvmConfig cfg;
    cfg.c = std::array{0.1, 1.0, 10.0, 100.0}[static_cast<std::size_t>(pick(gen))];
    cfg.gamma = std::array{0.01, 0.1, 1.0}[static_cast<std::size_t>(pick3(gen))];
    cfg.tol = 1e-3;
    const auto model = svm_train(x, y, cfg);
    const auto dual = oracle::svm_dual(rows_of(x), y, cfg.c, cfg.gamma);
    const double rel = std::abs(model.dual_objective - dual.objective) / std::max(1e-12, std::abs(dual.objective));
    worst = std::max(worst, rel);
    const std::string tag = "trial " + std::to_string(trial) + " (n=" + std::to_string(n) + ", C=" + fmt(cfg.c) +
                            ", gamma=" + fmt(cfg.gamma) + ")";
    ledger.require(rel <= 1e-4, tag + " objective rel " + fmt(rel));
    ledger.require(dual.gap <= 1e-6 * std::max(1.0, std::abs(dual.objective)), tag + " oracle uncertified");

    std::vector<double> alpha(y.size(), 0.0);
    for (std::size_t k = 0; k < model.support_indices.size(); ++k) {
      alpha[model.support_indices[k]] = std::abs(model.dual_coefficients[static_cast<Eigen::Index>(k)]);
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double margin = (y[i] == 1 ? 1.0 : -1.0) * svm_decision(model, x.row(static_cast<Eigen::Index>(i)).transpose());
      bool ok;
      if (alpha[i] == 0.0) ok = margin >= 1.0 - cfg.tol;
      else if (alpha[i] == cfg.c) ok = margin <= 1.0 + cfg.tol;
      else ok = std::abs(margin - 1.0) <= cfg.tol;
      ++kkt_checks;
      ledger.require(ok, tag + " KKT point " + std::to_string(i) + " margin " + fmt(margin, 8));
    }
  }
  const double elapsed = seconds_since(start);
  ledger.require(elapsed < 120.0, "runtime " + fmt(elapsed) + " s");
  return ledger.outcome("200 problems, worst objective rel err " + fmt(worst, 2) + ", " + std::to_string(kkt_checks) +
                        " KKT checks at tol 1e-3, " + fmt(elapsed, 3) + " s");
}

Outcome knn_oracle() {
  std::mt19937_64 gen(104);
  std::uniform_int_distribution<int> size(11, 500), dim(1, 8), kdist(1, 11), coarse(0, 3);
  std::normal_distribution<double> normal;
  Ledger ledger;
  std::size_t queries = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(gen);
    const int d = dim(gen);
    const int k = kdist(gen);
    const bool ties = trial % 2 == 0;  // integer grids force distance ties
    FeatureMatrix x(n, d);
    Labels y(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
      y[static_cast<std::size_t>(r)] = static_cast<int>(gen() % 2);
      for (int c = 0; c < d; ++c) x(r, c) = ties ? coarse(gen) : normal(gen);
    }
    y[0] = 0;
    y[1] = 1;
    const auto model = knn_train(x, y, KnnConfig{k});
    const auto rows = rows_of(x);
    for (int q = 0; q < 20; ++q) {
      Eigen::VectorXd query(d);
      for (auto& v : query) v = ties ? coarse(gen) : normal(gen);
      const std::vector<double> qv(query.data(), query.data() + d);
      const double got = knn_score(model, query);
      const double want = oracle::knn_score(rows, y, qv, k);
      ++queries;
      ledger.require(got == want, "trial " + std::to_string(trial) + " got " + fmt(got) + " want " + fmt(want));
    }
  }
  return ledger.outcome("100 instances, " + std::to_string(queries) + " queries, all scores bit-identical to the oracle");
}

Outcome auc_oracle() {
  std::mt19937_64 gen(105);
  std::uniform_int_distribution<int> size(2, 200), coarse(0, 9);
  std::normal_distribution<double> normal;
  Ledger ledger;
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = static_cast<std::size_t>(size(gen));
    std::vector<double> s(n);
    std::vector<int> y(n), flipped(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = trial % 2 == 0 ? coarse(gen) / 10.0 : normal(gen);
      y[i] = static_cast<int>(gen() % 2);
    }
    y[0] = 0;
    y[1] = 1;
    for (std::size_t i = 0; i < n; ++i) flipped[i] = 1 - y[i];
    const double p = static_cast<double>(std::count(y.begin(), y.end(), 1));
    const double u = oracle::pair_count_u(s, y);
    const std::string tag = "trial " + std::to_string(trial);
    ledger.require(mann_whitney_u(s, y) == u, tag + " U differs");
    ledger.require(roc_auc(s, y) == u / (p * (static_cast<double>(n) - p)), tag + " AUC differs");
    ledger.require(roc_auc(s, y) + roc_auc(s, flipped) == 1.0, tag + " complement " + fmt(roc_auc(s, y) + roc_auc(s, flipped), 17));
  }
  return ledger.outcome("500 scored sets: U and AUC equal the pair-counting oracle exactly, complement sums to exactly 1");
}

std::string dataset_bytes(const std::vector<InteractionPair>& pairs) {
  std::ostringstream out;
  write_dataset(out, pairs);
  return out.str();
}

Outcome negative_sampler() {
  Ledger ledger;
  std::size_t drawn = 0;
  for (std::uint64_t run = 0; run < 100; ++run) {
    std::mt19937_64 gen(1000 + run);
    const std::size_t pool_size = 10 + gen() % 290;
    std::vector<std::string> pool;
    for (std::size_t i = 0; i < pool_size; ++i) pool.push_back("P" + std::to_string(i));
    VetoList veto;
    const std::size_t veto_count = gen() % (pool_size * 2);
    for (std::size_t v = 0; v < veto_count; ++v) {
      const auto a = gen() % pool_size;
      const auto b = gen() % pool_size;
      if (a != b) veto.insert(pool[a], pool[b]);
    }
    const std::size_t total = pool_size * (pool_size - 1) / 2 - veto.size();
    const std::size_t count = run % 3 == 0 ? total : 1 + gen() % std::min<std::size_t>(total, 2000);
    const auto first = sample_negatives(pool, count, veto, run);
    const auto second = sample_negatives(pool, count, veto, run);
    const std::string tag = "run " + std::to_string(run);
    ledger.require(first.size() == count, tag + " count " + std::to_string(first.size()) + " != " + std::to_string(count));
    ledger.require(dataset_bytes(first) == dataset_bytes(second), tag + " rerun differs");
    std::set<PairKey> seen;
    for (const auto& p : first) {
      // Exhaustive scan of the veto list, independent of its lookup structure.
      bool vetoed = false;
      for (const auto& v : veto.pairs()) vetoed |= (v.first == p.id_a && v.second == p.id_b) || (v.first == p.id_b && v.second == p.id_a);
      ledger.require(!vetoed, tag + " vetoed pair " + p.id_a + "-" + p.id_b);
      ledger.require(p.id_a < p.id_b, tag + " non-canonical or self pair");
      ledger.require(seen.insert(p.key()).second, tag + " duplicate pair");
    }
    drawn += first.size();
  }
  return ledger.outcome("100 seeded runs, " + std::to_string(drawn) + " pairs, zero veto hits, exact counts, byte-identical reruns");
}

Outcome mesh_contract() {
  std::mt19937_64 gen(107);
  std::normal_distribution<double> normal;
  const int f = 3;
  auto random_rows = [&](Eigen::Index n) {
    FeatureMatrix x(n, 2 * f);
    for (auto& v : x.reshaped()) v = normal(gen);
    return x;
  };
  auto labels = [](std::size_t n) {
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i % 2);
    return y;
  };
  MeshModel mesh;
  mesh.featurizer.f = f;
  mesh.generic = fit_classifier(random_rows(60), labels(60), SvmConfig{}, Normalization::z_score_per_position);
  std::vector<std::string> terms;
  for (int t = 0; t < 6; ++t) terms.push_back("GO:" + std::to_string(100 + t));
  std::vector<CellKey> keys;
  for (std::size_t a = 0; a < terms.size(); ++a) {
    for (std::size_t b = a; b < terms.size(); ++b) keys.emplace_back(terms[a], terms[b]);
  }
  std::shuffle(keys.begin(), keys.end(), gen);
  for (int c = 0; c < 10; ++c) {
    SvmConfig svm;
    svm.gamma = 0.05 * (c + 1);
    const ClassifierConfig cfg = c % 2 == 0 ? ClassifierConfig{svm} : ClassifierConfig{KnnConfig{5}};
    mesh.cells.emplace(keys[static_cast<std::size_t>(c)],
                       fit_classifier(random_rows(50), labels(50), cfg, Normalization::z_score_per_position));
  }

  ProteinFeatures proteins;
  ResolvedTerms resolved;
  for (int p = 0; p < 200; ++p) {
    const auto id = "Q" + std::to_string(10000 + p);
    Eigen::VectorXd v(f);
    for (auto& x : v) x = normal(gen);
    proteins.emplace(id, v);
    TermSet t;
    const auto count = p % 5 == 0 ? 0 : gen() % 4;
    for (std::size_t i = 0; i < count; ++i) t.insert(terms[gen() % terms.size()]);
    if (!t.empty()) resolved.emplace(id, t);
  }
  std::vector<PairKey> forward, backward;
  for (int i = 0; i < 10000; ++i) {
    const auto a = "Q" + std::to_string(10000 + gen() % 200);
    const auto b = "Q" + std::to_string(10000 + gen() % 200);
    forward.emplace_back(a, b);
    backward.emplace_back(b, a);
  }
  const auto ab = predict_pairs(mesh, forward, proteins, resolved);
  const auto ba = predict_pairs(mesh, backward, proteins, resolved);

  Ledger ledger;
  static const TermSet none;
  auto terms_of = [&](const std::string& id) -> const TermSet& {
    auto it = resolved.find(id);
    return it == resolved.end() ? none : it->second;
  };
  std::size_t empty_side = 0, routed_generic = 0, max_checked = 0;
  for (std::size_t i = 0; i < forward.size(); ++i) {
    const auto& [a, b] = forward[i];
    const auto [ca, cb] = canonical_pair(a, b);
    const Eigen::VectorXd x = featurize_pair(ca, proteins.at(ca), cb, proteins.at(cb));
    const auto report = mesh_score(mesh, x, terms_of(a), terms_of(b));
    const std::string tag = "pair " + std::to_string(i);
    ledger.require(ab[i].score == ba[i].score && ab[i].chosen_cell == ba[i].chosen_cell, tag + " asymmetric");
    ledger.require(ab[i].score == report.score, tag + " predict/mesh_score differ");
    // Independent maximum over every applicable cell.
    std::optional<double> best;
    for (const auto& m : terms_of(a)) {
      for (const auto& n : terms_of(b)) {
        const auto it = mesh.cells.find(canonical_pair(m, n));
        if (it == mesh.cells.end()) continue;
        const double s = it->second.score(x);
        best = best ? std::max(*best, s) : s;
      }
    }
    if (terms_of(a).empty() || terms_of(b).empty()) {
      ++empty_side;
      const bool generic = !report.chosen && ab[i].chosen_cell == "generic" && report.score == mesh.generic.score(x);
      routed_generic += generic;
      ledger.require(generic, tag + " empty annotation not routed to generic");
      continue;
    }
    if (!best) {
      ledger.require(!report.chosen && report.score == mesh.generic.score(x), tag + " no cell but not generic");
      continue;
    }
    ++max_checked;
    ledger.require(report.score == *best, tag + " S " + fmt(report.score, 17) + " != max " + fmt(*best, 17));
    bool attained = false;
    for (const auto& [key, s] : report.consulted) {
      ledger.require(s <= report.score, tag + " consulted score above S");
      attained |= s == report.score;
    }
    ledger.require(attained, tag + " S not attained by a consulted cell");
  }
  return ledger.outcome("10 cells, 10000 pairs: " + std::to_string(max_checked) + " S == max consulted, all symmetric, " +
                        std::to_string(routed_generic) + "/" + std::to_string(empty_side) + " empty-annotation pairs routed to generic");
}

Outcome planted_cells() {
  const auto start = std::chrono::steady_clock::now();
  MeshCorpusConfig cfg;
  cfg.terms = {"GO:9000001", "GO:9000002", "GO:9000003", "GO:9000004"};
  cfg.cells = {{"GO:9000001", "GO:9000002", 2}, {"GO:9000002", "GO:9000003", 3}, {"GO:9000003", "GO:9000004", 4}};
  cfg.pairs_per_cell = 2000;
  cfg.min_length = 100;
  cfg.max_length = 400;
  cfg.amplitude = 0.3;
  cfg.deep_fraction = 0.3;
  cfg.homology_fraction = 0.1;
  cfg.seed = 108;
  const auto corpus = make_mesh_corpus(cfg);
  const FeaturizerConfig featurizer;  // F = 300, per-position z-scoring
  const auto in = fixture::prepare(corpus, featurizer, 1, 30);

  MeshConfig mesh_cfg;  // caps 500 / 5000, 5 folds
  mesh_cfg.prune_against_generic = false;
  mesh_cfg.seed = 108;
  const ClassifierConfig classifier = SvmConfig{};  // C = 10, gamma = 1e-3
  const auto mesh = train_mesh(in.x, in.labels, in.clusters, classifier, featurizer, mesh_cfg);

  // Generic held-out scores over the full corpus, read back per cell.
  CvOptions cv;
  cv.seed = 108;
  const auto generic_cv = cross_validate(in.x, in.labels, classifier, cv);

  Ledger ledger;
  ledger.require(mesh.provenance.size() == 3, std::to_string(mesh.provenance.size()) + " cells clustered, expected 3");
  std::string detail;
  for (const auto& p : mesh.provenance) {
    const auto& rows = in.clusters.cells.at(p.key);
    std::vector<double> scores;
    Labels labels;
    for (auto r : rows) {
      scores.push_back(generic_cv.held_out_scores[r]);
      labels.push_back(in.labels[r]);
    }
    const double generic_here = roc_auc(scores, labels);
    const double generic = std::max(generic_here, mesh.generic_provenance.cv_auc);
    const std::string name = cell_name(p.key);
    ledger.require(p.status == CellStatus::kept, name + " not trained (" + to_string(p.status) + ")");
    ledger.require(p.cv_auc >= 0.80, name + " AUC " + fmt(p.cv_auc));
    ledger.require(p.cv_auc >= generic + 0.05, name + " AUC " + fmt(p.cv_auc) + " vs generic " + fmt(generic));
    detail += name + " " + fmt(p.cv_auc, 3) + " (generic on cell " + fmt(generic_here, 3) + "), ";
  }
  const double elapsed = seconds_since(start);
  ledger.require(elapsed < 900.0, "runtime " + fmt(elapsed) + " s");
  return ledger.outcome(detail + "generic " + fmt(mesh.generic_provenance.cv_auc, 3) + ", " + fmt(elapsed, 3) + " s");
}

Outcome frequency_sweep() {
  const auto corpus = make_sweep_corpus(1200, 3, 4, 0.3, 100, 400, 109);
  SequenceCorpus sc;
  for (const auto& p : corpus.proteins) sc.signals.emplace(p.id, encode_sequence(p.sequence, AlphabetMode::strict, p.id));
  for (const auto& p : corpus.pairs) {
    sc.pairs.push_back(p.key());
    sc.labels.push_back(p.label);
  }
  CvOptions cv;
  cv.seed = 109;
  const auto rows = sweep_feature_count(sc, {2, 64, 128}, SvmConfig{}, cv);
  const double f2 = rows[0].mean_auc, f64 = rows[1].mean_auc, f128 = rows[2].mean_auc;
  Ledger ledger;
  ledger.require(f64 >= f2 + 0.05, "F=64 does not beat F=2 by 0.05");
  ledger.require(std::abs(f64 - f128) <= 0.03, "F=64 and F=128 differ by more than 0.03");
  return ledger.outcome("mean AUC F=2 " + fmt(f2, 3) + ", F=64 " + fmt(f64, 3) + ", F=128 " + fmt(f128, 3));
}

Outcome permutation_null() {
  const auto corpus = make_sweep_corpus(400, 3, 4, 0.6, 100, 400, 110);
  std::vector<PairKey> pairs;
  Labels labels;
  for (const auto& p : corpus.pairs) {
    pairs.push_back(p.key());
    labels.push_back(p.label);
  }
  FeaturizerConfig featurizer;
  featurizer.f = 64;
  const auto x = build_pair_matrix(pairs, featurize_corpus(corpus.proteins, featurizer, AlphabetMode::strict, 1));
  Rng rng(110);
  rng.shuffle(labels.begin(), labels.end());
  CvOptions cv;
  cv.seed = 110;
  const double svm = cross_validate(x, labels, SvmConfig{}, cv).mean.auc;
  const double knn = cross_validate(x, labels, KnnConfig{5}, cv).mean.auc;
  Ledger ledger;
  ledger.require(svm >= 0.40 && svm <= 0.60, "SVM " + fmt(svm));
  ledger.require(knn >= 0.40 && knn <= 0.60, "kNN " + fmt(knn));
  return ledger.outcome("n=400 permuted: SVM " + fmt(svm, 3) + ", kNN " + fmt(knn, 3));
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing>";
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Outcome cli_determinism() {
  const fs::path data = PPIMESH_DATA_DIR;
  const fs::path work = fs::temp_directory_path() / "ppimesh_acceptance_cli";
  fs::remove_all(work);
  Ledger ledger;
  auto quote = [](const fs::path& p) { return "'" + p.string() + "'"; };
  for (const char* run : {"a", "b"}) {
    const auto dir = work / run;
    fs::create_directories(dir);
    const std::string common = " --annotations " + quote(data / "annotations.tsv") + " --clusters " +
                               quote(data / "clusters.tsv") + " --fasta " + quote(data / "proteins.fasta");
    const std::string train = std::string(PPIMESH_CLI) + " mesh-train --dataset " + quote(data / "dataset.tsv") +
                              " --ontology " + quote(data / "ontology.tsv") + common +
                              " --max-depth 1 --min-proteins 20 --seed 7 --model " + quote(dir / "model") + " 2>/dev/null";
    const std::string predict = std::string(PPIMESH_CLI) + " mesh-predict --model " + quote(dir / "model") +
                                " --candidates " + quote(data / "candidates.tsv") + common + " --out " +
                                quote(dir / "predictions.tsv") + " 2>/dev/null";
    ledger.require(std::system(train.c_str()) == 0, std::string("mesh-train run ") + run + " failed");
    ledger.require(std::system(predict.c_str()) == 0, std::string("mesh-predict run ") + run + " failed");
  }
  const auto report = slurp(work / "a" / "model" / "provenance.tsv");
  const auto predictions = slurp(work / "a" / "predictions.tsv");
  ledger.require(report != "<missing>" && report == slurp(work / "b" / "model" / "provenance.tsv"), "provenance differs");
  ledger.require(predictions != "<missing>" && predictions == slurp(work / "b" / "predictions.tsv"), "predictions differ");
  const auto lines = static_cast<std::size_t>(std::count(report.begin(), report.end(), '\n'));
  const auto rows = static_cast<std::size_t>(std::count(predictions.begin(), predictions.end(), '\n'));
  fs::remove_all(work);
  return ledger.outcome("two runs on the bundled corpus: provenance (" + std::to_string(lines) + " lines) and predictions (" +
                        std::to_string(rows) + " lines) byte-identical");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"DCT oracle equivalence", dct_oracle},
      {"Parseval and energy compaction", parseval_and_compaction},
      {"SMO vs dense QP oracle", smo_oracle},
      {"kNN vs full-sort oracle", knn_oracle},
      {"AUC vs pair counting", auc_oracle},
      {"negative sampler soundness", negative_sampler},
      {"mesh max contract", mesh_contract},
      {"planted cells beat generic", planted_cells},
      {"frequency sweep shape", frequency_sweep},
      {"permutation null", permutation_null},
      {"end-to-end CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << ' ' << (i + 1) << ' ' << criteria[i].first << ": " << outcome.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << '/' << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
