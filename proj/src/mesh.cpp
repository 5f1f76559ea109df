#include "ppimesh/mesh.hpp"

#include "ppimesh/parallel.hpp"
#include "ppimesh/rng.hpp"
#include "ppimesh/tsv.hpp"
#include "ppimesh/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <ostream>
#include <set>

namespace ppimesh {

using nlohmann::json;

std::string cell_name(const CellKey& key) { return key.first + "|" + key.second; }

std::string to_string(CellStatus status) {
  switch (status) {
    case CellStatus::kept: return "kept";
    case CellStatus::too_small: return "too_small";
    case CellStatus::single_class: return "single_class";
    case CellStatus::too_few_for_cv: return "too_few_for_cv";
    case CellStatus::pruned: return "pruned";
  }
  return "kept";
}

namespace {

CellStatus parse_cell_status(const std::string& text) {
  for (auto s : {CellStatus::kept, CellStatus::too_small, CellStatus::single_class, CellStatus::too_few_for_cv,
                 CellStatus::pruned}) {
    if (to_string(s) == text) return s;
  }
  throw DataError("unknown cell status '" + text + "'");
}

struct TrainedCell {
  CellProvenance provenance;
  std::optional<TrainedClassifier> model;
};

// Caps the rows, cross-validates and fits. Status explains any refusal.
TrainedCell train_cell(const FeatureMatrix& x, const Labels& labels, std::vector<std::size_t> rows,
                       std::size_t min_rows, std::size_t max_rows, const ClassifierConfig& classifier,
                       const MeshConfig& config, std::uint64_t seed) {
  TrainedCell out;
  out.provenance.available = rows.size();
  if (rows.size() < min_rows) {
    out.provenance.status = CellStatus::too_small;
    return out;
  }
  if (rows.size() > max_rows) rows = stratified_sample(rows, labels, max_rows, seed);
  out.provenance.trained = rows.size();
  const auto cell_labels = take_labels(labels, rows);
  const auto positives = static_cast<std::size_t>(std::count(cell_labels.begin(), cell_labels.end(), 1));
  out.provenance.positives = positives;
  if (positives == 0 || positives == rows.size()) {
    out.provenance.status = CellStatus::single_class;
    return out;
  }
  const auto folds = static_cast<std::size_t>(config.cv_folds);
  if (positives < folds || rows.size() - positives < folds) {
    out.provenance.status = CellStatus::too_few_for_cv;
    return out;
  }
  const auto cell_x = take_rows(x, rows);
  CvOptions cv{config.cv_folds, seed, 0.5, config.normalization, 1};
  out.provenance.cv_auc = cross_validate(cell_x, cell_labels, classifier, cv).mean.auc;
  out.model = fit_classifier(cell_x, cell_labels, classifier, config.normalization);
  out.provenance.status = CellStatus::kept;
  return out;
}

json provenance_to_json(const CellProvenance& p) {
  return {{"go_a", p.key.first}, {"go_b", p.key.second}, {"available", p.available}, {"trained", p.trained},
          {"positives", p.positives}, {"cv_auc", p.cv_auc}, {"status", to_string(p.status)}};
}

CellProvenance provenance_from_json(const json& doc) {
  CellProvenance p;
  p.key = {doc.at("go_a").get<std::string>(), doc.at("go_b").get<std::string>()};
  p.available = doc.at("available").get<std::size_t>();
  p.trained = doc.at("trained").get<std::size_t>();
  p.positives = doc.at("positives").get<std::size_t>();
  p.cv_auc = doc.at("cv_auc").get<double>();
  p.status = parse_cell_status(doc.at("status").get<std::string>());
  return p;
}

}  // namespace

ClusteredPairs cluster_pairs(const std::vector<PairKey>& pairs, const ResolvedTerms& terms) {
  static const TermSet empty;
  auto lookup = [&terms](const std::string& id) -> const TermSet& {
    auto it = terms.find(id);
    return it == terms.end() ? empty : it->second;
  };
  ClusteredPairs out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& ta = lookup(pairs[i].first);
    const auto& tb = lookup(pairs[i].second);
    if (ta.empty() || tb.empty()) {
      out.generic_pool.push_back(i);
      continue;
    }
    std::set<CellKey> keys;
    for (const auto& m : ta) {
      for (const auto& n : tb) keys.insert(canonical_pair(m, n));
    }
    for (const auto& key : keys) out.cells[key].push_back(i);
  }
  return out;
}

std::vector<std::size_t> stratified_sample(const std::vector<std::size_t>& rows, const Labels& labels,
                                           std::size_t target, std::uint64_t seed) {
  if (target >= rows.size()) return rows;
  std::vector<std::size_t> by_class[2];
  for (auto r : rows) by_class[labels[r] == 1 ? 1 : 0].push_back(r);
  const double share = static_cast<double>(by_class[1].size()) / static_cast<double>(rows.size());
  auto keep_positive = static_cast<std::size_t>(std::llround(share * static_cast<double>(target)));
  keep_positive = std::min(keep_positive, by_class[1].size());
  std::size_t keep_negative = target - keep_positive;
  if (keep_negative > by_class[0].size()) {
    keep_negative = by_class[0].size();
    keep_positive = target - keep_negative;
  }
  Rng rng(seed);
  std::vector<std::size_t> out;
  for (auto [cls, keep] : {std::pair{1, keep_positive}, std::pair{0, keep_negative}}) {
    auto& members = by_class[cls];
    rng.shuffle(members.begin(), members.end());
    out.insert(out.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(keep));
  }
  std::sort(out.begin(), out.end());
  return out;
}

MeshModel train_mesh(const FeatureMatrix& x, const Labels& labels, const ClusteredPairs& clusters,
                     const ClassifierConfig& classifier, const FeaturizerConfig& featurizer,
                     const MeshConfig& config) {
  if (x.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw std::invalid_argument("train_mesh: feature rows and labels differ in count");
  }
  if (labels.empty()) throw DataError("train_mesh: no training pairs");
  if (config.min_ppis > config.max_ppis) throw std::invalid_argument("train_mesh: min_ppis exceeds max_ppis");
  if (x.cols() != 2 * static_cast<Eigen::Index>(featurizer.f)) {
    throw std::invalid_argument("train_mesh: features have " + std::to_string(x.cols()) +
                                " columns, featurizer implies " + std::to_string(2 * featurizer.f));
  }

  std::vector<CellKey> keys;
  for (const auto& [key, rows] : clusters.cells) keys.push_back(key);

  // Slot 0 is the generic classifier; slot i + 1 is keys[i].
  std::vector<TrainedCell> results(keys.size() + 1);
  parallel_for(results.size(), config.jobs, [&](std::size_t slot) {
    if (slot == 0) {
      std::vector<std::size_t> all(labels.size());
      std::iota(all.begin(), all.end(), std::size_t{0});
      const auto cap = config.generic_sample > 0 ? config.generic_sample : 2 * config.max_ppis;
      results[0] = train_cell(x, labels, std::move(all), 0, cap, classifier, config,
                              derive_seed(config.seed, "generic"));
      return;
    }
    const auto& key = keys[slot - 1];
    results[slot] = train_cell(x, labels, clusters.cells.at(key), config.min_ppis, config.max_ppis, classifier,
                               config, derive_seed(config.seed, "cell:" + cell_name(key)));
  });

  MeshModel mesh;
  mesh.featurizer = featurizer;
  mesh.classifier = classifier;
  mesh.config = config;
  mesh.generic_provenance = results[0].provenance;
  mesh.generic_provenance.key = {"generic", ""};
  if (!results[0].model) {
    throw DataError("generic classifier could not be trained (" + to_string(results[0].provenance.status) +
                    "); the dataset needs both classes with at least " + std::to_string(config.cv_folds) +
                    " pairs each");
  }
  mesh.generic = std::move(*results[0].model);

  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto& cell = results[i + 1];
    cell.provenance.key = keys[i];
    if (cell.model && config.prune_against_generic && cell.provenance.cv_auc <= mesh.generic_provenance.cv_auc) {
      cell.provenance.status = CellStatus::pruned;
    }
    if (cell.provenance.status == CellStatus::kept) {
      mesh.cells.emplace(keys[i], std::move(*cell.model));
    } else if (cell.provenance.status == CellStatus::single_class ||
               cell.provenance.status == CellStatus::too_few_for_cv) {
      std::clog << "warning: cell " << cell_name(keys[i]) << " dropped (" << to_string(cell.provenance.status) << ")\n";
    }
    mesh.provenance.push_back(cell.provenance);
  }
  if (mesh.cells.empty()) std::clog << "warning: mesh has no dedicated cells; every pair uses the generic classifier\n";
  return mesh;
}

ScoreReport mesh_score(const MeshModel& mesh, const Eigen::Ref<const Eigen::VectorXd>& pair_features,
                       const TermSet& terms_a, const TermSet& terms_b) {
  if (pair_features.size() != mesh.dimension()) {
    throw std::invalid_argument("mesh_score: expected " + std::to_string(mesh.dimension()) + " features, got " +
                                std::to_string(pair_features.size()));
  }
  std::set<CellKey> applicable;
  for (const auto& m : terms_a) {
    for (const auto& n : terms_b) {
      auto key = canonical_pair(m, n);
      if (mesh.cells.contains(key)) applicable.insert(std::move(key));
    }
  }
  ScoreReport report;
  if (applicable.empty()) {
    report.score = mesh.generic.score(pair_features);
    return report;
  }
  for (const auto& key : applicable) {
    const double s = mesh.cells.at(key).score(pair_features);
    report.consulted.emplace_back(key, s);
    if (!report.chosen || s > report.score) {
      report.score = s;
      report.chosen = key;
    }
  }
  return report;
}

std::vector<Prediction> predict_pairs(const MeshModel& mesh, const std::vector<PairKey>& candidates,
                                      const ProteinFeatures& features, const ResolvedTerms& terms, int jobs) {
  static const TermSet empty;
  auto terms_of = [&terms](const std::string& id) -> const TermSet& {
    auto it = terms.find(id);
    return it == terms.end() ? empty : it->second;
  };
  std::vector<std::string> missing;
  for (const auto& [a, b] : candidates) {
    for (const auto* id : {&a, &b}) if (!features.contains(*id)) missing.push_back(*id);
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw DataError("candidates reference ids without sequences: " + list);
  }
  std::vector<Prediction> out(candidates.size());
  parallel_for(candidates.size(), jobs, [&](std::size_t i) {
    const auto [a, b] = canonical_pair(candidates[i].first, candidates[i].second);
    const auto x = featurize_pair(a, features.find(a)->second, b, features.find(b)->second);
    const auto report = mesh_score(mesh, x, terms_of(a), terms_of(b));
    out[i] = {a, b, report.score, report.chosen ? cell_name(*report.chosen) : "generic", false};
  });
  return out;
}

void rank_predictions(std::vector<Prediction>& predictions, double threshold) {
  std::sort(predictions.begin(), predictions.end(), [](const Prediction& l, const Prediction& r) {
    if (l.score != r.score) return l.score > r.score;
    if (l.id_a != r.id_a) return l.id_a < r.id_a;
    return l.id_b < r.id_b;
  });
  for (auto& p : predictions) p.predicted_positive = p.score > threshold;
}

void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions) {
  out << "id_a\tid_b\tscore\tchosen_cell\tpredicted_label\n";
  for (const auto& p : predictions) {
    out << p.id_a << '\t' << p.id_b << '\t' << format_double(p.score) << '\t' << p.chosen_cell << '\t'
        << (p.predicted_positive ? 1 : 0) << '\n';
  }
}

void write_provenance_report(std::ostream& out, const MeshModel& mesh) {
  std::vector<const CellProvenance*> kept;
  for (const auto& p : mesh.provenance) if (p.status == CellStatus::kept) kept.push_back(&p);
  std::stable_sort(kept.begin(), kept.end(), [](const auto* l, const auto* r) { return l->cv_auc > r->cv_auc; });
  out << "go_a\tgo_b\tauc\ttrained\n";
  double sum = 0.0;
  for (const auto* p : kept) {
    out << p->key.first << '\t' << p->key.second << '\t' << format_double(p->cv_auc) << '\t' << p->trained << '\n';
    sum += p->cv_auc;
  }
  out << "Generic\t\t" << format_double(mesh.generic_provenance.cv_auc) << '\t' << mesh.generic_provenance.trained << '\n';
  out << "Average\t\t" << (kept.empty() ? std::string("NA") : format_double(sum / static_cast<double>(kept.size())))
      << "\t\n";
}

void save_mesh(const std::filesystem::path& dir, const MeshModel& mesh) {
  std::filesystem::create_directories(dir);
  json cells = json::array();
  std::size_t index = 0;
  for (const auto& [key, model] : mesh.cells) {
    char name[32];
    std::snprintf(name, sizeof name, "cell_%04zu.json", ++index);
    save_classifier(dir / name, model);
    cells.push_back({{"go_a", key.first}, {"go_b", key.second}, {"file", name}});
  }
  save_classifier(dir / "generic.json", mesh.generic);
  json provenance = json::array();
  for (const auto& p : mesh.provenance) provenance.push_back(provenance_to_json(p));
  const json manifest = {
      {"format", "ppimesh-mesh"},
      {"version", kMeshFormatVersion},
      {"classifier_format_version", kClassifierFormatVersion},
      {"featurizer", {{"f", mesh.featurizer.f}, {"normalization", to_string(mesh.featurizer.normalization)},
                      {"alphabet", mesh.alphabet == AlphabetMode::strict ? "strict" : "lenient"}}},
      {"classifier", to_json(mesh.classifier)},
      {"mesh", {{"min_ppis", mesh.config.min_ppis}, {"max_ppis", mesh.config.max_ppis},
                {"generic_sample", mesh.config.generic_sample}, {"cv_folds", mesh.config.cv_folds},
                {"prune_against_generic", mesh.config.prune_against_generic}, {"seed", mesh.config.seed}}},
      {"selection", to_json(mesh.selection)},
      {"generic", {{"file", "generic.json"}, {"provenance", provenance_to_json(mesh.generic_provenance)}}},
      {"cells", cells},
      {"provenance", provenance}};
  write_json(dir / "manifest.json", manifest);
}

MeshModel load_mesh(const std::filesystem::path& dir) {
  const auto manifest = read_json(dir / "manifest.json");
  try {
    if (manifest.at("format") != "ppimesh-mesh") throw DataError("'" + dir.string() + "' is not a mesh model");
    const auto version = manifest.at("version").get<int>();
    if (version != kMeshFormatVersion || manifest.at("classifier_format_version").get<int>() != kClassifierFormatVersion) {
      throw DataError("mesh model version " + std::to_string(version) + " is not supported by this build");
    }
    MeshModel mesh;
    const auto& f = manifest.at("featurizer");
    mesh.featurizer.f = f.at("f").get<int>();
    mesh.featurizer.normalization = parse_normalization(f.at("normalization").get<std::string>());
    mesh.alphabet = parse_alphabet_mode(f.at("alphabet").get<std::string>());
    mesh.classifier = classifier_config_from_json(manifest.at("classifier"));
    const auto& m = manifest.at("mesh");
    mesh.config.min_ppis = m.at("min_ppis").get<std::size_t>();
    mesh.config.max_ppis = m.at("max_ppis").get<std::size_t>();
    mesh.config.generic_sample = m.at("generic_sample").get<std::size_t>();
    mesh.config.cv_folds = m.at("cv_folds").get<int>();
    mesh.config.prune_against_generic = m.at("prune_against_generic").get<bool>();
    mesh.config.seed = m.at("seed").get<std::uint64_t>();
    mesh.selection = term_selection_from_json(manifest.at("selection"));
    mesh.generic = load_classifier(dir / manifest.at("generic").at("file").get<std::string>());
    mesh.generic_provenance = provenance_from_json(manifest.at("generic").at("provenance"));
    const Eigen::Index expected = 2 * static_cast<Eigen::Index>(mesh.featurizer.f);
    if (mesh.generic.dimension() != expected) {
      throw DataError("generic classifier expects " + std::to_string(mesh.generic.dimension()) +
                      " features but the featurizer produces " + std::to_string(expected));
    }
    for (const auto& cell : manifest.at("cells")) {
      CellKey key{cell.at("go_a").get<std::string>(), cell.at("go_b").get<std::string>()};
      auto model = load_classifier(dir / cell.at("file").get<std::string>());
      if (model.dimension() != expected) {
        throw DataError("cell " + cell_name(key) + " expects " + std::to_string(model.dimension()) +
                        " features but the featurizer produces " + std::to_string(expected));
      }
      mesh.cells.emplace(std::move(key), std::move(model));
    }
    for (const auto& p : manifest.at("provenance")) mesh.provenance.push_back(provenance_from_json(p));
    return mesh;
  } catch (const json::exception& e) {
    throw DataError("malformed mesh manifest: " + std::string(e.what()));
  }
}

}  // namespace ppimesh
