#pragma once

#include "ppimesh/classifier.hpp"
#include "ppimesh/common.hpp"
#include "ppimesh/featurizer.hpp"
#include "ppimesh/ontology.hpp"
#include "ppimesh/seq_codec.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ppimesh {

/// Canonical GO-term pair (first <= second) keying one dedicated classifier.
using CellKey = PairKey;

std::string cell_name(const CellKey& key);  // "GO:a|GO:b"

/// Resolved selected terms per protein id; absent or empty means unannotated.
using ResolvedTerms = std::map<std::string, TermSet, std::less<>>;

struct ClusteredPairs {
  std::map<CellKey, std::vector<std::size_t>> cells;  // pair indices, ascending
  std::vector<std::size_t> generic_pool;              // pairs with an unannotated side
};

/// Every pair joins each cell (m, n) for m in terms(a), n in terms(b); pairs
/// with an empty side go to the generic pool.
ClusteredPairs cluster_pairs(const std::vector<PairKey>& pairs, const ResolvedTerms& terms);

struct MeshConfig {
  std::size_t min_ppis = 500;
  std::size_t max_ppis = 5000;
  std::size_t generic_sample = 0;  // 0 means 2 * max_ppis
  int cv_folds = 5;
  bool prune_against_generic = true;
  Normalization normalization = Normalization::z_score_per_position;
  std::uint64_t seed = 0;
  int jobs = 1;
};

enum class CellStatus { kept, too_small, single_class, too_few_for_cv, pruned };
std::string to_string(CellStatus status);

struct CellProvenance {
  CellKey key;
  std::size_t available = 0;  // pairs clustered into the cell
  std::size_t trained = 0;    // pairs after the cap
  std::size_t positives = 0;
  double cv_auc = 0.0;
  CellStatus status = CellStatus::kept;
};

struct MeshModel {
  FeaturizerConfig featurizer;
  AlphabetMode alphabet = AlphabetMode::strict;
  ClassifierConfig classifier;
  MeshConfig config;
  TermSelection selection;
  std::map<CellKey, TrainedClassifier> cells;  // serving cells only
  TrainedClassifier generic;
  CellProvenance generic_provenance;
  std::vector<CellProvenance> provenance;  // every clustered cell, by key

  Eigen::Index dimension() const { return generic.dimension(); }
};

/// Row indices keeping exactly `target` rows with the class ratio preserved to within one.
std::vector<std::size_t> stratified_sample(const std::vector<std::size_t>& rows, const Labels& labels,
                                           std::size_t target, std::uint64_t seed);

/// Trains one classifier per qualifying cell and the generic fallback on a
/// global sample. Cells and the generic model train as independent jobs with
/// seeds derived from their keys, so results do not depend on scheduling.
MeshModel train_mesh(const FeatureMatrix& x, const Labels& labels, const ClusteredPairs& clusters,
                     const ClassifierConfig& classifier, const FeaturizerConfig& featurizer,
                     const MeshConfig& config);

struct ScoreReport {
  double score = 0.0;
  std::optional<CellKey> chosen;  // empty: generic classifier
  std::vector<std::pair<CellKey, double>> consulted;
};

/// Maximum score over mesh cells (m, n) with m in terms_a and n in terms_b;
/// the generic classifier when no cell applies. Features are the canonical
/// pair vector.
ScoreReport mesh_score(const MeshModel& mesh, const Eigen::Ref<const Eigen::VectorXd>& pair_features,
                       const TermSet& terms_a, const TermSet& terms_b);

struct Prediction {
  std::string id_a;
  std::string id_b;
  double score = 0.0;
  std::string chosen_cell;  // cell_name or "generic"
  bool predicted_positive = false;
};

/// Scores candidates through the mesh; output order follows the input.
std::vector<Prediction> predict_pairs(const MeshModel& mesh, const std::vector<PairKey>& candidates,
                                      const ProteinFeatures& features, const ResolvedTerms& terms, int jobs = 1);

/// Sorts by score descending, ties by canonical pair, and flags score > threshold.
void rank_predictions(std::vector<Prediction>& predictions, double threshold);

/// Columns: id_a, id_b, score, chosen_cell, predicted_label.
void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions);

/// Serving cells by CV AUC descending, then Generic and Average rows.
void write_provenance_report(std::ostream& out, const MeshModel& mesh);

inline constexpr int kMeshFormatVersion = 1;

/// Directory with manifest.json, generic.json and one cell_NNNN.json per serving cell.
void save_mesh(const std::filesystem::path& dir, const MeshModel& mesh);
MeshModel load_mesh(const std::filesystem::path& dir);

}  // namespace ppimesh
