#include "ppimesh/featurizer.hpp"

#include "ppimesh/dct.hpp"
#include "ppimesh/parallel.hpp"
#include "ppimesh/tsv.hpp"

#include <cmath>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>

namespace ppimesh {

namespace {

constexpr Eigen::Index kMaxCachedLength = 4096;

// Basis matrices are shared between threads once built.
std::shared_ptr<const Eigen::MatrixXd> cached_basis(Eigen::Index n, Eigen::Index rows) {
  if (n > kMaxCachedLength) return std::make_shared<const Eigen::MatrixXd>(dct_basis<double>(n, rows));
  static std::mutex mutex;
  static std::map<std::pair<Eigen::Index, Eigen::Index>, std::shared_ptr<const Eigen::MatrixXd>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({n, rows}); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const Eigen::MatrixXd>(dct_basis<double>(n, rows));
  std::lock_guard lock(mutex);
  return cache.emplace(std::make_pair(n, rows), std::move(built)).first->second;
}

}  // namespace

Normalization parse_normalization(std::string_view text) {
  if (text == "zscore" || text == "z_score_per_position") return Normalization::z_score_per_position;
  if (text == "signal" || text == "z_score_per_signal") return Normalization::z_score_per_signal;
  if (text == "none") return Normalization::none;
  throw UsageError("unknown normalization '" + std::string(text) + "' (zscore|signal|none)");
}

std::string to_string(Normalization mode) {
  switch (mode) {
    case Normalization::z_score_per_position: return "zscore";
    case Normalization::z_score_per_signal: return "signal";
    case Normalization::none: return "none";
  }
  return "none";
}

Eigen::VectorXd featurize_protein(const CategorySignal& signal, const FeaturizerConfig& cfg) {
  if (cfg.f < 1) throw std::invalid_argument("featurize_protein: frequency budget must be >= 1");
  if (signal.size() == 0) throw std::invalid_argument("featurize_protein: empty signal");
  const auto n = static_cast<Eigen::Index>(signal.size());
  const Eigen::Index f = cfg.f;
  const Eigen::Index kept = std::min(n, f);

  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = signal.values[static_cast<std::size_t>(i)];

  Eigen::VectorXd coefficients = Eigen::VectorXd::Zero(f);
  coefficients.head(kept) = *cached_basis(n, kept) * x;
  Eigen::VectorXd features = cached_basis(f, f)->transpose() * coefficients;

  if (cfg.normalization == Normalization::z_score_per_signal) {
    const double magnitude = features.cwiseAbs().maxCoeff();
    const double mean = features.mean();
    features.array() -= mean;
    const double sd = std::sqrt(features.squaredNorm() / static_cast<double>(f));
    // A constant signal leaves only rounding noise after centering.
    if (sd > 1e-12 * magnitude) features /= sd;
    else features.setZero();
  }
  return features;
}

Eigen::VectorXd featurize_pair(std::string_view id_a, const Eigen::VectorXd& a,
                               std::string_view id_b, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("featurize_pair: feature lengths differ (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  const bool swap = id_b < id_a;
  Eigen::VectorXd out(a.size() + b.size());
  out << (swap ? b : a), (swap ? a : b);
  return out;
}

ProteinFeatures featurize_corpus(const std::vector<ProteinRecord>& records,
                                 const FeaturizerConfig& cfg, AlphabetMode mode, int jobs) {
  std::vector<Eigen::VectorXd> vectors(records.size());
  parallel_for(records.size(), jobs, [&](std::size_t i) {
    vectors[i] = featurize_protein(encode_sequence(records[i].sequence, mode, records[i].id), cfg);
  });
  ProteinFeatures out;
  for (std::size_t i = 0; i < records.size(); ++i) out.emplace(records[i].id, std::move(vectors[i]));
  return out;
}

FeatureMatrix build_pair_matrix(const std::vector<PairKey>& pairs, const ProteinFeatures& features) {
  std::vector<std::string> missing;
  for (const auto& [a, b] : pairs) {
    for (const auto* id : {&a, &b}) {
      if (!features.contains(*id)) missing.push_back(*id);
    }
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw DataError("pairs reference ids without sequences: " + list);
  }
  if (pairs.empty()) return FeatureMatrix(0, 0);
  const auto f = features.begin()->second.size();
  FeatureMatrix x(static_cast<Eigen::Index>(pairs.size()), 2 * f);
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto& [a, b] = pairs[r];
    x.row(static_cast<Eigen::Index>(r)) =
        featurize_pair(a, features.find(a)->second, b, features.find(b)->second).transpose();
  }
  return x;
}

Normalizer::Normalizer(Eigen::VectorXd mean, Eigen::VectorXd scale)
    : mean_(std::move(mean)), scale_(std::move(scale)) {
  if (mean_.size() != scale_.size()) throw std::invalid_argument("Normalizer: size mismatch");
}

Normalizer Normalizer::fit(const FeatureMatrix& rows) {
  if (rows.rows() == 0) throw std::invalid_argument("Normalizer::fit: no rows");
  const double n = static_cast<double>(rows.rows());
  Eigen::VectorXd mean = rows.colwise().sum().transpose() / n;
  Eigen::VectorXd scale(rows.cols());
  for (Eigen::Index c = 0; c < rows.cols(); ++c) {
    const double var = (rows.col(c).array() - mean[c]).square().sum() / n;
    if (var > 0.0) {
      scale[c] = std::sqrt(var);
    } else {
      mean[c] = 0.0;
      scale[c] = 1.0;
    }
  }
  return Normalizer(std::move(mean), std::move(scale));
}

Normalizer Normalizer::identity(Eigen::Index dimension) {
  return Normalizer(Eigen::VectorXd::Zero(dimension), Eigen::VectorXd::Ones(dimension));
}

FeatureMatrix Normalizer::apply(const FeatureMatrix& rows) const {
  if (rows.cols() != dimension()) throw std::invalid_argument("Normalizer::apply: dimension mismatch");
  return ((rows.rowwise() - mean_.transpose()).array().rowwise() / scale_.transpose().array()).matrix();
}

Eigen::VectorXd Normalizer::apply(const Eigen::VectorXd& row) const {
  if (row.size() != dimension()) throw std::invalid_argument("Normalizer::apply: dimension mismatch");
  return ((row - mean_).array() / scale_.array()).matrix();
}

void write_feature_table(std::ostream& out, const FeatureTable& table) {
  const auto dims = table.x.cols();
  out << "id_a\tid_b\tlabel";
  for (Eigen::Index c = 0; c < dims; ++c) out << "\tf" << (c + 1);
  out << '\n';
  for (std::size_t r = 0; r < table.pairs.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    out << table.pairs[r].first << '\t' << table.pairs[r].second << '\t';
    if (table.labels[r] < 0) out << "NA";
    else out << table.labels[r];
    for (Eigen::Index c = 0; c < dims; ++c) out << '\t' << format_double(table.x(row, c));
    out << '\n';
  }
}

FeatureTable read_feature_table(std::istream& in) {
  FeatureTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = true;
  std::size_t width = 0;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (skippable_line(line)) continue;
    auto fields = split_tsv(line);
    if (header) {
      if (fields.size() < 4 || fields[0] != "id_a") throw DataError("feature table: missing header row");
      width = fields.size();
      header = false;
      continue;
    }
    if (fields.size() != width) {
      throw DataError("feature table line " + std::to_string(line_number) + ": expected " +
                      std::to_string(width) + " columns, found " + std::to_string(fields.size()));
    }
    table.pairs.emplace_back(fields[0], fields[1]);
    table.labels.push_back(fields[2] == "NA" ? -1 : static_cast<int>(parse_integer(fields[2], "label")));
    std::vector<double> values(width - 3);
    for (std::size_t c = 3; c < width; ++c) values[c - 3] = parse_double(fields[c], "feature value");
    rows.push_back(std::move(values));
  }
  if (header) throw DataError("feature table is empty");
  table.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width - 3));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      table.x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return table;
}

}  // namespace ppimesh
