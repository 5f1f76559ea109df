#pragma once

#include "ppimesh/common.hpp"
#include "ppimesh/featurizer.hpp"
#include "ppimesh/knn.hpp"
#include "ppimesh/svm.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <variant>

namespace ppimesh {

using ClassifierConfig = std::variant<SvmConfig, KnnConfig>;
using ClassifierModel = std::variant<SvmModel, KnnModel>;

std::string family_name(const ClassifierConfig& cfg);

/// Normalization fitted on the training rows plus the model trained on the normalized rows.
struct TrainedClassifier {
  Normalizer normalizer;
  ClassifierModel model;

  /// Scores raw (un-normalized) pair features; higher means more likely to interact.
  double score(const Eigen::Ref<const Eigen::VectorXd>& raw) const;
  Eigen::VectorXd score_rows(const FeatureMatrix& raw) const;
  Eigen::Index dimension() const { return normalizer.dimension(); }
};

TrainedClassifier fit_classifier(const FeatureMatrix& x, const Labels& labels,
                                 const ClassifierConfig& cfg, Normalization normalization);

inline constexpr int kClassifierFormatVersion = 1;

nlohmann::json to_json(const ClassifierConfig& cfg);
ClassifierConfig classifier_config_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const TrainedClassifier& classifier);
TrainedClassifier classifier_from_json(const nlohmann::json& doc);

void save_classifier(const std::filesystem::path& path, const TrainedClassifier& classifier);
TrainedClassifier load_classifier(const std::filesystem::path& path);

/// Reads a JSON document, converting parse failures into DataError.
nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace ppimesh
