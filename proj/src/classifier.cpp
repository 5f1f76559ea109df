#include "ppimesh/classifier.hpp"

#include "ppimesh/tsv.hpp"

#include <fstream>

namespace ppimesh {

using nlohmann::json;

namespace {

json vector_to_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.begin(), v.end())); }

Eigen::VectorXd vector_from_json(const json& doc) {
  const auto values = doc.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json matrix_to_json(const FeatureMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  return rows;
}

FeatureMatrix matrix_from_json(const json& doc, Eigen::Index cols) {
  FeatureMatrix m(static_cast<Eigen::Index>(doc.size()), cols);
  Eigen::Index r = 0;
  for (const auto& row : doc) {
    const auto values = row.get<std::vector<double>>();
    if (static_cast<Eigen::Index>(values.size()) != cols) throw DataError("classifier document: ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = values[static_cast<std::size_t>(c)];
    ++r;
  }
  return m;
}

}  // namespace

std::string family_name(const ClassifierConfig& cfg) {
  return std::holds_alternative<SvmConfig>(cfg) ? "svm" : "knn";
}

double TrainedClassifier::score(const Eigen::Ref<const Eigen::VectorXd>& raw) const {
  const Eigen::VectorXd x = normalizer.apply(Eigen::VectorXd(raw));
  return std::visit(
      [&x](const auto& m) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, SvmModel>) return svm_score(m, x);
        else return knn_score(m, x);
      },
      model);
}

Eigen::VectorXd TrainedClassifier::score_rows(const FeatureMatrix& raw) const {
  Eigen::VectorXd out(raw.rows());
  for (Eigen::Index r = 0; r < raw.rows(); ++r) out[r] = score(raw.row(r).transpose());
  return out;
}

TrainedClassifier fit_classifier(const FeatureMatrix& x, const Labels& labels,
                                 const ClassifierConfig& cfg, Normalization normalization) {
  TrainedClassifier out;
  out.normalizer = normalization == Normalization::z_score_per_position ? Normalizer::fit(x)
                                                                        : Normalizer::identity(x.cols());
  FeatureMatrix normalized = out.normalizer.apply(x);
  if (const auto* svm = std::get_if<SvmConfig>(&cfg)) {
    out.model = svm_train(normalized, labels, *svm);
  } else {
    out.model = knn_train(std::move(normalized), labels, std::get<KnnConfig>(cfg));
  }
  return out;
}

json to_json(const ClassifierConfig& cfg) {
  if (const auto* svm = std::get_if<SvmConfig>(&cfg)) {
    return {{"family", "svm"},
            {"c", svm->c},
            {"gamma", svm->gamma},
            {"tol", svm->tol},
            {"max_iterations", svm->max_iterations},
            {"seed", svm->seed}};
  }
  return {{"family", "knn"}, {"k", std::get<KnnConfig>(cfg).k}};
}

ClassifierConfig classifier_config_from_json(const json& doc) {
  const auto family = doc.at("family").get<std::string>();
  if (family == "svm") {
    SvmConfig cfg;
    cfg.c = doc.at("c").get<double>();
    cfg.gamma = doc.at("gamma").get<double>();
    cfg.tol = doc.at("tol").get<double>();
    cfg.max_iterations = doc.at("max_iterations").get<long>();
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    return cfg;
  }
  if (family == "knn") return KnnConfig{doc.at("k").get<int>()};
  throw DataError("unknown classifier family '" + family + "'");
}

json to_json(const TrainedClassifier& classifier) {
  json doc = {{"format", "ppimesh-classifier"},
              {"version", kClassifierFormatVersion},
              {"dimension", classifier.dimension()},
              {"normalizer",
               {{"mean", vector_to_json(classifier.normalizer.mean())},
                {"scale", vector_to_json(classifier.normalizer.scale())}}}};
  if (const auto* svm = std::get_if<SvmModel>(&classifier.model)) {
    doc["family"] = "svm";
    doc["svm"] = {{"c", svm->c},
                  {"gamma", svm->gamma},
                  {"bias", svm->bias},
                  {"dual_coefficients", vector_to_json(svm->dual_coefficients)},
                  {"support_vectors", matrix_to_json(svm->support_vectors)},
                  {"support_indices", svm->support_indices},
                  {"converged", svm->converged},
                  {"iterations", svm->iterations},
                  {"kkt_violations", svm->kkt_violations},
                  {"dual_objective", svm->dual_objective}};
  } else {
    const auto& knn = std::get<KnnModel>(classifier.model);
    doc["family"] = "knn";
    doc["knn"] = {{"k", knn.k}, {"labels", knn.labels}, {"features", matrix_to_json(knn.features)}};
  }
  return doc;
}

TrainedClassifier classifier_from_json(const json& doc) {
  try {
    if (doc.at("format") != "ppimesh-classifier") throw DataError("not a classifier document");
    const auto version = doc.at("version").get<int>();
    if (version != kClassifierFormatVersion) {
      throw DataError("classifier document version " + std::to_string(version) +
                      " is not supported (expected " + std::to_string(kClassifierFormatVersion) + ")");
    }
    const auto dims = doc.at("dimension").get<Eigen::Index>();
    TrainedClassifier out;
    out.normalizer = Normalizer(vector_from_json(doc.at("normalizer").at("mean")),
                                vector_from_json(doc.at("normalizer").at("scale")));
    if (out.normalizer.dimension() != dims) throw DataError("classifier document: normalizer dimension mismatch");
    const auto family = doc.at("family").get<std::string>();
    if (family == "svm") {
      const auto& s = doc.at("svm");
      SvmModel m;
      m.c = s.at("c").get<double>();
      m.gamma = s.at("gamma").get<double>();
      m.bias = s.at("bias").get<double>();
      m.dual_coefficients = vector_from_json(s.at("dual_coefficients"));
      m.support_vectors = matrix_from_json(s.at("support_vectors"), dims);
      m.support_indices = s.at("support_indices").get<std::vector<std::size_t>>();
      m.converged = s.at("converged").get<bool>();
      m.iterations = s.at("iterations").get<long>();
      m.kkt_violations = s.at("kkt_violations").get<std::size_t>();
      m.dual_objective = s.at("dual_objective").get<double>();
      if (m.dual_coefficients.size() != m.support_vectors.rows()) {
        throw DataError("classifier document: support vector count mismatch");
      }
      out.model = std::move(m);
    } else if (family == "knn") {
      const auto& k = doc.at("knn");
      KnnModel m;
      m.k = k.at("k").get<int>();
      m.labels = k.at("labels").get<Labels>();
      m.features = matrix_from_json(k.at("features"), dims);
      if (m.features.rows() != static_cast<Eigen::Index>(m.labels.size())) {
        throw DataError("classifier document: kNN row count mismatch");
      }
      out.model = std::move(m);
    } else {
      throw DataError("unknown classifier family '" + family + "'");
    }
    return out;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed classifier document: ") + e.what());
  }
}

void save_classifier(const std::filesystem::path& path, const TrainedClassifier& classifier) {
  write_json(path, to_json(classifier));
}

TrainedClassifier load_classifier(const std::filesystem::path& path) {
  return classifier_from_json(read_json(path));
}

json read_json(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("cannot parse JSON '" + path.string() + "': " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& doc) {
  AtomicOutput out(path);
  out.stream() << doc.dump(1) << '\n';
  out.commit();
}

}  // namespace ppimesh
