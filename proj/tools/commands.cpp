#include "commands.hpp"

#include "ppimesh/classifier.hpp"
#include "ppimesh/dataset.hpp"
#include "ppimesh/featurizer.hpp"
#include "ppimesh/mesh.hpp"
#include "ppimesh/ontology.hpp"
#include "ppimesh/seq_codec.hpp"
#include "ppimesh/synthetic.hpp"
#include "ppimesh/tsv.hpp"
#include "ppimesh/validation.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ppimesh::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Reads the "config" block of a run manifest as option values for the
// manifest's command. Values given on the command line take precedence.
class ManifestConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw CLI::ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("command") || !doc.contains("config")) {
      throw CLI::ConfigError("config file must be a run manifest with 'command' and 'config'");
    }
    std::vector<CLI::ConfigItem> items;
    const auto command = doc["command"].get<std::string>();
    for (const auto& [key, value] : doc["config"].items()) {
      CLI::ConfigItem item;
      item.parents = {command};
      item.name = key;
      const auto values = value.is_array() ? value : json::array({value});
      for (const auto& v : values) item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      items.push_back(std::move(item));
    }
    return items;
  }
};

struct Run {
  std::string command;
  CLI::App* app = nullptr;
  std::string manifest;
  json inputs = json::array();
  json outputs = json::array();
  json seeds = json::object();
  json summary = json::object();
};

// Numbers are stored as JSON numbers, everything else as text.
json typed_value(const std::string& text) {
  if (text.empty()) return text;
  const auto parsed = json::parse(text, nullptr, false);
  if (parsed.is_number()) return parsed;
  return text;
}

json option_values(const CLI::App& app) {
  json config = json::object();
  for (const auto* opt : app.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || names.front() == "help" || names.front() == "manifest") continue;
    const auto& name = names.front();
    if (opt->get_expected_max() == 0) {
      config[name] = opt->count() > 0 && opt->results().back() != "false" && opt->results().back() != "0";
      continue;
    }
    std::vector<std::string> values = opt->count() > 0 ? opt->results() : std::vector<std::string>{};
    if (values.empty()) {
      if (opt->get_default_str().empty()) continue;
      values = {opt->get_default_str()};
      if (opt->get_expected_max() > 1 && values.front().front() == '[') {
        // CLI11 renders vector defaults as "[a,b]".
        const auto inner = values.front().substr(1, values.front().size() - 2);
        values = CLI::detail::split(inner, ',');
      }
    }
    json typed = json::array();
    for (const auto& v : values) typed.push_back(typed_value(v));
    if (opt->get_expected_max() > 1) {
      config[name] = typed;
    } else {
      config[name] = typed.back();
    }
  }
  return config;
}

void write_manifest(const Run& run) {
  const json doc = {{"format", "ppimesh-run"},
                    {"command", run.command},
                    {"config", option_values(*run.app)},
                    {"seeds", run.seeds},
                    {"inputs", run.inputs},
                    {"outputs", run.outputs},
                    {"summary", run.summary}};
  write_json(run.manifest, doc);
}

// Shared option blocks.

struct InputOptions {
  std::string fasta;
  std::string alphabet = "strict";
  int jobs = 1;
};

struct FeatureOptions {
  int f = 300;
  std::string normalization = "zscore";

  FeaturizerConfig config() const { return {f, parse_normalization(normalization)}; }
};

struct ClassifierOptions {
  std::string family = "svm";
  double c = 10.0;
  double gamma = 1e-3;
  double tol = 1e-3;
  int k = 5;

  ClassifierConfig config(std::uint64_t seed) const {
    if (family == "knn") return KnnConfig{k};
    SvmConfig cfg;
    cfg.c = c;
    cfg.gamma = gamma;
    cfg.tol = tol;
    cfg.seed = seed;
    return cfg;
  }
};

void add_inputs(CLI::App* sub, InputOptions& o) {
  sub->add_option("--fasta", o.fasta, "Protein sequences (FASTA)")->required()->check(CLI::ExistingFile);
  sub->add_option("--alphabet", o.alphabet, "Residue alphabet handling")
      ->check(CLI::IsMember({"strict", "lenient"}))
      ->capture_default_str();
  sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

void add_features(CLI::App* sub, FeatureOptions& o) {
  sub->add_option("--f", o.f, "DCT coefficients kept per protein")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--normalization", o.normalization, "zscore (per position), signal (per protein) or none")
      ->check(CLI::IsMember({"zscore", "signal", "none"}))
      ->capture_default_str();
}

void add_classifier(CLI::App* sub, ClassifierOptions& o) {
  sub->add_option("--classifier", o.family, "Classifier family")
      ->check(CLI::IsMember({"svm", "knn"}))
      ->capture_default_str();
  sub->add_option("--c", o.c, "SVM box constraint")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--gamma", o.gamma, "RBF kernel width")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--tol", o.tol, "SMO KKT tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--k", o.k, "kNN neighbours")->check(CLI::PositiveNumber)->capture_default_str();
}

void add_output(CLI::App* sub, std::string& out, const char* what) {
  sub->add_option("--out", out, what)->required();
}

void add_manifest(CLI::App* sub, Run& run) {
  sub->add_option("--manifest", run.manifest, "Run manifest path (default: <output>.manifest.json)");
}

// Input helpers.

std::vector<ProteinRecord> load_fasta(Run& run, const std::string& path) {
  auto in = open_input(path);
  run.inputs.push_back(path);
  return parse_fasta(in);
}

struct PairTable {
  std::vector<PairKey> pairs;
  Labels labels;  // -1 when the file has no label column
};

PairTable load_pair_table(Run& run, const std::string& path) {
  run.inputs.push_back(path);
  bool labeled = false;
  {
    auto in = open_input(path);
    std::string line;
    while (std::getline(in, line)) {
      if (skippable_line(line)) continue;
      const auto fields = split_tsv(line);
      labeled = fields.size() >= 3 && fields[0] == "id_a" && fields[2] == "label";
      break;
    }
  }
  PairTable table;
  auto in = open_input(path);
  if (labeled) {
    for (const auto& p : read_dataset(in)) {
      table.pairs.push_back(p.key());
      table.labels.push_back(p.label);
    }
  } else {
    for (const auto& p : load_pairs(in, -1, PairSource::curated).pairs) {
      table.pairs.push_back(p.key());
      table.labels.push_back(-1);
    }
  }
  return table;
}

Labels require_labels(const PairTable& table, const std::string& path) {
  if (std::find(table.labels.begin(), table.labels.end(), -1) != table.labels.end()) {
    throw DataError("'" + path + "' has no label column; expected a dataset file (id_a, id_b, label, source)");
  }
  return table.labels;
}

std::vector<ProteinRecord> referenced(const std::vector<ProteinRecord>& records, const std::vector<PairKey>& pairs) {
  std::set<std::string, std::less<>> ids;
  for (const auto& [a, b] : pairs) {
    ids.insert(a);
    ids.insert(b);
  }
  std::vector<ProteinRecord> out;
  for (const auto& r : records) {
    if (ids.contains(r.id)) out.push_back(r);
  }
  return out;
}

ProteinFeatures featurize_for(const std::vector<ProteinRecord>& records, const std::vector<PairKey>& pairs,
                              const FeaturizerConfig& cfg, AlphabetMode mode, int jobs) {
  return featurize_corpus(referenced(records, pairs), cfg, mode, jobs);
}

template <class Writer>
void emit(Run& run, const std::string& path, Writer&& write) {
  AtomicOutput out(path);
  write(out.stream());
  out.commit();
  run.outputs.push_back(path);
}

AnnotationStore load_store(Run& run, const std::string& annotations, const std::string& clusters) {
  AnnotationStore store;
  if (!annotations.empty()) {
    auto in = open_input(annotations);
    run.inputs.push_back(annotations);
    read_annotations(in, store);
  }
  if (!clusters.empty()) {
    auto in = open_input(clusters);
    run.inputs.push_back(clusters);
    read_clusters(in, store);
  }
  return store;
}

ResolvedTerms resolve_all(const std::vector<PairKey>& pairs, const AnnotationStore& store,
                          const TermSelection& selection) {
  ResolvedTerms terms;
  for (const auto& [a, b] : pairs) {
    for (const auto* id : {&a, &b}) {
      if (!terms.contains(*id)) terms.emplace(*id, resolve_annotations(*id, store, selection));
    }
  }
  return terms;
}

std::vector<double> parse_grid(const std::vector<std::string>& values, const std::vector<double>& fallback,
                               const char* what) {
  if (values.empty()) return fallback;
  std::vector<double> out;
  for (const auto& v : values) {
    try {
      out.push_back(parse_double(v, what));
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Sequence-based protein interaction prediction with a GO-pair classifier mesh", "ppimesh"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<ManifestConfig>());
  app.set_config("--config", "", "Run manifest whose config block supplies option values");

  Run run;
  std::function<void()> action;
  InputOptions input;
  FeatureOptions features;
  ClassifierOptions classifier;
  std::uint64_t seed = 1;
  std::string out;

  auto subcommand = [&](const char* name, const char* description) {
    auto* sub = app.add_subcommand(name, description);
    add_manifest(sub, run);
    return sub;
  };

  // featurize
  std::string pairs_path;
  FeatureOptions raw_features{300, "none"};
  {
    auto* sub = subcommand("featurize", "Write 2F DCT features per pair");
    add_inputs(sub, input);
    sub->add_option("--f", raw_features.f, "DCT coefficients kept per protein")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--normalization", raw_features.normalization, "signal (per protein) or none")
        ->check(CLI::IsMember({"signal", "none"}))
        ->capture_default_str();
    sub->add_option("--pairs", pairs_path, "Pairs (id_a, id_b) or dataset TSV")->required()->check(CLI::ExistingFile);
    add_output(sub, out, "Feature table TSV");
    sub->final_callback([&] {
      action = [&] {
        const auto records = load_fasta(run, input.fasta);
        const auto table = load_pair_table(run, pairs_path);
        const auto cfg = raw_features.config();
        const auto protein_features =
            featurize_for(records, table.pairs, cfg, parse_alphabet_mode(input.alphabet), input.jobs);
        FeatureTable ft{table.pairs, table.labels, build_pair_matrix(table.pairs, protein_features)};
        emit(run, out, [&](std::ostream& os) { write_feature_table(os, ft); });
        run.summary = {{"pairs", ft.pairs.size()}, {"columns", ft.x.cols()}};
      };
    });
  }

  // build-dataset
  std::string positives_path, negatives_path;
  std::size_t random_negatives = 0;
  bool allow_imbalance = false, drop_unresolved = false, allow_self = false;
  std::string dataset_fasta;
  {
    auto* sub = subcommand("build-dataset", "Assemble labeled pairs with veto-checked random negatives");
    sub->add_option("--positives", positives_path, "Curated positive pairs TSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--known-negatives", negatives_path, "Known negative pairs TSV")->check(CLI::ExistingFile);
    sub->add_option("--random-negatives", random_negatives, "Random negatives to sample")->capture_default_str();
    sub->add_option("--fasta", dataset_fasta, "Sequences; pairs must reference known ids")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Sampling and shuffle seed")->capture_default_str();
    sub->add_flag("--allow-imbalance", allow_imbalance, "Permit unequal class counts");
    sub->add_flag("--drop-unresolved", drop_unresolved, "Drop pairs with ids missing from --fasta");
    sub->add_flag("--allow-self", allow_self, "Keep self pairs");
    add_output(sub, out, "Dataset TSV");
    sub->final_callback([&] {
      action = [&] {
        auto read = [&](const std::string& path, int label, PairSource source) {
          auto in = open_input(path);
          run.inputs.push_back(path);
          auto loaded = load_pairs(in, label, source, allow_self);
          for (const auto& w : loaded.warnings) std::clog << "warning: " << path << ": " << w << '\n';
          return loaded.pairs;
        };
        const auto positives = read(positives_path, 1, PairSource::curated);
        std::vector<InteractionPair> negatives;
        if (!negatives_path.empty()) negatives = read(negatives_path, 0, PairSource::known_negative);
        std::set<std::string, std::less<>> ids;
        AssembleOptions options{random_negatives, seed, allow_imbalance, nullptr, drop_unresolved};
        if (!dataset_fasta.empty()) {
          for (const auto& r : load_fasta(run, dataset_fasta)) ids.insert(r.id);
          options.known_ids = &ids;
        } else if (drop_unresolved) {
          throw UsageError("--drop-unresolved needs --fasta");
        }
        const auto dataset = assemble_dataset(positives, negatives, options);
        emit(run, out, [&](std::ostream& os) { write_dataset(os, dataset.pairs); });
        run.seeds = {{"seed", seed}};
        run.summary = {{"pairs", dataset.pairs.size()},           {"positives", dataset.positives},
                       {"known_negatives", dataset.known_negatives}, {"random_negatives", dataset.random_negatives},
                       {"dropped", dataset.dropped},               {"veto_size", dataset.veto_size}};
      };
    });
  }

  // cv
  std::string dataset_path;
  int folds = 5;
  double threshold = 0.5;
  std::string scores_path;
  {
    auto* sub = subcommand("cv", "Stratified k-fold cross-validation");
    add_inputs(sub, input);
    add_features(sub, features);
    add_classifier(sub, classifier);
    sub->add_option("--dataset", dataset_path, "Dataset TSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--folds", folds, "Number of folds")->check(CLI::Range(2, 1000))->capture_default_str();
    sub->add_option("--seed", seed, "Fold and tie-break seed")->capture_default_str();
    sub->add_option("--threshold", threshold, "Score threshold for precision and recall")->capture_default_str();
    sub->add_option("--scores", scores_path, "Optional held-out score per pair");
    add_output(sub, out, "Fold report TSV");
    sub->final_callback([&] {
      action = [&] {
        const auto records = load_fasta(run, input.fasta);
        const auto table = load_pair_table(run, dataset_path);
        const auto labels = require_labels(table, dataset_path);
        const auto fcfg = features.config();
        const auto pf = featurize_for(records, table.pairs, fcfg, parse_alphabet_mode(input.alphabet), input.jobs);
        const auto x = build_pair_matrix(table.pairs, pf);
        const CvOptions options{folds, seed, threshold, fcfg.normalization, input.jobs};
        const auto report = cross_validate(x, labels, classifier.config(seed), options);
        emit(run, out, [&](std::ostream& os) { write_cv_report(os, report); });
        if (!scores_path.empty()) {
          emit(run, scores_path, [&](std::ostream& os) {
            os << "id_a\tid_b\tlabel\tscore\n";
            for (std::size_t i = 0; i < table.pairs.size(); ++i) {
              os << table.pairs[i].first << '\t' << table.pairs[i].second << '\t' << labels[i] << '\t'
                 << format_double(report.held_out_scores[i]) << '\n';
            }
          });
        }
        run.seeds = {{"folds", seed}};
        run.summary = {{"mean_auc", report.mean.auc},
                       {"mean_precision", report.mean.precision},
                       {"mean_recall", report.mean.recall}};
      };
    });
  }

  // grid-search
  std::vector<std::string> c_grid, gamma_grid;
  {
    auto* sub = subcommand("grid-search", "Cross-validated C x gamma search for the SVM");
    add_inputs(sub, input);
    add_features(sub, features);
    sub->add_option("--dataset", dataset_path, "Dataset TSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--c-grid", c_grid, "C values (default 1e-2 .. 1e6)");
    sub->add_option("--gamma-grid", gamma_grid, "gamma values (default 1e-9 .. 1e2)");
    sub->add_option("--tol", classifier.tol, "SMO KKT tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--folds", folds, "Number of folds")->check(CLI::Range(2, 1000))->capture_default_str();
    sub->add_option("--seed", seed, "Fold and tie-break seed")->capture_default_str();
    add_output(sub, out, "Grid TSV");
    sub->final_callback([&] {
      action = [&] {
        const auto cs = parse_grid(c_grid, default_c_grid(), "--c-grid");
        const auto gammas = parse_grid(gamma_grid, default_gamma_grid(), "--gamma-grid");
        const auto records = load_fasta(run, input.fasta);
        const auto table = load_pair_table(run, dataset_path);
        const auto labels = require_labels(table, dataset_path);
        const auto fcfg = features.config();
        const auto pf = featurize_for(records, table.pairs, fcfg, parse_alphabet_mode(input.alphabet), input.jobs);
        const auto x = build_pair_matrix(table.pairs, pf);
        SvmConfig base;
        base.tol = classifier.tol;
        base.seed = seed;
        const CvOptions options{folds, seed, 0.5, fcfg.normalization, input.jobs};
        const auto grid = grid_search(x, labels, cs, gammas, base, options);
        emit(run, out, [&](std::ostream& os) { write_grid(os, grid); });
        const auto& best = grid.cells[grid.best];
        run.seeds = {{"folds", seed}};
        run.summary = {{"best_c", best.c}, {"best_gamma", best.gamma}, {"best_mean_auc", best.mean_auc}};
      };
    });
  }

  // sweep
  std::string sweep_param = "f";
  std::vector<int> sweep_values;
  {
    auto* sub = subcommand("sweep", "Cross-validated AUC across frequency budgets or neighbour counts");
    add_inputs(sub, input);
    add_features(sub, features);
    add_classifier(sub, classifier);
    sub->add_option("--dataset", dataset_path, "Dataset TSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--param", sweep_param, "Swept parameter")->check(CLI::IsMember({"f", "k"}))->capture_default_str();
    sub->add_option("--values", sweep_values, "Values to sweep")->required()->check(CLI::PositiveNumber);
    sub->add_option("--folds", folds, "Number of folds")->check(CLI::Range(2, 1000))->capture_default_str();
    sub->add_option("--seed", seed, "Fold and tie-break seed")->capture_default_str();
    add_output(sub, out, "Sweep TSV");
    sub->final_callback([&] {
      action = [&] {
        const auto records = load_fasta(run, input.fasta);
        const auto table = load_pair_table(run, dataset_path);
        const auto labels = require_labels(table, dataset_path);
        const auto fcfg = features.config();
        const auto mode = parse_alphabet_mode(input.alphabet);
        const CvOptions options{folds, seed, 0.5, fcfg.normalization, input.jobs};
        std::vector<SweepRow> rows;
        if (sweep_param == "f") {
          SequenceCorpus corpus;
          for (const auto& r : referenced(records, table.pairs)) {
            corpus.signals.emplace(r.id, encode_sequence(r.sequence, mode, r.id));
          }
          corpus.pairs = table.pairs;
          corpus.labels = labels;
          const auto signal_norm =
              fcfg.normalization == Normalization::z_score_per_signal ? Normalization::z_score_per_signal
                                                                      : Normalization::none;
          CvOptions sweep_options = options;
          if (fcfg.normalization == Normalization::z_score_per_signal) sweep_options.normalization = Normalization::none;
          rows = sweep_feature_count(corpus, sweep_values, classifier.config(seed), sweep_options, signal_norm);
        } else {
          const auto pf = featurize_for(records, table.pairs, fcfg, mode, input.jobs);
          rows = sweep_k(build_pair_matrix(table.pairs, pf), labels, sweep_values, options);
        }
        emit(run, out, [&](std::ostream& os) { write_sweep(os, sweep_param == "f" ? "F" : "k", rows); });
        run.seeds = {{"folds", seed}};
      };
    });
  }

  // mesh-train
  std::string annotations_path, ontology_path, clusters_path, model_dir, report_path, root_term;
  int max_depth = 3;
  std::size_t min_proteins = 30;
  MeshConfig mesh_cfg;
  bool no_prune = false;
  {
    auto* sub = subcommand("mesh-train", "Train dedicated GO-pair classifiers and the generic fallback");
    add_inputs(sub, input);
    add_features(sub, features);
    add_classifier(sub, classifier);
    sub->add_option("--dataset", dataset_path, "Dataset TSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--annotations", annotations_path, "protein_id, go_id TSV")->check(CLI::ExistingFile);
    sub->add_option("--ontology", ontology_path, "child_id, parent_id TSV")->check(CLI::ExistingFile);
    sub->add_option("--clusters", clusters_path, "level, cluster_id, protein_id TSV")->check(CLI::ExistingFile);
    sub->add_option("--root", root_term, "Ontology root (default: the unique parentless term)");
    sub->add_option("--max-depth", max_depth, "Deepest selectable term")->check(CLI::NonNegativeNumber)->capture_default_str();
    sub->add_option("--min-proteins", min_proteins, "Proteins a selected term must annotate")->capture_default_str();
    sub->add_option("--min-ppis", mesh_cfg.min_ppis, "Smallest trainable cell")->capture_default_str();
    sub->add_option("--max-ppis", mesh_cfg.max_ppis, "Cell training cap")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--generic-sample", mesh_cfg.generic_sample, "Generic training sample (0: 2 x max-ppis)")
        ->capture_default_str();
    sub->add_option("--folds", mesh_cfg.cv_folds, "CV folds per cell")->check(CLI::Range(2, 1000))->capture_default_str();
    sub->add_flag("--no-prune", no_prune, "Keep cells that do not beat the generic classifier");
    sub->add_option("--seed", seed, "Sampling, fold and tie-break seed")->capture_default_str();
    sub->add_option("--model", model_dir, "Model output directory")->required();
    sub->add_option("--report", report_path, "Provenance report (default: <model>/provenance.tsv)");
    sub->final_callback([&] {
      action = [&] {
        if (!annotations_path.empty() && ontology_path.empty()) throw UsageError("--annotations needs --ontology");
        const auto records = load_fasta(run, input.fasta);
        const auto table = load_pair_table(run, dataset_path);
        const auto labels = require_labels(table, dataset_path);
        const auto store = load_store(run, annotations_path, clusters_path);
        TermSelection selection;
        if (!annotations_path.empty()) {
          auto in = open_input(ontology_path);
          run.inputs.push_back(ontology_path);
          const auto graph =
              read_ontology(in, root_term.empty() ? std::nullopt : std::optional<std::string>(root_term));
          selection = trim_ontology(graph, store, max_depth, min_proteins);
          for (const auto& w : selection.warnings) std::clog << "warning: " << w << '\n';
        } else {
          std::clog << "warning: no annotations given; the mesh holds only the generic classifier\n";
        }
        const auto terms = resolve_all(table.pairs, store, selection);
        const auto fcfg = features.config();
        const auto mode = parse_alphabet_mode(input.alphabet);
        const auto pf = featurize_for(records, table.pairs, fcfg, mode, input.jobs);
        const auto x = build_pair_matrix(table.pairs, pf);
        mesh_cfg.normalization = fcfg.normalization;
        mesh_cfg.prune_against_generic = !no_prune;
        mesh_cfg.seed = seed;
        mesh_cfg.jobs = input.jobs;
        auto mesh = train_mesh(x, labels, cluster_pairs(table.pairs, terms), classifier.config(seed), fcfg, mesh_cfg);
        mesh.alphabet = mode;
        mesh.selection = selection;
        save_mesh(model_dir, mesh);
        run.outputs.push_back(model_dir);
        if (report_path.empty()) report_path = (fs::path(model_dir) / "provenance.tsv").string();
        emit(run, report_path, [&](std::ostream& os) { write_provenance_report(os, mesh); });
        if (run.manifest.empty()) run.manifest = (fs::path(model_dir) / "run.json").string();
        run.seeds = {{"mesh", seed}};
        run.summary = {{"cells", mesh.cells.size()},
                       {"selected_terms", selection.selected_terms.size()},
                       {"generic_auc", mesh.generic_provenance.cv_auc}};
      };
    });
  }

  // mesh-predict
  std::string candidates_path;
  double predict_threshold = 0.9;
  {
    auto* sub = subcommand("mesh-predict", "Rank candidate pairs with a trained mesh");
    sub->add_option("--model", model_dir, "Model directory")->required()->check(CLI::ExistingDirectory);
    sub->add_option("--fasta", input.fasta, "Protein sequences (FASTA)")->required()->check(CLI::ExistingFile);
    sub->add_option("--candidates", candidates_path, "Candidate pairs TSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--annotations", annotations_path, "protein_id, go_id TSV")->check(CLI::ExistingFile);
    sub->add_option("--clusters", clusters_path, "level, cluster_id, protein_id TSV")->check(CLI::ExistingFile);
    sub->add_option("--threshold", predict_threshold, "Scores above this are predicted positive")->capture_default_str();
    sub->add_option("--jobs", input.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    add_output(sub, out, "Ranked predictions TSV");
    sub->final_callback([&] {
      action = [&] {
        const auto mesh = load_mesh(model_dir);
        run.inputs.push_back(model_dir);
        const auto records = load_fasta(run, input.fasta);
        const auto table = load_pair_table(run, candidates_path);
        const auto store = load_store(run, annotations_path, clusters_path);
        const auto terms = resolve_all(table.pairs, store, mesh.selection);
        const auto pf = featurize_for(records, table.pairs, mesh.featurizer, mesh.alphabet, input.jobs);
        auto predictions = predict_pairs(mesh, table.pairs, pf, terms, input.jobs);
        rank_predictions(predictions, predict_threshold);
        emit(run, out, [&](std::ostream& os) { write_predictions(os, predictions); });
        const auto positives = std::count_if(predictions.begin(), predictions.end(),
                                             [](const Prediction& p) { return p.predicted_positive; });
        run.summary = {{"candidates", predictions.size()}, {"predicted_positive", positives}};
      };
    });
  }

  // synth
  std::string synth_kind = "mesh", out_dir;
  MeshCorpusConfig synth;
  synth.pairs_per_cell = 600;
  synth.generic_pairs = 100;
  synth.candidates = 24;
  synth.min_length = 60;
  synth.max_length = 160;
  synth.deep_fraction = 0.3;
  synth.amplitude = 0.3;
  synth.homology_fraction = 0.1;
  std::size_t synth_terms = 3;
  {
    auto* sub = subcommand("synth", "Generate a planted-signal corpus");
    sub->add_option("--kind", synth_kind, "mesh (annotated cells) or sweep (two harmonics)")
        ->check(CLI::IsMember({"mesh", "sweep"}))
        ->capture_default_str();
    sub->add_option("--terms", synth_terms, "GO terms; cells chain consecutive terms")
        ->check(CLI::Range(3, 20))
        ->capture_default_str();
    sub->add_option("--pairs-per-cell", synth.pairs_per_cell, "Pairs per cell (sweep: total)")->capture_default_str();
    sub->add_option("--generic-pairs", synth.generic_pairs, "Pairs with an unannotated protein")->capture_default_str();
    sub->add_option("--candidates", synth.candidates, "Unlabeled candidate pairs")->capture_default_str();
    sub->add_option("--min-length", synth.min_length, "Shortest sequence")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--max-length", synth.max_length, "Longest sequence")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--amplitude", synth.amplitude, "Motif strength in [0, 1]")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    sub->add_option("--deep-fraction", synth.deep_fraction, "Annotations placed one level deeper")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--homology-fraction", synth.homology_fraction, "Annotations reachable only via clusters")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--seed", seed, "Generator seed")->capture_default_str();
    sub->add_option("--out-dir", out_dir, "Output directory")->required();
    sub->final_callback([&] {
      action = [&] {
        if (synth.min_length > synth.max_length) throw UsageError("--min-length exceeds --max-length");
        SyntheticCorpus corpus;
        if (synth_kind == "mesh") {
          synth.seed = seed;
          for (std::size_t t = 1; t <= synth_terms; ++t) {
            char id[16];
            std::snprintf(id, sizeof id, "GO:90%05zu", t);
            synth.terms.emplace_back(id);
          }
          for (std::size_t t = 0; t + 1 < synth_terms; ++t) {
            synth.cells.push_back({synth.terms[t], synth.terms[t + 1], static_cast<int>(t) + 2});
          }
          corpus = make_mesh_corpus(synth);
        } else {
          corpus = make_sweep_corpus(synth.pairs_per_cell, 3, 4, synth.amplitude, synth.min_length, synth.max_length,
                                     seed);
        }
        write_corpus(out_dir, corpus);
        for (const char* name : {"proteins.fasta", "positives.tsv", "known_negatives.tsv", "ontology.tsv",
                                 "annotations.tsv", "clusters.tsv", "candidates.tsv"}) {
          run.outputs.push_back((fs::path(out_dir) / name).string());
        }
        if (run.manifest.empty()) run.manifest = (fs::path(out_dir) / "synth.manifest.json").string();
        run.seeds = {{"synth", seed}};
        run.summary = {{"proteins", corpus.proteins.size()}, {"pairs", corpus.pairs.size()}};
      };
    });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage_error;
  }

  run.app = app.get_subcommands().front();
  run.command = run.app->get_name();
  try {
    if (const auto* cfg = app.get_option("--config"); cfg->count() > 0) {
      const auto doc = read_json(cfg->as<std::string>());
      if (doc.value("command", std::string{}) != run.command) {
        throw UsageError("manifest is for '" + doc.value("command", std::string{}) + "', not '" + run.command + "'");
      }
    }
    action();
    if (run.manifest.empty()) run.manifest = out + ".manifest.json";
    write_manifest(run);
    return ok;
  } catch (const UsageError& e) {
    std::cerr << "ppimesh: usage error: " << e.what() << '\n';
    return usage_error;
  } catch (const DataError& e) {
    std::cerr << "ppimesh: data error: " << e.what() << '\n';
    return data_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ppimesh: data error: " << e.what() << '\n';
    return data_error;
  } catch (const std::exception& e) {
    std::cerr << "ppimesh: internal error: " << e.what() << '\n';
    return internal_error;
  }
}

}  // namespace ppimesh::cli
