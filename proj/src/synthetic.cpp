#include "ppimesh/synthetic.hpp"

#include "ppimesh/tsv.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string_view>

namespace ppimesh {

namespace {

constexpr std::string_view kStandard = "ACDEFGHIKLMNPQRSTVWY";
constexpr std::string_view kHigh = "RKDEC";
constexpr std::string_view kLow = "AGVILFP";

char pick(std::string_view letters, Rng& rng) { return letters[rng.index(letters.size())]; }

class Builder {
 public:
  Builder(const MeshCorpusConfig& cfg, Rng& rng) : cfg_(cfg), rng_(rng) {}

  std::string protein(const PlantedMotif& motif) {
    char id[32];
    std::snprintf(id, sizeof id, "SP%05zu", ++count_);
    const auto length = cfg_.min_length + rng_.index(cfg_.max_length - cfg_.min_length + 1);
    corpus.proteins.push_back({id, planted_sequence(length, motif, rng_), {}, {}});
    return id;
  }

  void annotate(const std::string& id, const std::string& term) {
    std::string target = term;
    if (rng_.uniform() < cfg_.deep_fraction) target = term + ".1";
    if (rng_.uniform() < cfg_.homology_fraction) {
      // The annotation lives on an otherwise unused sibling in the same 90% cluster.
      const auto donor = protein({});
      const auto cluster = "U90_" + donor;
      corpus.annotations.emplace_back(donor, target);
      corpus.clusters.emplace_back(90, cluster, donor);
      corpus.clusters.emplace_back(90, cluster, id);
      return;
    }
    corpus.annotations.emplace_back(id, target);
  }

  SyntheticCorpus corpus;

 private:
  const MeshCorpusConfig& cfg_;
  Rng& rng_;
  std::size_t count_ = 0;
};

void check_lengths(std::size_t min_length, std::size_t max_length) {
  if (min_length == 0 || min_length > max_length) {
    throw std::invalid_argument("synthetic corpus: need 0 < min_length <= max_length");
  }
}

}  // namespace

std::string planted_sequence(std::size_t length, const PlantedMotif& motif, Rng& rng) {
  std::string out(length, 'A');
  const double n = static_cast<double>(length);
  for (std::size_t t = 0; t < length; ++t) {
    if (motif.harmonic > 0) {
      const double c = std::cos(std::numbers::pi * motif.harmonic * (static_cast<double>(t) + 0.5) / n);
      if (rng.uniform() < motif.amplitude * std::abs(c)) {
        out[t] = pick(c > 0 ? kHigh : kLow, rng);
        continue;
      }
    }
    out[t] = pick(kStandard, rng);
  }
  return out;
}

SyntheticCorpus make_mesh_corpus(const MeshCorpusConfig& cfg) {
  check_lengths(cfg.min_length, cfg.max_length);
  if (cfg.cells.size() < 2) throw std::invalid_argument("synthetic corpus: need at least two cells");
  Rng rng(cfg.seed);
  Builder b(cfg, rng);
  for (const auto& term : cfg.terms) {
    b.corpus.ontology.emplace_back(term, cfg.root);
    b.corpus.ontology.emplace_back(term + ".1", term);
  }

  auto other_harmonic = [&](std::size_t cell) {
    auto other = rng.index(cfg.cells.size() - 1);
    if (other >= cell) ++other;
    return cfg.cells[other].harmonic;
  };
  auto add_pair = [&](int harmonic, const std::string* term_a, const std::string* term_b, int label) {
    const PlantedMotif motif{harmonic, cfg.amplitude};
    const auto a = b.protein(motif);
    const auto p = b.protein(motif);
    if (term_a) b.annotate(a, *term_a);
    if (term_b) b.annotate(p, *term_b);
    b.corpus.pairs.push_back({a, p, label, label == 1 ? PairSource::curated : PairSource::known_negative});
  };

  for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
    const auto& cell = cfg.cells[c];
    for (std::size_t i = 0; i < cfg.pairs_per_cell; ++i) {
      const int label = i % 2 == 0 ? 1 : 0;
      add_pair(label == 1 ? cell.harmonic : other_harmonic(c), &cell.term_a, &cell.term_b, label);
    }
  }
  for (std::size_t i = 0; i < cfg.generic_pairs; ++i) {
    const auto c = rng.index(cfg.cells.size());
    const int label = i % 2 == 0 ? 1 : 0;
    add_pair(label == 1 ? cfg.cells[c].harmonic : other_harmonic(c), &cfg.cells[c].term_a, nullptr, label);
  }
  for (std::size_t i = 0; i < cfg.candidates; ++i) {
    const auto c = rng.index(cfg.cells.size());
    const bool annotated = i % 4 != 3;
    const int harmonic = i % 2 == 0 ? cfg.cells[c].harmonic : other_harmonic(c);
    const PlantedMotif motif{harmonic, cfg.amplitude};
    const auto a = b.protein(motif);
    const auto p = b.protein(motif);
    if (annotated) {
      b.annotate(a, cfg.cells[c].term_a);
      b.annotate(p, cfg.cells[c].term_b);
    }
    b.corpus.candidates.push_back(canonical_pair(a, p));
  }
  for (auto& pair : b.corpus.pairs) {
    if (pair.id_b < pair.id_a) std::swap(pair.id_a, pair.id_b);
  }
  return std::move(b.corpus);
}

SyntheticCorpus make_sweep_corpus(std::size_t pairs, int positive_harmonic, int negative_harmonic,
                                  double amplitude, std::size_t min_length, std::size_t max_length,
                                  std::uint64_t seed) {
  MeshCorpusConfig cfg;
  cfg.min_length = min_length;
  cfg.max_length = max_length;
  check_lengths(min_length, max_length);
  Rng rng(seed);
  Builder b(cfg, rng);
  for (std::size_t i = 0; i < pairs; ++i) {
    const int label = i % 2 == 0 ? 1 : 0;
    const PlantedMotif motif{label == 1 ? positive_harmonic : negative_harmonic, amplitude};
    const auto a = b.protein(motif);
    const auto p = b.protein(motif);
    b.corpus.pairs.push_back({a, p, label, label == 1 ? PairSource::curated : PairSource::known_negative});
  }
  return std::move(b.corpus);
}

void write_corpus(const std::filesystem::path& dir, const SyntheticCorpus& corpus) {
  std::filesystem::create_directories(dir);
  auto emit = [&dir](const char* name, auto&& body) {
    AtomicOutput out(dir / name);
    body(out.stream());
    out.commit();
  };
  emit("proteins.fasta", [&](std::ostream& os) { write_fasta(os, corpus.proteins); });
  for (int label : {1, 0}) {
    emit(label == 1 ? "positives.tsv" : "known_negatives.tsv", [&](std::ostream& os) {
      os << "id_a\tid_b\n";
      for (const auto& p : corpus.pairs) {
        if (p.label == label) os << p.id_a << '\t' << p.id_b << '\n';
      }
    });
  }
  emit("ontology.tsv", [&](std::ostream& os) {
    os << "child_id\tparent_id\n";
    for (const auto& [child, parent] : corpus.ontology) os << child << '\t' << parent << '\n';
  });
  emit("annotations.tsv", [&](std::ostream& os) {
    os << "protein_id\tgo_id\n";
    for (const auto& [protein, term] : corpus.annotations) os << protein << '\t' << term << '\n';
  });
  emit("clusters.tsv", [&](std::ostream& os) {
    os << "level\tcluster_id\tprotein_id\n";
    for (const auto& [level, cluster, protein] : corpus.clusters) os << level << '\t' << cluster << '\t' << protein << '\n';
  });
  emit("candidates.tsv", [&](std::ostream& os) {
    os << "id_a\tid_b\n";
    for (const auto& [a, p] : corpus.candidates) os << a << '\t' << p << '\n';
  });
}

}  // namespace ppimesh
