#pragma once

#include "ppimesh/dataset.hpp"
#include "ppimesh/rng.hpp"
#include "ppimesh/seq_codec.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace ppimesh {

// Planted low-frequency category pattern. At residue t of a length L chain,
// with probability amplitude * |cos(pi * harmonic * (t + 0.5) / L)| the residue
// is drawn from the high categories {R,K,D,E,C} where the cosine is positive
// and from the low categories {A,G,V,I,L,F,P} where it is negative; otherwise
// it is uniform over the 20 standard residues. Harmonic 0 plants nothing.
struct PlantedMotif {
  int harmonic = 0;
  double amplitude = 0.0;
};

std::string planted_sequence(std::size_t length, const PlantedMotif& motif, Rng& rng);

struct SyntheticCell {
  std::string term_a;
  std::string term_b;
  int harmonic = 0;
};

struct MeshCorpusConfig {
  std::string root = "GO:0003674";
  std::vector<std::string> terms;  // children of the root
  std::vector<SyntheticCell> cells;
  std::size_t pairs_per_cell = 2000;
  std::size_t generic_pairs = 0;  // pairs with an unannotated protein
  std::size_t candidates = 0;
  std::size_t min_length = 100;
  std::size_t max_length = 400;
  double amplitude = 0.6;
  /// Share of annotated proteins whose term is on a child term one level
  /// below, so trimming has something to propagate.
  double deep_fraction = 0.0;
  /// Share of annotated proteins whose term is only reachable through a
  /// 90% identity cluster sibling.
  double homology_fraction = 0.0;
  std::uint64_t seed = 0;
};

// Every cell pair joins a protein annotated with term_a and one with term_b.
// Positives carry the cell's own motif in both proteins; negatives carry the
// motif of another cell, so only a per-cell classifier can separate them.
struct SyntheticCorpus {
  std::vector<ProteinRecord> proteins;
  std::vector<InteractionPair> pairs;
  std::vector<std::pair<std::string, std::string>> ontology;     // child, parent
  std::vector<std::pair<std::string, std::string>> annotations;  // protein, term
  std::vector<std::tuple<int, std::string, std::string>> clusters;  // level, cluster, protein
  std::vector<PairKey> candidates;
};

SyntheticCorpus make_mesh_corpus(const MeshCorpusConfig& cfg);

/// Balanced labeled pairs where positives carry one harmonic and negatives
/// another in both proteins; no annotations.
SyntheticCorpus make_sweep_corpus(std::size_t pairs, int positive_harmonic, int negative_harmonic,
                                  double amplitude, std::size_t min_length, std::size_t max_length,
                                  std::uint64_t seed);

/// proteins.fasta, positives.tsv, known_negatives.tsv, ontology.tsv,
/// annotations.tsv, clusters.tsv and candidates.tsv.
void write_corpus(const std::filesystem::path& dir, const SyntheticCorpus& corpus);

}  // namespace ppimesh
