#pragma once

// Synthetic corpus -> features, labels, resolved terms and clusters, as the
// mesh-train command assembles them.

#include "ppimesh/featurizer.hpp"
#include "ppimesh/mesh.hpp"
#include "ppimesh/ontology.hpp"
#include "ppimesh/synthetic.hpp"

#include <vector>

namespace fixture {

struct MeshInputs {
  std::vector<ppimesh::PairKey> pairs;
  ppimesh::Labels labels;
  ppimesh::ProteinFeatures proteins;
  ppimesh::FeatureMatrix x;
  ppimesh::TermSelection selection;
  ppimesh::ResolvedTerms terms;
  ppimesh::ClusteredPairs clusters;
};

inline ppimesh::ResolvedTerms resolve_all(const ppimesh::SyntheticCorpus& corpus,
                                          const ppimesh::AnnotationStore& store,
                                          const ppimesh::TermSelection& selection) {
  ppimesh::ResolvedTerms out;
  for (const auto& protein : corpus.proteins) {
    auto terms = ppimesh::resolve_annotations(protein.id, store, selection);
    if (!terms.empty()) out.emplace(protein.id, std::move(terms));
  }
  return out;
}

inline MeshInputs prepare(const ppimesh::SyntheticCorpus& corpus, const ppimesh::FeaturizerConfig& featurizer,
                          int max_depth = 1, std::size_t min_proteins = 1) {
  using namespace ppimesh;
  MeshInputs in;
  for (const auto& p : corpus.pairs) {
    in.pairs.push_back(p.key());
    in.labels.push_back(p.label);
  }
  in.proteins = featurize_corpus(corpus.proteins, featurizer, AlphabetMode::strict, 1);
  in.x = build_pair_matrix(in.pairs, in.proteins);
  AnnotationStore store;
  for (const auto& [protein, term] : corpus.annotations) store.add_annotation(protein, term);
  for (const auto& [level, cluster, protein] : corpus.clusters) store.add_cluster_member(level, cluster, protein);
  const auto graph = OntologyGraph::from_edges(corpus.ontology);
  in.selection = trim_ontology(graph, store, max_depth, min_proteins);
  in.terms = resolve_all(corpus, store, in.selection);
  in.clusters = cluster_pairs(in.pairs, in.terms);
  return in;
}

}  // namespace fixture
