#include "ppimesh/ontology.hpp"

#include "ppimesh/tsv.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <istream>
#include <iostream>

namespace ppimesh {

OntologyGraph OntologyGraph::from_edges(const std::vector<std::pair<std::string, std::string>>& child_parent,
                                        std::optional<std::string> root) {
  std::map<std::string, std::vector<std::string>, std::less<>> parents;
  std::map<std::string, std::vector<std::string>, std::less<>> children;
  for (const auto& [child, parent] : child_parent) {
    if (child == parent) throw DataError("ontology: term '" + child + "' is its own parent");
    parents[child].push_back(parent);
    children[parent].push_back(child);
    parents.try_emplace(parent);
  }
  if (parents.empty()) throw DataError("ontology has no edges");

  // Kahn's algorithm over child -> parent edges detects cycles.
  {
    std::map<std::string_view, std::size_t> pending;
    for (const auto& [term, ps] : parents) pending[term] = ps.size();
    std::deque<std::string_view> ready;
    for (const auto& [term, n] : pending) if (n == 0) ready.push_back(term);
    std::size_t visited = 0;
    while (!ready.empty()) {
      const auto term = ready.front();
      ready.pop_front();
      ++visited;
      if (auto it = children.find(term); it != children.end()) {
        for (const auto& child : it->second) {
          if (--pending[child] == 0) ready.push_back(child);
        }
      }
    }
    if (visited != parents.size()) throw DataError("ontology contains a cycle");
  }

  OntologyGraph graph;
  if (root) {
    if (!parents.contains(*root)) throw DataError("ontology root '" + *root + "' does not occur in the edges");
    graph.root_ = *root;
  } else {
    std::vector<std::string> roots;
    for (const auto& [term, ps] : parents) if (ps.empty()) roots.push_back(term);
    if (roots.size() != 1) {
      throw DataError("ontology has " + std::to_string(roots.size()) + " parentless terms; name the root explicitly");
    }
    graph.root_ = roots.front();
  }

  // Breadth-first from the root gives shortest-path depth.
  std::deque<std::string> queue{graph.root_};
  graph.depth_[graph.root_] = 0;
  while (!queue.empty()) {
    const auto term = queue.front();
    queue.pop_front();
    const int next = graph.depth_[term] + 1;
    if (auto it = children.find(term); it != children.end()) {
      for (const auto& child : it->second) {
        if (graph.depth_.try_emplace(child, next).second) queue.push_back(child);
      }
    }
  }
  for (const auto& [term, ps] : parents) {
    if (!graph.depth_.contains(term)) graph.unreachable_.push_back(term);
  }

  // Ancestor closure, memoized depth-first over parent links (acyclic by now).
  std::function<const TermSet&(const std::string&)> closure = [&](const std::string& term) -> const TermSet& {
    if (auto it = graph.ancestors_.find(term); it != graph.ancestors_.end()) return it->second;
    TermSet set{term};
    for (const auto& parent : parents[term]) {
      if (!graph.depth_.contains(parent)) continue;
      const auto& up = closure(parent);
      set.insert(up.begin(), up.end());
    }
    return graph.ancestors_.emplace(term, std::move(set)).first->second;
  };
  for (const auto& [term, d] : graph.depth_) closure(term);
  return graph;
}

int OntologyGraph::depth(std::string_view term) const {
  auto it = depth_.find(term);
  if (it == depth_.end()) throw std::out_of_range("unknown ontology term '" + std::string(term) + "'");
  return it->second;
}

const TermSet& OntologyGraph::ancestors_or_self(std::string_view term) const {
  auto it = ancestors_.find(term);
  if (it == ancestors_.end()) throw std::out_of_range("unknown ontology term '" + std::string(term) + "'");
  return it->second;
}

OntologyGraph read_ontology(std::istream& in, std::optional<std::string> root) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (skippable_line(line)) continue;
    const auto fields = split_tsv(line);
    if (fields.size() != 2) throw DataError("ontology line " + std::to_string(line_number) + ": expected child_id, parent_id");
    if (fields[0] == "child_id") continue;
    edges.emplace_back(fields[0], fields[1]);
  }
  return OntologyGraph::from_edges(edges, std::move(root));
}

void AnnotationStore::add_annotation(const std::string& protein, const std::string& term) {
  direct_[protein].insert(term);
}

void AnnotationStore::add_cluster_member(int level, const std::string& cluster, const std::string& protein) {
  if (std::find(std::begin(kIdentityLevels), std::end(kIdentityLevels), level) == std::end(kIdentityLevels)) {
    throw DataError("cluster identity level " + std::to_string(level) + " is not one of 100, 90, 50");
  }
  auto [it, inserted] = cluster_of_[level].try_emplace(protein, cluster);
  if (!inserted && it->second != cluster) {
    throw DataError("protein '" + protein + "' is in two clusters at level " + std::to_string(level));
  }
  if (inserted) members_[level][cluster].push_back(protein);
}

const TermSet& AnnotationStore::direct_terms(std::string_view protein) const {
  static const TermSet empty;
  auto it = direct_.find(protein);
  return it == direct_.end() ? empty : it->second;
}

std::vector<std::string> AnnotationStore::cluster_siblings(std::string_view protein, int level) const {
  auto by_level = cluster_of_.find(level);
  if (by_level == cluster_of_.end()) return {};
  auto cluster = by_level->second.find(protein);
  if (cluster == by_level->second.end()) return {};
  std::vector<std::string> out;
  for (const auto& member : members_.at(level).at(cluster->second)) {
    if (member != protein) out.push_back(member);
  }
  return out;
}

void read_annotations(std::istream& in, AnnotationStore& store) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (skippable_line(line)) continue;
    const auto fields = split_tsv(line);
    if (fields.size() != 2) throw DataError("annotation line " + std::to_string(line_number) + ": expected protein_id, go_id");
    if (fields[0] == "protein_id") continue;
    store.add_annotation(fields[0], fields[1]);
  }
}

void read_clusters(std::istream& in, AnnotationStore& store) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (skippable_line(line)) continue;
    const auto fields = split_tsv(line);
    if (fields.size() != 3) throw DataError("cluster line " + std::to_string(line_number) + ": expected level, cluster_id, protein_id");
    if (fields[0] == "level") continue;
    store.add_cluster_member(static_cast<int>(parse_integer(fields[0], "identity level")), fields[1], fields[2]);
  }
}

TermSet TermSelection::project(const TermSet& terms) const {
  TermSet out;
  for (const auto& term : terms) {
    if (auto it = projection.find(term); it != projection.end()) out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

TermSelection trim_ontology(const OntologyGraph& graph, const AnnotationStore& store, int max_depth,
                            std::size_t min_proteins) {
  TermSelection selection;
  selection.max_depth = max_depth;
  selection.min_proteins = min_proteins;
  for (const auto& term : graph.unreachable()) {
    selection.warnings.push_back("term '" + term + "' cannot reach the root and is skipped");
  }

  std::map<std::string, std::size_t, std::less<>> counts;
  std::size_t unknown = 0;
  for (const auto& [protein, terms] : store.annotations()) {
    TermSet propagated;
    for (const auto& term : terms) {
      if (!graph.contains(term)) {
        ++unknown;
        continue;
      }
      const auto& up = graph.ancestors_or_self(term);
      propagated.insert(up.begin(), up.end());
    }
    for (const auto& term : propagated) ++counts[term];
  }
  if (unknown > 0) selection.warnings.push_back(std::to_string(unknown) + " annotation(s) use terms absent from the ontology");

  for (const auto& [term, depth] : graph.depths()) {
    if (term == graph.root() || depth > max_depth) continue;
    const auto it = counts.find(term);
    if (it != counts.end() && it->second >= min_proteins) {
      selection.selected_terms.insert(term);
      selection.protein_counts[term] = it->second;
    }
  }
  if (selection.selected_terms.empty()) {
    selection.warnings.push_back("no term satisfies max_depth=" + std::to_string(max_depth) +
                                 " and min_proteins=" + std::to_string(min_proteins));
  }
  for (const auto& [term, depth] : graph.depths()) {
    TermSet mapped;
    for (const auto& ancestor : graph.ancestors_or_self(term)) {
      if (selection.selected_terms.contains(ancestor)) mapped.insert(ancestor);
    }
    if (!mapped.empty()) selection.projection.emplace(term, std::move(mapped));
  }
  return selection;
}

nlohmann::json to_json(const TermSelection& selection) {
  nlohmann::json projection = nlohmann::json::object();
  for (const auto& [term, mapped] : selection.projection) projection[term] = std::vector<std::string>(mapped.begin(), mapped.end());
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [term, n] : selection.protein_counts) counts[term] = n;
  return {{"selected_terms", std::vector<std::string>(selection.selected_terms.begin(), selection.selected_terms.end())},
          {"max_depth", selection.max_depth},
          {"min_proteins", selection.min_proteins},
          {"protein_counts", counts},
          {"projection", projection}};
}

TermSelection term_selection_from_json(const nlohmann::json& doc) {
  TermSelection selection;
  for (const auto& t : doc.at("selected_terms")) selection.selected_terms.insert(t.get<std::string>());
  selection.max_depth = doc.at("max_depth").get<int>();
  selection.min_proteins = doc.at("min_proteins").get<std::size_t>();
  for (const auto& [term, n] : doc.at("protein_counts").items()) selection.protein_counts[term] = n.get<std::size_t>();
  for (const auto& [term, mapped] : doc.at("projection").items()) {
    TermSet set;
    for (const auto& t : mapped) set.insert(t.get<std::string>());
    selection.projection.emplace(term, std::move(set));
  }
  return selection;
}

TermSet resolve_annotations(std::string_view protein, const AnnotationSource& source,
                            const TermSelection& selection) {
  auto direct = selection.project(source.direct_terms(protein));
  if (!direct.empty()) return direct;
  for (int level : kIdentityLevels) {
    TermSet borrowed;
    for (const auto& sibling : source.cluster_siblings(protein, level)) {
      auto mapped = selection.project(source.direct_terms(sibling));
      borrowed.insert(mapped.begin(), mapped.end());
    }
    if (!borrowed.empty()) return borrowed;
  }
  return {};
}

}  // namespace ppimesh
