#pragma once

#include "ppimesh/common.hpp"

#include "json.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ppimesh {

using TermSet = std::set<std::string, std::less<>>;

// Molecular-function DAG given as child -> parent edges.
class OntologyGraph {
 public:
  /// Root is the unique parentless term unless given explicitly. Cycles are a
  /// DataError; terms that cannot reach the root are reported and skipped.
  static OntologyGraph from_edges(const std::vector<std::pair<std::string, std::string>>& child_parent,
                                  std::optional<std::string> root = std::nullopt);

  const std::string& root() const { return root_; }
  bool contains(std::string_view term) const { return depth_.find(term) != depth_.end(); }
  /// Shortest edge count from the root; requires contains(term).
  int depth(std::string_view term) const;
  /// The term and every ancestor reachable through parent links.
  const TermSet& ancestors_or_self(std::string_view term) const;
  const std::map<std::string, int, std::less<>>& depths() const { return depth_; }
  const std::vector<std::string>& unreachable() const { return unreachable_; }

 private:
  std::string root_;
  std::map<std::string, int, std::less<>> depth_;
  std::map<std::string, TermSet, std::less<>> ancestors_;
  std::vector<std::string> unreachable_;
};

/// Two columns: child_id, parent_id.
OntologyGraph read_ontology(std::istream& in, std::optional<std::string> root = std::nullopt);

// Read access to annotations; resolution only goes through this interface.
class AnnotationSource {
 public:
  virtual ~AnnotationSource() = default;
  virtual const TermSet& direct_terms(std::string_view protein) const = 0;
  /// Other members of the protein's cluster at an identity level (100, 90, 50).
  virtual std::vector<std::string> cluster_siblings(std::string_view protein, int level) const = 0;
};

class AnnotationStore : public AnnotationSource {
 public:
  void add_annotation(const std::string& protein, const std::string& term);
  void add_cluster_member(int level, const std::string& cluster, const std::string& protein);

  const TermSet& direct_terms(std::string_view protein) const override;
  std::vector<std::string> cluster_siblings(std::string_view protein, int level) const override;

  const std::map<std::string, TermSet, std::less<>>& annotations() const { return direct_; }

 private:
  std::map<std::string, TermSet, std::less<>> direct_;
  std::map<int, std::map<std::string, std::vector<std::string>>> members_;
  std::map<int, std::map<std::string, std::string, std::less<>>> cluster_of_;
};

inline constexpr int kIdentityLevels[] = {100, 90, 50};

/// Two columns: protein_id, go_id.
void read_annotations(std::istream& in, AnnotationStore& store);
/// Three columns: level, cluster_id, protein_id.
void read_clusters(std::istream& in, AnnotationStore& store);

/// Trimmed set of higher-level terms plus, for every known term, the selected
/// terms among its ancestors (itself included).
struct TermSelection {
  TermSet selected_terms;
  int max_depth = 0;
  std::size_t min_proteins = 0;
  std::map<std::string, std::size_t, std::less<>> protein_counts;  // selected term -> proteins
  std::map<std::string, TermSet, std::less<>> projection;
  std::vector<std::string> warnings;

  /// Union of the projections of the given terms; unknown terms contribute nothing.
  TermSet project(const TermSet& terms) const;
};

/// Up-propagates each protein's direct terms to all ancestors, then keeps the
/// non-root terms at depth <= max_depth annotating >= min_proteins proteins.
TermSelection trim_ontology(const OntologyGraph& graph, const AnnotationStore& store, int max_depth,
                            std::size_t min_proteins);

nlohmann::json to_json(const TermSelection& selection);
TermSelection term_selection_from_json(const nlohmann::json& doc);

/// Selected terms from direct annotations; if none, the union over cluster
/// siblings at 100%, then 90%, then 50% identity, first non-empty level wins.
/// Empty means the generic classifier applies.
TermSet resolve_annotations(std::string_view protein, const AnnotationSource& source,
                            const TermSelection& selection);

}  // namespace ppimesh
