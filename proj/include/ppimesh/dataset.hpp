#pragma once

#include "ppimesh/common.hpp"

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ppimesh {

enum class PairSource { curated, known_negative, random };

std::string to_string(PairSource source);
PairSource parse_pair_source(std::string_view text);

/// Stored canonically: id_a < id_b.
struct InteractionPair {
  std::string id_a;
  std::string id_b;
  int label = 1;
  PairSource source = PairSource::curated;

  PairKey key() const { return {id_a, id_b}; }
  bool operator==(const InteractionPair&) const = default;
};

/// Canonical pairs excluded from random negative sampling.
class VetoList {
 public:
  void insert(const std::string& a, const std::string& b) { pairs_.insert(canonical_pair(a, b)); }
  bool contains(const std::string& a, const std::string& b) const { return pairs_.contains(canonical_pair(a, b)); }
  std::size_t size() const { return pairs_.size(); }
  const std::set<PairKey>& pairs() const { return pairs_; }

 private:
  std::set<PairKey> pairs_;
};

struct LoadedPairs {
  std::vector<InteractionPair> pairs;  // first occurrence order, canonicalized
  std::size_t duplicates = 0;
  std::vector<std::string> warnings;
};

/// Two-column TSV (id_a, id_b); an optional "id_a\tid_b" header and '#'
/// comments are skipped. Rows with more than two columns are rejected, as are
/// self pairs unless allowed.
LoadedPairs load_pairs(std::istream& in, int label, PairSource source, bool allow_self = false);

/// Exactly `count` distinct canonical pairs drawn from the pool, none in the
/// veto list or in `exclude`. Small candidate spaces are enumerated and
/// shuffled; large ones use rejection sampling capped at 50 * count + 1000 draws.
std::vector<InteractionPair> sample_negatives(const std::vector<std::string>& pool, std::size_t count,
                                              const VetoList& veto, std::uint64_t seed,
                                              const std::set<PairKey>& exclude = {});

struct AssembleOptions {
  std::size_t random_negatives = 0;
  std::uint64_t seed = 0;
  bool allow_imbalance = false;
  /// When set, every id must be in this set.
  const std::set<std::string, std::less<>>* known_ids = nullptr;
  /// Drop pairs with unknown ids instead of failing. Dropped positives stay in the veto list.
  bool drop_unresolved = false;
};

struct Dataset {
  std::vector<InteractionPair> pairs;  // seeded shuffle of all sources
  std::size_t positives = 0;
  std::size_t known_negatives = 0;
  std::size_t random_negatives = 0;
  std::size_t dropped = 0;
  std::size_t veto_size = 0;
  std::uint64_t seed = 0;
};

Dataset assemble_dataset(const std::vector<InteractionPair>& positives,
                         const std::vector<InteractionPair>& known_negatives,
                         const AssembleOptions& options);

/// Header "id_a\tid_b\tlabel\tsource".
void write_dataset(std::ostream& out, const std::vector<InteractionPair>& pairs);
std::vector<InteractionPair> read_dataset(std::istream& in);

}  // namespace ppimesh
