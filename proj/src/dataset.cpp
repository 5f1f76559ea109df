#include "ppimesh/dataset.hpp"

#include "ppimesh/rng.hpp"
#include "ppimesh/tsv.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace ppimesh {

namespace {

std::string lowercase(std::string text) {
  for (auto& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return text;
}

InteractionPair make_pair(const std::string& a, const std::string& b, int label, PairSource source) {
  auto [first, second] = canonical_pair(a, b);
  return {std::move(first), std::move(second), label, source};
}

}  // namespace

std::string to_string(PairSource source) {
  switch (source) {
    case PairSource::curated: return "curated";
    case PairSource::known_negative: return "known_negative";
    case PairSource::random: return "random";
  }
  return "curated";
}

PairSource parse_pair_source(std::string_view text) {
  if (text == "curated") return PairSource::curated;
  if (text == "known_negative") return PairSource::known_negative;
  if (text == "random") return PairSource::random;
  throw DataError("unknown pair source '" + std::string(text) + "'");
}

LoadedPairs load_pairs(std::istream& in, int label, PairSource source, bool allow_self) {
  LoadedPairs loaded;
  std::set<PairKey> seen;
  std::string line;
  std::size_t line_number = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_number;
    if (skippable_line(line)) continue;
    const auto fields = split_tsv(line);
    if (first_row) {
      first_row = false;
      if (fields.size() == 2 && lowercase(fields[0]) == "id_a" && lowercase(fields[1]) == "id_b") continue;
    }
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      throw DataError("pair file line " + std::to_string(line_number) + ": expected columns id_a, id_b");
    }
    if (fields.size() > 2) {
      throw DataError("pair file line " + std::to_string(line_number) +
                      ": more than two ids; expand multi-protein associations upstream");
    }
    if (fields[0] == fields[1] && !allow_self) {
      throw DataError("pair file line " + std::to_string(line_number) + ": self pair '" + fields[0] + "'");
    }
    auto pair = make_pair(fields[0], fields[1], label, source);
    if (!seen.insert(pair.key()).second) {
      ++loaded.duplicates;
      continue;
    }
    loaded.pairs.push_back(std::move(pair));
  }
  if (loaded.pairs.empty()) loaded.warnings.push_back("pair file contains no pairs");
  if (loaded.duplicates > 0) {
    loaded.warnings.push_back(std::to_string(loaded.duplicates) + " duplicate pair(s) collapsed");
  }
  return loaded;
}

std::vector<InteractionPair> sample_negatives(const std::vector<std::string>& pool_in, std::size_t count,
                                              const VetoList& veto, std::uint64_t seed,
                                              const std::set<PairKey>& exclude) {
  std::vector<std::string> pool = pool_in;
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  const std::size_t p = pool.size();
  const std::size_t total = p < 2 ? 0 : p * (p - 1) / 2;

  auto blocked = [&](const PairKey& key) { return veto.contains(key.first, key.second) || exclude.contains(key); };
  std::size_t blocked_in_pool = 0;
  {
    std::set<PairKey> counted;
    auto in_pool = [&pool](const std::string& id) { return std::binary_search(pool.begin(), pool.end(), id); };
    for (const auto* source : {&veto.pairs(), &exclude}) {
      for (const auto& key : *source) {
        if (key.first != key.second && in_pool(key.first) && in_pool(key.second) && counted.insert(key).second) {
          ++blocked_in_pool;
        }
      }
    }
  }
  const std::size_t available = total - blocked_in_pool;
  if (count > available) {
    throw DataError("cannot sample " + std::to_string(count) + " negatives: only " + std::to_string(available) +
                    " unvetoed pairs exist among " + std::to_string(p) + " proteins");
  }

  Rng rng(seed);
  std::vector<InteractionPair> out;
  out.reserve(count);
  if (available <= 2 * count || total <= 4096) {
    // Dense regime: enumerate every candidate and take a seeded prefix.
    std::vector<PairKey> candidates;
    candidates.reserve(available);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i + 1; j < p; ++j) {
        PairKey key{pool[i], pool[j]};
        if (!blocked(key)) candidates.push_back(std::move(key));
      }
    }
    rng.shuffle(candidates.begin(), candidates.end());
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back({candidates[i].first, candidates[i].second, 0, PairSource::random});
    }
    return out;
  }

  const std::size_t cap = 50 * count + 1000;
  std::set<PairKey> chosen;
  std::size_t draws = 0;
  while (out.size() < count) {
    if (++draws > cap) {
      throw DataError("negative sampling exceeded " + std::to_string(cap) +
                      " draws; the protein pool is close to saturated");
    }
    const auto i = rng.index(p);
    const auto j = rng.index(p);
    if (i == j) continue;
    auto key = canonical_pair(pool[i], pool[j]);
    if (blocked(key) || !chosen.insert(key).second) continue;
    out.push_back({key.first, key.second, 0, PairSource::random});
  }
  return out;
}

Dataset assemble_dataset(const std::vector<InteractionPair>& positives,
                         const std::vector<InteractionPair>& known_negatives,
                         const AssembleOptions& options) {
  Dataset dataset;
  dataset.seed = options.seed;

  VetoList veto;
  for (const auto& pair : positives) veto.insert(pair.id_a, pair.id_b);
  dataset.veto_size = veto.size();

  std::vector<std::string> unresolved;
  auto resolvable = [&](const InteractionPair& pair) {
    if (options.known_ids == nullptr) return true;
    bool ok = true;
    for (const auto* id : {&pair.id_a, &pair.id_b}) {
      if (!options.known_ids->contains(*id)) {
        unresolved.push_back(*id);
        ok = false;
      }
    }
    return ok;
  };

  std::vector<InteractionPair> kept_positive;
  std::vector<InteractionPair> kept_negative;
  for (const auto& pair : positives) {
    if (resolvable(pair)) kept_positive.push_back(make_pair(pair.id_a, pair.id_b, 1, pair.source));
    else ++dataset.dropped;
  }
  for (const auto& pair : known_negatives) {
    if (resolvable(pair)) kept_negative.push_back(make_pair(pair.id_a, pair.id_b, 0, PairSource::known_negative));
    else ++dataset.dropped;
  }
  if (!unresolved.empty() && !options.drop_unresolved) {
    std::sort(unresolved.begin(), unresolved.end());
    unresolved.erase(std::unique(unresolved.begin(), unresolved.end()), unresolved.end());
    std::string list;
    for (const auto& id : unresolved) list += (list.empty() ? "" : ", ") + id;
    throw DataError("pairs reference ids absent from the sequence corpus: " + list);
  }

  std::vector<std::string> pool;
  for (const auto& pair : kept_positive) {
    pool.push_back(pair.id_a);
    pool.push_back(pair.id_b);
  }
  std::set<PairKey> exclude;
  for (const auto& pair : kept_negative) exclude.insert(pair.key());
  auto random = sample_negatives(pool, options.random_negatives, veto, options.seed, exclude);

  dataset.positives = kept_positive.size();
  dataset.known_negatives = kept_negative.size();
  dataset.random_negatives = random.size();
  const std::size_t negatives = dataset.known_negatives + dataset.random_negatives;
  if (!options.allow_imbalance && dataset.positives != negatives) {
    throw DataError("dataset is unbalanced: " + std::to_string(dataset.positives) + " positives vs " +
                    std::to_string(negatives) + " negatives");
  }

  dataset.pairs = std::move(kept_positive);
  dataset.pairs.insert(dataset.pairs.end(), kept_negative.begin(), kept_negative.end());
  dataset.pairs.insert(dataset.pairs.end(), random.begin(), random.end());
  Rng rng(derive_seed(options.seed, "dataset-shuffle"));
  rng.shuffle(dataset.pairs.begin(), dataset.pairs.end());
  return dataset;
}

void write_dataset(std::ostream& out, const std::vector<InteractionPair>& pairs) {
  out << "id_a\tid_b\tlabel\tsource\n";
  for (const auto& p : pairs) out << p.id_a << '\t' << p.id_b << '\t' << p.label << '\t' << to_string(p.source) << '\n';
}

std::vector<InteractionPair> read_dataset(std::istream& in) {
  std::vector<InteractionPair> pairs;
  std::string line;
  std::size_t line_number = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_number;
    if (skippable_line(line)) continue;
    const auto fields = split_tsv(line);
    if (header) {
      header = false;
      if (fields.size() < 3 || fields[0] != "id_a" || fields[2] != "label") {
        throw DataError("dataset file: expected header id_a, id_b, label[, source]");
      }
      continue;
    }
    if (fields.size() < 3) throw DataError("dataset line " + std::to_string(line_number) + ": too few columns");
    const auto label = parse_integer(fields[2], "label");
    if (label != 0 && label != 1) throw DataError("dataset line " + std::to_string(line_number) + ": label must be 0 or 1");
    const auto source = fields.size() > 3 ? parse_pair_source(fields[3])
                                          : (label == 1 ? PairSource::curated : PairSource::random);
    pairs.push_back(make_pair(fields[0], fields[1], static_cast<int>(label), source));
  }
  if (header) throw DataError("dataset file is empty");
  return pairs;
}

}  // namespace ppimesh
