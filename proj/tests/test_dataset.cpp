#include "ppimesh/dataset.hpp"

#include "doctest.h"

#include <algorithm>
#include <sstream>

using namespace ppimesh;

namespace {

LoadedPairs load(const std::string& text, int label = 1, bool allow_self = false) {
  std::istringstream in(text);
  return load_pairs(in, label, label == 1 ? PairSource::curated : PairSource::known_negative, allow_self);
}

std::vector<InteractionPair> positives(std::initializer_list<std::pair<const char*, const char*>> list) {
  std::vector<InteractionPair> out;
  for (const auto& [a, b] : list) {
    auto key = canonical_pair(a, b);
    out.push_back({key.first, key.second, 1, PairSource::curated});
  }
  return out;
}

std::vector<InteractionPair> known(std::initializer_list<std::pair<const char*, const char*>> list) {
  auto out = positives(list);
  for (auto& p : out) {
    p.label = 0;
    p.source = PairSource::known_negative;
  }
  return out;
}

std::string serialize(const Dataset& d) {
  std::ostringstream out;
  write_dataset(out, d.pairs);
  return out.str();
}

}  // namespace

TEST_SUITE("dataset_builder") {
  TEST_CASE("load_pairs canonicalizes and deduplicates") {
    const auto loaded = load("P1\tP2\nP2\tP1\n");
    REQUIRE(loaded.pairs.size() == 1);
    CHECK(loaded.duplicates == 1);
    CHECK(loaded.pairs[0].id_a == "P1");
    CHECK(loaded.pairs[0].id_b == "P2");

    const auto swapped = load("id_a\tid_b\n# comment\nZ9\tA1\n");
    REQUIRE(swapped.pairs.size() == 1);
    CHECK(swapped.pairs[0].id_a == "A1");
  }

  TEST_CASE("load_pairs edge cases") {
    const auto empty = load("");
    CHECK(empty.pairs.empty());
    CHECK(empty.warnings.size() == 1);
    CHECK_THROWS_AS(load("P1\tP1\n"), DataError);
    CHECK(load("P1\tP1\n", 1, true).pairs.size() == 1);
    CHECK_THROWS_AS(load("P1\n"), DataError);
    CHECK_THROWS_AS(load("P1\tP2\tP3\n"), DataError);
    CHECK(load("P1\tP2\n", 0).pairs[0].label == 0);
  }

  TEST_CASE("sample_negatives small pool") {
    VetoList veto;
    veto.insert("B", "A");
    auto got = sample_negatives({"A", "B", "C"}, 2, veto, 1);
    std::vector<PairKey> keys;
    for (const auto& p : got) keys.push_back(p.key());
    std::sort(keys.begin(), keys.end());
    CHECK(keys == std::vector<PairKey>{{"A", "C"}, {"B", "C"}});
    CHECK_THROWS_AS(sample_negatives({"A", "B", "C"}, 3, veto, 1), DataError);
  }

  TEST_CASE("sample_negatives soundness and determinism") {
    for (std::size_t pool_size : {100u, 400u}) {
      std::vector<std::string> pool;
      for (std::size_t i = 0; i < pool_size; ++i) pool.push_back("P" + std::to_string(i));
      VetoList veto;
      for (std::size_t i = 0; i < 50; ++i) veto.insert(pool[i], pool[(i * 7 + 3) % pool_size]);
      const auto first = sample_negatives(pool, 1000, veto, 42);
      const auto second = sample_negatives(pool, 1000, veto, 42);
      CHECK(first == second);
      REQUIRE(first.size() == 1000);
      std::set<PairKey> distinct;
      for (const auto& p : first) {
        CHECK(p.id_a < p.id_b);
        CHECK(p.label == 0);
        CHECK(p.source == PairSource::random);
        distinct.insert(p.key());
        for (const auto& v : veto.pairs()) CHECK(v != p.key());
      }
      CHECK(distinct.size() == 1000);
      CHECK(sample_negatives(pool, 1000, veto, 43) != first);
    }
  }

  TEST_CASE("sample_negatives honours the exclusion set") {
    std::set<PairKey> exclude{{"A", "B"}, {"A", "C"}};
    const auto got = sample_negatives({"A", "B", "C", "D"}, 4, {}, 5, exclude);
    for (const auto& p : got) CHECK_FALSE(exclude.contains(p.key()));
    CHECK_THROWS_AS(sample_negatives({"A", "B", "C", "D"}, 5, {}, 5, exclude), DataError);
  }

  TEST_CASE("miniature dataset shapes") {
    // Positives only, then known negatives: equal counts.
    const auto d1 = assemble_dataset(positives({{"A", "B"}, {"C", "D"}, {"E", "F"}}),
                                     known({{"X", "Y"}, {"X", "Z"}, {"Y", "Z"}}), {});
    CHECK(d1.pairs.size() == 6);
    CHECK(d1.positives == 3);
    CHECK(d1.known_negatives == 3);
    CHECK(d1.random_negatives == 0);

    AssembleOptions options;
    options.random_negatives = 3;
    options.seed = 11;
    const auto pos = positives({{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "E"}, {"E", "F"}});
    const auto d2 = assemble_dataset(pos, known({{"X", "Y"}, {"X", "Z"}}), options);
    CHECK(d2.pairs.size() == 10);
    CHECK(d2.known_negatives == 2);
    CHECK(d2.random_negatives == 3);
    CHECK(d2.veto_size == 5);
    std::size_t negatives = 0;
    for (const auto& p : d2.pairs) {
      negatives += p.label == 0;
      if (p.source == PairSource::random) {
        for (const auto& q : pos) CHECK(q.key() != p.key());
        // Random negatives are drawn from the positive pool only.
        CHECK(std::string("ABCDEF").find(p.id_a) != std::string::npos);
      }
    }
    CHECK(negatives == 5);
    CHECK(serialize(assemble_dataset(pos, known({{"X", "Y"}, {"X", "Z"}}), options)) == serialize(d2));

    CHECK_THROWS_AS(assemble_dataset(positives({{"A", "B"}, {"C", "D"}, {"E", "F"}}), known({{"X", "Y"}, {"X", "Z"}}), {}),
                    DataError);
    AssembleOptions lax;
    lax.allow_imbalance = true;
    CHECK(assemble_dataset(positives({{"A", "B"}, {"C", "D"}, {"E", "F"}}), known({{"X", "Y"}, {"X", "Z"}}), lax)
              .pairs.size() == 5);
  }

  TEST_CASE("unresolved ids") {
    const std::set<std::string, std::less<>> ids{"A", "B", "C", "D", "X", "Y"};
    AssembleOptions options;
    options.known_ids = &ids;
    try {
      assemble_dataset(positives({{"A", "B"}, {"C", "Q"}}), known({{"X", "Y"}, {"Y", "Z"}}), options);
      FAIL("expected a DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("Q, Z") != std::string::npos);
    }
    options.drop_unresolved = true;
    const auto d = assemble_dataset(positives({{"A", "B"}, {"C", "Q"}}), known({{"X", "Y"}, {"Y", "Z"}}), options);
    CHECK(d.dropped == 2);
    CHECK(d.pairs.size() == 2);
    // Dropped positives remain vetoed.
    CHECK(d.veto_size == 2);
  }

  TEST_CASE("dataset file round trip and idempotence") {
    AssembleOptions options;
    options.random_negatives = 4;
    options.seed = 3;
    const auto pos = positives({{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "E"}});
    const auto d = assemble_dataset(pos, {}, options);
    std::istringstream in(serialize(d));
    const auto back = read_dataset(in);
    CHECK(back == d.pairs);

    std::vector<InteractionPair> again_pos, again_neg;
    for (const auto& p : back) (p.label == 1 ? again_pos : again_neg).push_back(p);
    AssembleOptions none;
    none.seed = 3;
    const auto again = assemble_dataset(again_pos, again_neg, none);
    auto set_of = [](const std::vector<InteractionPair>& v) {
      std::set<std::pair<PairKey, int>> s;
      for (const auto& p : v) s.emplace(p.key(), p.label);
      return s;
    };
    CHECK(set_of(again.pairs) == set_of(d.pairs));

    std::istringstream bad("id_a\tid_b\tlabel\nA\tB\t2\n");
    CHECK_THROWS_AS(read_dataset(bad), DataError);
  }
}
