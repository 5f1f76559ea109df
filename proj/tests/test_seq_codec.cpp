#include "ppimesh/seq_codec.hpp"

#include "doctest.h"

#include <map>
#include <sstream>

using namespace ppimesh;

namespace {

std::vector<ProteinRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_fasta(in);
}

std::vector<int> codes(const CategorySignal& s) { return {s.values.begin(), s.values.end()}; }

}  // namespace

TEST_SUITE("seq_codec") {
  TEST_CASE("minimal record") {
    const auto records = parse(">P1\nAGV\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0].id == "P1");
    CHECK(records[0].sequence == "AGV");
  }

  TEST_CASE("line folding and multiple records") {
    const auto records = parse(">P1\nAG\nV\n>P2\nC\n");
    REQUIRE(records.size() == 2);
    CHECK(records[0].sequence == "AGV");
    CHECK(records[1].sequence == "C");
  }

  TEST_CASE("invalid character reports id, character and position") {
    try {
      parse(">P1\nAB1\n");
      FAIL("expected SequenceError");
    } catch (const SequenceError& e) {
      CHECK(e.id() == "P1");
      CHECK(e.character() == '1');
      CHECK(e.position() == 3);
    }
  }

  TEST_CASE("header token, case folding, stop symbol and CRLF") {
    const auto records = parse(">sp|Q1 some description\r\nag v*\r\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0].id == "sp|Q1");
    CHECK(records[0].sequence == "AGV");
  }

  TEST_CASE("structural errors") {
    CHECK_THROWS_AS(parse(""), DataError);
    CHECK_THROWS_AS(parse(">P1\nA\n>P1\nC\n"), DataError);
    CHECK_THROWS_AS(parse(">P1\n>P2\nA\n"), DataError);
    CHECK_THROWS_AS(parse("AGV\n>P1\nA\n"), DataError);
    CHECK_THROWS_AS(parse(">P1\nA*G\n"), SequenceError);
  }

  TEST_CASE("category table") {
    CHECK(codes(encode_sequence("AGV")) == std::vector<int>{1, 1, 1});
    CHECK(codes(encode_sequence("RKDEC")) == std::vector<int>{5, 5, 6, 6, 7});
    CHECK(codes(encode_sequence("YMTS")) == std::vector<int>{3, 3, 3, 3});

    const std::map<char, int> expected{
        {'A', 1}, {'G', 1}, {'V', 1}, {'I', 2}, {'L', 2}, {'F', 2}, {'P', 2}, {'Y', 3}, {'M', 3}, {'T', 3},
        {'S', 3}, {'H', 4}, {'N', 4}, {'Q', 4}, {'W', 4}, {'R', 5}, {'K', 5}, {'D', 6}, {'E', 6}, {'C', 7}};
    CHECK(expected.size() == 20);
    for (const auto& [residue, category] : expected) {
      CAPTURE(residue);
      CHECK(residue_category(residue) == category);
      CHECK(residue_category(static_cast<char>(residue - 'A' + 'a')) == category);
    }
    CHECK(residue_category('U') == 7);
    for (char c : std::string("XBZJO1*-")) CHECK(residue_category(c) == 0);
  }

  TEST_CASE("strict and lenient extended residues") {
    CHECK_THROWS_AS(encode_sequence("AXG", AlphabetMode::strict, "P"), SequenceError);
    // Most frequent category is 1 (A, G); X takes it.
    CHECK(codes(encode_sequence("AXGK", AlphabetMode::lenient)) == std::vector<int>{1, 1, 1, 5});
    // Tie between 2 and 5 goes to the lower category.
    CHECK(codes(encode_sequence("LBK", AlphabetMode::lenient)) == std::vector<int>{2, 2, 5});
    CHECK_THROWS_AS(encode_sequence("XXX", AlphabetMode::lenient), SequenceError);
    CHECK_THROWS_AS(parse_alphabet_mode("loose"), UsageError);
  }

  TEST_CASE("encoding is deterministic and survives a FASTA round trip") {
    const auto records = parse(">A\nMKTAYIAKQRQISFVKSHFSRQ\n>B\nwwhhnnqq\n>C\nCU\n");
    std::ostringstream out;
    write_fasta(out, records, 7);
    std::istringstream in(out.str());
    const auto again = parse_fasta(in);
    REQUIRE(again.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(again[i].id == records[i].id);
      CHECK(encode_sequence(again[i].sequence) == encode_sequence(records[i].sequence));
      CHECK(encode_sequence(records[i].sequence) == encode_sequence(records[i].sequence));
    }
  }
}
