#pragma once

#include "ppimesh/common.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ppimesh {

/// How residues outside the 20 standard amino acids (and U) are treated.
/// Strict rejects X, B, Z, J and O; lenient maps them to the most frequent
/// category of the containing sequence.
enum class AlphabetMode { strict, lenient };

AlphabetMode parse_alphabet_mode(std::string_view text);

struct ProteinRecord {
  std::string id;
  std::string sequence;
  std::set<std::string> go_terms;
  std::map<int, std::string> cluster_ids;  // identity level (100, 90, 50) -> cluster
};

/// A sequence rewritten as physicochemical categories 1..7, one per residue.
struct CategorySignal {
  std::vector<std::uint8_t> values;

  std::size_t size() const { return values.size(); }
  bool operator==(const CategorySignal&) const = default;
};

/// Raised for sequence content that cannot be accepted. Position is 1-based
/// within the concatenated sequence.
class SequenceError : public DataError {
 public:
  SequenceError(std::string id, char character, std::size_t position, const std::string& reason);

  const std::string& id() const { return id_; }
  char character() const { return character_; }
  std::size_t position() const { return position_; }

 private:
  std::string id_;
  char character_;
  std::size_t position_;
};

/// Reads FASTA records. The id is the first whitespace-delimited token of the
/// header; sequence lines are concatenated and upper-cased. Trailing '*' stop
/// symbols are stripped. Only letters are accepted as residues.
std::vector<ProteinRecord> parse_fasta(std::istream& in);

void write_fasta(std::ostream& out, const std::vector<ProteinRecord>& records,
                 std::size_t line_width = 60);

/// Category of one residue: {A,G,V}=1, {I,L,F,P}=2, {Y,M,T,S}=3, {H,N,Q,W}=4,
/// {R,K}=5, {D,E}=6, {C,U}=7. Returns 0 for anything else.
int residue_category(char residue);

CategorySignal encode_sequence(std::string_view sequence,
                               AlphabetMode mode = AlphabetMode::strict,
                               std::string_view id = {});

}  // namespace ppimesh
