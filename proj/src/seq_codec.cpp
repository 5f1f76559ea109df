#include "ppimesh/seq_codec.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace ppimesh {

namespace {

constexpr std::array<std::uint8_t, 26> kCategoryByLetter = [] {
  std::array<std::uint8_t, 26> table{};
  auto set = [&table](std::string_view letters, std::uint8_t category) {
    for (char c : letters) table[static_cast<std::size_t>(c - 'A')] = category;
  };
  set("AGV", 1);
  set("ILFP", 2);
  set("YMTS", 3);
  set("HNQW", 4);
  set("RK", 5);
  set("DE", 6);
  set("CU", 7);
  return table;
}();

std::string describe(char c) {
  if (std::isprint(static_cast<unsigned char>(c))) return std::string("'") + c + "'";
  return "byte " + std::to_string(static_cast<unsigned char>(c));
}

void finish_record(ProteinRecord& record, std::vector<ProteinRecord>& out,
                   std::unordered_set<std::string>& seen) {
  while (!record.sequence.empty() && record.sequence.back() == '*') record.sequence.pop_back();
  if (record.sequence.empty()) throw DataError("FASTA record '" + record.id + "' has no residues");
  for (std::size_t i = 0; i < record.sequence.size(); ++i) {
    if (record.sequence[i] == '*') {
      throw SequenceError(record.id, '*', i + 1, "stop symbol before the end of the sequence");
    }
  }
  if (!seen.insert(record.id).second) throw DataError("duplicate FASTA id '" + record.id + "'");
  out.push_back(std::move(record));
}

}  // namespace

AlphabetMode parse_alphabet_mode(std::string_view text) {
  if (text == "strict") return AlphabetMode::strict;
  if (text == "lenient") return AlphabetMode::lenient;
  throw UsageError("unknown alphabet mode '" + std::string(text) + "' (strict|lenient)");
}

SequenceError::SequenceError(std::string id, char character, std::size_t position,
                             const std::string& reason)
    : DataError("sequence '" + id + "': " + describe(character) + " at position " +
                std::to_string(position) + ": " + reason),
      id_(std::move(id)),
      character_(character),
      position_(position) {}

std::vector<ProteinRecord> parse_fasta(std::istream& in) {
  std::vector<ProteinRecord> records;
  std::unordered_set<std::string> seen;
  ProteinRecord current;
  bool in_record = false;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '>') {
      if (in_record) finish_record(current, records, seen);
      current = ProteinRecord{};
      const auto begin = line.find_first_not_of(" \t", 1);
      if (begin == std::string::npos) {
        throw DataError("FASTA header without id at line " + std::to_string(line_number));
      }
      const auto end = line.find_first_of(" \t", begin);
      current.id = line.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
      in_record = true;
      continue;
    }
    if (std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t'; })) {
      continue;
    }
    if (!in_record) {
      throw DataError("FASTA sequence data before the first header at line " +
                      std::to_string(line_number));
    }
    for (char c : line) {
      if (c == ' ' || c == '\t') continue;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '*') {
        current.sequence.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      } else {
        throw SequenceError(current.id, c, current.sequence.size() + 1, "not an amino-acid letter");
      }
    }
  }
  if (in_record) finish_record(current, records, seen);
  if (records.empty()) throw DataError("FASTA input contains no records");
  return records;
}

void write_fasta(std::ostream& out, const std::vector<ProteinRecord>& records,
                 std::size_t line_width) {
  if (line_width == 0) line_width = std::string::npos;
  for (const auto& record : records) {
    out << '>' << record.id << '\n';
    for (std::size_t i = 0; i < record.sequence.size(); i += line_width) {
      out << record.sequence.substr(i, line_width) << '\n';
    }
  }
}

int residue_category(char residue) {
  const auto upper = static_cast<char>(std::toupper(static_cast<unsigned char>(residue)));
  if (upper < 'A' || upper > 'Z') return 0;
  return kCategoryByLetter[static_cast<std::size_t>(upper - 'A')];
}

CategorySignal encode_sequence(std::string_view sequence, AlphabetMode mode, std::string_view id) {
  if (sequence.empty()) throw DataError("cannot encode an empty sequence '" + std::string(id) + "'");
  CategorySignal signal;
  signal.values.resize(sequence.size());
  std::array<std::size_t, 8> counts{};
  std::vector<std::size_t> unresolved;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const int category = residue_category(sequence[i]);
    if (category == 0) {
      if (mode == AlphabetMode::strict) {
        throw SequenceError(std::string(id), sequence[i], i + 1,
                            "no physicochemical category (strict alphabet)");
      }
      unresolved.push_back(i);
      continue;
    }
    signal.values[i] = static_cast<std::uint8_t>(category);
    ++counts[static_cast<std::size_t>(category)];
  }
  if (!unresolved.empty()) {
    // Ties go to the lowest category number.
    const auto best = std::max_element(counts.begin() + 1, counts.end());
    if (*best == 0) {
      throw SequenceError(std::string(id), sequence[unresolved.front()], unresolved.front() + 1,
                          "sequence has no standard residue to infer a category from");
    }
    const auto fill = static_cast<std::uint8_t>(best - counts.begin());
    for (auto i : unresolved) signal.values[i] = fill;
  }
  return signal;
}

}  // namespace ppimesh
