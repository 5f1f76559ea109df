#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ppimesh {

/// Splits a line on tabs, stripping a trailing carriage return.
std::vector<std::string> split_tsv(std::string_view line);

/// True for blank lines and '#' comments.
bool skippable_line(std::string_view line);

double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

std::ifstream open_input(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over the target on
// commit(). A destroyed, uncommitted output removes its temporary file.
class AtomicOutput {
 public:
  explicit AtomicOutput(std::filesystem::path target);
  AtomicOutput(const AtomicOutput&) = delete;
  AtomicOutput& operator=(const AtomicOutput&) = delete;
  ~AtomicOutput();

  std::ostream& stream() { return out_; }
  void commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path temporary_;
  std::ofstream out_;
  bool committed_ = false;
};

}  // namespace ppimesh
