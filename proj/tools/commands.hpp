#pragma once

#include <string>
#include <vector>

namespace ppimesh::cli {

enum ExitCode { ok = 0, usage_error = 1, data_error = 2, internal_error = 3 };

/// Parses and runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace ppimesh::cli
