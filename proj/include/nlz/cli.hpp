#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nlz::cli {

// Parses and dispatches one command line (without the program name).
// Streams are injected so tests can capture output. Exit codes:
// 0 success, 2 usage/validation error, 1 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nlz::cli
