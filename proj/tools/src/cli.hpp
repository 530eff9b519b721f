#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace courier::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIssues = 1;      // validate found problems
inline constexpr int kExitInvalid = 2;     // bad order, config or usage
inline constexpr int kExitOutOfArea = 3;   // order endpoint outside the city

/// Runs one command line (without the program name). Never calls exit().
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace courier::cli
