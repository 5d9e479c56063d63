#pragma once

#include <string>
#include <vector>

namespace ufam {

struct CliResult {
  int code{0};
  std::string out;
  std::string err;
};

/// Full command dispatch. args excludes the program name. Exit codes:
/// 0 success, 2 parse error (argv or DSL, with position diagnostic),
/// 3 rejected ground set, 4 precondition violation.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace ufam
