#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace symscat::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kDivergent = 2,
  kViolation = 3,
  kInstability = 4,
};

/// Runs one command line (without the program name). Normal output goes to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Real number or pi literal: "0.5", "-pi/2", "3pi/4", "2*pi", "pi".
double parse_real(const std::string& text);

}  // namespace symscat::cli
