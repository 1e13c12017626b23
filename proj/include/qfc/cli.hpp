#pragma once

// Command-line front end: capacity, sweep, verify, simulate-feedback.

#include <iosfwd>
#include <string>
#include <vector>

namespace qfc::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInvariantFailure = 1,
  kInvalidInput = 2,
  kNonConvergence = 3,
};

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Shortest round-trip decimal form.
std::string format_number(double value);

// start + i*step rounded to 12 decimals, for i = 0..floor((end-start)/step).
std::vector<double> parse_param_range(const std::string& range);

}  // namespace qfc::cli
