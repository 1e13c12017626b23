#pragma once

// Seeded property suites over the entropic, channel, capacity and feedback
// invariants.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace qfc {

struct VerifyOptions {
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;          // inequality slack
  double identity_tolerance = 1e-9; // two-path and reconstruction identities
  double converse_tolerance = 1e-7; // Delta <= C_E
  double gradient_tolerance = 1e-4; // analytic vs central differences
};

struct PropertyFailure {
  std::string suite;
  std::string property;
  std::size_t trial = 0;
  double excess = 0.0;  // amount by which the relation failed
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::size_t trials = 0;
  std::vector<PropertyFailure> failures;
  // Largest lhs - rhs over every checked relation lhs <= rhs (negative when
  // every relation held with room to spare).
  double max_slack_violation = 0.0;
  // Largest Delta - C_E seen by the feedback suite.
  double worst_converse_slack = 0.0;
  bool has_converse_slack = false;
  std::vector<std::string> warnings;

  bool passed() const { return failures.empty(); }
};

const std::vector<std::string>& verify_suite_names();

// suite is one of entropic, channel, capacity, feedback, all. Trial t of a
// suite draws its inputs from derive_seed(seed, t).
VerifyReport run_verify_suite(const std::string& suite, const VerifyOptions& options);

nlohmann::json verify_report_to_json(const VerifyReport& report);

}  // namespace qfc
