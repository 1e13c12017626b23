#pragma once

// Closed-form rate algebra for feedback-assisted transmission and the
// ordering among capacity values.

#include <optional>
#include <string>
#include <vector>

namespace qfc {

inline constexpr double kOrderingTolerance = 1e-9;
inline constexpr double kRateFloor = -1e-12;

// Bits (or qubits) per channel use; absent fields are not compared.
struct RateSet {
  std::optional<double> C;
  std::optional<double> C_FB;
  std::optional<double> C_QFB;
  std::optional<double> C_E;
  std::optional<double> Q;
  std::optional<double> Q_E;
  std::optional<double> Q_FB_star;

  std::size_t present() const;
};

// R_fb / (R_fb + E_Q) * Q_E
double feedback_assisted_quantum_rate(double r_fb, double ebits_per_use, double q_e);

// (1 - eps)^2
double erasure_feedback_rate(double erasure_probability);
// max(1 - 2 eps, 0)
double erasure_unassisted_q(double erasure_probability);
// 1 - 2 eps, unclamped
double erasure_unassisted_q_affine(double erasure_probability);
// 1 - eps
double erasure_Q_E(double erasure_probability);

// One human-readable entry per violated relation. Throws InvalidArgument
// when fewer than two fields are present.
std::vector<std::string> check_capacity_ordering(const RateSet& rates,
                                                 double tolerance = kOrderingTolerance);

}  // namespace qfc
