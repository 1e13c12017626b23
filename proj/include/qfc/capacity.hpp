#pragma once

// Entanglement-assisted capacity by conditional-gradient ascent over density
// matrices, plus the single-letter coherent information.

#include <cstdint>
#include <vector>

#include "qfc/channels.hpp"
#include "qfc/tensor.hpp"

namespace qfc {

inline constexpr double kLogFloor = 1e-12;

struct CapacityOptions {
  std::size_t restarts = 4;  // random starts in addition to I/d
  std::uint64_t seed = 0;
  double gap_tolerance = 1e-8;
  std::size_t max_iterations = 10000;
  double eigenvalue_floor = kLogFloor;
};

struct CapacityReport {
  double value = 0.0;  // bits
  MultipartiteState argmax = MultipartiteState::maximally_mixed(SubsystemSpec{{"A", 1}});
  std::size_t iterations = 0;     // iterations used by the winning start
  double stationarity_gap = 0.0;  // conditional-gradient gap at argmax
  double multistart_spread = 0.0; // max - min over starts
  bool converged = false;         // winning start reached gap_tolerance
  std::size_t converged_starts = 0;
  std::vector<double> start_values;
};

// S(rho) + S(L rho) - S(L^c rho).
double ea_objective(const QuantumChannel& channel, const MultipartiteState& rho);
// S(rho) + S(L rho) - S((I x L)|Psi><Psi|) with |Psi> a purification of rho.
double ea_objective_via_purification(const QuantumChannel& channel,
                                     const MultipartiteState& rho);

// Euclidean gradient of ea_objective in bits:
//   -log rho + L*(-log L rho) - L^c*(-log L^c rho) - I/ln 2.
// Eigenvalues are floored at `floor` before taking logs; with floor <= 0 a
// singular spectrum is an error.
ComplexMatrix ea_gradient(const QuantumChannel& channel, const MultipartiteState& rho,
                          double floor = kLogFloor);

CapacityReport entanglement_assisted_capacity(const QuantumChannel& channel,
                                              const CapacityOptions& options = {});

// S(L rho) - S(L^c rho)
double coherent_information(const QuantumChannel& channel, const MultipartiteState& rho);
ComplexMatrix coherent_information_gradient(const QuantumChannel& channel,
                                            const MultipartiteState& rho,
                                            double floor = kLogFloor);
// Same ascent machinery; the objective is not concave in general, so the
// multistart spread matters.
CapacityReport max_coherent_information(const QuantumChannel& channel,
                                        const CapacityOptions& options = {});

}  // namespace qfc
