#pragma once

// Memoryless quantum channels in Kraus form, with the Stinespring,
// complementary and Choi constructions.

#include <cstdint>
#include <string>
#include <vector>

#include "qfc/tensor.hpp"

namespace qfc {

inline constexpr double kTracePreservationTolerance = 1e-10;
inline constexpr double kIsometryTolerance = 1e-10;

// Output index of the erasure flag |e> on the qutrit output.
inline constexpr std::size_t kErasureFlag = 2;

class QuantumChannel {
 public:
  // Kraus operators are d_out x d_in. Requires sum K^dagger K = I within
  // `tp_tolerance` and at most d_in * d_out operators.
  QuantumChannel(std::string name, std::size_t d_in, std::size_t d_out,
                 std::vector<ComplexMatrix> kraus,
                 double tp_tolerance = kTracePreservationTolerance);

  const std::string& name() const { return name_; }
  std::size_t d_in() const { return d_in_; }
  std::size_t d_out() const { return d_out_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

  // sum K rho K^dagger on raw matrices.
  ComplexMatrix apply(const ComplexMatrix& rho) const;
  // Adjoint map sum K^dagger X K.
  ComplexMatrix adjoint(const ComplexMatrix& x) const;

 private:
  std::string name_;
  std::size_t d_in_;
  std::size_t d_out_;
  std::vector<ComplexMatrix> kraus_;
};

struct StinespringIsometry {
  ComplexMatrix matrix;  // (d_out * d_env) x d_in, output index major
  std::size_t d_out = 0;
  std::size_t d_env = 0;
};

// Choi state on {out: d_out, ref: d_in}.
struct ChoiMatrix {
  MultipartiteState state;
};

double trace_preservation_error(const std::vector<ComplexMatrix>& kraus, std::size_t d_in);

// rho must be a single subsystem of dimension d_in; the label is kept.
MultipartiteState apply(const QuantumChannel& channel, const MultipartiteState& rho);
MultipartiteState apply_to_subsystem(const QuantumChannel& channel,
                                     const MultipartiteState& s,
                                     const std::string& target);

// V|psi> = sum_k K_k|psi> (x) |k>_env
StinespringIsometry stinespring(const QuantumChannel& channel);
// Environment output map Tr_out V rho V^dagger. Kraus operators that are
// identically zero are dropped; if more than d_in * d_env remain, the family
// is replaced by its canonical (Choi eigenvector) form.
QuantumChannel complementary(const QuantumChannel& channel);
ChoiMatrix choi(const QuantumChannel& channel);
// Kraus family rebuilt from the Choi eigenvectors; eigenvalues below
// `cutoff` are discarded.
QuantumChannel canonical_kraus(const QuantumChannel& channel, double cutoff = 1e-14);
// <Phi+| J |Phi+>, for channels with d_in == d_out.
double entanglement_fidelity(const QuantumChannel& channel);

// Constructors

QuantumChannel identity_channel(std::size_t dim);
// qubit -> qutrit; the erased output is the flag |2>.
QuantumChannel qubit_erasure(double erasure_probability);
// Parameterized by the entanglement fidelity F in [1/4, 1].
QuantumChannel depolarizing(double fidelity);
QuantumChannel dephasing(double flip_probability);
QuantumChannel amplitude_damping(double gamma);
// Random channel from the first d_in columns of a Haar unitary on
// d_out * kraus_count.
QuantumChannel random_channel(std::size_t d_in, std::size_t d_out,
                              std::size_t kraus_count, std::uint64_t seed);

// rho -> (1 - p) rho + p I/2 has entanglement fidelity 1 - 3p/4.
double depolarizing_probability_from_fidelity(double fidelity);
double fidelity_from_depolarizing_probability(double probability);

}  // namespace qfc
