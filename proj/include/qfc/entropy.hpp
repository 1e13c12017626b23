#pragma once

// Entropic quantities of density operators, all in bits.

#include <span>

#include "qfc/ensemble.hpp"
#include "qfc/tensor.hpp"

namespace qfc {

// Eigenvalues at or below this contribute nothing (0 log 0 = 0).
inline constexpr double kEigenvalueClamp = 1e-12;
// Tolerance of the internal cross-check between the two forms of S(A:B|C).
inline constexpr double kIdentityTolerance = 1e-10;

double binary_entropy(double p);
double shannon_entropy(std::span<const double> distribution);
double entropy_of_spectrum(std::span<const double> eigenvalues);
// Entropy of a Hermitian matrix assumed to be a density operator; no
// validation beyond Hermiticity.
double matrix_entropy(const ComplexMatrix& rho);

double von_neumann_entropy(const MultipartiteState& rho);

// S(AB) - S(B)
double conditional_entropy(const MultipartiteState& s, const Labels& a, const Labels& b);
// S(A) + S(B) - S(AB)
double mutual_information(const MultipartiteState& s, const Labels& a, const Labels& b);
// S(AC) + S(BC) - S(C) - S(ABC), checked against S(A:BC) - S(A:C).
double conditional_mutual_information(const MultipartiteState& s, const Labels& a,
                                      const Labels& b, const Labels& c);

// S(sum p_i rho_i) - sum p_i S(rho_i)
double holevo_chi(const LabeledEnsemble& ensemble);

// Classical mutual information between the message index and the outcome of
// the rank-1 projective measurement whose basis vectors are the columns of
// `basis`. A lower-bound witness for the accessible information.
double sampled_accessible_information(const LabeledEnsemble& ensemble,
                                      const ComplexMatrix& basis);

}  // namespace qfc
