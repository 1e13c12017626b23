#pragma once

// Seeded sampling of test inputs. Identical seeds give bit-identical output.

#include <cstdint>
#include <random>

#include "qfc/tensor.hpp"

namespace qfc {

using Rng = std::mt19937_64;

// Sub-seed for the index-th independent stream derived from `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Square Ginibre-style sample: entries with independent N(0, 1/2) real and
// imaginary parts.
ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);

// GG^dagger / Tr(GG^dagger) with G a dim x rank Ginibre factor.
MultipartiteState random_density_matrix(const SubsystemSpec& spec, std::size_t rank,
                                        std::uint64_t seed);
MultipartiteState random_density_matrix(std::size_t dim, std::size_t rank,
                                        std::uint64_t seed);

// QR of a square Ginibre sample, columns rephased so diag(R) > 0.
ComplexMatrix random_haar_unitary(std::size_t dim, std::uint64_t seed);
ComplexMatrix random_haar_unitary(std::size_t dim, Rng& rng);

PureState random_pure_state(const SubsystemSpec& spec, std::uint64_t seed);

// Random Hermitian matrix with N(0,1) entries; used for eigensolver tests.
ComplexMatrix random_hermitian(std::size_t dim, std::uint64_t seed);

}  // namespace qfc
