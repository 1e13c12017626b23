#include "qfc/random.hpp"

#include <cmath>

#include "qfc/error.hpp"

namespace qfc {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over a mix of both inputs
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      double re = normal(rng);
      double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

MultipartiteState random_density_matrix(const SubsystemSpec& spec, std::size_t rank,
                                        std::uint64_t seed) {
  const std::size_t dim = spec.total_dim();
  if (rank < 1 || rank > dim) {
    throw InvalidArgument("rank " + std::to_string(rank) + " outside [1, " +
                          std::to_string(dim) + "]");
  }
  Rng rng(seed);
  ComplexMatrix g = random_ginibre(dim, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return MultipartiteState::unchecked(spec, std::move(rho));
}

MultipartiteState random_density_matrix(std::size_t dim, std::size_t rank,
                                        std::uint64_t seed) {
  return random_density_matrix(SubsystemSpec{{"A", dim}}, rank, seed);
}

ComplexMatrix random_haar_unitary(std::size_t dim, Rng& rng) {
  if (dim == 0) throw InvalidArgument("unitary dimension must be positive");
  ComplexMatrix g = random_ginibre(dim, dim, rng);
  const Eigen::MatrixXcd sample = g;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(sample);
  const Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  ComplexMatrix u(q.rows(), q.cols());
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    Complex d = r(j, j);
    Complex phase = std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
    u.col(j) = q.col(j) * phase;
  }
  return u;
}

ComplexMatrix random_haar_unitary(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_haar_unitary(dim, rng);
}

PureState random_pure_state(const SubsystemSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix g = random_ginibre(spec.total_dim(), 1, rng);
  ComplexVector v = g.col(0);
  v /= v.norm();
  return PureState(spec, std::move(v));
}

ComplexMatrix random_hermitian(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix g = random_ginibre(dim, dim, rng);
  return (0.5 * (g + g.adjoint())).eval();
}

}  // namespace qfc
