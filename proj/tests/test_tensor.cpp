#include <doctest.h>

#include <cstdlib>

#include <Eigen/SVD>

#include "oracles.hpp"
#include "qfc/error.hpp"
#include "qfc/random.hpp"
#include "qfc/tensor.hpp"

using namespace qfc;

namespace {

MultipartiteState bell_state() {
  return MultipartiteState::from_matrix(SubsystemSpec{{"A", 2}, {"B", 2}}, oracle::projector(oracle::bell()));
}

MultipartiteState mixed(const std::string& label, std::size_t d) {
  return MultipartiteState::maximally_mixed(SubsystemSpec{{label, d}});
}

}  // namespace

TEST_SUITE("tensor_product") {
  TEST_CASE("maximally mixed factors give the maximally mixed product") {
    auto s = tensor_product(mixed("A", 2), mixed("B", 2));
    CHECK(s.spec() == SubsystemSpec{{"A", 2}, {"B", 2}});
    CHECK(oracle::max_abs(s.matrix() - identity_matrix(4) / 4.0) == 0.0);
  }

  TEST_CASE("computational basis states") {
    auto a = MultipartiteState::basis_state(SubsystemSpec{{"A", 2}}, 0);
    auto b = MultipartiteState::basis_state(SubsystemSpec{{"B", 2}}, 1);
    auto s = tensor_product(a, b);
    CHECK(s.matrix()(1, 1) == Complex(1.0));
    CHECK(s.matrix().cwiseAbs().sum() == doctest::Approx(1.0));
  }

  TEST_CASE("entropy is additive on products") {
    auto rho = random_density_matrix(SubsystemSpec{{"A", 2}}, 2, 11);
    auto sigma = random_density_matrix(SubsystemSpec{{"B", 2}}, 2, 12);
    auto s = tensor_product(rho, sigma);
    CHECK(oracle::entropy(s.matrix()) ==
          doctest::Approx(oracle::entropy(rho.matrix()) + oracle::entropy(sigma.matrix())).epsilon(1e-9));
  }

  TEST_CASE("label collision is rejected") {
    CHECK_THROWS_AS(tensor_product(mixed("A", 2), mixed("A", 2)), InvalidArgument);
  }

  TEST_CASE("dimension budget is enforced and configurable") {
    auto big = mixed("A", 64);
    CHECK_THROWS_AS(tensor_product(big, tensor_product(mixed("B", 64), mixed("C", 2))),
                    DimensionBudgetExceeded);
    setenv("QFC_MAX_DIM", "16", 1);
    CHECK(dimension_budget() == 16);
    CHECK_THROWS_AS(tensor_product(mixed("A", 4), mixed("B", 8)), DimensionBudgetExceeded);
    unsetenv("QFC_MAX_DIM");
    CHECK(dimension_budget() == kDefaultDimensionBudget);
    try {
      tensor_product(mixed("A", 128), mixed("B", 64));
      FAIL("expected a budget error");
    } catch (const DimensionBudgetExceeded& e) {
      CHECK(e.requested() == 8192);
      CHECK(std::string(e.what()).find("8192") != std::string::npos);
    }
  }
}

TEST_SUITE("state validation") {
  TEST_CASE("rejects non-Hermitian, off-trace and negative matrices") {
    SubsystemSpec spec{{"A", 2}};
    ComplexMatrix m = oracle::diag({0.5, 0.5});
    m(0, 1) = 0.1;
    CHECK_THROWS_AS(MultipartiteState::from_matrix(spec, m), InvalidState);
    CHECK_THROWS_AS(MultipartiteState::from_matrix(spec, oracle::diag({0.6, 0.5})), InvalidState);
    CHECK_THROWS_AS(MultipartiteState::from_matrix(spec, oracle::diag({1.1, -0.1})), InvalidState);
    CHECK_THROWS_AS(MultipartiteState::from_matrix(spec, oracle::diag({0.5, 0.5, 0.0})), InvalidArgument);
  }

  TEST_CASE("clip_and_renormalize only repairs tiny negative eigenvalues") {
    SubsystemSpec spec{{"A", 2}};
    auto s = MultipartiteState::clip_and_renormalize(spec, oracle::diag({1.0 + 5e-10, -5e-10}));
    CHECK(s.matrix()(1, 1).real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(MultipartiteState::clip_and_renormalize(spec, oracle::diag({1.0 + 1e-8, -1e-8})),
                    InvalidState);
  }

  TEST_CASE("pure state norm") {
    ComplexVector v(2);
    v << 1.0, 1.0;
    CHECK_THROWS_AS(PureState(SubsystemSpec{{"A", 2}}, v), InvalidState);
    v /= std::sqrt(2.0);
    CHECK_NOTHROW(PureState(SubsystemSpec{{"A", 2}}, v));
  }
}

TEST_SUITE("partial_trace") {
  TEST_CASE("Bell state marginal is maximally mixed") {
    auto a = partial_trace(bell_state(), {"B"});
    CHECK(a.spec() == SubsystemSpec{{"A", 2}});
    CHECK(oracle::max_abs(a.matrix() - identity_matrix(2) / 2.0) < 1e-15);
  }

  TEST_CASE("product state recovers the kept factor") {
    auto sigma = random_density_matrix(SubsystemSpec{{"B", 3}}, 2, 5);
    auto s = tensor_product(MultipartiteState::basis_state(SubsystemSpec{{"A", 2}}, 0), sigma);
    CHECK(oracle::max_abs(partial_trace(s, {"A"}).matrix() - sigma.matrix()) < 1e-12);
  }

  TEST_CASE("pure tripartite state: S(A) = S(BC)") {
    auto psi = random_pure_state(SubsystemSpec{{"A", 2}, {"B", 3}, {"C", 2}}, 17).density();
    auto a = partial_trace(psi, {"B", "C"});
    auto bc = partial_trace(psi, {"A"});
    CHECK(oracle::entropy(a.matrix()) == doctest::Approx(oracle::entropy(bc.matrix())).epsilon(1e-9));
  }

  TEST_CASE("matches the digit-loop reference on random states") {
    const std::vector<std::size_t> dims = {2, 3, 2};
    SubsystemSpec spec{{"A", 2}, {"B", 3}, {"C", 2}};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto rho = random_density_matrix(spec, 1 + seed % 12, seed);
      CHECK(oracle::max_abs(partial_trace(rho, {"B"}).matrix() -
                            oracle::partial_trace(rho.matrix(), dims, {true, false, true})) < 1e-14);
      CHECK(oracle::max_abs(partial_trace(rho, {"A", "C"}).matrix() -
                            oracle::partial_trace(rho.matrix(), dims, {false, true, false})) < 1e-14);
    }
  }

  TEST_CASE("tracing everything leaves the number 1") {
    auto r = partial_trace(bell_state(), {"A", "B"});
    CHECK(r.dim() == 1);
    CHECK(r.matrix()(0, 0).real() == doctest::Approx(1.0));
  }

  TEST_CASE("unknown labels are rejected") {
    CHECK_THROWS_AS(partial_trace(bell_state(), {"Z"}), InvalidArgument);
  }

  TEST_CASE("sequential and joint traces agree") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto rho = random_density_matrix(SubsystemSpec{{"A", 2}, {"B", 2}, {"C", 3}}, 4, seed);
      auto twice = partial_trace(partial_trace(rho, {"A"}), {"B"});
      auto once = partial_trace(rho, {"A", "B"});
      CHECK(oracle::max_abs(twice.matrix() - once.matrix()) <= 1e-12);
    }
  }

  TEST_CASE("pure bipartite marginals have equal entropy") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto psi = random_pure_state(SubsystemSpec{{"A", 2 + seed % 3}, {"B", 3}}, seed).density();
      const double sa = oracle::entropy(partial_trace(psi, {"B"}).matrix());
      const double sb = oracle::entropy(partial_trace(psi, {"A"}).matrix());
      CHECK(std::abs(sa - sb) <= 1e-9);
    }
  }

  TEST_CASE("product then trace recovers the first factor") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto a = random_density_matrix(SubsystemSpec{{"A", 3}}, 2, seed);
      auto b = random_density_matrix(SubsystemSpec{{"B", 2}}, 2, seed + 1000);
      CHECK(oracle::max_abs(partial_trace(tensor_product(a, b), {"B"}).matrix() - a.matrix()) <= 1e-12);
    }
  }
}

TEST_SUITE("permute_subsystems") {
  TEST_CASE("identity permutation is bitwise equal") {
    auto rho = random_density_matrix(SubsystemSpec{{"A", 2}, {"B", 3}}, 3, 3);
    auto same = permute_subsystems(rho, {"A", "B"});
    CHECK(same.matrix() == rho.matrix());
  }

  TEST_CASE("swap leaves the Bell state invariant") {
    auto swapped = permute_subsystems(bell_state(), {"B", "A"});
    CHECK(swapped.spec() == SubsystemSpec{{"B", 2}, {"A", 2}});
    CHECK(oracle::max_abs(swapped.matrix() - bell_state().matrix()) == 0.0);
  }

  TEST_CASE("permutation and inverse round-trip") {
    auto rho = random_density_matrix(SubsystemSpec{{"A", 2}, {"B", 3}, {"C", 2}}, 5, 9);
    auto back = permute_subsystems(permute_subsystems(rho, {"C", "A", "B"}), {"A", "B", "C"});
    CHECK(oracle::max_abs(back.matrix() - rho.matrix()) <= 1e-14);
  }

  TEST_CASE("marginal entropies are unchanged") {
    auto rho = random_density_matrix(SubsystemSpec{{"A", 2}, {"B", 3}, {"C", 2}}, 5, 10);
    auto p = permute_subsystems(rho, {"B", "C", "A"});
    CHECK(oracle::entropy(marginal(p, {"C", "A"}).matrix()) ==
          doctest::Approx(oracle::entropy(marginal(rho, {"A", "C"}).matrix())).epsilon(1e-10));
  }

  TEST_CASE("non-permutations are rejected") {
    CHECK_THROWS_AS(permute_subsystems(bell_state(), {"A"}), InvalidArgument);
    CHECK_THROWS_AS(permute_subsystems(bell_state(), {"A", "A"}), InvalidArgument);
  }
}

TEST_SUITE("hermitian_eigendecomposition") {
  TEST_CASE("diagonal input") {
    auto e = hermitian_eigendecomposition(oracle::diag({0.25, 0.5, 0.25}));
    CHECK(e.values[0] == doctest::Approx(0.5));
    CHECK(e.values[1] == doctest::Approx(0.25));
    CHECK(e.values[2] == doctest::Approx(0.25));
    CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
  }

  TEST_CASE("Pauli X has eigenvectors |+> and |->") {
    auto e = hermitian_eigendecomposition(oracle::pauli_x());
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[1] == doctest::Approx(-1.0));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(e.vectors(0, 0) - s) < 1e-12);
    CHECK(std::abs(e.vectors(1, 0) - s) < 1e-12);
    CHECK(std::abs(std::abs(e.vectors(0, 1)) - s) < 1e-12);
    CHECK(std::abs(e.vectors(0, 1) + e.vectors(1, 1)) < 1e-12);
  }

  TEST_CASE("reconstruction on random Hermitian matrices") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const std::size_t d = 1 + seed % 32;
      ComplexMatrix m = random_hermitian(d, seed);
      auto e = hermitian_eigendecomposition(m);
      ComplexMatrix lambda = ComplexMatrix::Zero(m.rows(), m.cols());
      for (std::size_t k = 0; k < d; ++k) lambda(k, k) = e.values[k];
      const double scale = std::max(1.0, oracle::max_abs(m));
      REQUIRE(oracle::max_abs(m * e.vectors - e.vectors * lambda) <= 1e-9 * scale);
      REQUIRE(oracle::max_abs(e.vectors.adjoint() * e.vectors - identity_matrix(d)) <= 1e-10);
      REQUIRE(std::is_sorted(e.values.rbegin(), e.values.rend()));
    }
  }

  TEST_CASE("agrees with the general complex eigensolver") {
    ComplexMatrix m = random_hermitian(8, 99);
    auto ours = hermitian_eigenvalues(m);
    auto ref = oracle::eigenvalues(m);
    for (std::size_t k = 0; k < ours.size(); ++k) CHECK(ours[k] == doctest::Approx(ref[k]).epsilon(1e-10));
  }

  TEST_CASE("non-Hermitian input is rejected") {
    ComplexMatrix m = oracle::pauli_x();
    m(0, 1) = 2.0;
    CHECK_THROWS_AS(hermitian_eigendecomposition(m), InvalidArgument);
  }
}

TEST_SUITE("purify") {
  TEST_CASE("maximally mixed qubit gives equal Schmidt coefficients") {
    auto psi = purify(mixed("A", 2), "R");
    CHECK(psi.spec() == SubsystemSpec{{"A", 2}, {"R", 2}});
    Eigen::MatrixXcd coefficients(2, 2);
    for (int i = 0; i < 4; ++i) coefficients(i / 2, i % 2) = psi.amplitudes()(i);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coefficients);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(svd.singularValues()(0) == doctest::Approx(s));
    CHECK(svd.singularValues()(1) == doctest::Approx(s));
  }

  TEST_CASE("pure input collapses the reference") {
    auto psi = purify(MultipartiteState::basis_state(SubsystemSpec{{"A", 2}}, 0), "R");
    CHECK(std::abs(psi.amplitudes()(0)) == doctest::Approx(1.0));
    CHECK(psi.amplitudes().cwiseAbs().sum() == doctest::Approx(1.0));
  }

  TEST_CASE("random rank-3 qutrit round trip") {
    auto rho = random_density_matrix(SubsystemSpec{{"A", 3}}, 3, 21);
    auto psi = purify(rho, "R").density();
    CHECK(oracle::max_abs(partial_trace(psi, {"R"}).matrix() - rho.matrix()) <= 1e-9);
    CHECK(oracle::entropy(partial_trace(psi, {"A"}).matrix()) ==
          doctest::Approx(oracle::entropy(rho.matrix())).epsilon(1e-9));
  }

  TEST_CASE("label collision is rejected") {
    CHECK_THROWS_AS(purify(mixed("A", 2), "A"), InvalidArgument);
  }
}

TEST_SUITE("random generation") {
  TEST_CASE("rank one is pure") {
    auto rho = random_density_matrix(SubsystemSpec{{"A", 4}}, 1, 8);
    CHECK(std::abs(oracle::entropy(rho.matrix())) <= 1e-9);
  }

  TEST_CASE("full-rank samples average to the maximally mixed state") {
    const std::size_t d = 3;
    ComplexMatrix mean = ComplexMatrix::Zero(d, d);
    const int n = 10000;
    for (int k = 0; k < n; ++k) mean += random_density_matrix(d, d, static_cast<std::uint64_t>(k)).matrix();
    mean /= static_cast<double>(n);
    CHECK(oracle::max_abs(mean - identity_matrix(d) / 3.0) <= 0.05);
  }

  TEST_CASE("same seed gives identical output") {
    CHECK(random_density_matrix(4, 2, 77).matrix() == random_density_matrix(4, 2, 77).matrix());
    CHECK(random_haar_unitary(5, 77) == random_haar_unitary(5, 77));
    CHECK(random_haar_unitary(5, 77) != random_haar_unitary(5, 78));
  }

  TEST_CASE("Haar samples are unitary") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      CHECK(unitarity_error(random_haar_unitary(1 + seed % 9, seed)) <= 1e-12);
    }
  }

  TEST_CASE("rank out of range") {
    CHECK_THROWS_AS(random_density_matrix(3, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(random_density_matrix(3, 4, 1), InvalidArgument);
  }
}

TEST_SUITE("pure-state registers") {
  TEST_CASE("local operator acts on the named register only") {
    auto psi = PureState::basis_state(SubsystemSpec{{"A", 2}, {"B", 2}}, 0);
    auto flipped = apply_local_operator(psi, {"B"}, oracle::pauli_x(), {{"B", 2}});
    auto rho = permute_subsystems(flipped.density(), {"A", "B"});
    CHECK(rho.matrix()(1, 1).real() == doctest::Approx(1.0));
  }

  TEST_CASE("isometry enlarges the register") {
    ComplexMatrix v = ComplexMatrix::Zero(4, 2);
    v(0, 0) = 1.0;
    v(3, 1) = 1.0;
    auto psi = PureState::basis_state(SubsystemSpec{{"A", 2}, {"R", 2}}, 3);
    auto out = apply_local_operator(psi, {"A"}, v, {{"A", 2}, {"E", 2}});
    CHECK(out.spec() == SubsystemSpec{{"A", 2}, {"E", 2}, {"R", 2}});
    CHECK(std::abs(out.amplitudes()(7)) == doctest::Approx(1.0));
  }

  TEST_CASE("embedded operator matches the Kronecker product") {
    SubsystemSpec spec{{"A", 2}, {"B", 3}, {"C", 2}};
    ComplexMatrix u = random_haar_unitary(4, 5);
    ComplexMatrix full = embed_operator(spec, {"A", "C"}, u);
    auto rho = random_density_matrix(spec, 3, 6);
    auto moved = permute_subsystems(rho, {"A", "C", "B"});
    ComplexMatrix direct = kron(u, identity_matrix(3));
    ComplexMatrix lhs = permute_subsystems(
        MultipartiteState::unchecked(spec, full * rho.matrix() * full.adjoint()), {"A", "C", "B"}).matrix();
    CHECK(oracle::max_abs(lhs - direct * moved.matrix() * direct.adjoint()) <= 1e-12);
  }

  TEST_CASE("appended registers start in |0>") {
    auto psi = append_register(PureState::basis_state(SubsystemSpec{{"A", 2}}, 1), {"X", 3});
    auto x = reduced_density(psi, {"X"});
    CHECK(x.matrix()(0, 0).real() == doctest::Approx(1.0));
  }
}
