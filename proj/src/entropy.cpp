#include "qfc/entropy.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "qfc/error.hpp"

namespace qfc {

namespace {

void require_disjoint(const SubsystemSpec& spec, std::initializer_list<const Labels*> groups) {
  std::set<std::string> seen;
  for (const Labels* g : groups) {
    for (const auto& l : *g) {
      spec.index_of(l);
      if (!seen.insert(l).second) throw InvalidArgument("label used in two groups: " + l);
    }
  }
}

Labels join(const Labels& a, const Labels& b) {
  Labels out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

double marginal_entropy(const MultipartiteState& s, const Labels& keep) {
  if (keep.empty()) return 0.0;
  return matrix_entropy(marginal(s, keep).matrix());
}

}  // namespace

LabeledEnsemble::LabeledEnsemble(std::vector<double> probabilities,
                                 std::vector<MultipartiteState> branches)
    : probabilities_(std::move(probabilities)), branches_(std::move(branches)) {
  if (probabilities_.empty()) throw InvalidArgument("ensemble has no members");
  if (probabilities_.size() != branches_.size()) {
    throw InvalidArgument("ensemble has " + std::to_string(probabilities_.size()) +
                          " probabilities but " + std::to_string(branches_.size()) +
                          " branch states");
  }
  double total = 0.0;
  for (double p : probabilities_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidArgument("negative or non-finite probability");
    total += p;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw InvalidArgument("probabilities sum to " + std::to_string(total));
  }
  for (const auto& b : branches_) {
    if (!(b.spec() == branches_.front().spec())) {
      throw InvalidArgument("ensemble branches carry different subsystem specs");
    }
  }
}

MultipartiteState LabeledEnsemble::average() const {
  ComplexMatrix avg = ComplexMatrix::Zero(branches_.front().matrix().rows(),
                                          branches_.front().matrix().cols());
  for (std::size_t i = 0; i < size(); ++i) avg += probabilities_[i] * branches_[i].matrix();
  return MultipartiteState::unchecked(spec(), std::move(avg));
}

LabeledEnsemble LabeledEnsemble::marginal(const Labels& keep) const {
  std::vector<MultipartiteState> reduced;
  reduced.reserve(size());
  for (const auto& b : branches_) reduced.push_back(qfc::marginal(b, keep));
  return LabeledEnsemble(probabilities_, std::move(reduced));
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double shannon_entropy(std::span<const double> distribution) {
  double h = 0.0;
  for (double p : distribution) {
    if (p > kEigenvalueClamp) h -= p * std::log2(p);
  }
  return h;
}

double entropy_of_spectrum(std::span<const double> eigenvalues) {
  return shannon_entropy(eigenvalues);
}

double matrix_entropy(const ComplexMatrix& rho) {
  auto values = hermitian_eigenvalues(rho);
  return entropy_of_spectrum(values);
}

double von_neumann_entropy(const MultipartiteState& rho) {
  auto values = hermitian_eigenvalues(rho.matrix());
  double trace = std::accumulate(values.begin(), values.end(), 0.0);
  if (std::abs(trace - 1.0) > kTraceTolerance) {
    throw InvalidState("entropy of a state with trace " + std::to_string(trace));
  }
  if (!values.empty() && values.back() < kPsdFloor) {
    throw InvalidState("entropy of a state with eigenvalue " + std::to_string(values.back()));
  }
  return entropy_of_spectrum(values);
}

double conditional_entropy(const MultipartiteState& s, const Labels& a, const Labels& b) {
  require_disjoint(s.spec(), {&a, &b});
  return marginal_entropy(s, join(a, b)) - marginal_entropy(s, b);
}

double mutual_information(const MultipartiteState& s, const Labels& a, const Labels& b) {
  require_disjoint(s.spec(), {&a, &b});
  return marginal_entropy(s, a) + marginal_entropy(s, b) - marginal_entropy(s, join(a, b));
}

double conditional_mutual_information(const MultipartiteState& s, const Labels& a,
                                      const Labels& b, const Labels& c) {
  require_disjoint(s.spec(), {&a, &b, &c});
  const double s_ac = marginal_entropy(s, join(a, c));
  const double s_bc = marginal_entropy(s, join(b, c));
  const double s_c = marginal_entropy(s, c);
  const double s_abc = marginal_entropy(s, join(join(a, b), c));
  const double value = s_ac + s_bc - s_c - s_abc;

  // S(A:BC) - S(A:C)
  const double s_a = marginal_entropy(s, a);
  const double chained = (s_a + s_bc - s_abc) - (s_a + s_c - s_ac);
  if (std::abs(value - chained) > kIdentityTolerance) {
    throw Error("conditional mutual information forms disagree by " +
                std::to_string(std::abs(value - chained)));
  }
  return value;
}

double holevo_chi(const LabeledEnsemble& ensemble) {
  double chi = matrix_entropy(ensemble.average().matrix());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const double p = ensemble.probabilities()[i];
    if (p == 0.0) continue;
    chi -= p * matrix_entropy(ensemble.branches()[i].matrix());
  }
  return chi;
}

double sampled_accessible_information(const LabeledEnsemble& ensemble,
                                      const ComplexMatrix& basis) {
  const auto d = static_cast<Eigen::Index>(ensemble.spec().total_dim());
  if (basis.rows() != d || basis.cols() != d) {
    throw InvalidArgument("measurement basis has the wrong shape");
  }
  if (unitarity_error(basis) > kHermitianTolerance) {
    throw InvalidArgument("measurement vectors are not orthonormal");
  }
  const std::size_t outcomes = static_cast<std::size_t>(d);
  std::vector<double> joint_outcome(outcomes, 0.0);
  double conditional = 0.0;
  std::vector<double> given(outcomes);
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const double p = ensemble.probabilities()[i];
    const auto& rho = ensemble.branches()[i].matrix();
    for (Eigen::Index j = 0; j < d; ++j) {
      double q = (basis.col(j).adjoint() * rho * basis.col(j))(0, 0).real();
      given[static_cast<std::size_t>(j)] = std::max(0.0, q);
      joint_outcome[static_cast<std::size_t>(j)] += p * given[static_cast<std::size_t>(j)];
    }
    if (p > 0.0) conditional += p * shannon_entropy(given);
  }
  return shannon_entropy(joint_outcome) - conditional;
}

}  // namespace qfc
