#include "qfc/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qfc/entropy.hpp"
#include "qfc/error.hpp"
#include "qfc/random.hpp"

namespace qfc {

namespace {

void require_input(const QuantumChannel& channel, const MultipartiteState& rho) {
  if (rho.spec().size() != 1 || rho.dim() != channel.d_in()) {
    throw InvalidArgument("input state must be a single subsystem of dimension " +
                          std::to_string(channel.d_in()));
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Re Tr(g d) for Hermitian g, d.
double directional(const ComplexMatrix& g, const ComplexMatrix& d) {
  return g.cwiseProduct(d.transpose()).sum().real();
}

// -log2 of a density matrix with its spectrum floored.
ComplexMatrix neg_log2(const ComplexMatrix& rho, double floor) {
  auto eig = hermitian_eigendecomposition(hermitian_part(rho));
  const auto n = static_cast<Eigen::Index>(eig.values.size());
  Eigen::VectorXcd diag(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double lambda = eig.values[static_cast<std::size_t>(k)];
    if (floor <= 0.0 && lambda <= 0.0) {
      throw InvalidArgument("gradient of a singular state requires an eigenvalue floor");
    }
    diag(k) = -std::log2(std::max(lambda, floor));
  }
  return eig.vectors * diag.asDiagonal() * eig.vectors.adjoint();
}

// Objective S(rho)*entropy_weight + S(L rho) - S(L^c rho) on raw matrices.
class EntropicObjective {
 public:
  EntropicObjective(const QuantumChannel& channel, bool include_input_entropy)
      : channel_(channel),
        complement_(complementary(channel)),
        include_input_(include_input_entropy) {}

  double value(const ComplexMatrix& rho) const {
    double v = matrix_entropy(hermitian_part(channel_.apply(rho))) -
               matrix_entropy(hermitian_part(complement_.apply(rho)));
    if (include_input_) v += matrix_entropy(rho);
    return v;
  }

  ComplexMatrix gradient(const ComplexMatrix& rho, double floor) const {
    ComplexMatrix g = channel_.adjoint(neg_log2(channel_.apply(rho), floor)) -
                      complement_.adjoint(neg_log2(complement_.apply(rho), floor));
    if (include_input_) {
      g += neg_log2(rho, floor);
      g -= identity_matrix(channel_.d_in()) / std::numbers::ln2;
    }
    return hermitian_part(g);
  }

  std::size_t dim() const { return channel_.d_in(); }

 private:
  const QuantumChannel& channel_;
  QuantumChannel complement_;
  bool include_input_;
};

struct StartResult {
  double value = 0.0;
  ComplexMatrix rho;
  std::size_t iterations = 0;
  double gap = 0.0;
  bool converged = false;
};

// Conditional-gradient ascent: the linear oracle over the density matrices
// is the top eigenvector of the gradient. The step starts from a local
// curvature estimate and backtracks on the directional derivative, which
// stays resolvable long after objective differences drop below rounding.
StartResult ascend(const EntropicObjective& objective, ComplexMatrix rho,
                   const CapacityOptions& options) {
  StartResult out;
  double f = objective.value(rho);
  ComplexMatrix g = objective.gradient(rho, options.eigenvalue_floor);
  double curvature = 1.0;
  std::size_t it = 0;
  double gap = 0.0;
  for (;; ++it) {
    auto eig = hermitian_eigendecomposition(g);
    ComplexVector top = eig.vectors.col(0);
    gap = eig.values[0] - directional(g, rho);
    if (gap <= options.gap_tolerance) {
      out.converged = true;
      break;
    }
    if (it >= options.max_iterations) break;

    ComplexMatrix direction = top * top.adjoint() - rho;
    const double dnorm2 = direction.squaredNorm();
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(f));
    double step = std::min(1.0, gap / (curvature * dnorm2));
    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      ComplexMatrix candidate = hermitian_part(rho + step * direction);
      const double fc = objective.value(candidate);
      ComplexMatrix gc = objective.gradient(candidate, options.eigenvalue_floor);
      const double slope = directional(gc, direction);
      const double secant = (gap - slope) / step;
      if (secant > 0.0) curvature = std::max(secant / dnorm2, 1e-12);
      // Ascent and no more than 1.5x past the maximizer along the segment.
      if (fc >= f - slack && slope >= -0.5 * gap) {
        rho = std::move(candidate);
        f = fc;
        g = std::move(gc);
        accepted = true;
        break;
      }
      step = secant > 0.0 ? std::min(0.5 * step, gap / secant) : 0.5 * step;
    }
    if (!accepted) break;  // no ascent possible at working precision
  }
  out.value = f;
  out.rho = std::move(rho);
  out.iterations = it;
  out.gap = gap;
  return out;
}

CapacityReport multistart(const EntropicObjective& objective, const CapacityOptions& options) {
  const std::size_t d = objective.dim();
  std::vector<StartResult> results;
  results.push_back(ascend(objective, identity_matrix(d) / static_cast<double>(d), options));
  for (std::size_t k = 0; k < options.restarts; ++k) {
    auto start = random_density_matrix(d, d, derive_seed(options.seed, k));
    results.push_back(ascend(objective, start.matrix(), options));
  }

  CapacityReport report;
  std::size_t best = 0;
  double lo = results[0].value;
  double hi = results[0].value;
  for (std::size_t k = 0; k < results.size(); ++k) {
    report.start_values.push_back(results[k].value);
    if (results[k].converged) ++report.converged_starts;
    lo = std::min(lo, results[k].value);
    hi = std::max(hi, results[k].value);
    if (results[k].value > results[best].value) best = k;
  }
  // Among starts tied with the best value, report the best certified one.
  for (std::size_t k = 0; k < results.size(); ++k) {
    if (results[k].value >= results[best].value - 1e-10 && results[k].gap < results[best].gap) {
      best = k;
    }
  }
  report.value = results[best].value;
  report.argmax = MultipartiteState::clip_and_renormalize(SubsystemSpec{{"A", d}}, results[best].rho);
  report.iterations = results[best].iterations;
  report.stationarity_gap = results[best].gap;
  report.converged = results[best].converged;
  report.multistart_spread = hi - lo;
  return report;
}

}  // namespace

double ea_objective(const QuantumChannel& channel, const MultipartiteState& rho) {
  require_input(channel, rho);
  return EntropicObjective(channel, true).value(rho.matrix());
}

double ea_objective_via_purification(const QuantumChannel& channel,
                                     const MultipartiteState& rho) {
  require_input(channel, rho);
  const std::string& label = rho.spec()[0].label;
  const std::string ref = label == "ref" ? "ref'" : "ref";
  auto psi = purify(rho, ref).density();
  auto joint = apply_to_subsystem(channel, psi, label);
  return von_neumann_entropy(rho) + von_neumann_entropy(apply(channel, rho)) -
         matrix_entropy(joint.matrix());
}

ComplexMatrix ea_gradient(const QuantumChannel& channel, const MultipartiteState& rho,
                          double floor) {
  require_input(channel, rho);
  return EntropicObjective(channel, true).gradient(rho.matrix(), floor);
}

CapacityReport entanglement_assisted_capacity(const QuantumChannel& channel,
                                              const CapacityOptions& options) {
  if (channel.d_in() > 64) throw InvalidArgument("capacity optimizer supports d_in <= 64");
  return multistart(EntropicObjective(channel, true), options);
}

double coherent_information(const QuantumChannel& channel, const MultipartiteState& rho) {
  require_input(channel, rho);
  return EntropicObjective(channel, false).value(rho.matrix());
}

ComplexMatrix coherent_information_gradient(const QuantumChannel& channel,
                                            const MultipartiteState& rho, double floor) {
  require_input(channel, rho);
  return EntropicObjective(channel, false).gradient(rho.matrix(), floor);
}

CapacityReport max_coherent_information(const QuantumChannel& channel,
                                        const CapacityOptions& options) {
  if (channel.d_in() > 64) throw InvalidArgument("capacity optimizer supports d_in <= 64");
  return multistart(EntropicObjective(channel, false), options);
}

}  // namespace qfc
