#include "qfc/channels.hpp"

#include <cmath>

#include "qfc/error.hpp"
#include "qfc/random.hpp"

namespace qfc {

namespace {

ComplexMatrix pauli(int which) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (which) {
    case 0: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 2: m(0, 1) = Complex(0, -1); m(1, 0) = Complex(0, 1); break;
    default: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
  }
  return m;
}

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

}  // namespace

double trace_preservation_error(const std::vector<ComplexMatrix>& kraus, std::size_t d_in) {
  ComplexMatrix sum = ComplexMatrix::Zero(static_cast<Eigen::Index>(d_in), static_cast<Eigen::Index>(d_in));
  for (const auto& k : kraus) sum += k.adjoint() * k;
  return max_abs(sum - identity_matrix(d_in));
}

QuantumChannel::QuantumChannel(std::string name, std::size_t d_in, std::size_t d_out,
                               std::vector<ComplexMatrix> kraus, double tp_tolerance)
    : name_(std::move(name)), d_in_(d_in), d_out_(d_out), kraus_(std::move(kraus)) {
  if (d_in_ == 0 || d_out_ == 0) throw InvalidArgument("channel dimensions must be positive");
  if (kraus_.empty()) throw InvalidArgument("channel needs at least one Kraus operator");
  if (kraus_.size() > d_in_ * d_out_) {
    throw InvalidArgument("channel has " + std::to_string(kraus_.size()) +
                          " Kraus operators; at most d_in*d_out = " +
                          std::to_string(d_in_ * d_out_) + " allowed");
  }
  for (const auto& k : kraus_) {
    if (k.rows() != static_cast<Eigen::Index>(d_out_) || k.cols() != static_cast<Eigen::Index>(d_in_)) {
      throw InvalidArgument("Kraus operator is " + std::to_string(k.rows()) + "x" +
                            std::to_string(k.cols()) + ", expected " + std::to_string(d_out_) +
                            "x" + std::to_string(d_in_));
    }
    if (!k.allFinite()) throw InvalidState("Kraus operator has a non-finite entry");
  }
  const double err = trace_preservation_error(kraus_, d_in_);
  if (err > tp_tolerance) {
    throw InvalidState("channel '" + name_ + "' is not trace preserving (error " +
                       std::to_string(err) + ")");
  }
}

ComplexMatrix QuantumChannel::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(d_out_), static_cast<Eigen::Index>(d_out_));
  for (const auto& k : kraus_) out.noalias() += k * rho * k.adjoint();
  return out;
}

ComplexMatrix QuantumChannel::adjoint(const ComplexMatrix& x) const {
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(d_in_), static_cast<Eigen::Index>(d_in_));
  for (const auto& k : kraus_) out.noalias() += k.adjoint() * x * k;
  return out;
}

MultipartiteState apply(const QuantumChannel& channel, const MultipartiteState& rho) {
  if (rho.spec().size() != 1 || rho.dim() != channel.d_in()) {
    throw InvalidArgument("channel '" + channel.name() + "' expects a single subsystem of dimension " +
                          std::to_string(channel.d_in()));
  }
  ComplexMatrix out = channel.apply(rho.matrix());
  out = 0.5 * (out + out.adjoint()).eval();
  return MultipartiteState::unchecked(SubsystemSpec{{rho.spec()[0].label, channel.d_out()}},
                                      std::move(out));
}

MultipartiteState apply_to_subsystem(const QuantumChannel& channel, const MultipartiteState& s,
                                     const std::string& target) {
  if (s.spec().dim(target) != channel.d_in()) {
    throw InvalidArgument("subsystem '" + target + "' has dimension " +
                          std::to_string(s.spec().dim(target)) + ", channel expects " +
                          std::to_string(channel.d_in()));
  }
  return apply_local_kraus(s, target, channel.kraus(), channel.d_out());
}

StinespringIsometry stinespring(const QuantumChannel& channel) {
  const auto d_out = static_cast<Eigen::Index>(channel.d_out());
  const auto d_env = static_cast<Eigen::Index>(channel.kraus().size());
  StinespringIsometry v;
  v.d_out = channel.d_out();
  v.d_env = channel.kraus().size();
  v.matrix = ComplexMatrix::Zero(d_out * d_env, static_cast<Eigen::Index>(channel.d_in()));
  for (Eigen::Index k = 0; k < d_env; ++k) {
    const auto& kr = channel.kraus()[static_cast<std::size_t>(k)];
    for (Eigen::Index j = 0; j < d_out; ++j) v.matrix.row(j * d_env + k) = kr.row(j);
  }
  return v;
}

namespace {

ComplexMatrix choi_of(const std::vector<ComplexMatrix>& ops, std::size_t d_in, std::size_t d_out) {
  const auto dim = static_cast<Eigen::Index>(d_out * d_in);
  ComplexMatrix j = ComplexMatrix::Zero(dim, dim);
  for (const auto& k : ops) {
    Eigen::Map<const ComplexVector> vec(k.data(), dim);
    j.noalias() += vec * vec.adjoint();
  }
  j /= static_cast<double>(d_in);
  return 0.5 * (j + j.adjoint());
}

// Kraus operators from the Choi eigenvectors above `cutoff`.
std::vector<ComplexMatrix> minimal_kraus(const std::vector<ComplexMatrix>& ops, std::size_t d_in,
                                         std::size_t d_out, double cutoff) {
  auto eig = hermitian_eigendecomposition(choi_of(ops, d_in, d_out));
  const auto n_in = static_cast<Eigen::Index>(d_in);
  const auto n_out = static_cast<Eigen::Index>(d_out);
  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    if (eig.values[k] <= cutoff) break;
    const double scale = std::sqrt(static_cast<double>(d_in) * eig.values[k]);
    ComplexMatrix op(n_out, n_in);
    for (Eigen::Index a = 0; a < n_out; ++a) {
      for (Eigen::Index i = 0; i < n_in; ++i) {
        op(a, i) = scale * eig.vectors(a * n_in + i, static_cast<Eigen::Index>(k));
      }
    }
    kraus.push_back(std::move(op));
  }
  return kraus;
}

}  // namespace

QuantumChannel complementary(const QuantumChannel& channel) {
  const auto d_env = static_cast<Eigen::Index>(channel.kraus().size());
  std::vector<ComplexMatrix> kraus;
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(channel.d_out()); ++j) {
    ComplexMatrix f(d_env, static_cast<Eigen::Index>(channel.d_in()));
    for (Eigen::Index k = 0; k < d_env; ++k) f.row(k) = channel.kraus()[static_cast<std::size_t>(k)].row(j);
    if (f.isZero(0.0)) continue;
    kraus.push_back(std::move(f));
  }
  const std::size_t env = channel.kraus().size();
  if (kraus.size() > channel.d_in() * env) {
    kraus = minimal_kraus(kraus, channel.d_in(), env, 1e-14);
  }
  return QuantumChannel(channel.name() + "^c", channel.d_in(), env, std::move(kraus), 1e-9);
}

ChoiMatrix choi(const QuantumChannel& channel) {
  SubsystemSpec spec{{"out", channel.d_out()}, {"ref", channel.d_in()}};
  return ChoiMatrix{MultipartiteState::unchecked(
      std::move(spec), choi_of(channel.kraus(), channel.d_in(), channel.d_out()))};
}

QuantumChannel canonical_kraus(const QuantumChannel& channel, double cutoff) {
  return QuantumChannel(channel.name(), channel.d_in(), channel.d_out(),
                        minimal_kraus(channel.kraus(), channel.d_in(), channel.d_out(), cutoff),
                        1e-9);
}

double entanglement_fidelity(const QuantumChannel& channel) {
  if (channel.d_in() != channel.d_out()) {
    throw InvalidArgument("entanglement fidelity needs d_in == d_out");
  }
  const auto d = static_cast<Eigen::Index>(channel.d_in());
  ComplexVector phi = ComplexVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  auto c = choi(channel);
  return (phi.adjoint() * c.state.matrix() * phi)(0, 0).real();
}

QuantumChannel identity_channel(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("identity channel dimension must be positive");
  return QuantumChannel("identity", dim, dim, {identity_matrix(dim)});
}

QuantumChannel qubit_erasure(double erasure_probability) {
  require_unit_interval(erasure_probability, "erasure probability");
  const double keep = std::sqrt(1.0 - erasure_probability);
  const double lose = std::sqrt(erasure_probability);
  ComplexMatrix k0 = ComplexMatrix::Zero(3, 2);
  k0(0, 0) = keep;
  k0(1, 1) = keep;
  ComplexMatrix k1 = ComplexMatrix::Zero(3, 2);
  k1(kErasureFlag, 0) = lose;
  ComplexMatrix k2 = ComplexMatrix::Zero(3, 2);
  k2(kErasureFlag, 1) = lose;
  return QuantumChannel("erasure", 2, 3, {k0, k1, k2});
}

QuantumChannel depolarizing(double fidelity) {
  if (!(fidelity >= 0.25 && fidelity <= 1.0)) {
    throw InvalidArgument("entanglement fidelity must lie in [0.25, 1], got " +
                          std::to_string(fidelity));
  }
  const double a = std::sqrt(fidelity);
  const double b = std::sqrt((1.0 - fidelity) / 3.0);
  return QuantumChannel("depolarizing", 2, 2, {a * pauli(0), b * pauli(1), b * pauli(2), b * pauli(3)});
}

QuantumChannel dephasing(double flip_probability) {
  require_unit_interval(flip_probability, "dephasing probability");
  return QuantumChannel("dephasing", 2, 2,
                        {std::sqrt(1.0 - flip_probability) * pauli(0),
                         std::sqrt(flip_probability) * pauli(3)});
}

QuantumChannel amplitude_damping(double gamma) {
  require_unit_interval(gamma, "damping probability");
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  return QuantumChannel("amplitude-damping", 2, 2, {k0, k1});
}

QuantumChannel random_channel(std::size_t d_in, std::size_t d_out, std::size_t kraus_count,
                              std::uint64_t seed) {
  if (kraus_count == 0 || kraus_count > d_in * d_out || d_out * kraus_count < d_in) {
    throw InvalidArgument("unsupported Kraus count for a random channel");
  }
  ComplexMatrix u = random_haar_unitary(d_out * kraus_count, seed);
  const auto env = static_cast<Eigen::Index>(kraus_count);
  std::vector<ComplexMatrix> kraus;
  for (Eigen::Index k = 0; k < env; ++k) {
    ComplexMatrix op(static_cast<Eigen::Index>(d_out), static_cast<Eigen::Index>(d_in));
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d_out); ++j) {
      op.row(j) = u.block(j * env + k, 0, 1, static_cast<Eigen::Index>(d_in));
    }
    kraus.push_back(std::move(op));
  }
  return QuantumChannel("random", d_in, d_out, std::move(kraus));
}

double depolarizing_probability_from_fidelity(double fidelity) {
  return 4.0 * (1.0 - fidelity) / 3.0;
}

double fidelity_from_depolarizing_probability(double probability) {
  return 1.0 - 3.0 * probability / 4.0;
}

}  // namespace qfc
