#include "qfc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>

#include "qfc/error.hpp"

namespace qfc {

namespace {

void check_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidState(std::string(what) + ": non-finite entry");
  }
}

std::vector<std::size_t> positions_of(const SubsystemSpec& spec,
                                      const Labels& labels) {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  std::set<std::size_t> seen;
  for (const auto& l : labels) {
    auto i = spec.index_of(l);
    if (!seen.insert(i).second) {
      throw InvalidArgument("label listed twice: " + l);
    }
    out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> complement_positions(const SubsystemSpec& spec,
                                              const std::vector<std::size_t>& pos) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (std::find(pos.begin(), pos.end(), i) == pos.end()) out.push_back(i);
  }
  return out;
}

SubsystemSpec spec_from_positions(const SubsystemSpec& spec,
                                  const std::vector<std::size_t>& pos) {
  std::vector<Subsystem> parts;
  parts.reserve(pos.size());
  for (auto i : pos) parts.push_back(spec[i]);
  return SubsystemSpec(std::move(parts));
}

void fix_phase(ComplexMatrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      // Ties resolve to the lowest row index so the choice is stable.
      double a = std::abs(vectors(r, c));
      if (a > best_abs + 1e-12) {
        best_abs = a;
        best = r;
      }
    }
    if (best_abs > 0) {
      Complex phase = std::conj(vectors(best, c)) / best_abs;
      vectors.col(c) *= phase;
    }
  }
}

}  // namespace

std::size_t dimension_budget() {
  if (const char* env = std::getenv("QFC_MAX_DIM")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDimensionBudget;
}

// ---------------------------------------------------------------------------
// SubsystemSpec

SubsystemSpec::SubsystemSpec(std::initializer_list<Subsystem> parts)
    : SubsystemSpec(std::vector<Subsystem>(parts)) {}

SubsystemSpec::SubsystemSpec(std::vector<Subsystem> parts) : parts_(std::move(parts)) {
  std::set<std::string> seen;
  for (const auto& p : parts_) {
    if (p.dim == 0) throw InvalidArgument("subsystem '" + p.label + "' has dimension 0");
    if (!seen.insert(p.label).second) {
      throw InvalidArgument("duplicate subsystem label: " + p.label);
    }
  }
}

std::size_t SubsystemSpec::total_dim() const {
  std::size_t d = 1;
  for (const auto& p : parts_) d *= p.dim;
  return d;
}

std::optional<std::size_t> SubsystemSpec::find(std::string_view label) const {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i].label == label) return i;
  }
  return std::nullopt;
}

std::size_t SubsystemSpec::index_of(std::string_view label) const {
  auto i = find(label);
  if (!i) throw InvalidArgument("unknown subsystem label: " + std::string(label));
  return *i;
}

std::size_t SubsystemSpec::dim(std::string_view label) const {
  return parts_[index_of(label)].dim;
}

Labels SubsystemSpec::labels() const {
  Labels out;
  out.reserve(parts_.size());
  for (const auto& p : parts_) out.push_back(p.label);
  return out;
}

SubsystemSpec SubsystemSpec::concat(const SubsystemSpec& other) const {
  std::vector<Subsystem> parts = parts_;
  parts.insert(parts.end(), other.parts_.begin(), other.parts_.end());
  return SubsystemSpec(std::move(parts));
}

SubsystemSpec SubsystemSpec::select(const Labels& labels) const {
  return spec_from_positions(*this, positions_of(*this, labels));
}

SubsystemSpec SubsystemSpec::without(const Labels& labels) const {
  return spec_from_positions(*this, complement_positions(*this, positions_of(*this, labels)));
}

// ---------------------------------------------------------------------------
// Matrix helpers

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double hermiticity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return max_abs(m - m.adjoint());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix identity_matrix(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim),
                                 static_cast<Eigen::Index>(dim));
}

double unitarity_error(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  return max_abs(u.adjoint() * u - identity_matrix(static_cast<std::size_t>(u.rows())));
}

// ---------------------------------------------------------------------------
// Eigendecomposition

EigenDecomposition hermitian_eigendecomposition(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("eigendecomposition of a non-square matrix");
  check_finite(m, "eigendecomposition");
  if (hermiticity_error(m) > kHermitianTolerance) {
    throw InvalidArgument("eigendecomposition of a non-Hermitian matrix");
  }
  const auto n = m.rows();
  EigenDecomposition out;
  if (n == 0) return out;
  Eigen::MatrixXcd hermitian = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
  if (solver.info() != Eigen::Success) throw Error("eigensolver failed to converge");
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[static_cast<std::size_t>(k)] = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  fix_phase(out.vectors);
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("eigenvalues of a non-square matrix");
  check_finite(m, "eigenvalues");
  if (hermiticity_error(m) > kHermitianTolerance) {
    throw InvalidArgument("eigenvalues of a non-Hermitian matrix");
  }
  const auto n = m.rows();
  std::vector<double> values(static_cast<std::size_t>(n));
  if (n == 0) return values;
  Eigen::MatrixXcd hermitian = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eigensolver failed to converge");
  for (Eigen::Index k = 0; k < n; ++k) {
    values[static_cast<std::size_t>(k)] = solver.eigenvalues()(n - 1 - k);
  }
  return values;
}

// ---------------------------------------------------------------------------
// States

MultipartiteState::MultipartiteState(SubsystemSpec spec, ComplexMatrix matrix)
    : spec_(std::move(spec)), matrix_(std::move(matrix)) {
  const auto d = spec_.total_dim();
  if (d > dimension_budget()) throw DimensionBudgetExceeded(d, dimension_budget());
  if (matrix_.rows() != static_cast<Eigen::Index>(d) ||
      matrix_.cols() != static_cast<Eigen::Index>(d)) {
    throw InvalidArgument("state matrix is " + std::to_string(matrix_.rows()) + "x" +
                          std::to_string(matrix_.cols()) + " but subsystems multiply to " +
                          std::to_string(d));
  }
}

MultipartiteState MultipartiteState::unchecked(SubsystemSpec spec, ComplexMatrix matrix) {
  return MultipartiteState(std::move(spec), std::move(matrix));
}

MultipartiteState MultipartiteState::from_matrix(SubsystemSpec spec, ComplexMatrix matrix) {
  MultipartiteState s(std::move(spec), std::move(matrix));
  check_finite(s.matrix_, "state");
  double herm = hermiticity_error(s.matrix_);
  if (herm > kHermitianTolerance) {
    throw InvalidState("state is not Hermitian (error " + std::to_string(herm) + ")");
  }
  double tr_err = std::abs(s.matrix_.trace() - Complex(1.0));
  if (tr_err > kTraceTolerance) {
    throw InvalidState("state trace differs from 1 by " + std::to_string(tr_err));
  }
  auto values = hermitian_eigenvalues(s.matrix_);
  if (!values.empty() && values.back() < kPsdFloor) {
    throw InvalidState("state has negative eigenvalue " + std::to_string(values.back()));
  }
  return s;
}

MultipartiteState MultipartiteState::clip_and_renormalize(SubsystemSpec spec,
                                                          ComplexMatrix matrix) {
  check_finite(matrix, "state");
  if (hermiticity_error(matrix) > kHermitianTolerance) {
    throw InvalidState("state is not Hermitian");
  }
  auto eig = hermitian_eigendecomposition(matrix);
  if (!eig.values.empty() && eig.values.back() < kPsdFloor) {
    throw InvalidState("eigenvalue below the clipping floor: " +
                       std::to_string(eig.values.back()));
  }
  const auto n = static_cast<Eigen::Index>(eig.values.size());
  Eigen::VectorXd lambda(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    lambda(k) = std::max(0.0, eig.values[static_cast<std::size_t>(k)]);
  }
  double total = lambda.sum();
  if (total <= 0) throw InvalidState("state has zero trace after clipping");
  lambda /= total;
  ComplexMatrix rebuilt = eig.vectors * lambda.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  rebuilt = 0.5 * (rebuilt + rebuilt.adjoint()).eval();
  return MultipartiteState(std::move(spec), std::move(rebuilt));
}

MultipartiteState MultipartiteState::maximally_mixed(SubsystemSpec spec) {
  const auto d = spec.total_dim();
  ComplexMatrix m = identity_matrix(d) / static_cast<double>(d);
  return MultipartiteState(std::move(spec), std::move(m));
}

MultipartiteState MultipartiteState::basis_state(SubsystemSpec spec, std::size_t index) {
  const auto d = spec.total_dim();
  if (index >= d) throw InvalidArgument("basis index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return MultipartiteState(std::move(spec), std::move(m));
}

PureState::PureState(SubsystemSpec spec, ComplexVector amplitudes)
    : spec_(std::move(spec)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != static_cast<Eigen::Index>(spec_.total_dim())) {
    throw InvalidArgument("amplitude count does not match subsystem dimensions");
  }
  if (!amplitudes_.allFinite()) throw InvalidState("pure state: non-finite amplitude");
  double norm_err = std::abs(amplitudes_.squaredNorm() - 1.0);
  if (norm_err > kNormTolerance) {
    throw InvalidState("pure state norm differs from 1 by " + std::to_string(norm_err));
  }
}

PureState PureState::basis_state(SubsystemSpec spec, std::size_t index) {
  const auto d = spec.total_dim();
  if (index >= d) throw InvalidArgument("basis index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(spec), std::move(v));
}

MultipartiteState PureState::density() const {
  ComplexMatrix m = amplitudes_ * amplitudes_.adjoint();
  return MultipartiteState::unchecked(spec_, std::move(m));
}

// ---------------------------------------------------------------------------
// Subsystem bookkeeping

std::vector<std::size_t> reorder_index_map(const SubsystemSpec& spec,
                                           const std::vector<std::size_t>& order) {
  const std::size_t n = spec.size();
  std::vector<std::size_t> strides(n, 1);
  for (std::size_t k = n; k-- > 1;) strides[k - 1] = strides[k] * spec[k].dim;

  const std::size_t total = spec.total_dim();
  std::vector<std::size_t> map(total);
  std::vector<std::size_t> digits(order.size(), 0);
  std::size_t old_index = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    map[idx] = old_index;
    // Odometer increment over the new ordering, last position fastest.
    for (std::size_t p = order.size(); p-- > 0;) {
      const std::size_t axis = order[p];
      if (++digits[p] < spec[axis].dim) {
        old_index += strides[axis];
        break;
      }
      old_index -= (digits[p] - 1) * strides[axis];
      digits[p] = 0;
    }
  }
  return map;
}

ComplexMatrix embed_operator(const SubsystemSpec& spec, const Labels& targets,
                             const ComplexMatrix& op) {
  auto target_pos = positions_of(spec, targets);
  auto rest_pos = complement_positions(spec, target_pos);
  const std::size_t dt = spec_from_positions(spec, target_pos).total_dim();
  if (op.rows() != static_cast<Eigen::Index>(dt) || op.cols() != static_cast<Eigen::Index>(dt)) {
    throw InvalidArgument("operator shape does not match the target subsystems");
  }
  std::vector<std::size_t> order = target_pos;
  order.insert(order.end(), rest_pos.begin(), rest_pos.end());
  auto map = reorder_index_map(spec, order);
  const std::size_t d = spec.total_dim();
  const std::size_t r = d / dt;
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t a = 0; a < dt; ++a) {
    for (std::size_t b = 0; b < dt; ++b) {
      const Complex v = op(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (v == Complex(0.0)) continue;
      for (std::size_t s = 0; s < r; ++s) {
        out(static_cast<Eigen::Index>(map[a * r + s]), static_cast<Eigen::Index>(map[b * r + s])) = v;
      }
    }
  }
  return out;
}

MultipartiteState tensor_product(const MultipartiteState& a, const MultipartiteState& b) {
  SubsystemSpec spec = a.spec().concat(b.spec());
  return MultipartiteState::unchecked(std::move(spec), kron(a.matrix(), b.matrix()));
}

MultipartiteState partial_trace(const MultipartiteState& s, const Labels& discard) {
  const auto& spec = s.spec();
  auto discard_pos = positions_of(spec, discard);
  auto keep_pos = complement_positions(spec, discard_pos);

  std::vector<std::size_t> order = keep_pos;
  order.insert(order.end(), discard_pos.begin(), discard_pos.end());
  auto map = reorder_index_map(spec, order);

  SubsystemSpec kept = spec_from_positions(spec, keep_pos);
  const std::size_t dk = kept.total_dim();
  const std::size_t dd = spec.total_dim() / dk;

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  const auto& rho = s.matrix();
  for (std::size_t a = 0; a < dk; ++a) {
    for (std::size_t b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < dd; ++t) {
        acc += rho(static_cast<Eigen::Index>(map[a * dd + t]),
                   static_cast<Eigen::Index>(map[b * dd + t]));
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
    }
  }
  return MultipartiteState::unchecked(std::move(kept), std::move(out));
}

MultipartiteState marginal(const MultipartiteState& s, const Labels& keep) {
  auto keep_pos = positions_of(s.spec(), keep);
  auto discard_pos = complement_positions(s.spec(), keep_pos);
  Labels discard;
  for (auto i : discard_pos) discard.push_back(s.spec()[i].label);
  return partial_trace(s, discard);
}

MultipartiteState permute_subsystems(const MultipartiteState& s, const Labels& new_order) {
  const auto& spec = s.spec();
  if (new_order.size() != spec.size()) {
    throw InvalidArgument("new order is not a permutation of the subsystem labels");
  }
  auto order = positions_of(spec, new_order);
  auto map = reorder_index_map(spec, order);
  const auto d = static_cast<Eigen::Index>(spec.total_dim());
  ComplexMatrix out(d, d);
  const auto& rho = s.matrix();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      out(i, j) = rho(static_cast<Eigen::Index>(map[static_cast<std::size_t>(i)]),
                      static_cast<Eigen::Index>(map[static_cast<std::size_t>(j)]));
    }
  }
  return MultipartiteState::unchecked(spec_from_positions(spec, order), std::move(out));
}

PureState purify(const MultipartiteState& rho, const std::string& ref_label) {
  if (rho.spec().contains(ref_label)) {
    throw InvalidArgument("purification label already in use: " + ref_label);
  }
  auto eig = hermitian_eigendecomposition(rho.matrix());
  const auto d = static_cast<Eigen::Index>(rho.dim());
  ComplexVector psi = ComplexVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double lambda = std::max(0.0, eig.values[static_cast<std::size_t>(i)]);
    if (lambda == 0.0) continue;
    double amp = std::sqrt(lambda);
    for (Eigen::Index a = 0; a < d; ++a) {
      psi(a * d + i) += amp * eig.vectors(a, i);
    }
  }
  psi /= psi.norm();
  SubsystemSpec spec = rho.spec().concat(SubsystemSpec{{ref_label, rho.dim()}});
  return PureState(std::move(spec), std::move(psi));
}

MultipartiteState apply_local_kraus(const MultipartiteState& s, const std::string& target,
                                    std::span<const ComplexMatrix> kraus,
                                    std::size_t output_dim) {
  const auto& spec = s.spec();
  const std::size_t pos = spec.index_of(target);
  const std::size_t din = spec[pos].dim;
  if (kraus.empty()) throw InvalidArgument("empty Kraus list");
  for (const auto& k : kraus) {
    if (k.rows() != static_cast<Eigen::Index>(output_dim) ||
        k.cols() != static_cast<Eigen::Index>(din)) {
      throw InvalidArgument("Kraus operator shape does not match subsystem '" + target + "'");
    }
  }

  Labels front_order{target};
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (i != pos) front_order.push_back(spec[i].label);
  }
  MultipartiteState front = permute_subsystems(s, front_order);
  const auto r = static_cast<Eigen::Index>(spec.total_dim() / din);
  const auto di = static_cast<Eigen::Index>(din);
  const auto dout = static_cast<Eigen::Index>(output_dim);
  const auto& rho = front.matrix();

  ComplexMatrix out = ComplexMatrix::Zero(dout * r, dout * r);
  ComplexMatrix left(dout * r, di * r);
  for (const auto& k : kraus) {
    // left = (K x I) rho
    left.setZero();
    for (Eigen::Index a = 0; a < dout; ++a) {
      for (Eigen::Index t = 0; t < di; ++t) {
        if (k(a, t) == Complex(0.0)) continue;
        left.middleRows(a * r, r) += k(a, t) * rho.middleRows(t * r, r);
      }
    }
    // out += left (K x I)^dagger
    for (Eigen::Index b = 0; b < dout; ++b) {
      for (Eigen::Index t = 0; t < di; ++t) {
        if (k(b, t) == Complex(0.0)) continue;
        out.middleCols(b * r, r) += std::conj(k(b, t)) * left.middleCols(t * r, r);
      }
    }
  }

  std::vector<Subsystem> parts = front.spec().parts();
  parts[0].dim = output_dim;
  MultipartiteState applied = MultipartiteState::unchecked(SubsystemSpec(std::move(parts)), std::move(out));
  return permute_subsystems(applied, spec.labels());
}

// ---------------------------------------------------------------------------
// Pure-state registers

PureState permute(const PureState& psi, const Labels& new_order) {
  const auto& spec = psi.spec();
  if (new_order.size() != spec.size()) {
    throw InvalidArgument("new order is not a permutation of the register labels");
  }
  auto order = positions_of(spec, new_order);
  auto map = reorder_index_map(spec, order);
  ComplexVector out(psi.amplitudes().size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = psi.amplitudes()(static_cast<Eigen::Index>(map[i]));
  }
  return PureState(spec_from_positions(spec, order), std::move(out));
}

PureState apply_local_operator(const PureState& psi, const Labels& targets,
                               const ComplexMatrix& op,
                               const std::vector<Subsystem>& outputs) {
  const auto& spec = psi.spec();
  auto target_pos = positions_of(spec, targets);
  auto rest_pos = complement_positions(spec, target_pos);
  std::vector<std::size_t> order = target_pos;
  order.insert(order.end(), rest_pos.begin(), rest_pos.end());

  const std::size_t din = spec_from_positions(spec, target_pos).total_dim();
  std::size_t dout = 1;
  for (const auto& o : outputs) dout *= o.dim;
  if (op.rows() != static_cast<Eigen::Index>(dout) || op.cols() != static_cast<Eigen::Index>(din)) {
    throw InvalidArgument("operator shape does not match the target registers");
  }

  auto map = reorder_index_map(spec, order);
  const auto r = static_cast<Eigen::Index>(spec.total_dim() / din);
  ComplexMatrix front(static_cast<Eigen::Index>(din), r);
  for (std::size_t i = 0; i < map.size(); ++i) {
    front(static_cast<Eigen::Index>(i) / r, static_cast<Eigen::Index>(i) % r) =
        psi.amplitudes()(static_cast<Eigen::Index>(map[i]));
  }
  ComplexMatrix applied = op * front;
  ComplexVector out = Eigen::Map<const ComplexVector>(applied.data(), applied.size());
  double n = out.norm();
  if (std::abs(n * n - 1.0) > 1e-10) {
    throw InvalidState("operator is not norm preserving on this state");
  }
  out /= n;

  std::vector<Subsystem> parts = outputs;
  for (auto i : rest_pos) parts.push_back(spec[i]);
  return PureState(SubsystemSpec(std::move(parts)), std::move(out));
}

PureState append_register(const PureState& psi, Subsystem reg) {
  const auto d = static_cast<Eigen::Index>(reg.dim);
  ComplexVector out = ComplexVector::Zero(psi.amplitudes().size() * d);
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) out(i * d) = psi.amplitudes()(i);
  SubsystemSpec spec = psi.spec().concat(SubsystemSpec{std::move(reg)});
  return PureState(std::move(spec), std::move(out));
}

MultipartiteState reduced_density(const PureState& psi, const Labels& keep) {
  const auto& spec = psi.spec();
  auto keep_pos = positions_of(spec, keep);
  auto rest_pos = complement_positions(spec, keep_pos);
  std::vector<std::size_t> order = keep_pos;
  order.insert(order.end(), rest_pos.begin(), rest_pos.end());
  auto map = reorder_index_map(spec, order);

  SubsystemSpec kept = spec_from_positions(spec, keep_pos);
  const auto dk = static_cast<Eigen::Index>(kept.total_dim());
  const auto r = static_cast<Eigen::Index>(spec.total_dim()) / dk;
  ComplexMatrix amps(dk, r);
  for (std::size_t i = 0; i < map.size(); ++i) {
    amps(static_cast<Eigen::Index>(i) / r, static_cast<Eigen::Index>(i) % r) =
        psi.amplitudes()(static_cast<Eigen::Index>(map[i]));
  }
  ComplexMatrix rho = amps * amps.adjoint();
  return MultipartiteState::unchecked(std::move(kept), std::move(rho));
}

}  // namespace qfc
