#pragma once

// Dense complex multipartite linear algebra.
//
// Storage is row-major; composite indices are big-endian, so the first
// subsystem of a spec varies slowest.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qfc {

using Complex = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using Labels = std::vector<std::string>;

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPsdFloor = -1e-9;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr std::size_t kDefaultDimensionBudget = 4096;

// Total-dimension cap for density operators. QFC_MAX_DIM overrides the
// default of 4096.
std::size_t dimension_budget();

struct Subsystem {
  std::string label;
  std::size_t dim = 1;

  bool operator==(const Subsystem&) const = default;
};

class SubsystemSpec {
 public:
  SubsystemSpec() = default;
  SubsystemSpec(std::initializer_list<Subsystem> parts);
  explicit SubsystemSpec(std::vector<Subsystem> parts);

  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }
  std::size_t total_dim() const;
  const std::vector<Subsystem>& parts() const { return parts_; }
  const Subsystem& operator[](std::size_t i) const { return parts_[i]; }

  std::optional<std::size_t> find(std::string_view label) const;
  // Throws InvalidArgument for unknown labels.
  std::size_t index_of(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label).has_value(); }
  std::size_t dim(std::string_view label) const;
  Labels labels() const;

  SubsystemSpec concat(const SubsystemSpec& other) const;
  // Subsystems named in `labels`, in the order given.
  SubsystemSpec select(const Labels& labels) const;
  // Every subsystem not named in `labels`, original order preserved.
  SubsystemSpec without(const Labels& labels) const;

  bool operator==(const SubsystemSpec&) const = default;

 private:
  std::vector<Subsystem> parts_;
};

double max_abs(const ComplexMatrix& m);
double hermiticity_error(const ComplexMatrix& m);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix identity_matrix(std::size_t dim);
// max |U^dagger U - I|
double unitarity_error(const ComplexMatrix& u);

// Density operator over an ordered list of labeled subsystems.
class MultipartiteState {
 public:
  // Rejects matrices that are not Hermitian, unit-trace and PSD within the
  // module tolerances. Nothing is repaired.
  static MultipartiteState from_matrix(SubsystemSpec spec, ComplexMatrix matrix);
  // Zeroes eigenvalues in [-1e-9, 0) and renormalizes the trace. Anything
  // more negative, or a non-Hermitian input, is still rejected.
  static MultipartiteState clip_and_renormalize(SubsystemSpec spec,
                                                ComplexMatrix matrix);
  // Caller guarantees the invariants; only shapes are checked.
  static MultipartiteState unchecked(SubsystemSpec spec, ComplexMatrix matrix);

  static MultipartiteState maximally_mixed(SubsystemSpec spec);
  static MultipartiteState basis_state(SubsystemSpec spec, std::size_t index);

  const SubsystemSpec& spec() const { return spec_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  MultipartiteState(SubsystemSpec spec, ComplexMatrix matrix);

  SubsystemSpec spec_;
  ComplexMatrix matrix_;
};

class PureState {
 public:
  PureState(SubsystemSpec spec, ComplexVector amplitudes);

  static PureState basis_state(SubsystemSpec spec, std::size_t index);

  const SubsystemSpec& spec() const { return spec_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

  MultipartiteState density() const;

 private:
  SubsystemSpec spec_;
  ComplexVector amplitudes_;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column k belongs to values[k]
};

// Eigenvector phases are fixed so the largest-magnitude component of each
// column is real and positive.
EigenDecomposition hermitian_eigendecomposition(const ComplexMatrix& m);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

MultipartiteState tensor_product(const MultipartiteState& a,
                                 const MultipartiteState& b);
MultipartiteState partial_trace(const MultipartiteState& s, const Labels& discard);
// Marginal on `keep`, in the state's own label order.
MultipartiteState marginal(const MultipartiteState& s, const Labels& keep);
MultipartiteState permute_subsystems(const MultipartiteState& s,
                                     const Labels& new_order);

// |Psi> = sum_i sqrt(l_i) |e_i>|i>_ref with l descending.
PureState purify(const MultipartiteState& rho, const std::string& ref_label);

// sum_k (K_k x I) rho (K_k x I)^dagger with K_k acting on `target`, whose
// dimension becomes `output_dim`.
MultipartiteState apply_local_kraus(const MultipartiteState& s,
                                    const std::string& target,
                                    std::span<const ComplexMatrix> kraus,
                                    std::size_t output_dim);

// Pure-state register manipulation.
PureState permute(const PureState& psi, const Labels& new_order);
// Applies `op` to the listed registers (taken in the listed order). The
// result carries `outputs` first, then the untouched registers in their
// previous order.
PureState apply_local_operator(const PureState& psi, const Labels& targets,
                               const ComplexMatrix& op,
                               const std::vector<Subsystem>& outputs);
// Appends a register prepared in |0>.
PureState append_register(const PureState& psi, Subsystem reg);
MultipartiteState reduced_density(const PureState& psi, const Labels& keep);

// Full matrix of `op` acting on `targets` (in the listed order) and the
// identity on every other subsystem of `spec`.
ComplexMatrix embed_operator(const SubsystemSpec& spec, const Labels& targets,
                             const ComplexMatrix& op);

// For each composite index of the spec reordered as `order` (positions into
// spec), the composite index in the original layout.
std::vector<std::size_t> reorder_index_map(const SubsystemSpec& spec,
                                           const std::vector<std::size_t>& order);

}  // namespace qfc
