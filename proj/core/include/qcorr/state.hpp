#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Validation tolerances for state objects. Inputs violating them by no more
// than kRepairTol may be projected back onto the valid set when repair is
// requested (optimizer intermediates accumulate rounding).
inline constexpr double kStateTol = 1e-9;
inline constexpr double kRepairTol = 1e-7;

enum class Repair { None, Allow };

/// Raised when a request exceeds the library's size envelope (dense
/// representations cap out at 16x16, four qubits).
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bipartition of subsystem labels. Both sides keep the label order of the
/// state they refer to.
struct CutSpec {
  std::vector<std::string> left;
  std::vector<std::string> right;
};

/// Mixed-radix index helper. Basis convention is big-endian over label
/// order: the first label is the most significant digit.
class IndexMap {
public:
  explicit IndexMap(const std::vector<int>& dims);

  int total() const { return total_; }
  int stride(int k) const { return strides_[k]; }
  void decode(int index, int* digits) const;
  int encode(const int* digits) const;

private:
  std::vector<int> dims_;
  std::vector<int> strides_;
  int total_ = 1;
};

class DensityMatrix;

/// Normalized pure state over labeled subsystems.
class PureState {
public:
  PureState(std::vector<std::string> labels, std::vector<int> dims, Vector amplitudes,
            Repair repair = Repair::None);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& dims() const { return dims_; }
  const Vector& amplitudes() const { return amps_; }
  int dim() const { return static_cast<int>(amps_.size()); }

  DensityMatrix projector() const;

private:
  std::vector<std::string> labels_;
  std::vector<int> dims_;
  Vector amps_;
};

/// Labeled multipartite mixed state. Hermitian, unit trace and positive
/// semidefinite within kStateTol; the universal value type of the library.
class DensityMatrix {
public:
  DensityMatrix(std::vector<std::string> labels, std::vector<int> dims, Matrix entries,
                Repair repair = Repair::None);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& dims() const { return dims_; }
  const Matrix& entries() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  int subsystems() const { return static_cast<int>(labels_.size()); }

  bool has_label(const std::string& label) const;
  int index_of(const std::string& label) const;  // throws on unknown label
  int dim_of(const std::string& label) const;

private:
  std::vector<std::string> labels_;
  std::vector<int> dims_;
  Matrix m_;
};

/// Unitary acting on a labeled subset of subsystems. U U^dag = 1 within
/// kStateTol.
struct UnitaryOp {
  UnitaryOp(std::vector<std::string> labels, std::vector<int> dims, Matrix entries);

  std::vector<std::string> labels;
  std::vector<int> dims;
  Matrix entries;
};

struct EighResult {
  Eigen::VectorXd eigenvalues;  // ascending
  Matrix eigenvectors;          // orthonormal columns
};

/// Hermitian eigendecomposition. The input is symmetrized before the solve;
/// deviations from Hermiticity beyond `hermiticity_tol` are an error.
EighResult eigh(const Matrix& m, double hermiticity_tol = kStateTol);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
PureState tensor(const PureState& a, const PureState& b);

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);

/// Partial transposition on `side`. The result is Hermitian with unit trace
/// but in general not positive semidefinite, so it is returned as a raw
/// matrix. The raw overload accepts such intermediates.
Matrix partial_transpose(const DensityMatrix& rho, const std::vector<std::string>& side);
Matrix partial_transpose(const Matrix& m, const std::vector<std::string>& labels,
                         const std::vector<int>& dims, const std::vector<std::string>& side);

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryOp& u);
PureState apply_unitary(const PureState& psi, const UnitaryOp& u);

DensityMatrix permute_subsystems(const DensityMatrix& rho, const std::vector<std::string>& new_order);
PureState permute_subsystems(const PureState& psi, const std::vector<std::string>& new_order);

/// Embed an operator acting on `op_labels` into the full space of
/// `state_labels` (identity elsewhere), respecting label order.
Matrix embed_operator(const Matrix& op, const std::vector<std::string>& op_labels,
                      const std::vector<int>& op_dims, const std::vector<std::string>& state_labels,
                      const std::vector<int>& state_dims);

// Cut helpers -----------------------------------------------------------

/// Build a cut of `rho` from the set of left labels; the right side is the
/// complement. Label order on both sides follows the state.
CutSpec make_cut(const DensityMatrix& rho, const std::vector<std::string>& left);
CutSpec make_cut(const PureState& psi, const std::vector<std::string>& left);
void validate_cut(const std::vector<std::string>& state_labels, const CutSpec& cut);
int side_dim(const DensityMatrix& rho, const std::vector<std::string>& side);
std::string cut_to_string(const CutSpec& cut);

/// Projective measurement of one subsystem in the computational basis:
/// outcome probability and the conditional state of the remaining labels.
struct MeasurementOutcome {
  double probability;
  std::optional<DensityMatrix> conditional;  // absent when probability ~ 0
};
std::vector<MeasurementOutcome> measure_computational(const DensityMatrix& rho,
                                                      const std::string& label);

/// Contract one subsystem against a fixed vector: returns the outcome
/// probability and (if nonzero) the conditional state on the other labels.
MeasurementOutcome condition_on(const DensityMatrix& rho, const std::string& label,
                                const Vector& outcome_vector);

double max_abs_diff(const Matrix& a, const Matrix& b);
double fidelity_with_pure(const DensityMatrix& rho, const PureState& psi);

/// Complete a partially specified set of orthonormal columns to a full
/// unitary by Gram-Schmidt over the computational basis (deterministic
/// ordering, independence threshold 1e-10).
Matrix complete_orthonormal(int dim, const std::vector<std::pair<int, Vector>>& fixed_columns);

UnitaryOp cnot(const std::string& control, const std::string& target);
UnitaryOp identity_op(const std::vector<std::string>& labels, const std::vector<int>& dims);

PureState computational_basis_state(const std::vector<std::string>& labels,
                                    const std::vector<int>& dims, const std::vector<int>& digits);
DensityMatrix maximally_mixed(const std::vector<std::string>& labels, const std::vector<int>& dims);

}  // namespace qcorr
