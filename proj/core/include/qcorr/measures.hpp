#pragma once

#include <cstdint>
#include <optional>

#include "qcorr/entropy.hpp"
#include "qcorr/separability.hpp"
#include "qcorr/state.hpp"

namespace qcorr {

/// Whether a reported number is the quantity itself, can only overestimate
/// it, or can only underestimate it. Inequality verifiers must consume these
/// tags: a numeric minimization yields one-sided bounds only.
enum class Direction { Exact, Upper, Lower };

const char* to_string(Direction d);

enum class CertificateKind {
  None,
  SeparableEnsembleCert,  // explicit mixture of product states
  FlagDecomposition,      // orthogonal pure flags on one subsystem
  PureClosedForm,         // entropy of the reduced state
  PptSeparable,           // PPT on a 2x2 or 2x3 cut
  PptWitness,             // negative partial-transpose eigenvector
  VtThreshold,            // noise-admixture critical weight
  MeasurementBasisCert,   // optimal projective measurement
};

const char* to_string(CertificateKind k);

/// Complete rank-1 projective measurement of one subsystem, stored as the
/// orthonormal basis vectors.
class MeasurementBasis {
public:
  MeasurementBasis(std::string subsystem, Matrix basis_vectors);

  /// Qubit basis from Bloch angles theta in [0, pi/2], phi in [0, 2 pi).
  static MeasurementBasis from_angles(const std::string& subsystem, double theta, double phi);

  const std::string& subsystem() const { return subsystem_; }
  int outcome_count() const { return static_cast<int>(basis_.cols()); }
  Vector vector(int j) const { return basis_.col(j); }
  const Matrix& vectors() const { return basis_; }

private:
  std::string subsystem_;
  Matrix basis_;  // orthonormal columns
};

/// Convex mixture of product states across one cut.
struct SeparableEnsemble {
  CutSpec cut;
  std::vector<double> weights;
  std::vector<std::pair<PureState, PureState>> components;  // (left, right)

  DensityMatrix assemble(const std::vector<std::string>& label_order) const;
};

/// Fully product ensemble (one pure factor per subsystem); certifies
/// separability across every cut.
struct ProductEnsemble {
  std::vector<std::string> labels;
  std::vector<double> weights;
  std::vector<std::vector<PureState>> factors;  // factors[i][k] on labels[k]

  DensityMatrix assemble() const;
  SeparableEnsemble group(const CutSpec& cut) const;
};

/// A measure estimate annotated with its direction and, when available, a
/// certificate that reproduces the value on re-evaluation.
struct BoundReport {
  double value = 0.0;
  Direction direction = Direction::Exact;
  /// Optimizer resolution estimate for numeric bounds (observed refinement
  /// improvement); zero for exact values.
  double error_hint = 0.0;
  CertificateKind certificate_kind = CertificateKind::None;
  std::optional<MeasurementBasis> basis_certificate;
  std::optional<SeparableEnsemble> ensemble_certificate;
  std::optional<Vector> witness_certificate;

  static BoundReport exact(double value, CertificateKind kind = CertificateKind::None) {
    return BoundReport{value, Direction::Exact, 0.0, kind, {}, {}, {}};
  }
};

struct OptimizerOpts {
  std::uint64_t seed = 42;
  int restarts = 32;      // ensemble optimizer restarts
  int grid = 64;          // measurement-angle grid resolution per axis
  double tol = 1e-9;      // simplex contraction tolerance
  int max_iterations = 500;
  int sweeps = 3;         // block-coordinate passes per ensemble restart

  /// Reduced budget for recursive evaluations (flag conditionals).
  OptimizerOpts child() const {
    OptimizerOpts o = *this;
    o.restarts = std::max(2, restarts / 8);
    return o;
  }
};

/// Complete projective measurement channel: sum_j P_j rho P_j.
DensityMatrix dephase(const DensityMatrix& rho, const MeasurementBasis& basis);

/// Computational-basis dephasing of one subsystem.
DensityMatrix dephase_computational(const DensityMatrix& rho, const std::string& label);

/// Relative entropy of discord: minimal entropy increase over complete
/// rank-1 projective measurements of `measured`. Returns an upper bound with
/// the best basis as certificate, or an exact zero when the state is
/// detected quantum-classical on `measured`.
BoundReport discord(const DensityMatrix& rho, const std::string& measured,
                    const OptimizerOpts& opts = {});

/// Relative entropy of entanglement across `cut`. Dispatches closed forms
/// (known separable decomposition, conclusive PPT, pure states, flag states)
/// before falling back to a numeric upper bound over separable ensembles.
BoundReport ree(const DensityMatrix& rho, const CutSpec& cut, const OptimizerOpts& opts = {},
                const std::optional<SeparableEnsemble>& known_decomposition = {});

/// Flag-rule evaluation: for rho block-diagonal with orthogonal pure flags
/// on `flag`, the entanglement across `cut` is the weighted sum over the
/// conditional states. `basis` overrides flag-basis detection.
BoundReport ree_flag_eval(const DensityMatrix& rho, const std::string& flag, const CutSpec& cut,
                          const OptimizerOpts& opts = {},
                          const std::optional<MeasurementBasis>& basis = {});

/// Numeric separable-ensemble upper bound, bypassing the closed-form
/// dispatch (used for cross-route consistency checks).
BoundReport ree_numeric(const DensityMatrix& rho, const CutSpec& cut,
                        const OptimizerOpts& opts = {});

/// Discord ceiling for separable states: (1 - 1/(d_x d_y)^2) log2 d_y.
double discord_sep_bound(int d_x, int d_y);

/// Detect the flag/quantum-classical basis of `label`: a basis in which the
/// state is invariant under dephasing. Tries the eigenbasis of the marginal
/// (when nondegenerate) and the computational basis.
std::optional<MeasurementBasis> detect_flag_basis(const DensityMatrix& rho,
                                                  const std::string& label);

}  // namespace qcorr
