#pragma once

#include "qcorr/protocol.hpp"

namespace qcorr {

// Exact constructors for the worked distribution protocols and their
// end-to-end reproduction. All states live on qubits labeled A (sender),
// B (receiver) and C (carrier), big-endian in that order.

PureState bell_phi_plus(const std::string& a = "A", const std::string& b = "B");
PureState ghz_state();

/// Three-qubit initial state of the Cubitt et al. protocol: classically
/// correlated with the carrier, fully separable, built from exact sixths.
DensityMatrix cubitt_state();

/// Explicit fully-product decomposition of cubitt_state() (six components
/// using fourth-root-of-unity phases); certifies separability on every cut.
ProductEnsemble cubitt_ensemble();

/// The Cubitt scenario: CNOT on AC, transfer, CNOT on BC, with explicit
/// separability certificates attached at every stage.
ScenarioState cubitt_scenario();

struct ExampleReport {
  ScenarioState scenario;
  std::vector<VerificationRecord> records;
};

/// Full reproduction of the original protocol: distribution conditions,
/// closed-form final state, localization, bound tightness.
ExampleReport cubitt_run(const OptimizerOpts& opts = {});

// ----------------------------------------------------------------------
// Distribution with nonzero initial entanglement: a mixture of the Cubitt
// state with an entangled C-flagged state, pushed through the same circuit.

struct Example2States {
  DensityMatrix alpha;
  DensityMatrix lambda_ent;
};

Example2States example2_states(double p);

/// Closed form of the final state: phi+ flagged on C=0 with weight 1/3,
/// a separable remainder flagged on C=1.
DensityMatrix example2_gamma(double p);

ScenarioState example2_scenario(double p);

ExampleReport example2_run(double p, const OptimizerOpts& opts = {});

// ----------------------------------------------------------------------
// Distribution with an initially uncorrelated maximally mixed carrier.

struct Example3Params {
  double u = 0.0;
  double s = 0.0;
  double p = 1.0;  // 1 / (1 + 4 sqrt(s(1-s)))

  static double s_lower(double u);  // 4u(1-u) / (1-4u^2), the violation maximizer
  static double s_upper(double u);  // (4u-1) / (4u^2-1)
  /// s at the violation maximizer; errors when the admissible window is empty
  /// (u above 1 - sqrt(3)/2).
  static Example3Params from_u(double u);
  static Example3Params make(double u, double s);
};

/// The two-qubit encoding unitary on A and C (A index major).
UnitaryOp example3_encoding(double u);

ScenarioState example3_scenario(const Example3Params& params);

ExampleReport example3_run(const Example3Params& params, const OptimizerOpts& opts = {});

/// One sweep row: separability thresholds and partial-transpose minima at
/// the violation-maximizing s for the given u.
struct Example3ScanRow {
  double u = 0.0, s = 0.0, p = 1.0;
  bool window_nonempty = false;
  bool thr_ab = false, thr_beta0 = false, thr_beta1 = false;
  double min_eig_a_bc = 0.0, min_eig_b_ac = 0.0, min_eig_ab_c = 0.0;
};

Example3ScanRow example3_scan(double u);

// ----------------------------------------------------------------------
// Noise-admixture construction from an admissible tripartite pure state:
// encodes a remote pure state onto the AC pair so the encoded state is the
// critical noise admixture, separable on both carrier cuts and entangled
// across A:BC.

ExampleReport example1_build(const PureState& psi_abc, const OptimizerOpts& opts = {});

}  // namespace qcorr
