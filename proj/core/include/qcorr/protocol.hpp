#pragma once

#include <variant>

#include "qcorr/measures.hpp"
#include "qcorr/random.hpp"

namespace qcorr {

// ----------------------------------------------------------------------
// Verification records and the direction algebra.
//
// An inequality lhs <= rhs is certified only when the evaluated directions
// logically entail it: the lhs estimate may not underestimate (exact or
// upper) and the rhs estimate may not overestimate (exact or lower). A
// numeric upper bound appearing on the right supports certification only
// when the slack exceeds its reported optimizer error estimate; otherwise
// the record is at best "numerically supported". Violations are certified
// under the mirrored conditions.

enum class Relation { LessEqual, Equal };

struct VerificationRecord {
  std::string name;
  BoundReport lhs;
  BoundReport rhs;
  Relation relation = Relation::LessEqual;
  double tolerance = 1e-9;
  double slack = 0.0;  // rhs.value - lhs.value
  bool sound = false;  // the observed outcome (pass or violation) is certified
  bool pass = false;   // certified to hold; pass implies sound
  std::string certificate_kind;

  /// Holds numerically, independent of certification.
  bool supported() const {
    return relation == Relation::Equal ? std::abs(slack) <= tolerance : slack >= -tolerance;
  }
  /// Certified violation: sound record that does not pass.
  bool certified_violation() const { return sound && !pass; }
};

VerificationRecord make_record(std::string name, BoundReport lhs, BoundReport rhs,
                               Relation relation, double tolerance,
                               std::string certificate_kind = "");

/// Sum of bounds; directions compose when they do not conflict.
BoundReport add_bounds(const BoundReport& a, const BoundReport& b);

// ----------------------------------------------------------------------
// Distribution scenario: encode on AC, transfer C, optionally decode on BC.

/// Computational-basis dephasing used as a classical-communication step.
struct DephasingOp {
  std::string label;
};

using Encoding = std::variant<UnitaryOp, DephasingOp>;

DensityMatrix apply_encoding(const DensityMatrix& rho, const Encoding& op);

enum class Stage { Initial, Encoded, Decoded };

/// Separability evidence attached to one protocol stage and cut, either an
/// explicit product-state decomposition or a closed-form criterion.
struct StageCertificate {
  Stage stage;
  CutSpec cut;
  CertificateKind kind = CertificateKind::SeparableEnsembleCert;
  std::optional<SeparableEnsemble> ensemble;
};

struct ScenarioState {
  DensityMatrix initial;  // state of A, B, C before the transfer
  Encoding encoding;      // acts on A and C
  DensityMatrix encoded;
  std::optional<Encoding> decoding;  // acts on B and C
  std::optional<DensityMatrix> decoded;
  std::vector<StageCertificate> certificates;

  const DensityMatrix& stage_state(Stage stage) const;
  std::optional<StageCertificate> certificate(Stage stage, const CutSpec& cut) const;
};

ScenarioState run_scenario(DensityMatrix alpha, Encoding encoding,
                           std::optional<Encoding> decoding = {});

/// E_{A:CB} of the encoded state, exploiting a unitary decoding (invariant)
/// or reporting a post-selection lower bound for dephasing decodings.
BoundReport scenario_final_entanglement(const ScenarioState& s, const OptimizerOpts& opts);

/// The three separability conditions of distribution via an unentangled
/// carrier: no initial remote entanglement, separable carrier after
/// encoding, entanglement established across A:BC.
std::array<VerificationRecord, 3> check_distribution_conditions(const ScenarioState& s,
                                                                const OptimizerOpts& opts = {});

// ----------------------------------------------------------------------
// Entanglement localization.

struct LocalizationResult {
  UnitaryOp localizing_unitary;  // on B and C
  double outcome_probability;    // of the post-selected outcome 0 on C
  DensityMatrix conditional_ab;
  PptVerdict verdict;  // on A:B of the conditional state
};

/// Constructive localization: rotate the negative partial-transpose witness
/// onto B, measure C in the computational basis and post-select outcome 0.
/// Requires d_B >= d_A and an NPT A:BC cut.
LocalizationResult localize(const DensityMatrix& beta);

// ----------------------------------------------------------------------
// Inequality verifiers.

VerificationRecord verify_theorem1(const DensityMatrix& rho, const OptimizerOpts& opts = {},
                                   const std::vector<SeparableEnsemble>& known = {});

VerificationRecord verify_eq2(const ScenarioState& s, const OptimizerOpts& opts = {});

/// Main bound plus, when the carrier is separable after encoding, the
/// corollary record bounding the final entanglement by the receiver-side
/// discord of the initial state.
std::vector<VerificationRecord> verify_eq6(const ScenarioState& s, const OptimizerOpts& opts = {});

/// Purification identity: entanglement difference across the transfer equals
/// the negated conditional entropy of the sender pair.
VerificationRecord verify_eq4_pure(const DensityMatrix& rho_ac, const OptimizerOpts& opts = {});

/// Measurement-decomposition bound together with the flag-equality record on
/// the dephased state.
std::vector<VerificationRecord> verify_lemma1(const DensityMatrix& rho,
                                              const OptimizerOpts& opts = {},
                                              const std::vector<SeparableEnsemble>& known = {});

/// Entanglement-gain ceiling for a separable carrier.
VerificationRecord verify_theorem4(const ScenarioState& s, const OptimizerOpts& opts = {});

VerificationRecord verify_minfo_chain(const DensityMatrix& rho);

// ----------------------------------------------------------------------
// Randomized no-counterexample search: classical-on-A initial states with a
// pure uncorrelated carrier and unitary encodings should never yield a
// separable carrier together with remote entanglement.

struct Theorem3Candidate {
  int trial;
  double carrier_min_eigenvalue;  // C:AB partial transpose
  double remote_min_eigenvalue;   // A:BC partial transpose
};

struct Theorem3Report {
  int trials = 0;
  std::vector<Theorem3Candidate> candidates;  // expected empty
};

Theorem3Report theorem3_search(int trials, std::uint64_t seed, bool classical_b = false);

}  // namespace qcorr
