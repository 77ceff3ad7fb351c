#include "qcorr/examples.hpp"

#include <cmath>

namespace qcorr {
namespace {

const std::vector<std::string> kABC = {"A", "B", "C"};
const std::vector<int> kQubits3 = {2, 2, 2};

Complex fourth_root(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

PureState qubit(const std::string& label, Complex a0, Complex a1) {
  Vector v(2);
  v << a0, a1;
  return PureState({label}, {2}, std::move(v), Repair::Allow);
}

PureState pair_state(const std::string& l0, const std::string& l1, Complex a00, Complex a01,
                     Complex a10, Complex a11) {
  Vector v(4);
  v << a00, a01, a10, a11;
  return PureState({l0, l1}, {2, 2}, std::move(v), Repair::Allow);
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void verify_certificate(const StageCertificate& cert, const DensityMatrix& state) {
  if (!cert.ensemble) return;
  if (max_abs_diff(cert.ensemble->assemble(state.labels()).entries(), state.entries()) > 1e-9)
    throw std::logic_error("stage certificate does not reproduce the state");
}

VerificationRecord ppt_floor_record(const std::string& name, const DensityMatrix& rho,
                                    const CutSpec& cut) {
  const PptVerdict verdict = ppt_check(rho, cut);
  return make_record(name, BoundReport::exact(-verdict.min_eigenvalue),
                     BoundReport::exact(-kNptThreshold), Relation::LessEqual, 1e-12,
                     verdict.is_npt ? "ppt-witness" : "ppt-necessary");
}

VerificationRecord npt_record(const std::string& name, const DensityMatrix& rho,
                              const CutSpec& cut) {
  const PptVerdict verdict = ppt_check(rho, cut);
  return make_record(name, BoundReport::exact(-kNptThreshold),
                     BoundReport::exact(-verdict.min_eigenvalue), Relation::LessEqual, 1e-12,
                     "ppt-witness");
}

}  // namespace

PureState bell_phi_plus(const std::string& a, const std::string& b) {
  return pair_state(a, b, kInvSqrt2, 0, 0, kInvSqrt2);
}

PureState ghz_state() {
  Vector v = Vector::Zero(8);
  v(0) = kInvSqrt2;
  v(7) = kInvSqrt2;
  return PureState(kABC, kQubits3, std::move(v), Repair::Allow);
}

DensityMatrix cubitt_state() {
  Matrix m = Matrix::Zero(8, 8);
  // (1/3 phi+ projector + 1/6 |01><01| + 1/6 |10><10|) (x) |0><0|
  m(0, 0) = m(0, 6) = m(6, 0) = m(6, 6) = 1.0 / 6.0;
  m(2, 2) = m(4, 4) = 1.0 / 6.0;
  // (1/6 |00><00| + 1/6 |11><11|) (x) |1><1|
  m(1, 1) = m(7, 7) = 1.0 / 6.0;
  return DensityMatrix(kABC, kQubits3, std::move(m));
}

ProductEnsemble cubitt_ensemble() {
  ProductEnsemble ens;
  ens.labels = kABC;
  for (int k = 0; k < 4; ++k) {
    ens.weights.push_back(1.0 / 6.0);
    ens.factors.push_back({qubit("A", kInvSqrt2, kInvSqrt2 * fourth_root(k)),
                           qubit("B", kInvSqrt2, kInvSqrt2 * fourth_root(-k)),
                           qubit("C", 1, 0)});
  }
  ens.weights.push_back(1.0 / 6.0);
  ens.factors.push_back({qubit("A", 1, 0), qubit("B", 1, 0), qubit("C", 0, 1)});
  ens.weights.push_back(1.0 / 6.0);
  ens.factors.push_back({qubit("A", 0, 1), qubit("B", 0, 1), qubit("C", 0, 1)});
  return ens;
}

namespace {

// AC:B decomposition of the encoded Cubitt state: the CNOT maps each product
// component's A,C factors onto an entangled AC pair, leaving B untouched.
SeparableEnsemble cubitt_beta_sender_ensemble() {
  SeparableEnsemble ens;
  ens.cut = CutSpec{{"A", "C"}, {"B"}};
  for (int k = 0; k < 4; ++k) {
    ens.weights.push_back(1.0 / 6.0);
    ens.components.emplace_back(pair_state("A", "C", kInvSqrt2, 0, 0, kInvSqrt2 * fourth_root(k)),
                                qubit("B", kInvSqrt2, kInvSqrt2 * fourth_root(-k)));
  }
  ens.weights.push_back(1.0 / 6.0);
  ens.components.emplace_back(pair_state("A", "C", 0, 1, 0, 0), qubit("B", 1, 0));
  ens.weights.push_back(1.0 / 6.0);
  ens.components.emplace_back(pair_state("A", "C", 0, 0, 1, 0), qubit("B", 0, 1));
  return ens;
}

// Carrier-side decompositions built on fourth-root phase pairs between the
// {|00>,|11>} AB plane and C.
void push_phase_pair_components(SeparableEnsemble& ens, double weight) {
  for (int k = 0; k < 4; ++k) {
    ens.weights.push_back(weight);
    ens.components.emplace_back(pair_state("A", "B", kInvSqrt2, 0, 0, kInvSqrt2 * fourth_root(k)),
                                qubit("C", kInvSqrt2, kInvSqrt2 * fourth_root(-k)));
  }
}

// AB:C decomposition of the encoded Cubitt state.
SeparableEnsemble cubitt_beta_carrier_ensemble(double p) {
  SeparableEnsemble ens;
  ens.cut = CutSpec{{"A", "B"}, {"C"}};
  push_phase_pair_components(ens, 1.0 / 6.0);  // covers the GHZ block plus 001/110 halves
  // remainder of the p-weighted branch
  ens.weights.push_back(p / 6.0);
  ens.components.emplace_back(pair_state("A", "B", 0, 1, 0, 0), qubit("C", 1, 0));  // |010>
  ens.weights.push_back(p / 6.0);
  ens.components.emplace_back(pair_state("A", "B", 0, 0, 1, 0), qubit("C", 0, 1));  // |101>
  // remainder of the entangled-admixture branch
  ens.weights.push_back((1.0 - p) / 6.0);
  ens.components.emplace_back(pair_state("A", "B", 1, 0, 0, 0), qubit("C", 0, 1));  // |001>
  ens.weights.push_back((1.0 - p) / 6.0);
  ens.components.emplace_back(pair_state("A", "B", 0, 0, 0, 1), qubit("C", 1, 0));  // |110>
  return ens;
}

// AB:C decomposition of the final state: phi+ on the C=0 flag, the diagonal
// separable remainder on the C=1 flag.
SeparableEnsemble gamma_carrier_ensemble(double p) {
  SeparableEnsemble ens;
  ens.cut = CutSpec{{"A", "B"}, {"C"}};
  ens.weights.push_back(1.0 / 3.0);
  ens.components.emplace_back(bell_phi_plus(), qubit("C", 1, 0));
  const double diag[4] = {p / 4.0 + (1.0 - p) / 2.0, p / 4.0, p / 4.0,
                          p / 4.0 + (1.0 - p) / 2.0};
  for (int ab = 0; ab < 4; ++ab) {
    if (diag[ab] <= 0.0) continue;
    Vector v = Vector::Zero(4);
    v(ab) = 1.0;
    ens.weights.push_back(2.0 / 3.0 * diag[ab]);
    ens.components.emplace_back(PureState({"A", "B"}, {2, 2}, std::move(v)), qubit("C", 0, 1));
  }
  return ens;
}

// C:AB decomposition of the initial mixture for the nonzero-initial-
// entanglement protocol.
SeparableEnsemble example2_alpha_carrier_ensemble(double p) {
  const ProductEnsemble base = cubitt_ensemble();
  SeparableEnsemble ens = base.group(CutSpec{{"A", "B"}, {"C"}});
  for (double& w : ens.weights) w *= p;
  ens.weights.push_back((1.0 - p) / 3.0);
  ens.components.emplace_back(bell_phi_plus(), qubit("C", 1, 0));
  ens.weights.push_back((1.0 - p) / 3.0);
  ens.components.emplace_back(pair_state("A", "B", 1, 0, 0, 0), qubit("C", 0, 1));
  ens.weights.push_back((1.0 - p) / 3.0);
  ens.components.emplace_back(pair_state("A", "B", 0, 0, 0, 1), qubit("C", 0, 1));
  return ens;
}

}  // namespace

ScenarioState cubitt_scenario() {
  ScenarioState s = run_scenario(cubitt_state(), cnot("A", "C"), Encoding(cnot("B", "C")));
  const ProductEnsemble base = cubitt_ensemble();
  auto attach = [&](Stage stage, SeparableEnsemble ens) {
    StageCertificate cert{stage, ens.cut, CertificateKind::SeparableEnsembleCert, std::move(ens)};
    verify_certificate(cert, s.stage_state(stage));
    s.certificates.push_back(std::move(cert));
  };
  attach(Stage::Initial, base.group(CutSpec{{"B"}, {"A", "C"}}));
  attach(Stage::Initial, base.group(CutSpec{{"A", "B"}, {"C"}}));
  attach(Stage::Encoded, cubitt_beta_sender_ensemble());
  attach(Stage::Encoded, cubitt_beta_carrier_ensemble(1.0));
  attach(Stage::Decoded, gamma_carrier_ensemble(1.0));
  return s;
}

Example2States example2_states(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("example2: p must lie in [0, 1]");
  Matrix ent = Matrix::Zero(8, 8);
  ent(0, 0) = ent(0, 6) = ent(6, 0) = ent(6, 6) = 1.0 / 6.0;
  ent(1, 1) = ent(7, 7) = 1.0 / 3.0;
  DensityMatrix lambda_ent(kABC, kQubits3, std::move(ent));
  Matrix alpha = p * cubitt_state().entries() + (1.0 - p) * lambda_ent.entries();
  return Example2States{DensityMatrix(kABC, kQubits3, std::move(alpha)), std::move(lambda_ent)};
}

DensityMatrix example2_gamma(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("example2: p must lie in [0, 1]");
  Matrix m = Matrix::Zero(8, 8);
  // 1/3 phi+ projector on the C=0 flag
  m(0, 0) = m(0, 6) = m(6, 0) = m(6, 6) = 1.0 / 6.0;
  // 2/3 (p 1/4 + (1-p)(|00><00| + |11><11|)/2) on the C=1 flag
  const double bulk = p / 6.0;
  const double spike = (1.0 - p) / 3.0;
  m(1, 1) = bulk + spike;  // |001>
  m(3, 3) = bulk;          // |011>
  m(5, 5) = bulk;          // |101>
  m(7, 7) = bulk + spike;  // |111>
  return DensityMatrix(kABC, kQubits3, std::move(m));
}

ScenarioState example2_scenario(double p) {
  Example2States states = example2_states(p);
  ScenarioState s = run_scenario(states.alpha, cnot("A", "C"), Encoding(cnot("B", "C")));
  auto attach = [&](Stage stage, SeparableEnsemble ens) {
    StageCertificate cert{stage, ens.cut, CertificateKind::SeparableEnsembleCert, std::move(ens)};
    verify_certificate(cert, s.stage_state(stage));
    s.certificates.push_back(std::move(cert));
  };
  attach(Stage::Initial, example2_alpha_carrier_ensemble(p));
  attach(Stage::Encoded, cubitt_beta_carrier_ensemble(p));
  attach(Stage::Decoded, gamma_carrier_ensemble(p));
  return s;
}

namespace {

VerificationRecord final_entanglement_record(const ScenarioState& s, const OptimizerOpts& opts) {
  const BoundReport flag = ree(*s.decoded, make_cut(*s.decoded, {"A"}), opts);
  return make_record("final-e-flag", flag, BoundReport::exact(1.0 / 3.0), Relation::Equal, 1e-9,
                     to_string(flag.certificate_kind));
}

void append_measurement_records(std::vector<VerificationRecord>& records, const ScenarioState& s) {
  const auto outcomes = measure_computational(*s.decoded, "C");
  records.push_back(make_record("measurement-outcome0-probability",
                                BoundReport::exact(outcomes[0].probability),
                                BoundReport::exact(1.0 / 3.0), Relation::Equal, 1e-9, "entropic"));
  const double fidelity =
      outcomes[0].conditional ? fidelity_with_pure(*outcomes[0].conditional, bell_phi_plus()) : 0.0;
  records.push_back(make_record("measurement-conditional-phi+-fidelity",
                                BoundReport::exact(1.0 - 1e-9), BoundReport::exact(fidelity),
                                Relation::LessEqual, 1e-12, "pure-closed-form"));
}

void append_carrier_records(std::vector<VerificationRecord>& records, const ScenarioState& s) {
  const std::pair<Stage, const char*> stages[] = {
      {Stage::Initial, "alpha"}, {Stage::Encoded, "beta"}, {Stage::Decoded, "gamma"}};
  for (const auto& [stage, tag] : stages) {
    if (stage == Stage::Decoded && !s.decoded) continue;
    const DensityMatrix& state = s.stage_state(stage);
    const CutSpec cut = make_cut(state, {"C"});
    records.push_back(
        ppt_floor_record(std::string("carrier-ppt-min-eig-") + tag, state, cut));
    if (auto cert = s.certificate(stage, cut)) {
      BoundReport lhs = BoundReport::exact(0.0, cert->kind);
      lhs.ensemble_certificate = cert->ensemble;
      records.push_back(make_record(std::string("carrier-separable-") + tag, lhs,
                                    BoundReport::exact(0.0), Relation::Equal, 1e-9,
                                    to_string(cert->kind)));
    }
  }
}

}  // namespace

ExampleReport cubitt_run(const OptimizerOpts& opts) {
  ExampleReport report{cubitt_scenario(), {}};
  ScenarioState& s = report.scenario;

  auto conditions = check_distribution_conditions(s, opts);
  for (auto& rec : conditions) report.records.push_back(std::move(rec));

  report.records.push_back(make_record(
      "gamma-closed-form", BoundReport::exact(max_abs_diff(s.decoded->entries(),
                                                           example2_gamma(1.0).entries())),
      BoundReport::exact(1e-12), Relation::LessEqual, 0.0, "entropic"));
  report.records.push_back(final_entanglement_record(s, opts));
  append_measurement_records(report.records, s);
  append_carrier_records(report.records, s);

  // bound tightness at the encoded state: the two numeric upper bounds agree
  const BoundReport d = discord(s.encoded, "C", opts);
  const BoundReport e = ree_numeric(s.encoded, make_cut(s.encoded, {"A"}), opts);
  report.records.push_back(
      make_record("theorem1-tightness", d, e, Relation::Equal, 0.02, "numeric-agreement"));

  report.records.push_back(
      verify_theorem1(s.encoded, opts, {cubitt_beta_sender_ensemble()}));
  report.records.push_back(verify_eq2(s, opts));
  for (auto& rec : verify_eq6(s, opts)) report.records.push_back(std::move(rec));
  report.records.push_back(verify_theorem4(s, opts));

  const LocalizationResult loc = localize(s.encoded);
  report.records.push_back(make_record("localization-npt", BoundReport::exact(-kNptThreshold),
                                       BoundReport::exact(-loc.verdict.min_eigenvalue),
                                       Relation::LessEqual, 1e-12, "ppt-witness"));
  report.records.push_back(make_record("localization-probability", BoundReport::exact(1e-9),
                                       BoundReport::exact(loc.outcome_probability),
                                       Relation::LessEqual, 1e-12, "ppt-witness"));
  return report;
}

ExampleReport example2_run(double p, const OptimizerOpts& opts) {
  ExampleReport report{example2_scenario(p), {}};
  ScenarioState& s = report.scenario;

  report.records.push_back(make_record(
      "gamma-closed-form", BoundReport::exact(max_abs_diff(s.decoded->entries(),
                                                           example2_gamma(p).entries())),
      BoundReport::exact(1e-12), Relation::LessEqual, 0.0, "entropic"));

  // at the p = 1 endpoint the initial state degenerates to the separable one
  if (p < 1.0 - 1e-12)
    report.records.push_back(
        npt_record("initial-ac-b-npt", s.initial, make_cut(s.initial, {"A", "C"})));

  // convexity plus the flag rule bound the initial entanglement by (1-p)/3
  const Example2States states = example2_states(p);
  const BoundReport ent_flag =
      ree(states.lambda_ent, make_cut(states.lambda_ent, {"A", "C"}), opts);
  BoundReport bound = ent_flag;
  bound.value *= (1.0 - p);
  report.records.push_back(make_record("initial-e-convexity-bound", bound,
                                       BoundReport::exact((1.0 - p) / 3.0), Relation::Equal, 1e-9,
                                       to_string(ent_flag.certificate_kind)));

  report.records.push_back(final_entanglement_record(s, opts));
  append_measurement_records(report.records, s);
  append_carrier_records(report.records, s);
  return report;
}

// ----------------------------------------------------------------------
// Uncorrelated-carrier protocol.

double Example3Params::s_lower(double u) { return 4.0 * u * (1.0 - u) / (1.0 - 4.0 * u * u); }
double Example3Params::s_upper(double u) { return (4.0 * u - 1.0) / (4.0 * u * u - 1.0); }

Example3Params Example3Params::make(double u, double s) {
  if (u < 0.0 || u > 1.0 || s < 0.0 || s > 1.0)
    throw std::invalid_argument("example3: u and s must lie in [0, 1]");
  Example3Params params;
  params.u = u;
  params.s = s;
  params.p = 1.0 / (1.0 + 4.0 * std::sqrt(s * (1.0 - s)));
  return params;
}

Example3Params Example3Params::from_u(double u) {
  if (u <= 0.0 || u > 1.0) throw std::invalid_argument("example3: u must lie in (0, 1]");
  const double lo = s_lower(u), hi = s_upper(u);
  if (!(lo <= hi) || lo < 0.0 || lo > 1.0)
    throw std::invalid_argument(
        "example3: admissible s-window is empty at u = " + std::to_string(u) +
        " (requires u <= 1 - sqrt(3)/2 ~ 0.134)");
  return make(u, lo);
}

UnitaryOp example3_encoding(double u) {
  if (u < 0.0 || u > 1.0) throw std::invalid_argument("example3: u must lie in [0, 1]");
  Matrix m = Matrix::Zero(4, 4);
  m(0, 2) = 1.0;
  m(1, 0) = std::sqrt(u);
  m(1, 3) = -std::sqrt(1.0 - u);
  m(2, 0) = std::sqrt(1.0 - u);
  m(2, 3) = std::sqrt(u);
  m(3, 1) = 1.0;
  return UnitaryOp({"A", "C"}, {2, 2}, std::move(m));
}

namespace {

PureState example3_pair(double s) {
  return pair_state("A", "B", std::sqrt(s), 0, 0, std::sqrt(1.0 - s));
}

}  // namespace

ScenarioState example3_scenario(const Example3Params& params) {
  const PureState psi = example3_pair(params.s);
  Matrix ab = params.p * (psi.amplitudes() * psi.amplitudes().adjoint());
  ab += Matrix::Identity(4, 4) * ((1.0 - params.p) / 4.0);
  const DensityMatrix alpha_ab({"A", "B"}, {2, 2}, std::move(ab));
  const DensityMatrix alpha = tensor(alpha_ab, maximally_mixed({"C"}, {2}));

  ScenarioState s = run_scenario(alpha, example3_encoding(params.u));

  // Noise-admixture certificates: the remote cut of the initial pair sits at
  // its critical weight, so B:AC stays separable before and after the local
  // encoding; the carrier cut is certified per mixture branch.
  const VtFamily ab_family = vt_threshold(psi, CutSpec{{"A"}, {"B"}});
  if (params.p <= ab_family.p_cr + 1e-12) {
    s.certificates.push_back(
        StageCertificate{Stage::Initial, CutSpec{{"B"}, {"A", "C"}}, CertificateKind::VtThreshold, {}});
    s.certificates.push_back(
        StageCertificate{Stage::Encoded, CutSpec{{"B"}, {"A", "C"}}, CertificateKind::VtThreshold, {}});
  }
  bool carrier_ok = true;
  for (int j = 0; j < 2; ++j) {
    const PureState branch =
        apply_unitary(tensor(psi, computational_basis_state({"C"}, {2}, {j})), example3_encoding(params.u));
    const VtFamily family = vt_threshold(branch, CutSpec{{"A", "B"}, {"C"}});
    carrier_ok = carrier_ok && params.p <= family.p_cr + 1e-12;
  }
  if (carrier_ok) {
    s.certificates.push_back(
        StageCertificate{Stage::Encoded, CutSpec{{"A", "B"}, {"C"}}, CertificateKind::VtThreshold, {}});
  }
  return s;
}

ExampleReport example3_run(const Example3Params& params, const OptimizerOpts& opts) {
  ExampleReport report{example3_scenario(params), {}};
  const ScenarioState& s = report.scenario;

  const PureState psi = example3_pair(params.s);
  const VtFamily ab_family = vt_threshold(psi, CutSpec{{"A"}, {"B"}});
  report.records.push_back(make_record("eq14-threshold-alpha-ab", BoundReport::exact(params.p),
                                       BoundReport::exact(ab_family.p_cr), Relation::LessEqual,
                                       1e-9, "vt-threshold"));
  for (int j = 0; j < 2; ++j) {
    const PureState branch = apply_unitary(tensor(psi, computational_basis_state({"C"}, {2}, {j})),
                                           example3_encoding(params.u));
    const VtFamily family = vt_threshold(branch, CutSpec{{"A", "B"}, {"C"}});
    report.records.push_back(make_record("eq14-threshold-beta" + std::to_string(j),
                                         BoundReport::exact(params.p),
                                         BoundReport::exact(family.p_cr), Relation::LessEqual,
                                         1e-9, "vt-threshold"));
  }

  const PptVerdict remote = ppt_check(s.encoded, make_cut(s.encoded, {"A"}));
  if (remote.is_npt) {
    report.records.push_back(npt_record("a-bc-npt", s.encoded, make_cut(s.encoded, {"A"})));
  } else {
    report.records.push_back(
        ppt_floor_record("a-bc-ppt-no-violation", s.encoded, make_cut(s.encoded, {"A"})));
  }
  report.records.push_back(
      ppt_floor_record("b-ac-ppt-min-eig", s.encoded, make_cut(s.encoded, {"B"})));
  append_carrier_records(report.records, s);

  if (s.certificate(Stage::Encoded, CutSpec{{"A", "B"}, {"C"}}))
    report.records.push_back(verify_theorem4(s, opts));
  return report;
}

Example3ScanRow example3_scan(double u) {
  Example3ScanRow row;
  row.u = u;
  const double lo = Example3Params::s_lower(u), hi = Example3Params::s_upper(u);
  row.window_nonempty = lo <= hi && lo >= 0.0 && lo <= 1.0;
  if (!row.window_nonempty) return row;

  const Example3Params params = Example3Params::make(u, lo);
  row.s = params.s;
  row.p = params.p;
  const ScenarioState s = example3_scenario(params);

  const PureState psi = example3_pair(params.s);
  row.thr_ab = params.p <= vt_threshold(psi, CutSpec{{"A"}, {"B"}}).p_cr + 1e-12;
  for (int j = 0; j < 2; ++j) {
    const PureState branch = apply_unitary(tensor(psi, computational_basis_state({"C"}, {2}, {j})),
                                           example3_encoding(params.u));
    const bool ok = params.p <= vt_threshold(branch, CutSpec{{"A", "B"}, {"C"}}).p_cr + 1e-12;
    if (j == 0)
      row.thr_beta0 = ok;
    else
      row.thr_beta1 = ok;
  }
  row.min_eig_a_bc = ppt_check(s.encoded, make_cut(s.encoded, {"A"})).min_eigenvalue;
  row.min_eig_b_ac = ppt_check(s.encoded, make_cut(s.encoded, {"B"})).min_eigenvalue;
  row.min_eig_ab_c = ppt_check(s.encoded, make_cut(s.encoded, {"C"})).min_eigenvalue;
  return row;
}

// ----------------------------------------------------------------------
// Admissible-state construction.

ExampleReport example1_build(const PureState& psi_abc, const OptimizerOpts& opts) {
  for (const char* l : {"A", "B", "C"})
    if (std::find(psi_abc.labels().begin(), psi_abc.labels().end(), l) == psi_abc.labels().end())
      throw std::invalid_argument("example1: state must carry labels A, B, C");
  const PureState psi = permute_subsystems(psi_abc, kABC);
  const int da = psi.dims()[0], db = psi.dims()[1], dc = psi.dims()[2];
  if (db > da) throw std::invalid_argument("example1: requires d_B <= d_A");

  const AdmissibilityReport admissible = example1_admissible(psi);
  if (!admissible.admissible)
    throw std::invalid_argument(
        "example1: state is inadmissible (remote Schmidt product does not dominate)");
  const double upsilon = admissible.critical_weight;

  // remote pure pair |phi> = sum_i b_i |i>_A |b_i>_B from the B-cut Schmidt data
  const SchmidtData sd = schmidt(psi, CutSpec{{"B"}, {"A", "C"}});
  Vector phi_amps = Vector::Zero(da * db);
  for (std::size_t i = 0; i < sd.coefficients.size(); ++i) {
    const Vector& b_vec = sd.left_vectors[i].amplitudes();
    for (int b = 0; b < db; ++b) phi_amps(static_cast<int>(i) * db + b) += sd.coefficients[i] * b_vec(b);
  }
  const PureState phi({"A", "B"}, {da, db}, std::move(phi_amps), Repair::Allow);
  const PureState phi_with_carrier = tensor(phi, computational_basis_state({"C"}, {dc}, {0}));

  const int d_tot = psi.dim();
  Matrix alpha_m = upsilon * (phi_with_carrier.amplitudes() * phi_with_carrier.amplitudes().adjoint());
  alpha_m += Matrix::Identity(d_tot, d_tot) * ((1.0 - upsilon) / d_tot);
  const DensityMatrix alpha(kABC, {da, db, dc}, std::move(alpha_m));

  // encoding: |i>_A |0>_C onto the AC Schmidt vectors of the B cut
  std::vector<std::pair<int, Vector>> fixed;
  for (std::size_t i = 0; i < sd.coefficients.size(); ++i)
    fixed.emplace_back(static_cast<int>(i) * dc, sd.right_vectors[i].amplitudes());
  const UnitaryOp encoding({"A", "C"}, {da, dc}, complete_orthonormal(da * dc, fixed));

  ScenarioState scenario = run_scenario(alpha, encoding);

  VtFamily target = vt_threshold(psi, CutSpec{{"A"}, {"B", "C"}});
  target.p = upsilon;
  const DensityMatrix rho_upsilon = vt_family_state(target);

  ExampleReport report{std::move(scenario), {}};
  ScenarioState& s = report.scenario;

  report.records.push_back(make_record(
      "beta-matches-noise-admixture",
      BoundReport::exact(max_abs_diff(s.encoded.entries(), rho_upsilon.entries())),
      BoundReport::exact(1e-10), Relation::LessEqual, 0.0, "vt-threshold"));

  const double p_cr_a = 1.0 / (1.0 + admissible.pair_products[0] * d_tot);
  const double p_cr_b = 1.0 / (1.0 + admissible.pair_products[1] * d_tot);
  const double p_cr_c = 1.0 / (1.0 + admissible.pair_products[2] * d_tot);
  report.records.push_back(make_record("b-ac-vt-separable", BoundReport::exact(upsilon),
                                       BoundReport::exact(p_cr_b), Relation::LessEqual, 1e-12,
                                       "vt-threshold"));
  report.records.push_back(make_record("c-ab-vt-separable", BoundReport::exact(upsilon),
                                       BoundReport::exact(p_cr_c), Relation::LessEqual, 1e-12,
                                       "vt-threshold"));
  report.records.push_back(make_record("a-bc-vt-supercritical", BoundReport::exact(p_cr_a),
                                       BoundReport::exact(upsilon), Relation::LessEqual, 1e-12,
                                       "vt-threshold"));
  report.records.push_back(npt_record("a-bc-npt", s.encoded, make_cut(s.encoded, {"A"})));

  report.records.push_back(make_record(
      "alpha-dephase-invariant-on-C",
      BoundReport::exact(
          max_abs_diff(dephase_computational(s.initial, "C").entries(), s.initial.entries())),
      BoundReport::exact(1e-12), Relation::LessEqual, 0.0, "flag-decomposition"));

  // The initial state is itself a noise admixture of a remote pure pair, so
  // both carrier cuts and the remote cut are certified by critical weights.
  s.certificates.push_back(
      StageCertificate{Stage::Initial, CutSpec{{"B"}, {"A", "C"}}, CertificateKind::VtThreshold, {}});
  s.certificates.push_back(
      StageCertificate{Stage::Initial, CutSpec{{"C"}, {"A", "B"}}, CertificateKind::VtThreshold, {}});
  s.certificates.push_back(
      StageCertificate{Stage::Encoded, CutSpec{{"B"}, {"A", "C"}}, CertificateKind::VtThreshold, {}});
  s.certificates.push_back(
      StageCertificate{Stage::Encoded, CutSpec{{"C"}, {"A", "B"}}, CertificateKind::VtThreshold, {}});

  auto conditions = check_distribution_conditions(s, opts);
  for (auto& rec : conditions) report.records.push_back(std::move(rec));
  return report;
}

}  // namespace qcorr
