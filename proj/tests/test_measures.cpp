#include "doctest.h"

#include "qcorr/examples.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/random.hpp"

using namespace qcorr;

namespace {

// fast settings for sweep-style unit tests
OptimizerOpts quick() {
  OptimizerOpts opts;
  opts.restarts = 4;
  opts.sweeps = 2;
  return opts;
}

DensityMatrix quantum_classical_example() {
  // sum_j p_j chi_j (x) |j><j|_C with distinct weights
  Rng rng(41);
  const DensityMatrix chi0 = rng.random_density({"A", "B"}, {2, 2});
  const DensityMatrix chi1 = rng.random_density({"A", "B"}, {2, 2});
  const DensityMatrix flag0 = computational_basis_state({"C"}, {2}, {0}).projector();
  const DensityMatrix flag1 = computational_basis_state({"C"}, {2}, {1}).projector();
  Matrix m = 0.7 * tensor(chi0, flag0).entries() + 0.3 * tensor(chi1, flag1).entries();
  return DensityMatrix({"A", "B", "C"}, {2, 2, 2}, std::move(m));
}

SeparableEnsemble random_separable(Rng& rng, int components) {
  SeparableEnsemble ens;
  ens.cut = CutSpec{{"A", "B"}, {"C"}};
  ens.weights = rng.simplex_weights(components);
  for (int k = 0; k < components; ++k)
    ens.components.emplace_back(rng.random_pure({"A", "B"}, {2, 2}), rng.random_pure({"C"}, {2}));
  return ens;
}

}  // namespace

TEST_CASE("measurement basis validation") {
  CHECK_THROWS_AS(MeasurementBasis("C", Matrix::Ones(2, 2)), std::invalid_argument);
  const MeasurementBasis basis = MeasurementBasis::from_angles("C", 0.7, 1.3);
  const Matrix gram = basis.vectors().adjoint() * basis.vectors();
  CHECK(max_abs_diff(gram, Matrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("dephase: diagonal states are fixed points, coherences vanish") {
  Rng rng(42);
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  const DensityMatrix d({"C"}, {2}, std::move(diag));
  CHECK(max_abs_diff(dephase_computational(d, "C").entries(), d.entries()) < 1e-14);

  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const DensityMatrix coherent = PureState({"C"}, {2}, plus).projector();
  CHECK(max_abs_diff(dephase_computational(coherent, "C").entries(),
                     Matrix::Identity(2, 2) / 2.0) < 1e-12);

  // the classically correlated initial protocol state is invariant on C
  const DensityMatrix lambda = cubitt_state();
  CHECK(max_abs_diff(dephase_computational(lambda, "C").entries(), lambda.entries()) < 1e-14);

  // trace preserved, entropy nondecreasing
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix rho = rng.random_density({"A", "C"}, {2, 2});
    const MeasurementBasis basis =
        MeasurementBasis::from_angles("C", rng.uniform() * 1.5, rng.uniform() * 6.2);
    const DensityMatrix out = dephase(rho, basis);
    CHECK(std::abs(out.entries().trace().real() - 1.0) < 1e-12);
    CHECK(von_neumann_entropy(out) >= von_neumann_entropy(rho) - 1e-9);
  }

  CHECK_THROWS_AS(dephase(d, MeasurementBasis::from_angles("X", 0.0, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("discord: quantum-classical states report an exact zero with a basis") {
  const DensityMatrix qc = quantum_classical_example();
  const BoundReport report = discord(qc, "C");
  CHECK(report.direction == Direction::Exact);
  CHECK(report.value == 0.0);
  REQUIRE(report.basis_certificate.has_value());
  CHECK(max_abs_diff(dephase(qc, *report.basis_certificate).entries(), qc.entries()) < 1e-9);
}

TEST_CASE("discord of the maximally entangled pair is one bit") {
  const BoundReport report = discord(bell_phi_plus().projector(), "B");
  CHECK(report.direction == Direction::Upper);
  CHECK(report.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("discord of pure bipartite states matches the reduced entropy") {
  Rng rng(43);
  for (int t = 0; t < 8; ++t) {
    const PureState psi = rng.random_pure({"X", "Y"}, {2, 2});
    const DensityMatrix rho = psi.projector();
    const BoundReport report = discord(rho, "Y");
    const double target = von_neumann_entropy(partial_trace(rho, {"X"}));
    CHECK(std::abs(report.value - target) <= 1e-4);
    CHECK(report.value >= target - 1e-9);  // upper bound never undershoots
  }
}

TEST_CASE("discord certificate re-evaluation and the dephased fixed point") {
  Rng rng(44);
  const DensityMatrix rho = rng.random_density({"A", "B", "C"}, {2, 2, 2});
  const BoundReport report = discord(rho, "C");
  REQUIRE(report.basis_certificate.has_value());
  const double replay = von_neumann_entropy(dephase(rho, *report.basis_certificate)) -
                        von_neumann_entropy(rho);
  CHECK(std::abs(replay - report.value) < 1e-9);

  // measuring an already dephased state in its own basis costs nothing,
  // whatever the basis was
  const DensityMatrix pinched = dephase(rho, *report.basis_certificate);
  const BoundReport again = discord(pinched, "C");
  CHECK(again.value <= 1e-6);
  for (int t = 0; t < 5; ++t) {
    const MeasurementBasis basis =
        MeasurementBasis::from_angles("C", 0.1 + 0.28 * t, 0.9 * t);
    const BoundReport fixed_point = discord(dephase(rho, basis), "C");
    CHECK(fixed_point.value <= 1e-6);
  }

  CHECK_THROWS_AS(discord(rho, "X"), std::invalid_argument);
}

TEST_CASE("ree: exact dispatch routes") {
  OptimizerOpts opts = quick();

  // supplied decomposition
  Rng rng(45);
  SeparableEnsemble ens = random_separable(rng, 6);
  const DensityMatrix sep = ens.assemble({"A", "B", "C"});
  const BoundReport from_hint = ree(sep, make_cut(sep, {"A", "B"}), opts, ens);
  CHECK(from_hint.direction == Direction::Exact);
  CHECK(from_hint.value == 0.0);
  CHECK(from_hint.certificate_kind == CertificateKind::SeparableEnsembleCert);

  SeparableEnsemble wrong_cut = ens;
  wrong_cut.cut = CutSpec{{"A"}, {"B", "C"}};
  CHECK_THROWS_AS(ree(sep, make_cut(sep, {"A", "B"}), opts, wrong_cut), std::invalid_argument);

  // conclusive PPT on a two-qubit cut
  const DensityMatrix mixed = maximally_mixed({"A", "B"}, {2, 2});
  const BoundReport ppt_route = ree(mixed, make_cut(mixed, {"A"}), opts);
  CHECK(ppt_route.direction == Direction::Exact);
  CHECK(ppt_route.value == 0.0);

  // pure states: entropy of the reduction, Schmidt mixture as certificate
  const BoundReport pure_route = ree(bell_phi_plus().projector(), CutSpec{{"A"}, {"B"}}, opts);
  CHECK(pure_route.direction == Direction::Exact);
  CHECK(pure_route.value == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(pure_route.ensemble_certificate.has_value());

  CHECK_THROWS_AS(
      ree(maximally_mixed({"A", "B", "C", "D", "E"}, {2, 2, 2, 2, 2}),
          CutSpec{{"A"}, {"B", "C", "D", "E"}}, opts),
      CapabilityError);
}

TEST_CASE("ree flag evaluation: final protocol state and the entangled admixture") {
  OptimizerOpts opts = quick();
  const DensityMatrix gamma = example2_gamma(1.0);
  const BoundReport flag = ree(gamma, make_cut(gamma, {"A"}), opts);
  CHECK(flag.direction == Direction::Exact);
  CHECK(flag.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(flag.certificate_kind == CertificateKind::FlagDecomposition);

  // the C-flagged entangled admixture carries exactly a third of a bit
  const DensityMatrix lambda_ent = example2_states(0.0).lambda_ent;
  const BoundReport e = ree_flag_eval(lambda_ent, "C", make_cut(lambda_ent, {"A", "C"}), opts);
  CHECK(e.direction == Direction::Exact);
  CHECK(e.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // a flag mixture of separable conditionals evaluates to zero
  Rng rng(47);
  Matrix m = 0.6 * tensor(tensor(rng.random_density({"A"}, {2}), rng.random_density({"B"}, {2})),
                          computational_basis_state({"C"}, {2}, {0}).projector())
                       .entries() +
             0.4 * tensor(tensor(rng.random_density({"A"}, {2}), rng.random_density({"B"}, {2})),
                          computational_basis_state({"C"}, {2}, {1}).projector())
                       .entries();
  const DensityMatrix sep_flags({"A", "B", "C"}, {2, 2, 2}, std::move(m));
  const BoundReport zero = ree_flag_eval(sep_flags, "C", make_cut(sep_flags, {"A"}), quick());
  CHECK(zero.direction == Direction::Exact);
  CHECK(zero.value <= 1e-9);

  // whole-side flags are rejected here; the dispatcher treats them as separable
  const DensityMatrix qc = quantum_classical_example();
  CHECK_THROWS_AS(ree_flag_eval(qc, "C", make_cut(qc, {"A", "B"}), quick()),
                  std::invalid_argument);
  const BoundReport whole_side = ree(qc, make_cut(qc, {"A", "B"}), quick());
  CHECK(whole_side.direction == Direction::Exact);
  CHECK(whole_side.value == 0.0);

  CHECK_THROWS_AS(ree_flag_eval(bell_phi_plus().projector(), "B",
                                CutSpec{{"A"}, {"B"}}, opts),
                  std::invalid_argument);
}

TEST_CASE("flag certificates reproduce the reported value on re-evaluation") {
  OptimizerOpts opts = quick();
  const DensityMatrix gamma = example2_gamma(0.5);
  const BoundReport flag = ree(gamma, make_cut(gamma, {"A"}), opts);
  REQUIRE(flag.ensemble_certificate.has_value());
  const DensityMatrix sigma = flag.ensemble_certificate->assemble(gamma.labels());
  const RelEntropyValue replay = relative_entropy(gamma, sigma);
  CHECK(!replay.infinite);
  CHECK(std::abs(replay.bits - flag.value) < 1e-6);
}

TEST_CASE("numeric ree upper bound dominates exact closed forms") {
  OptimizerOpts opts = quick();
  const DensityMatrix gamma = example2_gamma(1.0);
  const BoundReport exact = ree(gamma, make_cut(gamma, {"A"}), opts);
  const BoundReport numeric = ree_numeric(gamma, make_cut(gamma, {"A"}), opts);
  CHECK(numeric.direction == Direction::Upper);
  CHECK(numeric.value >= exact.value - 1e-4);
  CHECK(numeric.value <= exact.value + 0.05);  // convergence sanity

  REQUIRE(numeric.ensemble_certificate.has_value());
  const RelEntropyValue replay =
      relative_entropy(gamma, numeric.ensemble_certificate->assemble(gamma.labels()));
  CHECK(!replay.infinite);
  CHECK(std::abs(replay.bits - numeric.value) < 1e-6);
}

TEST_CASE("separable-state discord stays under the dimensional ceiling") {
  CHECK(discord_sep_bound(4, 2) == doctest::Approx(63.0 / 64.0).epsilon(1e-15));
  CHECK(discord_sep_bound(2, 2) == doctest::Approx(15.0 / 16.0).epsilon(1e-15));
  CHECK(discord_sep_bound(4, 1) == doctest::Approx(0.0));
  CHECK_THROWS_AS(discord_sep_bound(0, 2), std::invalid_argument);

  Rng rng(46);
  const double ceiling = discord_sep_bound(4, 2);
  for (int t = 0; t < 20; ++t) {
    SeparableEnsemble ens = random_separable(rng, 1 + static_cast<int>(rng.integer() % 8));
    const DensityMatrix rho = ens.assemble({"A", "B", "C"});
    const BoundReport d = discord(rho, "C");
    CHECK(d.value <= ceiling + 1e-6);
  }
}

TEST_CASE("ordering of the three correlation measures on closed-form states") {
  OptimizerOpts opts = quick();
  const DensityMatrix qc = quantum_classical_example();
  const CutSpec cut = make_cut(qc, {"A", "B"});
  const double info = mutual_information(qc, cut);
  const BoundReport d = discord(qc, "C");
  const BoundReport e = ree(qc, cut, opts);
  REQUIRE(d.direction == Direction::Exact);
  REQUIRE(e.direction == Direction::Exact);
  CHECK(info >= d.value - 1e-8);
  CHECK(d.value >= e.value - 1e-8);
}

TEST_CASE("discord handles measured subsystems beyond qubits (best effort)") {
  // uncorrelated qutrit: every basis leaves the state invariant
  Rng rng(48);
  const DensityMatrix rho = tensor(rng.random_density({"A"}, {2}), maximally_mixed({"Y"}, {3}));
  OptimizerOpts opts = quick();
  opts.restarts = 3;
  const BoundReport d = discord(rho, "Y", opts);
  CHECK(d.value <= 1e-6);
  REQUIRE(d.basis_certificate.has_value());
  CHECK(d.basis_certificate->outcome_count() == 3);
}

TEST_CASE("product ensembles group into cut ensembles consistently") {
  const ProductEnsemble ens = cubitt_ensemble();
  const DensityMatrix lambda = cubitt_state();
  CHECK(max_abs_diff(ens.assemble().entries(), lambda.entries()) < 1e-12);
  for (const auto& left : {std::vector<std::string>{"B"}, std::vector<std::string>{"A", "B"},
                           std::vector<std::string>{"A", "C"}}) {
    const CutSpec cut = make_cut(lambda, left);
    const SeparableEnsemble grouped = ens.group(cut);
    CHECK(max_abs_diff(grouped.assemble(lambda.labels()).entries(), lambda.entries()) < 1e-12);
  }
}
