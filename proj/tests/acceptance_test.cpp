// Acceptance suite: end-to-end checks of the distribution-protocol claims at
// their stated tolerances. One summary line prints per criterion.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qcorr/examples.hpp"
#include "qcorr/random.hpp"
#include "qcorr/report_io.hpp"

using namespace qcorr;

namespace {

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report(int id, const char* name, bool ok, double elapsed) {
  std::printf("[acceptance] %02d %-46s %s (%.2f s)\n", id, name, ok ? "PASS" : "FAIL", elapsed);
  std::fflush(stdout);
}

}  // namespace

TEST_CASE("criterion 01: original protocol, flag value, measurement statistics") {
  Stopwatch timer;
  const ScenarioState s = cubitt_scenario();

  const BoundReport final_e = ree(*s.decoded, make_cut(*s.decoded, {"A"}), OptimizerOpts{});
  bool ok = final_e.direction == Direction::Exact &&
            std::abs(final_e.value - 1.0 / 3.0) <= 1e-9;

  const auto outcomes = measure_computational(*s.decoded, "C");
  ok = ok && std::abs(outcomes[0].probability - 1.0 / 3.0) <= 1e-9;
  ok = ok && outcomes[0].conditional &&
       fidelity_with_pure(*outcomes[0].conditional, bell_phi_plus()) >= 1.0 - 1e-9;

  const double elapsed = timer.seconds();
  ok = ok && elapsed < 1.0;
  report(1, "final entanglement 1/3 and phi+ localization", ok, elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 02: carrier stays PPT at every protocol stage") {
  Stopwatch timer;
  bool ok = true;
  auto check_stages = [&](const ScenarioState& s) {
    for (Stage stage : {Stage::Initial, Stage::Encoded, Stage::Decoded}) {
      const DensityMatrix& state = s.stage_state(stage);
      ok = ok && ppt_check(state, make_cut(state, {"C"})).min_eigenvalue >= -1e-9;
    }
  };
  check_stages(cubitt_scenario());
  for (double p : {0.25, 0.5, 0.75}) check_stages(example2_scenario(p));
  const double elapsed = timer.seconds();
  ok = ok && elapsed < 1.0;
  report(2, "carrier C:AB partial transpose floor", ok, elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 03: mixed-protocol closed form and initial-entanglement bound") {
  Stopwatch timer;
  bool ok = true;
  for (double p : {0.25, 0.5, 0.75}) {
    const ScenarioState s = example2_scenario(p);
    ok = ok && max_abs_diff(s.decoded->entries(), example2_gamma(p).entries()) <= 1e-12;
    ok = ok && ppt_check(s.initial, make_cut(s.initial, {"A", "C"})).is_npt;

    bool bound_recorded = false;
    for (const auto& rec : example2_run(p, OptimizerOpts{}).records) {
      if (rec.name == "initial-e-convexity-bound") {
        bound_recorded = rec.pass && std::abs(rec.rhs.value - (1.0 - p) / 3.0) <= 1e-12;
      }
    }
    ok = ok && bound_recorded;
  }
  report(3, "closed-form final state, (1-p)/3 bound", ok, timer.seconds());
  CHECK(ok);
}

TEST_CASE("criterion 04: uncorrelated-carrier window and the NPT transition") {
  Stopwatch timer;
  bool ok = true;

  const Example3ScanRow inside = example3_scan(0.01);
  ok = ok && inside.window_nonempty && inside.thr_ab && inside.thr_beta0 && inside.thr_beta1;
  ok = ok && inside.min_eig_a_bc < -1e-9;

  const Example3ScanRow outside = example3_scan(0.1);
  ok = ok && outside.window_nonempty && outside.min_eig_a_bc >= -1e-9;

  // 50-point sweep brackets the NPT -> PPT transition inside [0.015, 0.03]
  double last_npt = 0.0, first_ppt = 1.0;
  for (int k = 0; k < 50; ++k) {
    const double u = 0.001 + (0.13 - 0.001) * k / 49.0;
    const Example3ScanRow row = example3_scan(u);
    if (!row.window_nonempty) continue;
    if (row.min_eig_a_bc < -1e-9)
      last_npt = std::max(last_npt, u);
    else
      first_ppt = std::min(first_ppt, u);
  }
  ok = ok && last_npt >= 0.015 && first_ppt <= 0.03 && last_npt < first_ppt;

  const double elapsed = timer.seconds();
  ok = ok && elapsed < 10.0;
  report(4, "thresholds, NPT at u=0.01, transition bracket", ok, elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 05: entropic inequality on 500 random pure tripartite states") {
  Stopwatch timer;
  int failures = 0;
  for (int t = 0; t < 500; ++t) {
    Rng rng = Rng::derived(42, 100000 + t);
    const DensityMatrix rho = rng.random_pure({"A", "B", "C"}, {2, 2, 2}).projector();
    const double sa = von_neumann_entropy(partial_trace(rho, {"A"}));
    const double sb = von_neumann_entropy(partial_trace(rho, {"B"}));
    const double sab = von_neumann_entropy(partial_trace(rho, {"A", "B"}));
    if (std::abs(sa - sb) > sab + 1e-8) ++failures;
  }
  const double elapsed = timer.seconds();
  const bool ok = failures == 0 && elapsed < 5.0;
  report(5, "|S_A - S_B| <= S_AB on 500 pure states", ok, elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 06: bound tightness at the encoded state (two numeric routes)") {
  Stopwatch timer;
  const ScenarioState s = cubitt_scenario();
  const OptimizerOpts opts;  // default optimizer settings
  const BoundReport d = discord(s.encoded, "C", opts);
  const BoundReport e = ree_numeric(s.encoded, make_cut(s.encoded, {"A"}), opts);
  const double elapsed = timer.seconds();
  const bool ok = std::abs(d.value - e.value) <= 0.02 && elapsed < 120.0;
  report(6, "|discord - entanglement| <= 0.02 at beta", ok, elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 07: purification identity on 200 random sender pairs") {
  Stopwatch timer;
  int failures = 0;
  for (int t = 0; t < 200; ++t) {
    Rng rng = Rng::derived(42, 200000 + t);
    const VerificationRecord rec = verify_eq4_pure(rng.random_density({"A", "C"}, {2, 2}));
    if (!rec.pass || std::abs(rec.slack) > 1e-8) ++failures;
  }
  const double elapsed = timer.seconds();
  const bool ok = failures == 0 && elapsed < 5.0;
  report(7, "entanglement step equals -S(C|A), 200 states", ok, elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 08: mutual-information chain on 500 random mixed states") {
  Stopwatch timer;
  int failures = 0;
  for (int t = 0; t < 500; ++t) {
    Rng rng = Rng::derived(42, 300000 + t);
    const VerificationRecord rec = verify_minfo_chain(rng.random_density({"A", "B", "C"}, {2, 2, 2}));
    if (!rec.pass) ++failures;
  }
  const bool ok = failures == 0;
  report(8, "I(A:CB) - I(AC:B) <= I(AB:C), 500 states", ok, timer.seconds());
  CHECK(ok);
}

TEST_CASE("criterion 09: separable-carrier gain ceiling with witnessed gain") {
  Stopwatch timer;
  const VerificationRecord cubitt = verify_theorem4(cubitt_scenario(), OptimizerOpts{});
  bool ok = cubitt.pass && cubitt.sound;
  ok = ok && std::abs(cubitt.rhs.value - 63.0 / 64.0) <= 1e-12;
  ok = ok && cubitt.lhs.value >= 1.0 / 3.0 - 1e-6;

  const VerificationRecord ex3 =
      verify_theorem4(example3_scenario(Example3Params::from_u(0.01)), OptimizerOpts{});
  ok = ok && ex3.pass && ex3.sound;
  report(9, "gain <= (1 - 1/64) bit, cubitt gain >= 1/3", ok, timer.seconds());
  CHECK(ok);
}

TEST_CASE("criterion 10: separable-state discord ceiling on 200 random draws") {
  Stopwatch timer;
  const double ceiling = discord_sep_bound(4, 2);
  int failures = 0;
  for (int t = 0; t < 200; ++t) {
    Rng rng = Rng::derived(42, 400000 + t);
    SeparableEnsemble ens;
    ens.cut = CutSpec{{"A", "B"}, {"C"}};
    const int components = 1 + static_cast<int>(rng.integer() % 12);
    ens.weights = rng.simplex_weights(components);
    for (int k = 0; k < components; ++k)
      ens.components.emplace_back(rng.random_pure({"A", "B"}, {2, 2}),
                                  rng.random_pure({"C"}, {2}));
    const DensityMatrix rho = ens.assemble({"A", "B", "C"});
    const BoundReport d = discord(rho, "C");
    if (d.value > ceiling + 1e-6) ++failures;
  }
  const bool ok = failures == 0;
  report(10, "discord of separable states <= 63/64", ok, timer.seconds());
  CHECK(ok);
}

TEST_CASE("criterion 11: randomized no-counterexample search") {
  Stopwatch timer;
  const Theorem3Report result = theorem3_search(1000, 42);
  const double elapsed = timer.seconds();
  const bool ok = result.trials == 1000 && result.candidates.empty() && elapsed < 60.0;
  report(11, "1000 classical-on-A trials, zero candidates", ok, elapsed);
  CHECK(ok);
}

TEST_CASE("criterion 12: noise-admixture threshold against the PPT scan oracle") {
  Stopwatch timer;
  const PureState bell = bell_phi_plus();
  VtFamily family = vt_threshold(bell, make_cut(bell, {"A"}));
  bool ok = std::abs(family.p_cr - 1.0 / 3.0) <= 1e-12;

  double last_ppt = 0.0, first_npt = 1.0;
  for (int k = 0; k < 200; ++k) {
    family.p = static_cast<double>(k) / 199.0;
    if (ppt_check(vt_family_state(family), family.cut).is_npt)
      first_npt = std::min(first_npt, family.p);
    else
      last_ppt = std::max(last_ppt, family.p);
  }
  const double grid_step = 1.0 / 199.0;
  ok = ok && last_ppt <= family.p_cr + 1e-9 && first_npt >= family.p_cr - 1e-9;
  ok = ok && (first_npt - last_ppt) <= 2 * grid_step;
  report(12, "PPT scan brackets the critical weight 1/3", ok, timer.seconds());
  CHECK(ok);
}

TEST_CASE("criterion 13: localization returns remote NPT entanglement") {
  Stopwatch timer;
  const LocalizationResult cubitt = localize(cubitt_scenario().encoded);
  bool ok = cubitt.verdict.is_npt && cubitt.outcome_probability > 0.0;

  const LocalizationResult ex3 = localize(example3_scenario(Example3Params::from_u(0.01)).encoded);
  ok = ok && ex3.verdict.is_npt && ex3.outcome_probability > 0.0;
  report(13, "localize: NPT conditional with p > 0", ok, timer.seconds());
  CHECK(ok);
}

TEST_CASE("criterion 14: repeated deterministic verification runs are byte-identical") {
  Stopwatch timer;
  const char* cli = std::getenv("QCORR_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "QCORR_CLI must point at the command line binary");

  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string base = "acceptance_determinism_run";
  bool ok = true;
  for (int run = 0; run < 2; ++run) {
    const std::string cmd = std::string(cli) + " verify all --seed 42 --deterministic --out " +
                            base + std::to_string(run) + ".jsonl 2>/dev/null >/dev/null";
    ok = ok && std::system(cmd.c_str()) == 0;
  }
  const std::string first = slurp(base + "0.jsonl");
  const std::string second = slurp(base + "1.jsonl");
  ok = ok && !first.empty() && first == second;
  std::remove((base + "0.jsonl").c_str());
  std::remove((base + "1.jsonl").c_str());
  report(14, "verify all --seed 42 --deterministic twice", ok, timer.seconds());
  CHECK(ok);
}
