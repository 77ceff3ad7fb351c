// qcorr command line tool: compute correlation measures of small labeled
// states, reproduce the distribution protocols, sweep their parameter grids
// and run randomized verification suites.
//
// Exit codes: 0 success, 2 input error, 3 capability error, 4 verification
// failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "qcorr/examples.hpp"
#include "qcorr/report_io.hpp"
#include "qcorr/state_io.hpp"

using namespace qcorr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCapability = 3;
constexpr int kExitVerification = 4;

struct CommonFlags {
  std::uint64_t seed = 42;
  int restarts = 32;
  int grid = 64;
  double tol = 1e-9;
  std::string format = "json";
  std::string out_path;
  bool deterministic = false;
  bool certificate = false;

  OptimizerOpts opts() const {
    OptimizerOpts o;
    o.seed = seed;
    o.restarts = restarts;
    o.grid = grid;
    o.tol = tol;
    return o;
  }
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_certificate = false) {
  cmd->add_option("--seed", flags.seed, "master random seed")->capture_default_str();
  cmd->add_option("--restarts", flags.restarts, "ensemble optimizer restarts")
      ->capture_default_str();
  cmd->add_option("--grid", flags.grid, "measurement-angle grid resolution")
      ->capture_default_str();
  cmd->add_option("--tol", flags.tol, "simplex contraction tolerance")->capture_default_str();
  cmd->add_option("--format", flags.format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", flags.out_path, "write the report to a file instead of stdout");
  cmd->add_flag("--deterministic", flags.deterministic,
                "suppress the timestamp so repeated runs are byte-identical");
  if (with_certificate)
    cmd->add_flag("--certificate", flags.certificate, "include optimizer certificates");
}

// Streams verification records as JSON lines or CSV rows.
class ReportSink {
public:
  int open(const CommonFlags& flags, const std::string& command) {
    csv_ = flags.format == "csv";
    if (!flags.out_path.empty()) {
      file_.open(flags.out_path);
      if (!file_) {
        std::cerr << "input error: cannot open output file " << flags.out_path << "\n";
        return kExitInput;
      }
      out_ = &file_;
    } else {
      out_ = &std::cout;
      to_stdout_ = true;
    }
    if (csv_) {
      *out_ << record_csv_header() << "\n";
    } else {
      *out_ << "{\"report\": \"" << command << "\", \"seed\": " << flags.seed;
      if (!flags.deterministic) *out_ << ", \"timestamp\": " << std::time(nullptr);
      *out_ << "}\n";
    }
    return kExitOk;
  }

  void write(const VerificationRecord& rec) {
    *out_ << (csv_ ? record_csv_line(rec) : record_json_line(rec)) << "\n";
  }

  /// stream for human-facing summary lines, kept apart from a stdout record
  /// stream so the report stays machine-readable
  std::ostream& summary_stream() { return to_stdout_ ? std::cerr : std::cout; }

private:
  std::ostream* out_ = nullptr;
  std::ofstream file_;
  bool csv_ = false;
  bool to_stdout_ = false;
};

std::vector<std::string> parse_side(const std::string& side,
                                    const std::vector<std::string>& labels) {
  std::vector<std::string> tokens;
  std::stringstream ss(side);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) tokens.push_back(tok);
  }
  std::vector<std::string> resolved;
  for (const auto& t : tokens) {
    if (std::find(labels.begin(), labels.end(), t) != labels.end()) {
      resolved.push_back(t);
      continue;
    }
    // compact form: each character is a label
    for (char c : t) {
      const std::string single(1, c);
      if (std::find(labels.begin(), labels.end(), single) == labels.end())
        throw std::invalid_argument("unknown label '" + single + "' in cut '" + side + "'");
      resolved.push_back(single);
    }
  }
  if (resolved.empty()) throw std::invalid_argument("empty cut side '" + side + "'");
  return resolved;
}

CutSpec parse_cut(const std::string& text, const DensityMatrix& rho) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("cut must look like LEFT:RIGHT, e.g. A:BC");
  const CutSpec cut = make_cut(rho, parse_side(text.substr(0, colon), rho.labels()));
  // the right side is implied; verify it matches what the user wrote
  std::vector<std::string> right = parse_side(text.substr(colon + 1), rho.labels());
  std::sort(right.begin(), right.end());
  std::vector<std::string> expect = cut.right;
  std::sort(expect.begin(), expect.end());
  if (right != expect)
    throw std::invalid_argument("cut sides do not partition the state labels");
  return cut;
}

std::string json_quote(const std::string& s) { return "\"" + s + "\""; }

void print_vector_json(std::ostream& out, const Vector& v) {
  out << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out << ", ";
    out << "[" << format_sig(v(i).real()) << ", " << format_sig(v(i).imag()) << "]";
  }
  out << "]";
}

void print_bound_json(std::ostream& out, const char* name, const BoundReport& b,
                      bool certificate) {
  out << json_quote(name) << ": {\"value\": " << format_sig(b.value) << ", \"direction\": "
      << json_quote(to_string(b.direction))
      << ", \"certificate_kind\": " << json_quote(to_string(b.certificate_kind));
  if (certificate && b.basis_certificate) {
    out << ", \"basis\": [";
    for (int j = 0; j < b.basis_certificate->outcome_count(); ++j) {
      if (j) out << ", ";
      print_vector_json(out, b.basis_certificate->vector(j));
    }
    out << "]";
  }
  if (certificate && b.ensemble_certificate) {
    out << ", \"ensemble_size\": " << b.ensemble_certificate->weights.size() << ", \"weights\": [";
    for (std::size_t k = 0; k < b.ensemble_certificate->weights.size(); ++k) {
      if (k) out << ", ";
      out << format_sig(b.ensemble_certificate->weights[k]);
    }
    out << "]";
  }
  out << "}";
}

// ----------------------------------------------------------------------
// measures

int cmd_measures(const std::string& state_path, const std::string& cut_text,
                 const std::string& measured, const CommonFlags& flags) {
  DensityMatrix rho = [&] { return read_state_file(state_path); }();
  if (rho.dim() > 16) throw CapabilityError("state dimension above 16 is not supported");

  const OptimizerOpts opts = flags.opts();
  const double entropy = von_neumann_entropy(rho);

  std::optional<CutSpec> cut;
  if (!cut_text.empty()) cut = parse_cut(cut_text, rho);
  std::string measure_label = measured;
  if (measure_label.empty() && cut && cut->right.size() == 1) measure_label = cut->right[0];

  std::optional<double> info;
  std::optional<BoundReport> e, d;
  if (cut) {
    info = mutual_information(rho, *cut);
    e = ree(rho, *cut, opts);
  }
  if (!measure_label.empty()) d = discord(rho, measure_label, opts);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!flags.out_path.empty()) {
    file.open(flags.out_path);
    if (!file) {
      std::cerr << "input error: cannot open output file " << flags.out_path << "\n";
      return kExitInput;
    }
    out = &file;
  }

  if (flags.format == "csv") {
    *out << "quantity,value,direction\n";
    *out << "entropy_bits," << format_sig(entropy) << ",exact\n";
    if (info) *out << "mutual_information_bits," << format_sig(*info) << ",exact\n";
    if (d) *out << "discord_bits," << format_sig(d->value) << "," << to_string(d->direction) << "\n";
    if (e) *out << "ree_bits," << format_sig(e->value) << "," << to_string(e->direction) << "\n";
  } else {
    *out << "{\"file\": " << json_quote(state_path) << ", \"labels\": [";
    for (std::size_t k = 0; k < rho.labels().size(); ++k)
      *out << (k ? ", " : "") << json_quote(rho.labels()[k]);
    *out << "], \"entropy_bits\": " << format_sig(entropy);
    if (cut) *out << ", \"cut\": " << json_quote(cut_to_string(*cut));
    if (info) *out << ", \"mutual_information_bits\": " << format_sig(*info);
    if (d) {
      *out << ", ";
      print_bound_json(*out, "discord", *d, flags.certificate);
    }
    if (e) {
      *out << ", ";
      print_bound_json(*out, "ree", *e, flags.certificate);
    }
    *out << "}\n";
  }
  return kExitOk;
}

// ----------------------------------------------------------------------
// reproduce

PureState default_example1_state() {
  // first admissible draw for this master seed; pinned alongside the tests
  return Rng::derived(20240501, 1).random_pure({"A", "B", "C"}, {2, 2, 2});
}

int cmd_reproduce(const std::string& which, double p, double u, double s, bool s_given,
                  const std::string& state_path, const CommonFlags& flags) {
  const OptimizerOpts opts = flags.opts();
  ExampleReport report = [&] {
    if (which == "cubitt") return cubitt_run(opts);
    if (which == "2") return example2_run(p, opts);
    if (which == "3") {
      const Example3Params params =
          s_given ? Example3Params::make(u, s) : Example3Params::from_u(u);
      return example3_run(params, opts);
    }
    if (which == "1") {
      if (state_path.empty()) return example1_build(default_example1_state(), opts);
      const DensityMatrix rho = read_state_file(state_path);
      const EighResult dec = eigh(rho.entries());
      if (dec.eigenvalues(rho.dim() - 1) < 1.0 - 1e-9)
        throw std::invalid_argument("reproduce 1 expects a pure state file");
      return example1_build(
          PureState(rho.labels(), rho.dims(), dec.eigenvectors.col(rho.dim() - 1), Repair::Allow),
          opts);
    }
    throw std::invalid_argument("unknown example '" + which + "' (use cubitt, 1, 2 or 3)");
  }();

  ReportSink sink;
  if (int rc = sink.open(flags, "reproduce " + which); rc != kExitOk) return rc;
  bool all_ok = true;
  for (const auto& rec : report.records) {
    sink.write(rec);
    all_ok = all_ok && (rec.pass || rec.supported());
  }
  return all_ok ? kExitOk : kExitVerification;
}

// ----------------------------------------------------------------------
// sweep

int cmd_sweep(const std::string& which, double u_min, double u_max, int u_points,
              std::vector<double> p_list, const CommonFlags& flags) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!flags.out_path.empty()) {
    file.open(flags.out_path);
    if (!file) {
      std::cerr << "input error: cannot open output file " << flags.out_path << "\n";
      return kExitInput;
    }
    out = &file;
  }

  if (which == "3") {
    if (u_points < 2 || !(u_min < u_max) || u_min <= 0.0)
      throw std::invalid_argument("sweep 3 requires 0 < u-min < u-max and at least two points");
    *out << "u,s,p,window_nonempty,thr_ab,thr_beta0,thr_beta1,"
            "min_eig_a_bc,min_eig_b_ac,min_eig_ab_c\n";
    for (int k = 0; k < u_points; ++k) {
      const double u = u_min + (u_max - u_min) * k / (u_points - 1);
      const Example3ScanRow row = example3_scan(u);
      *out << format_sig(row.u) << "," << format_sig(row.s) << "," << format_sig(row.p) << ","
           << (row.window_nonempty ? "true" : "false") << "," << (row.thr_ab ? "true" : "false")
           << "," << (row.thr_beta0 ? "true" : "false") << ","
           << (row.thr_beta1 ? "true" : "false") << "," << format_sig(row.min_eig_a_bc) << ","
           << format_sig(row.min_eig_b_ac) << "," << format_sig(row.min_eig_ab_c) << "\n";
    }
    return kExitOk;
  }

  if (which == "2") {
    if (p_list.empty()) p_list = {0.0, 0.25, 0.5, 0.75, 1.0};
    const OptimizerOpts opts = flags.opts();
    *out << "p,final_e_bits,gamma_closed_form_dev,"
            "min_eig_c_alpha,min_eig_c_beta,min_eig_c_gamma\n";
    for (double p : p_list) {
      const ScenarioState s = example2_scenario(p);
      const BoundReport e = ree(*s.decoded, make_cut(*s.decoded, {"A"}), opts);
      const double dev = max_abs_diff(s.decoded->entries(), example2_gamma(p).entries());
      *out << format_sig(p) << "," << format_sig(e.value) << "," << format_sig(dev) << ","
           << format_sig(ppt_check(s.initial, make_cut(s.initial, {"C"})).min_eigenvalue) << ","
           << format_sig(ppt_check(s.encoded, make_cut(s.encoded, {"C"})).min_eigenvalue) << ","
           << format_sig(ppt_check(*s.decoded, make_cut(*s.decoded, {"C"})).min_eigenvalue)
           << "\n";
    }
    return kExitOk;
  }
  throw std::invalid_argument("unknown sweep target '" + which + "' (use 2 or 3)");
}

// ----------------------------------------------------------------------
// verify

struct SuiteSummary {
  int total = 0, certified = 0, supported_only = 0, violations = 0, unresolved = 0;
  double worst_slack = std::numeric_limits<double>::infinity();

  void add(const VerificationRecord& rec) {
    ++total;
    worst_slack = std::min(worst_slack, rec.slack);
    if (rec.pass)
      ++certified;
    else if (rec.certified_violation())
      ++violations;
    else if (rec.supported())
      ++supported_only;
    else
      ++unresolved;
  }
};

void print_summary(std::ostream& out, const std::string& suite, const SuiteSummary& s) {
  out << "suite " << suite << ": n=" << s.total << " certified=" << s.certified
      << " supported=" << s.supported_only << " violations=" << s.violations
      << " unresolved=" << s.unresolved
      << " worst_slack=" << format_sig(s.total ? s.worst_slack : 0.0) << "\n";
}

int run_suite(const std::string& suite, int n, int trials, const CommonFlags& flags,
              ReportSink& sink, bool& any_violation, bool& any_unresolved) {
  const OptimizerOpts opts = flags.opts();
  OptimizerOpts lean = opts;
  lean.restarts = std::max(2, opts.restarts / 8);
  lean.sweeps = 2;
  SuiteSummary summary;
  auto note = [&](VerificationRecord rec, int index) {
    rec.name = suite + "[" + std::to_string(index) + "]:" + rec.name;
    summary.add(rec);
    sink.write(rec);
  };

  if (suite == "theorem1") {
    const int count = n > 0 ? n : 20;
    for (int t = 0; t < count; ++t) {
      Rng rng = Rng::derived(flags.seed, 1000 + t);
      if (t % 3 != 2) {
        note(verify_theorem1(rng.random_pure({"A", "B", "C"}, {2, 2, 2}).projector(), opts), t);
      } else {
        note(verify_theorem1(rng.random_density({"A", "B", "C"}, {2, 2, 2}), lean), t);
      }
    }
  } else if (suite == "eq2") {
    const int count = n > 0 ? n : 20;
    for (int t = 0; t < count; ++t) {
      Rng rng = Rng::derived(flags.seed, 2000 + t);
      const ScenarioState s =
          run_scenario(rng.random_density({"A", "B", "C"}, {2, 2, 2}), DephasingOp{"C"});
      note(verify_eq2(s, lean), t);
    }
  } else if (suite == "eq4") {
    const int count = n > 0 ? n : 200;
    for (int t = 0; t < count; ++t) {
      Rng rng = Rng::derived(flags.seed, 3000 + t);
      note(verify_eq4_pure(rng.random_density({"A", "C"}, {2, 2}), opts), t);
    }
  } else if (suite == "eq6") {
    const int count = n > 0 ? n : 6;
    for (int t = 0; t < count; ++t) {
      Rng rng = Rng::derived(flags.seed, 4000 + t);
      const UnitaryOp encoding({"A", "C"}, {2, 2}, rng.random_unitary(4));
      const ScenarioState s = run_scenario(rng.random_density({"A", "B", "C"}, {2, 2, 2}), encoding);
      for (const auto& rec : verify_eq6(s, lean)) note(rec, t);
    }
  } else if (suite == "eq7") {
    const int count = n > 0 ? n : 500;
    for (int t = 0; t < count; ++t) {
      Rng rng = Rng::derived(flags.seed, 5000 + t);
      note(verify_minfo_chain(rng.random_density({"A", "B", "C"}, {2, 2, 2})), t);
    }
  } else if (suite == "lemma1") {
    const int count = n > 0 ? n : 6;
    for (int t = 0; t < count; ++t) {
      Rng rng = Rng::derived(flags.seed, 6000 + t);
      for (const auto& rec : verify_lemma1(rng.random_density({"A", "B", "C"}, {2, 2, 2}), lean))
        note(rec, t);
    }
  } else if (suite == "theorem3") {
    const int count = trials > 0 ? trials : 1000;
    const Theorem3Report report = theorem3_search(count, flags.seed);
    BoundReport candidates = BoundReport::exact(static_cast<double>(report.candidates.size()));
    note(make_record("no-counterexample-candidates", candidates, BoundReport::exact(0.0),
                     Relation::Equal, 0.5, "ppt-witness"),
         0);
  } else if (suite == "theorem4") {
    note(verify_theorem4(cubitt_scenario(), lean), 0);
    note(verify_theorem4(example3_scenario(Example3Params::from_u(0.01)), lean), 1);
  } else {
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }

  print_summary(sink.summary_stream(), suite, summary);
  any_violation = any_violation || summary.violations > 0;
  any_unresolved = any_unresolved || summary.unresolved > 0;
  return kExitOk;
}

int cmd_verify(const std::string& suite, int n, int trials, const CommonFlags& flags) {
  ReportSink sink;
  if (int rc = sink.open(flags, "verify " + suite); rc != kExitOk) return rc;
  bool any_violation = false, any_unresolved = false;
  const std::vector<std::string> all = {"theorem1", "eq2", "eq4", "eq6",
                                        "eq7",      "lemma1", "theorem3", "theorem4"};
  if (suite == "all") {
    for (const auto& s : all) run_suite(s, n, trials, flags, sink, any_violation, any_unresolved);
  } else {
    run_suite(suite, n, trials, flags, sink, any_violation, any_unresolved);
  }
  if (any_unresolved)
    sink.summary_stream() << "note: unresolved records (numeric, no certificate)\n";
  return any_violation ? kExitVerification : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"correlation measures and distribution-protocol verification for few-qubit states"};
  app.require_subcommand(1);

  // measures
  auto* measures = app.add_subcommand("measures", "entropy, mutual information, discord and "
                                                  "relative entropy of entanglement of a state");
  std::string state_path, cut_text, measured_label;
  CommonFlags measures_flags;
  measures->add_option("state", state_path, "state file (JSON)")->required();
  measures->add_option("--cut", cut_text, "bipartition, e.g. A:BC or A,B:C");
  measures->add_option("--measured", measured_label, "measured subsystem for the discord");
  add_common_flags(measures, measures_flags, true);

  // reproduce
  auto* reproduce = app.add_subcommand("reproduce", "re-run a distribution protocol end to end");
  std::string which;
  double p = 0.5, u = 0.01, s_param = 0.0;
  std::string example1_state;
  CommonFlags reproduce_flags;
  reproduce->add_option("example", which, "cubitt, 1, 2 or 3")->required();
  reproduce->add_option("--p", p, "mixture weight for example 2")->capture_default_str();
  reproduce->add_option("--u", u, "encoding parameter for example 3")->capture_default_str();
  auto* s_opt = reproduce->add_option("--s", s_param, "pair parameter for example 3 "
                                                      "(default: violation maximizer)");
  reproduce->add_option("--state", example1_state, "pure-state file for example 1");
  add_common_flags(reproduce, reproduce_flags);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "parameter-grid scans emitting CSV");
  std::string sweep_which;
  double u_min = 0.001, u_max = 0.13;
  int u_points = 50;
  std::vector<double> p_list;
  CommonFlags sweep_flags;
  sweep->add_option("example", sweep_which, "2 or 3")->required();
  sweep->add_option("--u-min", u_min, "")->capture_default_str();
  sweep->add_option("--u-max", u_max, "")->capture_default_str();
  sweep->add_option("--u-points", u_points, "")->capture_default_str();
  sweep->add_option("--p-list", p_list, "explicit p grid for example 2");
  add_common_flags(sweep, sweep_flags);

  // verify
  auto* verify = app.add_subcommand("verify", "randomized verification suites");
  std::string suite;
  int n = 0, trials = 0;
  CommonFlags verify_flags;
  verify->add_option("suite", suite,
                     "theorem1, eq2, eq4, eq6, eq7, lemma1, theorem3, theorem4 or all")
      ->required();
  verify->add_option("--n", n, "instances per suite (0 = suite default)")->capture_default_str();
  verify->add_option("--trials", trials, "trials for the theorem3 search")->capture_default_str();
  add_common_flags(verify, verify_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (measures->parsed())
      return cmd_measures(state_path, cut_text, measured_label, measures_flags);
    if (reproduce->parsed())
      return cmd_reproduce(which, p, u, s_param, s_opt->count() > 0, example1_state,
                           reproduce_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_which, u_min, u_max, u_points, p_list, sweep_flags);
    if (verify->parsed()) return cmd_verify(suite, n, trials, verify_flags);
  } catch (const CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << "\n";
    return kExitCapability;
  } catch (const StateFormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
