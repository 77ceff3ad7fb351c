#include "qcorr/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcorr/optim.hpp"
#include "qcorr/random.hpp"

namespace qcorr {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::string> join(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

bool same_label_set(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& l : a)
    if (std::find(b.begin(), b.end(), l) == b.end()) return false;
  return true;
}

std::vector<int> dims_of(const DensityMatrix& rho, const std::vector<std::string>& side) {
  std::vector<int> out;
  for (const auto& l : side) out.push_back(rho.dim_of(l));
  return out;
}

// ---------------------------------------------------------------------
// Angle parametrization of pure states: d-1 polar angles followed by d-1
// phases; component 0 is real and nonnegative.

int angle_count(int d) { return 2 * (d - 1); }

Vector vector_from_angles(int d, const double* a) {
  const double* polar = a;
  const double* phase = a + (d - 1);
  Vector v(d);
  double sinprod = 1.0;
  for (int k = 0; k < d; ++k) {
    double amp = (k < d - 1) ? std::cos(polar[k]) * sinprod : sinprod;
    Complex ph = (k == 0) ? Complex(1, 0) : std::polar(1.0, phase[k - 1]);
    v(k) = amp * ph;
    if (k < d - 1) sinprod *= std::sin(polar[k]);
  }
  return v;
}

std::vector<double> angles_from_vector(const Vector& v) {
  const int d = static_cast<int>(v.size());
  Vector u = v;
  const double a0 = std::abs(u(0));
  if (a0 > 1e-14) u *= std::conj(u(0)) / a0;  // make component 0 real nonnegative
  std::vector<double> a(angle_count(d), 0.0);
  double sinprod = 1.0;
  for (int k = 0; k + 1 < d; ++k) {
    double amp = std::abs(u(k));
    double c = sinprod > 1e-14 ? std::clamp(amp / sinprod, -1.0, 1.0) : 1.0;
    a[k] = std::acos(c);
    sinprod *= std::sin(a[k]);
  }
  for (int k = 1; k < d; ++k) a[(d - 1) + (k - 1)] = std::arg(u(k));
  return a;
}

std::vector<double> angles_for_basis_state(int d, int index) {
  std::vector<double> a(angle_count(d), 0.0);
  for (int k = 0; k < index; ++k) a[k] = kPi / 2;
  return a;
}

// Orthonormal basis of C^m from a chain of two-level rotations, one
// (theta, phi) pair per index pair (i < j).
Matrix basis_from_givens(int m, const std::vector<double>& angles) {
  Matrix u = Matrix::Identity(m, m);
  int idx = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double t = angles[idx++];
      const double p = angles[idx++];
      Matrix g = Matrix::Identity(m, m);
      g(i, i) = std::cos(t);
      g(j, j) = std::cos(t);
      g(i, j) = -std::sin(t) * std::polar(1.0, -p);
      g(j, i) = std::sin(t) * std::polar(1.0, p);
      u = u * g;
    }
  }
  return u;
}

// Entropy of rho after a complete projective measurement of the last
// subsystem (rho_p indexed with the measured digit fastest). Equals the sum
// of block entropies in the rotated basis.
double entropy_after_measurement(const Matrix& rho_p, int dr, int m, const Matrix& basis) {
  double total = 0.0;
  Matrix block(dr, dr);
  for (int j = 0; j < m; ++j) {
    for (int r = 0; r < dr; ++r) {
      for (int c = 0; c < dr; ++c) {
        Complex s = 0;
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            s += std::conj(basis(a, j)) * rho_p(r * m + a, c * m + b) * basis(b, j);
        block(r, c) = s;
      }
    }
    total += entropy_of_hermitian(block);
  }
  return total;
}

}  // namespace

const char* to_string(Direction d) {
  switch (d) {
    case Direction::Exact: return "exact";
    case Direction::Upper: return "upper";
    case Direction::Lower: return "lower";
  }
  return "?";
}

const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::None: return "none";
    case CertificateKind::SeparableEnsembleCert: return "separable-ensemble";
    case CertificateKind::FlagDecomposition: return "flag-decomposition";
    case CertificateKind::PureClosedForm: return "pure-closed-form";
    case CertificateKind::PptSeparable: return "ppt-separable";
    case CertificateKind::PptWitness: return "ppt-witness";
    case CertificateKind::VtThreshold: return "vt-threshold";
    case CertificateKind::MeasurementBasisCert: return "measurement-basis";
  }
  return "?";
}

MeasurementBasis::MeasurementBasis(std::string subsystem, Matrix basis_vectors)
    : subsystem_(std::move(subsystem)), basis_(std::move(basis_vectors)) {
  if (basis_.rows() != basis_.cols())
    throw std::invalid_argument("measurement basis must be complete (square)");
  Matrix gram = basis_.adjoint() * basis_;
  gram -= Matrix::Identity(basis_.rows(), basis_.cols());
  if (gram.cwiseAbs().maxCoeff() > kStateTol)
    throw std::invalid_argument("measurement basis vectors are not orthonormal");
}

MeasurementBasis MeasurementBasis::from_angles(const std::string& subsystem, double theta,
                                               double phi) {
  Matrix b(2, 2);
  b(0, 0) = std::cos(theta);
  b(1, 0) = std::sin(theta) * std::polar(1.0, phi);
  b(0, 1) = -std::sin(theta) * std::polar(1.0, -phi);
  b(1, 1) = std::cos(theta);
  return MeasurementBasis(subsystem, std::move(b));
}

DensityMatrix SeparableEnsemble::assemble(const std::vector<std::string>& label_order) const {
  if (weights.size() != components.size() || weights.empty())
    throw std::invalid_argument("separable ensemble: weights/components mismatch");
  std::optional<Matrix> acc;
  std::vector<std::string> labels;
  std::vector<int> dims;
  for (std::size_t i = 0; i < components.size(); ++i) {
    PureState prod = tensor(components[i].first, components[i].second);
    if (!acc) {
      labels = prod.labels();
      dims = prod.dims();
      acc = Matrix::Zero(prod.dim(), prod.dim());
    }
    *acc += weights[i] * (prod.amplitudes() * prod.amplitudes().adjoint()).eval();
  }
  DensityMatrix grouped(labels, dims, std::move(*acc), Repair::Allow);
  return permute_subsystems(grouped, label_order);
}

DensityMatrix ProductEnsemble::assemble() const {
  std::optional<Matrix> acc;
  std::vector<int> dims;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    PureState prod = factors[i][0];
    for (std::size_t k = 1; k < factors[i].size(); ++k) prod = tensor(prod, factors[i][k]);
    if (!acc) {
      dims = prod.dims();
      acc = Matrix::Zero(prod.dim(), prod.dim());
    }
    *acc += weights[i] * (prod.amplitudes() * prod.amplitudes().adjoint()).eval();
  }
  return DensityMatrix(labels, dims, std::move(*acc), Repair::Allow);
}

SeparableEnsemble ProductEnsemble::group(const CutSpec& cut) const {
  validate_cut(labels, cut);
  SeparableEnsemble out;
  out.cut = cut;
  out.weights = weights;
  auto factor_index = [&](const std::string& l) {
    return std::find(labels.begin(), labels.end(), l) - labels.begin();
  };
  for (const auto& comp : factors) {
    PureState left = comp[factor_index(cut.left[0])];
    for (std::size_t k = 1; k < cut.left.size(); ++k)
      left = tensor(left, comp[factor_index(cut.left[k])]);
    PureState right = comp[factor_index(cut.right[0])];
    for (std::size_t k = 1; k < cut.right.size(); ++k)
      right = tensor(right, comp[factor_index(cut.right[k])]);
    out.components.emplace_back(std::move(left), std::move(right));
  }
  return out;
}

DensityMatrix dephase(const DensityMatrix& rho, const MeasurementBasis& basis) {
  const int pos = rho.index_of(basis.subsystem());
  const int m = rho.dims()[pos];
  if (basis.outcome_count() != m)
    throw std::invalid_argument("dephase: basis dimension does not match subsystem");
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (int j = 0; j < m; ++j) {
    Matrix proj = basis.vector(j) * basis.vector(j).adjoint();
    Matrix full = embed_operator(proj, {basis.subsystem()}, {m}, rho.labels(), rho.dims());
    out += full * rho.entries() * full;
  }
  return DensityMatrix(rho.labels(), rho.dims(), std::move(out), Repair::Allow);
}

DensityMatrix dephase_computational(const DensityMatrix& rho, const std::string& label) {
  const int m = rho.dim_of(label);
  return dephase(rho, MeasurementBasis(label, Matrix::Identity(m, m)));
}

namespace {

// Eigenbasis of the measured marginal, provided it is nondegenerate and the
// state is invariant under dephasing in it.
std::optional<MeasurementBasis> qc_basis_from_marginal(const DensityMatrix& rho,
                                                       const std::string& label,
                                                       bool require_nondegenerate) {
  const DensityMatrix marginal = partial_trace(rho, {label});
  EighResult dec = eigh(marginal.entries());
  if (require_nondegenerate) {
    for (Eigen::Index i = 0; i + 1 < dec.eigenvalues.size(); ++i)
      if (dec.eigenvalues(i + 1) - dec.eigenvalues(i) < 1e-8) return std::nullopt;
  }
  MeasurementBasis basis(label, dec.eigenvectors);
  if (max_abs_diff(dephase(rho, basis).entries(), rho.entries()) <= kStateTol) return basis;
  return std::nullopt;
}

}  // namespace

std::optional<MeasurementBasis> detect_flag_basis(const DensityMatrix& rho,
                                                  const std::string& label) {
  if (auto basis = qc_basis_from_marginal(rho, label, true)) return basis;
  const int m = rho.dim_of(label);
  MeasurementBasis comp(label, Matrix::Identity(m, m));
  if (max_abs_diff(dephase(rho, comp).entries(), rho.entries()) <= kStateTol) return comp;
  return std::nullopt;
}

BoundReport discord(const DensityMatrix& rho, const std::string& measured,
                    const OptimizerOpts& opts) {
  const int pos = rho.index_of(measured);
  const int m = rho.dims()[pos];
  const double s_rho = von_neumann_entropy(rho);

  // Exact-zero path: quantum-classical states detected through the marginal
  // eigenbasis. Degenerate marginals fall through to the optimizer.
  if (auto basis = qc_basis_from_marginal(rho, measured, true)) {
    BoundReport report = BoundReport::exact(0.0, CertificateKind::MeasurementBasisCert);
    report.basis_certificate = std::move(*basis);
    return report;
  }

  // Reindex with the measured subsystem fastest.
  std::vector<std::string> order;
  for (const auto& l : rho.labels())
    if (l != measured) order.push_back(l);
  order.push_back(measured);
  const Matrix rho_p = permute_subsystems(rho, order).entries();
  const int dr = rho.dim() / m;

  auto objective_basis = [&](const Matrix& basis) {
    return entropy_after_measurement(rho_p, dr, m, basis) - s_rho;
  };

  BoundReport report;
  report.direction = Direction::Upper;
  report.certificate_kind = CertificateKind::MeasurementBasisCert;

  if (m == 2) {
    // Uniform grid seed followed by simplex refinement. Ties break toward the
    // earliest grid point and refinement must strictly improve, so degenerate
    // landscapes keep the computational basis instead of drifting on noise.
    double best = std::numeric_limits<double>::infinity();
    double best_theta = 0.0, best_phi = 0.0;
    const int g = std::max(opts.grid, 2);
    for (int i = 0; i < g; ++i) {
      const double theta = (kPi / 2) * i / (g - 1);
      for (int j = 0; j < g; ++j) {
        const double phi = 2 * kPi * j / g;
        const double v = objective_basis(MeasurementBasis::from_angles(measured, theta, phi).vectors());
        if (v < best - 1e-12) {
          best = v;
          best_theta = theta;
          best_phi = phi;
        }
      }
    }
    auto f = [&](const std::vector<double>& a) {
      return objective_basis(MeasurementBasis::from_angles(measured, a[0], a[1]).vectors());
    };
    SimplexResult refined =
        nelder_mead(f, {best_theta, best_phi}, 1.5 / g, opts.tol, opts.max_iterations);
    const bool improved = refined.value < best - opts.tol;
    report.value = std::max(improved ? refined.value : best, 0.0);
    report.error_hint = std::max(best - report.value, 0.0) + opts.tol;
    report.basis_certificate = MeasurementBasis::from_angles(
        measured, improved ? refined.x[0] : best_theta, improved ? refined.x[1] : best_phi);
    return report;
  }

  // Best-effort path for measured dimensions above 2: multi-restart simplex
  // over a two-level-rotation parametrization of the basis.
  const int params = m * (m - 1);
  auto f = [&](const std::vector<double>& a) { return objective_basis(basis_from_givens(m, a)); };
  std::optional<SimplexResult> best;
  double max_improvement = 0.0;
  for (int r = 0; r < std::max(opts.restarts, 1); ++r) {
    std::vector<double> a0(params, 0.0);
    if (r > 0) {
      Rng rng = Rng::derived(opts.seed, 7100 + r);
      for (double& x : a0) x = rng.uniform() * kPi;
    }
    SimplexResult res = nelder_mead(f, std::move(a0), 0.3, opts.tol, opts.max_iterations);
    max_improvement = std::max(max_improvement, res.improvement);
    if (!best || res.value < best->value) best = std::move(res);
  }
  report.value = std::max(best->value, 0.0);
  report.error_hint = max_improvement + opts.tol;
  report.basis_certificate = MeasurementBasis(measured, basis_from_givens(m, best->x));
  return report;
}

// -----------------------------------------------------------------------
// Relative entropy of entanglement

namespace {

struct EnsembleProblem {
  Matrix rho;  // grouped as (left, right)
  double s_rho;
  int dl, dr, d, k;
  int np;  // parameters per component: weight + left angles + right angles
};

struct EnsembleParams {
  std::vector<double> params;  // k * np
};

Matrix component_projector(const EnsembleProblem& prob, const double* p, Vector* lv = nullptr,
                           Vector* rv = nullptr) {
  Vector left = vector_from_angles(prob.dl, p + 1);
  Vector right = vector_from_angles(prob.dr, p + 1 + angle_count(prob.dl));
  Vector prod(prob.d);
  for (int i = 0; i < prob.dl; ++i) prod.segment(i * prob.dr, prob.dr) = left(i) * right;
  if (lv) *lv = std::move(left);
  if (rv) *rv = std::move(right);
  return prod * prod.adjoint();
}

double ensemble_value(const EnsembleProblem& prob, const EnsembleParams& ep) {
  Matrix sigma = Matrix::Zero(prob.d, prob.d);
  double total = 0.0;
  for (int i = 0; i < prob.k; ++i) {
    const double* p = ep.params.data() + i * prob.np;
    const double w = p[0] * p[0];
    if (w <= 0) continue;
    sigma += w * component_projector(prob, p);
    total += w;
  }
  if (total <= 0) return 1e6;
  return relative_entropy_penalized(prob.rho, prob.s_rho, sigma / total);
}

// One block-coordinate pass of simplex refinement over every component.
double ensemble_sweep(const EnsembleProblem& prob, EnsembleParams& ep, const OptimizerOpts& opts) {
  // cached unnormalized mixture
  Matrix sigma_rest = Matrix::Zero(prob.d, prob.d);
  double sum_rest = 0.0;
  std::vector<Matrix> projs(prob.k);
  std::vector<double> ws(prob.k);
  for (int i = 0; i < prob.k; ++i) {
    const double* p = ep.params.data() + i * prob.np;
    projs[i] = component_projector(prob, p);
    ws[i] = p[0] * p[0];
    sigma_rest += ws[i] * projs[i];
    sum_rest += ws[i];
  }

  double before = relative_entropy_penalized(prob.rho, prob.s_rho, sigma_rest / sum_rest);
  const int block_iters = std::min(opts.max_iterations, 150);
  for (int i = 0; i < prob.k; ++i) {
    sigma_rest -= ws[i] * projs[i];
    sum_rest -= ws[i];

    double* base = ep.params.data() + i * prob.np;
    auto f = [&](const std::vector<double>& a) {
      const double w = a[0] * a[0];
      Matrix proj = component_projector(prob, a.data());
      const double total = sum_rest + w;
      if (total <= 1e-14) return 1e6;
      Matrix sigma = (sigma_rest + w * proj) / total;
      return relative_entropy_penalized(prob.rho, prob.s_rho, sigma);
    };
    std::vector<double> start(base, base + prob.np);
    SimplexResult res = nelder_mead(f, std::move(start), 0.15, opts.tol, block_iters);
    std::copy(res.x.begin(), res.x.end(), base);

    projs[i] = component_projector(prob, base);
    ws[i] = base[0] * base[0];
    sigma_rest += ws[i] * projs[i];
    sum_rest += ws[i];
  }
  double after = relative_entropy_penalized(prob.rho, prob.s_rho, sigma_rest / sum_rest);
  return std::max(before - after, 0.0);
}

void seed_diagonal(const EnsembleProblem& prob, EnsembleParams& ep) {
  // computational dephasing of rho is separable and always covers its support
  for (int i = 0; i < prob.k; ++i) {
    double* p = ep.params.data() + i * prob.np;
    if (i < prob.d) {
      const double w = std::max(prob.rho(i, i).real(), 1e-10);
      p[0] = std::sqrt(w);
      const int li = i / prob.dr, ri = i % prob.dr;
      auto la = angles_for_basis_state(prob.dl, li);
      auto ra = angles_for_basis_state(prob.dr, ri);
      std::copy(la.begin(), la.end(), p + 1);
      std::copy(ra.begin(), ra.end(), p + 1 + angle_count(prob.dl));
    } else {
      p[0] = 1e-6;
      auto la = angles_for_basis_state(prob.dl, 0);
      auto ra = angles_for_basis_state(prob.dr, i % prob.dr);
      std::copy(la.begin(), la.end(), p + 1);
      std::copy(ra.begin(), ra.end(), p + 1 + angle_count(prob.dl));
    }
  }
}

void seed_marginal_product(const EnsembleProblem& prob, EnsembleParams& ep) {
  // eigen-ensemble of rho_L (x) rho_R
  Matrix rho_l = Matrix::Zero(prob.dl, prob.dl);
  Matrix rho_r = Matrix::Zero(prob.dr, prob.dr);
  for (int i = 0; i < prob.dl; ++i)
    for (int j = 0; j < prob.dl; ++j) {
      Complex s = 0;
      for (int a = 0; a < prob.dr; ++a) s += prob.rho(i * prob.dr + a, j * prob.dr + a);
      rho_l(i, j) = s;
    }
  for (int a = 0; a < prob.dr; ++a)
    for (int b = 0; b < prob.dr; ++b) {
      Complex s = 0;
      for (int i = 0; i < prob.dl; ++i) s += prob.rho(i * prob.dr + a, i * prob.dr + b);
      rho_r(a, b) = s;
    }
  Eigen::SelfAdjointEigenSolver<Matrix> sl(rho_l), sr(rho_r);
  int comp = 0;
  for (int i = 0; i < prob.dl && comp < prob.k; ++i) {
    for (int j = 0; j < prob.dr && comp < prob.k; ++j, ++comp) {
      double* p = ep.params.data() + comp * prob.np;
      const double w = std::max(sl.eigenvalues()(i) * sr.eigenvalues()(j), 1e-10);
      p[0] = std::sqrt(w);
      auto la = angles_from_vector(sl.eigenvectors().col(i));
      auto ra = angles_from_vector(sr.eigenvectors().col(j));
      std::copy(la.begin(), la.end(), p + 1);
      std::copy(ra.begin(), ra.end(), p + 1 + angle_count(prob.dl));
    }
  }
  for (; comp < prob.k; ++comp) {
    double* p = ep.params.data() + comp * prob.np;
    p[0] = 1e-6;
    auto la = angles_for_basis_state(prob.dl, comp % prob.dl);
    auto ra = angles_for_basis_state(prob.dr, comp % prob.dr);
    std::copy(la.begin(), la.end(), p + 1);
    std::copy(ra.begin(), ra.end(), p + 1 + angle_count(prob.dl));
  }
}

void seed_random(const EnsembleProblem& prob, EnsembleParams& ep, Rng& rng) {
  for (int i = 0; i < prob.k; ++i) {
    double* p = ep.params.data() + i * prob.np;
    p[0] = 0.1 + std::abs(rng.gaussian());
    for (int a = 0; a < angle_count(prob.dl); ++a)
      p[1 + a] = rng.uniform() * (a < prob.dl - 1 ? kPi / 2 : 2 * kPi);
    for (int a = 0; a < angle_count(prob.dr); ++a)
      p[1 + angle_count(prob.dl) + a] = rng.uniform() * (a < prob.dr - 1 ? kPi / 2 : 2 * kPi);
  }
}

}  // namespace

BoundReport ree_numeric(const DensityMatrix& rho, const CutSpec& cut, const OptimizerOpts& opts) {
  validate_cut(rho.labels(), cut);
  if (rho.dim() > 16)
    throw CapabilityError("ree: total dimension above 16 is not supported");

  EnsembleProblem prob;
  const std::vector<std::string> grouped_order = join(cut.left, cut.right);
  prob.rho = permute_subsystems(rho, grouped_order).entries();
  prob.s_rho = von_neumann_entropy(rho);
  prob.dl = side_dim(rho, cut.left);
  prob.dr = side_dim(rho, cut.right);
  prob.d = prob.dl * prob.dr;
  prob.k = prob.d * prob.d;  // Caratheodory bound on the ensemble size
  prob.np = 1 + angle_count(prob.dl) + angle_count(prob.dr);

  std::optional<EnsembleParams> best;
  double best_value = std::numeric_limits<double>::infinity();
  double max_last_sweep = 0.0;

  const int restarts = std::max(opts.restarts, 1);
  for (int r = 0; r < restarts; ++r) {
    EnsembleParams ep;
    ep.params.assign(static_cast<std::size_t>(prob.k) * prob.np, 0.0);
    if (r == 0) {
      seed_diagonal(prob, ep);
    } else if (r == 1) {
      seed_marginal_product(prob, ep);
    } else {
      Rng rng = Rng::derived(opts.seed, 9200 + r);
      seed_random(prob, ep, rng);
    }

    double last_improvement = 0.0;
    for (int s = 0; s < std::max(opts.sweeps, 1); ++s) {
      last_improvement = ensemble_sweep(prob, ep, opts);
      if (last_improvement < opts.tol) break;
    }
    const double value = ensemble_value(prob, ep);
    max_last_sweep = std::max(max_last_sweep, last_improvement);
    if (value < best_value) {
      best_value = value;
      best = std::move(ep);
    }
  }

  // materialize the certificate ensemble
  SeparableEnsemble cert;
  cert.cut = cut;
  std::vector<int> ldims = dims_of(rho, cut.left);
  std::vector<int> rdims = dims_of(rho, cut.right);
  double total = 0.0;
  for (int i = 0; i < prob.k; ++i) total += std::pow(best->params[i * prob.np], 2);
  for (int i = 0; i < prob.k; ++i) {
    const double* p = best->params.data() + i * prob.np;
    const double w = p[0] * p[0] / total;
    if (w < 1e-14) continue;
    Vector lv, rv;
    component_projector(prob, p, &lv, &rv);
    cert.weights.push_back(w);
    cert.components.emplace_back(PureState(cut.left, ldims, std::move(lv), Repair::Allow),
                                 PureState(cut.right, rdims, std::move(rv), Repair::Allow));
  }

  BoundReport report;
  report.value = std::max(best_value, 0.0);
  report.direction = Direction::Upper;
  report.error_hint = max_last_sweep + opts.tol;
  report.certificate_kind = CertificateKind::SeparableEnsembleCert;
  report.ensemble_certificate = std::move(cert);
  return report;
}

namespace {

// Diagonal states are separable across any cut with an explicit
// computational product ensemble.
std::optional<SeparableEnsemble> diagonal_ensemble(const DensityMatrix& rho, const CutSpec& cut) {
  const int d = rho.dim();
  Matrix off = rho.entries();
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() > 1e-11) return std::nullopt;

  const DensityMatrix grouped = permute_subsystems(rho, join(cut.left, cut.right));
  const int dl = side_dim(rho, cut.left);
  const int dr = side_dim(rho, cut.right);
  std::vector<int> ldims = dims_of(rho, cut.left);
  std::vector<int> rdims = dims_of(rho, cut.right);
  SeparableEnsemble ens;
  ens.cut = cut;
  for (int i = 0; i < d; ++i) {
    const double w = grouped.entries()(i, i).real();
    if (w < 1e-14) continue;
    Vector lv = Vector::Zero(dl), rv = Vector::Zero(dr);
    lv(i / dr) = 1.0;
    rv(i % dr) = 1.0;
    ens.weights.push_back(w);
    ens.components.emplace_back(PureState(cut.left, ldims, std::move(lv)),
                                PureState(cut.right, rdims, std::move(rv)));
  }
  return ens;
}

std::vector<std::string> remove_label(const std::vector<std::string>& v, const std::string& l) {
  std::vector<std::string> out;
  for (const auto& x : v)
    if (x != l) out.push_back(x);
  return out;
}

}  // namespace

BoundReport ree_flag_eval(const DensityMatrix& rho, const std::string& flag, const CutSpec& cut,
                          const OptimizerOpts& opts, const std::optional<MeasurementBasis>& basis) {
  validate_cut(rho.labels(), cut);
  std::optional<MeasurementBasis> fb = basis;
  if (fb) {
    if (fb->subsystem() != flag) throw std::invalid_argument("flag basis targets a different label");
    if (max_abs_diff(dephase(rho, *fb).entries(), rho.entries()) > kStateTol)
      throw std::invalid_argument("flag structure absent in the supplied basis");
  } else {
    fb = detect_flag_basis(rho, flag);
    if (!fb) throw std::invalid_argument("flag structure absent on subsystem " + flag);
  }

  const bool flag_on_left = std::find(cut.left.begin(), cut.left.end(), flag) != cut.left.end();
  CutSpec reduced;
  reduced.left = flag_on_left ? remove_label(cut.left, flag) : cut.left;
  reduced.right = flag_on_left ? cut.right : remove_label(cut.right, flag);
  if ((flag_on_left && reduced.left.empty()) || (!flag_on_left && reduced.right.empty()))
    throw std::invalid_argument("flag subsystem spans a whole side; the state is separable");

  BoundReport report;
  report.direction = Direction::Exact;
  report.certificate_kind = CertificateKind::FlagDecomposition;
  double value = 0.0, hint = 0.0;

  SeparableEnsemble combined;
  combined.cut = cut;
  bool combined_ok = true;
  std::vector<int> flag_dims = {rho.dim_of(flag)};

  for (int j = 0; j < fb->outcome_count(); ++j) {
    MeasurementOutcome out = condition_on(rho, flag, fb->vector(j));
    if (out.probability < 1e-12 || !out.conditional) continue;
    BoundReport child = ree(*out.conditional, reduced, opts.child());
    value += out.probability * child.value;
    hint += out.probability * child.error_hint;
    if (child.direction == Direction::Upper) report.direction = Direction::Upper;

    if (combined_ok && child.ensemble_certificate) {
      const PureState flag_state({flag}, flag_dims, fb->vector(j), Repair::Allow);
      const SeparableEnsemble& ce = *child.ensemble_certificate;
      for (std::size_t c = 0; c < ce.components.size(); ++c) {
        // append the flag factor and restore the cut's label order on that side
        if (flag_on_left) {
          PureState left =
              permute_subsystems(tensor(ce.components[c].first, flag_state), cut.left);
          combined.components.emplace_back(std::move(left), ce.components[c].second);
        } else {
          PureState right =
              permute_subsystems(tensor(ce.components[c].second, flag_state), cut.right);
          combined.components.emplace_back(ce.components[c].first, std::move(right));
        }
        combined.weights.push_back(out.probability * ce.weights[c]);
      }
    } else {
      combined_ok = false;
    }
  }

  report.value = value;
  report.error_hint = report.direction == Direction::Exact ? 0.0 : hint;
  if (combined_ok && !combined.components.empty())
    report.ensemble_certificate = std::move(combined);
  return report;
}

BoundReport ree(const DensityMatrix& rho, const CutSpec& cut, const OptimizerOpts& opts,
                const std::optional<SeparableEnsemble>& known_decomposition) {
  validate_cut(rho.labels(), cut);
  if (rho.dim() > 16)
    throw CapabilityError("ree: total dimension above 16 is not supported");

  // (a) known separable decomposition (either orientation of the same split)
  if (known_decomposition) {
    const bool aligned = same_label_set(known_decomposition->cut.left, cut.left) ||
                         same_label_set(known_decomposition->cut.left, cut.right);
    if (!aligned)
      throw std::invalid_argument("ree: supplied decomposition certifies a different cut");
    if (max_abs_diff(known_decomposition->assemble(rho.labels()).entries(), rho.entries()) > 1e-8)
      throw std::invalid_argument("ree: supplied decomposition does not reproduce the state");
    BoundReport report = BoundReport::exact(0.0, CertificateKind::SeparableEnsembleCert);
    report.ensemble_certificate = *known_decomposition;
    return report;
  }

  // (a') conclusive PPT certificate of separability
  {
    PptVerdict verdict = ppt_check(rho, cut);
    if (verdict.conclusive && !verdict.is_npt) {
      BoundReport report = BoundReport::exact(0.0, CertificateKind::PptSeparable);
      report.ensemble_certificate = diagonal_ensemble(rho, cut);
      if (report.ensemble_certificate)
        report.certificate_kind = CertificateKind::SeparableEnsembleCert;
      return report;
    }
  }

  // (b) pure states: entropy of the reduced state, with the Schmidt-diagonal
  // mixture as the closest separable state
  {
    EighResult dec = eigh(rho.entries());
    const int top = rho.dim() - 1;
    if (dec.eigenvalues(top) >= 1.0 - kStateTol) {
      PureState psi(rho.labels(), rho.dims(), dec.eigenvectors.col(top), Repair::Allow);
      SchmidtData sd = schmidt(psi, cut);
      double value = 0.0;
      SeparableEnsemble cert;
      cert.cut = cut;
      for (std::size_t k = 0; k < sd.coefficients.size(); ++k) {
        const double p = sd.coefficients[k] * sd.coefficients[k];
        if (p > kEigenvalueFloor) value -= p * std::log2(p);
        cert.weights.push_back(p);
        cert.components.emplace_back(sd.left_vectors[k], sd.right_vectors[k]);
      }
      BoundReport report = BoundReport::exact(value, CertificateKind::PureClosedForm);
      report.ensemble_certificate = std::move(cert);
      return report;
    }
  }

  // (c) flag states: orthogonal pure markers on one subsystem
  for (const auto& label : rho.labels()) {
    if (auto basis = detect_flag_basis(rho, label)) {
      const bool on_left = std::find(cut.left.begin(), cut.left.end(), label) != cut.left.end();
      const bool alone = on_left ? cut.left.size() == 1 : cut.right.size() == 1;
      if (alone) {
        // quantum-classical across the cut itself: separable
        BoundReport report = BoundReport::exact(0.0, CertificateKind::SeparableEnsembleCert);
        SeparableEnsemble ens;
        ens.cut = cut;
        std::vector<int> flag_dims = {rho.dim_of(label)};
        const auto& other = on_left ? cut.right : cut.left;
        std::vector<int> other_dims = dims_of(rho, other);
        for (int j = 0; j < basis->outcome_count(); ++j) {
          MeasurementOutcome out = condition_on(rho, label, basis->vector(j));
          if (out.probability < 1e-12 || !out.conditional) continue;
          const DensityMatrix cond = permute_subsystems(*out.conditional, other);
          EighResult dec = eigh(cond.entries());
          const PureState flag_state({label}, flag_dims, basis->vector(j), Repair::Allow);
          for (Eigen::Index e = 0; e < dec.eigenvalues.size(); ++e) {
            const double w = out.probability * std::max(dec.eigenvalues(e), 0.0);
            if (w < 1e-14) continue;
            PureState other_state(other, other_dims, dec.eigenvectors.col(e), Repair::Allow);
            ens.weights.push_back(w);
            if (on_left)
              ens.components.emplace_back(flag_state, std::move(other_state));
            else
              ens.components.emplace_back(std::move(other_state), flag_state);
          }
        }
        report.ensemble_certificate = std::move(ens);
        return report;
      }
      return ree_flag_eval(rho, label, cut, opts, basis);
    }
  }

  // (d) numeric upper bound
  return ree_numeric(rho, cut, opts);
}

double discord_sep_bound(int d_x, int d_y) {
  if (d_x < 1 || d_y < 1) throw std::invalid_argument("discord_sep_bound: dimensions must be >= 1");
  const double dd = static_cast<double>(d_x) * d_y;
  return (1.0 - 1.0 / (dd * dd)) * std::log2(static_cast<double>(d_y));
}

}  // namespace qcorr
