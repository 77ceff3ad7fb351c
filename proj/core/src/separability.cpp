#include "qcorr/separability.hpp"

#include <algorithm>
#include <cmath>

namespace qcorr {
namespace {

std::vector<std::string> join(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<int> dims_of(const PureState& psi, const std::vector<std::string>& side) {
  std::vector<int> out;
  for (const auto& l : side) {
    auto it = std::find(psi.labels().begin(), psi.labels().end(), l);
    out.push_back(psi.dims()[it - psi.labels().begin()]);
  }
  return out;
}

}  // namespace

SchmidtData schmidt(const PureState& psi, const CutSpec& cut) {
  validate_cut(psi.labels(), cut);
  const PureState grouped = permute_subsystems(psi, join(cut.left, cut.right));

  std::vector<int> ldims = dims_of(psi, cut.left);
  std::vector<int> rdims = dims_of(psi, cut.right);
  int dl = 1, dr = 1;
  for (int d : ldims) dl *= d;
  for (int d : rdims) dr *= d;

  // amplitudes reshaped row-major: row = left index, column = right index
  Matrix m(dl, dr);
  for (int i = 0; i < dl; ++i)
    for (int j = 0; j < dr; ++j) m(i, j) = grouped.amplitudes()(i * dr + j);

  // eigendecomposition of the reduced state plus back-substitution; rank is
  // bounded by the smaller side, eigenvalues below noise level are zeros
  EighResult red = eigh(m * m.adjoint());
  SchmidtData out;
  const int max_rank = std::min(dl, dr);
  for (int k = dl - 1; k >= 0; --k) {  // descending
    if (static_cast<int>(out.coefficients.size()) >= max_rank) break;
    const double lambda = std::max(red.eigenvalues(k), 0.0);
    if (lambda <= 1e-13) continue;
    const double a = std::sqrt(lambda);
    Vector u = red.eigenvectors.col(k);
    Vector r = (m.transpose() * u.conjugate()) / a;
    r.normalize();
    out.coefficients.push_back(a);
    out.left_vectors.emplace_back(cut.left, ldims, std::move(u), Repair::Allow);
    out.right_vectors.emplace_back(cut.right, rdims, std::move(r), Repair::Allow);
  }
  return out;
}

PptVerdict ppt_check(const DensityMatrix& rho, const CutSpec& cut) {
  validate_cut(rho.labels(), cut);
  const Matrix pt = partial_transpose(rho, cut.left);
  EighResult dec = eigh(pt);
  PptVerdict verdict;
  verdict.min_eigenvalue = dec.eigenvalues(0);
  verdict.is_npt = verdict.min_eigenvalue < kNptThreshold;
  const int dl = side_dim(rho, cut.left);
  const int dr = side_dim(rho, cut.right);
  verdict.conclusive = (dl == 2 && dr <= 3) || (dl <= 3 && dr == 2);
  verdict.witness_vector = dec.eigenvectors.col(0);
  return verdict;
}

VtFamily vt_threshold(const PureState& psi, const CutSpec& cut) {
  SchmidtData sd = schmidt(psi, cut);
  const double a1 = sd.coefficients.empty() ? 0.0 : sd.coefficients[0];
  const double a2 = sd.coefficients.size() > 1 ? sd.coefficients[1] : 0.0;
  VtFamily family{psi, cut, psi.dim(), 0.0, 1.0};
  family.p_cr = 1.0 / (1.0 + a1 * a2 * family.d_tot);
  return family;
}

DensityMatrix vt_family_state(const VtFamily& family) {
  if (family.p < 0.0 || family.p > 1.0)
    throw std::invalid_argument("vt_family_state: mixing weight must lie in [0, 1]");
  const int d = family.psi.dim();
  Matrix m = family.p * (family.psi.amplitudes() * family.psi.amplitudes().adjoint());
  m += Matrix::Identity(d, d) * ((1.0 - family.p) / d);
  return DensityMatrix(family.psi.labels(), family.psi.dims(), std::move(m));
}

AdmissibilityReport example1_admissible(const PureState& psi_abc) {
  if (psi_abc.labels().size() != 3)
    throw std::invalid_argument("admissibility survey requires a tripartite state");
  AdmissibilityReport report{};
  for (int k = 0; k < 3; ++k) {
    const CutSpec cut = make_cut(psi_abc, {psi_abc.labels()[k]});
    SchmidtData sd = schmidt(psi_abc, cut);
    const double a1 = sd.coefficients.empty() ? 0.0 : sd.coefficients[0];
    const double a2 = sd.coefficients.size() > 1 ? sd.coefficients[1] : 0.0;
    report.pair_products[k] = a1 * a2;
  }
  report.max_other = std::max(report.pair_products[1], report.pair_products[2]);
  report.critical_weight = 1.0 / (1.0 + report.max_other * psi_abc.dim());
  report.admissible = report.pair_products[0] > report.max_other;
  return report;
}

}  // namespace qcorr
