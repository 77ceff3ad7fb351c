#include "qcorr/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qcorr {
namespace {

double xlog2x(double x) {
  if (x <= kEigenvalueFloor) return 0.0;
  return x * std::log2(x);
}

}  // namespace

double entropy_of_spectrum(const Eigen::VectorXd& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) s -= xlog2x(eigenvalues(i));
  return s;
}

double entropy_of_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return entropy_of_spectrum(solver.eigenvalues());
}

double von_neumann_entropy(const DensityMatrix& rho) { return entropy_of_hermitian(rho.entries()); }

RelEntropyValue relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims() || rho.labels() != sigma.labels())
    throw std::invalid_argument("relative_entropy: states live on different systems");

  EighResult sig = eigh(sigma.entries());
  const Matrix t = sig.eigenvectors.adjoint() * rho.entries() * sig.eigenvectors;

  double cross = 0.0;        // Tr(rho log2 sigma)
  double outside = 0.0;      // weight of rho outside sigma's support
  for (Eigen::Index i = 0; i < sig.eigenvalues.size(); ++i) {
    const double s = sig.eigenvalues(i);
    const double w = std::max(t(i, i).real(), 0.0);
    if (s < kEigenvalueFloor)
      outside += w;
    else
      cross += w * std::log2(s);
  }
  if (outside > kStateTol) return RelEntropyValue::inf();

  double value = -von_neumann_entropy(rho) - cross;
  if (value < 0.0) {
    if (value < -kRepairTol)
      throw std::runtime_error("relative_entropy: negative value beyond tolerance");
    value = 0.0;
  }
  return RelEntropyValue{value, false};
}

double relative_entropy_penalized(const Matrix& rho, double entropy_rho, const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (sigma + sigma.adjoint()));
  const Eigen::VectorXd& vals = solver.eigenvalues();
  const Matrix t = solver.eigenvectors().adjoint() * rho * solver.eigenvectors();

  double cross = 0.0;
  double outside = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const double s = vals(i);
    const double w = std::max(t(i, i).real(), 0.0);
    if (s < kEigenvalueFloor)
      outside += w;
    else
      cross += w * std::log2(s);
  }
  if (outside > kStateTol) return 1e4 + 1e4 * outside;
  return std::max(-entropy_rho - cross, 0.0);
}

double mutual_information(const DensityMatrix& rho, const CutSpec& cut) {
  validate_cut(rho.labels(), cut);
  const DensityMatrix left = partial_trace(rho, cut.left);
  const DensityMatrix right = partial_trace(rho, cut.right);
  const double value =
      von_neumann_entropy(left) + von_neumann_entropy(right) - von_neumann_entropy(rho);
  return std::max(value, 0.0);
}

double conditional_entropy(const DensityMatrix& rho, const std::vector<std::string>& of,
                           const std::vector<std::string>& given) {
  std::set<std::string> seen;
  for (const auto& l : of)
    if (!seen.insert(l).second) throw std::invalid_argument("conditional_entropy: duplicate label");
  for (const auto& l : given)
    if (!seen.insert(l).second)
      throw std::invalid_argument("conditional_entropy: overlapping label sets");
  std::vector<std::string> both;
  for (const auto& l : rho.labels())
    if (seen.count(l)) both.push_back(l);
  if (both.size() != of.size() + given.size())
    throw std::invalid_argument("conditional_entropy: unknown label");

  const double s_joint = von_neumann_entropy(partial_trace(rho, both));
  const double s_given = von_neumann_entropy(partial_trace(rho, given));
  return s_joint - s_given;
}

}  // namespace qcorr
