#pragma once

#include "qcorr/state.hpp"

namespace qcorr {

// All entropic quantities are in bits (log base 2).

// Eigenvalues below this floor are treated as exact zeros inside logarithms;
// support inclusion is decided at kStateTol.
inline constexpr double kEigenvalueFloor = 1e-12;

/// Quantum relative entropy value. The +infinity case (support violation) is
/// an explicit marker so that downstream inequality checks can treat it
/// symbolically instead of comparing against a large float.
struct RelEntropyValue {
  double bits = 0.0;
  bool infinite = false;

  static RelEntropyValue inf() { return {0.0, true}; }
};

double von_neumann_entropy(const DensityMatrix& rho);

/// Entropy of the eigenvalue list of a Hermitian PSD matrix that may not be
/// wrapped in a DensityMatrix (internal fast paths, partial transposes of
/// blocks and so on).
double entropy_of_hermitian(const Matrix& m);
double entropy_of_spectrum(const Eigen::VectorXd& eigenvalues);

RelEntropyValue relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Raw-route relative entropy used by optimizers: S(rho) is precomputed once
/// and a finite penalty is returned instead of the infinity marker when rho
/// has weight outside sigma's support.
double relative_entropy_penalized(const Matrix& rho, double entropy_rho, const Matrix& sigma);

double mutual_information(const DensityMatrix& rho, const CutSpec& cut);

/// S(of|given) = S(rho_{of+given}) - S(rho_given); may be negative.
double conditional_entropy(const DensityMatrix& rho, const std::vector<std::string>& of,
                           const std::vector<std::string>& given);

}  // namespace qcorr
