#pragma once

#include <cstdint>
#include <random>

#include "qcorr/state.hpp"

namespace qcorr {

/// Deterministic random source. Gaussian draws use an explicit Box-Muller
/// transform over the mt19937_64 stream so sequences do not depend on the
/// standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  /// Stream for instance `index` derived from a master seed; instances are
  /// independent of evaluation order.
  static Rng derived(std::uint64_t master_seed, std::uint64_t index);

  double uniform();   // [0, 1)
  double gaussian();  // standard normal
  Complex complex_gaussian();
  std::uint64_t integer();

  Vector gaussian_vector(int dim);
  PureState random_pure(const std::vector<std::string>& labels, const std::vector<int>& dims);
  /// Hilbert-Schmidt style draw: G G^dag normalized, G with `rank` columns
  /// (full rank when rank == 0).
  DensityMatrix random_density(const std::vector<std::string>& labels, const std::vector<int>& dims,
                               int rank = 0);
  /// Haar-like unitary from the QR decomposition of a Gaussian matrix with
  /// the standard phase fix.
  Matrix random_unitary(int dim);
  std::vector<double> simplex_weights(int count);

private:
  std::mt19937_64 gen_;
};

}  // namespace qcorr
