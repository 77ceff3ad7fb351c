#include "qcorr/random.hpp"

#include <cmath>
#include <numbers>

namespace qcorr {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

Rng Rng::derived(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(splitmix64(master_seed ^ splitmix64(index + 0x51ed2701)));
}

double Rng::uniform() {
  // 53-bit mantissa in [0, 1)
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::integer() { return gen_(); }

double Rng::gaussian() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im) / std::sqrt(2.0);
}

Vector Rng::gaussian_vector(int dim) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = complex_gaussian();
  return v;
}

PureState Rng::random_pure(const std::vector<std::string>& labels, const std::vector<int>& dims) {
  int d = 1;
  for (int k : dims) d *= k;
  Vector v = gaussian_vector(d);
  v /= v.norm();
  return PureState(labels, dims, std::move(v));
}

DensityMatrix Rng::random_density(const std::vector<std::string>& labels,
                                  const std::vector<int>& dims, int rank) {
  int d = 1;
  for (int k : dims) d *= k;
  const int r = rank > 0 ? rank : d;
  Matrix g(d, r);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < r; ++j) g(i, j) = complex_gaussian();
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(labels, dims, std::move(rho), Repair::Allow);
}

Matrix Rng::random_unitary(int dim) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = complex_gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex rjj = r(j, j);
    const double a = std::abs(rjj);
    const Complex phase = a > 0 ? rjj / a : Complex(1, 0);
    q.col(j) *= phase;
  }
  return q;
}

std::vector<double> Rng::simplex_weights(int count) {
  std::vector<double> w(count);
  double total = 0.0;
  for (int i = 0; i < count; ++i) {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    w[i] = -std::log(u);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

}  // namespace qcorr
