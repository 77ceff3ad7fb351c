#pragma once

#include <algorithm>
#include <functional>
#include <vector>

namespace qcorr {

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  double improvement = 0.0;  // start value minus final value
};

/// Derivative-free Nelder-Mead minimization. Deterministic for a fixed start
/// point; stops when the simplex value spread falls below `tol` or after
/// `max_iterations` reflections.
inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x0, double step, double tol,
                                 int max_iterations) {
  const int n = static_cast<int>(x0.size());
  SimplexResult result;

  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (int i = 1; i <= n; ++i) pts[i][i - 1] += step;
  for (int i = 0; i <= n; ++i) {
    fv[i] = f(pts[i]);
    ++result.evaluations;
  }
  const double f_start = fv[0];

  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  for (int iter = 0; iter < max_iterations; ++iter) {
    // order: pts[order[0]] best
    std::vector<int> order(n + 1);
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = order[0], worst = order[n], second_worst = order[n - 1];

    if (fv[worst] - fv[best] < tol) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (int i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (int k = 0; k < n; ++k) centroid[k] += pts[i][k];
    }
    for (int k = 0; k < n; ++k) centroid[k] /= n;

    for (int k = 0; k < n; ++k) xr[k] = centroid[k] + (centroid[k] - pts[worst][k]);
    const double fr = f(xr);
    ++result.evaluations;

    if (fr < fv[best]) {
      for (int k = 0; k < n; ++k) xe[k] = centroid[k] + 2.0 * (centroid[k] - pts[worst][k]);
      const double fe = f(xe);
      ++result.evaluations;
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second_worst]) {
      pts[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      const std::vector<double>& base = outside ? xr : pts[worst];
      for (int k = 0; k < n; ++k) xc[k] = centroid[k] + 0.5 * (base[k] - centroid[k]);
      const double fc = f(xc);
      ++result.evaluations;
      if (fc < std::min(fr, fv[worst])) {
        pts[worst] = xc;
        fv[worst] = fc;
      } else {
        // shrink toward the best point
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (int k = 0; k < n; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
          fv[i] = f(pts[i]);
          ++result.evaluations;
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  result.x = pts[best];
  result.value = fv[best];
  result.improvement = std::max(f_start - result.value, 0.0);
  return result;
}

}  // namespace qcorr
