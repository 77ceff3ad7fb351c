#pragma once

#include <array>

#include "qcorr/state.hpp"

namespace qcorr {

// Minimal partial-transpose eigenvalue below which a state is declared NPT.
inline constexpr double kNptThreshold = -1e-9;

/// Schmidt decomposition of a bipartite pure state: coefficients descending,
/// squares summing to one, with matching orthonormal vectors on both sides.
struct SchmidtData {
  std::vector<double> coefficients;
  std::vector<PureState> left_vectors;
  std::vector<PureState> right_vectors;
};

/// Outcome of the Peres partial-transpose test on one cut. PPT certifies
/// separability only when `conclusive` (2x2 and 2x3 cuts); NPT always
/// certifies entanglement, with the minimal eigenvector as witness.
struct PptVerdict {
  double min_eigenvalue;
  bool is_npt;
  bool conclusive;
  Vector witness_vector;
};

/// Pure state mixed with white noise, rho_p = p |psi><psi| + (1-p) 1/d_tot,
/// together with its critical separability weight across a cut.
struct VtFamily {
  PureState psi;
  CutSpec cut;
  int d_tot;
  double p = 0.0;
  double p_cr = 1.0;  // 1 / (1 + a1 a2 d_tot)
};

/// Admissibility survey of a tripartite pure state for noise-admixture
/// distribution protocols: products of the two largest Schmidt coefficients
/// per single-label cut, in label order. The state is admissible when the
/// first label's product strictly exceeds both others.
struct AdmissibilityReport {
  std::array<double, 3> pair_products;
  double max_other;        // M = max of products 1 and 2
  double critical_weight;  // 1 / (1 + M d_tot)
  bool admissible;
};

SchmidtData schmidt(const PureState& psi, const CutSpec& cut);

PptVerdict ppt_check(const DensityMatrix& rho, const CutSpec& cut);

VtFamily vt_threshold(const PureState& psi, const CutSpec& cut);

DensityMatrix vt_family_state(const VtFamily& family);

AdmissibilityReport example1_admissible(const PureState& psi_abc);

}  // namespace qcorr
