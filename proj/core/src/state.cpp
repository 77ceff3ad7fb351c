#include "qcorr/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace qcorr {
namespace {

void check_layout(const std::vector<std::string>& labels, const std::vector<int>& dims,
                  Eigen::Index size) {
  if (labels.size() != dims.size()) throw std::invalid_argument("labels/dims size mismatch");
  if (labels.empty()) throw std::invalid_argument("at least one subsystem required");
  std::set<std::string> seen;
  long total = 1;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k].empty()) throw std::invalid_argument("empty subsystem label");
    if (!seen.insert(labels[k]).second)
      throw std::invalid_argument("duplicate subsystem label: " + labels[k]);
    if (dims[k] < 2) throw std::invalid_argument("subsystem dimension must be >= 2");
    total *= dims[k];
  }
  if (total != size) throw std::invalid_argument("entry size does not match subsystem dimensions");
}

std::vector<int> label_positions(const std::vector<std::string>& state_labels,
                                 const std::vector<std::string>& subset) {
  std::vector<int> pos;
  pos.reserve(subset.size());
  for (const auto& l : subset) {
    auto it = std::find(state_labels.begin(), state_labels.end(), l);
    if (it == state_labels.end()) throw std::invalid_argument("unknown subsystem label: " + l);
    pos.push_back(static_cast<int>(it - state_labels.begin()));
  }
  return pos;
}

}  // namespace

IndexMap::IndexMap(const std::vector<int>& dims) : dims_(dims), strides_(dims.size(), 1) {
  for (int d : dims_) total_ *= d;
  int running = total_;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    running /= dims_[k];
    strides_[k] = running;
  }
}

void IndexMap::decode(int index, int* digits) const {
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    digits[k] = (index / strides_[k]) % dims_[k];
  }
}

int IndexMap::encode(const int* digits) const {
  int idx = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) idx += digits[k] * strides_[k];
  return idx;
}

PureState::PureState(std::vector<std::string> labels, std::vector<int> dims, Vector amplitudes,
                     Repair repair)
    : labels_(std::move(labels)), dims_(std::move(dims)), amps_(std::move(amplitudes)) {
  check_layout(labels_, dims_, amps_.size());
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    if (repair == Repair::Allow && std::abs(norm - 1.0) <= kRepairTol && norm > 0) {
      amps_ /= norm;
    } else {
      throw std::invalid_argument("pure state amplitudes are not normalized");
    }
  }
}

DensityMatrix PureState::projector() const {
  Matrix m = amps_ * amps_.adjoint();
  return DensityMatrix(labels_, dims_, std::move(m));
}

DensityMatrix::DensityMatrix(std::vector<std::string> labels, std::vector<int> dims, Matrix entries,
                             Repair repair)
    : labels_(std::move(labels)), dims_(std::move(dims)), m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("density matrix must be square");
  check_layout(labels_, dims_, m_.rows());

  const double herm_err = max_abs_diff(m_, m_.adjoint());
  const double trace_err = std::abs(m_.trace().real() - 1.0) + std::abs(m_.trace().imag());
  double min_eig = 0.0;
  {
    Matrix h = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    min_eig = solver.eigenvalues().minCoeff();
  }

  const bool ok = herm_err <= kStateTol && trace_err <= kStateTol && min_eig >= -kStateTol;
  if (ok) return;

  const bool repairable =
      herm_err <= kRepairTol && trace_err <= kRepairTol && min_eig >= -kRepairTol;
  if (repair != Repair::Allow || !repairable) {
    std::ostringstream msg;
    msg << "invalid density matrix: hermiticity error " << herm_err << ", trace error "
        << trace_err << ", min eigenvalue " << min_eig;
    throw std::invalid_argument(msg.str());
  }

  // Project back onto the valid set: symmetrize, clip negative eigenvalues,
  // renormalize the trace.
  Matrix h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  Eigen::VectorXd vals = solver.eigenvalues().cwiseMax(0.0);
  Matrix repaired =
      solver.eigenvectors() * vals.asDiagonal() * solver.eigenvectors().adjoint();
  const double tr = repaired.trace().real();
  if (tr <= 0) throw std::invalid_argument("density matrix repair failed: nonpositive trace");
  m_ = repaired / tr;
}

bool DensityMatrix::has_label(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

int DensityMatrix::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::invalid_argument("unknown subsystem label: " + label);
  return static_cast<int>(it - labels_.begin());
}

int DensityMatrix::dim_of(const std::string& label) const { return dims_[index_of(label)]; }

UnitaryOp::UnitaryOp(std::vector<std::string> labels_in, std::vector<int> dims_in, Matrix entries_in)
    : labels(std::move(labels_in)), dims(std::move(dims_in)), entries(std::move(entries_in)) {
  if (entries.rows() != entries.cols()) throw std::invalid_argument("unitary must be square");
  check_layout(labels, dims, entries.rows());
  Matrix should_be_id = entries * entries.adjoint();
  should_be_id -= Matrix::Identity(entries.rows(), entries.cols());
  if (should_be_id.cwiseAbs().maxCoeff() > kStateTol)
    throw std::invalid_argument("operator is not unitary within tolerance");
}

EighResult eigh(const Matrix& m, double hermiticity_tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigh: matrix must be square");
  if (max_abs_diff(m, m.adjoint()) > hermiticity_tol)
    throw std::invalid_argument("eigh: matrix is not Hermitian within tolerance");
  Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigh: decomposition failed");
  return EighResult{solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

template <typename S>
std::pair<std::vector<std::string>, std::vector<int>> concat_layout(const S& a, const S& b) {
  std::vector<std::string> labels = a.labels();
  std::vector<int> dims = a.dims();
  for (std::size_t k = 0; k < b.labels().size(); ++k) {
    if (std::find(labels.begin(), labels.end(), b.labels()[k]) != labels.end())
      throw std::invalid_argument("tensor: label collision on " + b.labels()[k]);
    labels.push_back(b.labels()[k]);
    dims.push_back(b.dims()[k]);
  }
  return {std::move(labels), std::move(dims)};
}

}  // namespace

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  auto [labels, dims] = concat_layout(a, b);
  const int da = a.dim(), db = b.dim();
  Matrix out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a.entries()(i, j) * b.entries();
  return DensityMatrix(std::move(labels), std::move(dims), std::move(out));
}

PureState tensor(const PureState& a, const PureState& b) {
  auto [labels, dims] = concat_layout(a, b);
  const int da = a.dim(), db = b.dim();
  Vector out(da * db);
  for (int i = 0; i < da; ++i) out.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  return PureState(std::move(labels), std::move(dims), std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be nonempty");
  std::vector<int> keep_pos = label_positions(rho.labels(), keep);

  const int n = rho.subsystems();
  std::vector<bool> kept(n, false);
  for (int p : keep_pos) kept[p] = true;

  // kept subsystems preserve the state's label order
  std::vector<std::string> out_labels;
  std::vector<int> out_dims, out_pos, tr_pos, tr_dims;
  for (int k = 0; k < n; ++k) {
    if (kept[k]) {
      out_labels.push_back(rho.labels()[k]);
      out_dims.push_back(rho.dims()[k]);
      out_pos.push_back(k);
    } else {
      tr_pos.push_back(k);
      tr_dims.push_back(rho.dims()[k]);
    }
  }
  if (tr_pos.empty())
    return rho;

  IndexMap full(rho.dims());
  IndexMap kept_map(out_dims);
  IndexMap traced_map(tr_dims.empty() ? std::vector<int>{} : tr_dims);
  const int dk = kept_map.total();
  const int dt = tr_dims.empty() ? 1 : traced_map.total();

  Matrix out = Matrix::Zero(dk, dk);
  std::vector<int> di(n), dj(n), dr(out_pos.size()), dc(out_pos.size()), dt_digits(tr_pos.size());
  for (int r = 0; r < dk; ++r) {
    kept_map.decode(r, dr.data());
    for (int c = 0; c < dk; ++c) {
      kept_map.decode(c, dc.data());
      Complex sum = 0;
      for (int t = 0; t < dt; ++t) {
        if (!tr_pos.empty()) traced_map.decode(t, dt_digits.data());
        for (std::size_t k = 0; k < out_pos.size(); ++k) {
          di[out_pos[k]] = dr[k];
          dj[out_pos[k]] = dc[k];
        }
        for (std::size_t k = 0; k < tr_pos.size(); ++k) {
          di[tr_pos[k]] = dt_digits[k];
          dj[tr_pos[k]] = dt_digits[k];
        }
        sum += rho.entries()(full.encode(di.data()), full.encode(dj.data()));
      }
      out(r, c) = sum;
    }
  }
  return DensityMatrix(std::move(out_labels), std::move(out_dims), std::move(out), Repair::Allow);
}

Matrix partial_transpose(const Matrix& m, const std::vector<std::string>& labels,
                         const std::vector<int>& dims, const std::vector<std::string>& side) {
  std::vector<int> side_pos = label_positions(labels, side);
  std::vector<bool> transposed(labels.size(), false);
  for (int p : side_pos) transposed[p] = true;

  IndexMap full(dims);
  const int d = full.total();
  if (m.rows() != d || m.cols() != d)
    throw std::invalid_argument("partial_transpose: matrix does not match dimensions");
  const int n = static_cast<int>(labels.size());
  Matrix out(d, d);
  std::vector<int> di(n), dj(n), ti(n), tj(n);
  for (int i = 0; i < d; ++i) {
    full.decode(i, di.data());
    for (int j = 0; j < d; ++j) {
      full.decode(j, dj.data());
      for (int k = 0; k < n; ++k) {
        ti[k] = transposed[k] ? dj[k] : di[k];
        tj[k] = transposed[k] ? di[k] : dj[k];
      }
      out(full.encode(ti.data()), full.encode(tj.data())) = m(i, j);
    }
  }
  return out;
}

Matrix partial_transpose(const DensityMatrix& rho, const std::vector<std::string>& side) {
  return partial_transpose(rho.entries(), rho.labels(), rho.dims(), side);
}

Matrix embed_operator(const Matrix& op, const std::vector<std::string>& op_labels,
                      const std::vector<int>& op_dims, const std::vector<std::string>& state_labels,
                      const std::vector<int>& state_dims) {
  std::vector<int> pos = label_positions(state_labels, op_labels);
  for (std::size_t k = 0; k < pos.size(); ++k) {
    if (state_dims[pos[k]] != op_dims[k])
      throw std::invalid_argument("operator dimension mismatch on label " + op_labels[k]);
  }

  IndexMap full(state_dims);
  IndexMap sub(op_dims);
  const int d = full.total();
  const int n = static_cast<int>(state_dims.size());
  Matrix out = Matrix::Zero(d, d);
  std::vector<int> di(n), dj(n), si(pos.size()), sj(pos.size());
  for (int i = 0; i < d; ++i) {
    full.decode(i, di.data());
    for (int j = 0; j < d; ++j) {
      full.decode(j, dj.data());
      bool rest_equal = true;
      for (int k = 0; k < n && rest_equal; ++k) {
        if (std::find(pos.begin(), pos.end(), k) == pos.end() && di[k] != dj[k])
          rest_equal = false;
      }
      if (!rest_equal) continue;
      for (std::size_t k = 0; k < pos.size(); ++k) {
        si[k] = di[pos[k]];
        sj[k] = dj[pos[k]];
      }
      out(i, j) = op(sub.encode(si.data()), sub.encode(sj.data()));
    }
  }
  return out;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryOp& u) {
  Matrix full = embed_operator(u.entries, u.labels, u.dims, rho.labels(), rho.dims());
  Matrix out = full * rho.entries() * full.adjoint();
  return DensityMatrix(rho.labels(), rho.dims(), std::move(out), Repair::Allow);
}

PureState apply_unitary(const PureState& psi, const UnitaryOp& u) {
  Matrix full = embed_operator(u.entries, u.labels, u.dims, psi.labels(), psi.dims());
  Vector out = full * psi.amplitudes();
  return PureState(psi.labels(), psi.dims(), std::move(out), Repair::Allow);
}

namespace {

std::vector<int> permutation_positions(const std::vector<std::string>& old_labels,
                                       const std::vector<std::string>& new_order) {
  if (new_order.size() != old_labels.size())
    throw std::invalid_argument("permute_subsystems: order must list every label exactly once");
  std::vector<int> pos = label_positions(old_labels, new_order);
  std::set<int> unique(pos.begin(), pos.end());
  if (unique.size() != pos.size())
    throw std::invalid_argument("permute_subsystems: order is not a permutation");
  return pos;
}

// map from new flat index to old flat index
std::vector<int> permutation_index_map(const std::vector<int>& old_dims,
                                       const std::vector<int>& pos) {
  std::vector<int> new_dims(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k) new_dims[k] = old_dims[pos[k]];
  IndexMap old_map(old_dims), new_map(new_dims);
  const int d = old_map.total();
  std::vector<int> map(d);
  std::vector<int> nd(pos.size()), od(pos.size());
  for (int i = 0; i < d; ++i) {
    new_map.decode(i, nd.data());
    for (std::size_t k = 0; k < pos.size(); ++k) od[pos[k]] = nd[k];
    map[i] = old_map.encode(od.data());
  }
  return map;
}

}  // namespace

DensityMatrix permute_subsystems(const DensityMatrix& rho, const std::vector<std::string>& new_order) {
  std::vector<int> pos = permutation_positions(rho.labels(), new_order);
  std::vector<int> new_dims(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k) new_dims[k] = rho.dims()[pos[k]];
  std::vector<int> map = permutation_index_map(rho.dims(), pos);
  const int d = rho.dim();
  Matrix out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = rho.entries()(map[i], map[j]);
  return DensityMatrix(new_order, std::move(new_dims), std::move(out));
}

PureState permute_subsystems(const PureState& psi, const std::vector<std::string>& new_order) {
  std::vector<int> pos = permutation_positions(psi.labels(), new_order);
  std::vector<int> new_dims(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k) new_dims[k] = psi.dims()[pos[k]];
  std::vector<int> map = permutation_index_map(psi.dims(), pos);
  Vector out(psi.dim());
  for (int i = 0; i < psi.dim(); ++i) out(i) = psi.amplitudes()(map[i]);
  return PureState(new_order, std::move(new_dims), std::move(out));
}

CutSpec make_cut(const DensityMatrix& rho, const std::vector<std::string>& left) {
  std::vector<int> pos = label_positions(rho.labels(), left);
  std::set<int> left_set(pos.begin(), pos.end());
  if (left_set.size() != pos.size()) throw std::invalid_argument("cut: duplicate left label");
  CutSpec cut;
  for (int k = 0; k < rho.subsystems(); ++k) {
    if (left_set.count(k))
      cut.left.push_back(rho.labels()[k]);
    else
      cut.right.push_back(rho.labels()[k]);
  }
  if (cut.left.empty() || cut.right.empty())
    throw std::invalid_argument("cut: both sides must be nonempty");
  return cut;
}

CutSpec make_cut(const PureState& psi, const std::vector<std::string>& left) {
  return make_cut(psi.projector(), left);
}

void validate_cut(const std::vector<std::string>& state_labels, const CutSpec& cut) {
  if (cut.left.empty() || cut.right.empty())
    throw std::invalid_argument("cut: both sides must be nonempty");
  std::set<std::string> seen;
  for (const auto& l : cut.left)
    if (!seen.insert(l).second) throw std::invalid_argument("cut: duplicate label " + l);
  for (const auto& l : cut.right)
    if (!seen.insert(l).second) throw std::invalid_argument("cut: overlapping sides on " + l);
  if (seen.size() != state_labels.size())
    throw std::invalid_argument("cut: sides must cover every subsystem");
  for (const auto& l : state_labels)
    if (!seen.count(l)) throw std::invalid_argument("cut: unknown subsystem label " + l);
}

int side_dim(const DensityMatrix& rho, const std::vector<std::string>& side) {
  int d = 1;
  for (const auto& l : side) d *= rho.dim_of(l);
  return d;
}

std::string cut_to_string(const CutSpec& cut) {
  std::string s;
  for (std::size_t k = 0; k < cut.left.size(); ++k) {
    if (k) s += ",";
    s += cut.left[k];
  }
  s += ":";
  for (std::size_t k = 0; k < cut.right.size(); ++k) {
    if (k) s += ",";
    s += cut.right[k];
  }
  return s;
}

MeasurementOutcome condition_on(const DensityMatrix& rho, const std::string& label,
                                const Vector& outcome_vector) {
  const int pos = rho.index_of(label);
  const int m = rho.dims()[pos];
  if (outcome_vector.size() != m)
    throw std::invalid_argument("condition_on: outcome vector dimension mismatch");
  if (rho.subsystems() == 1)
    throw std::invalid_argument("condition_on: cannot condition away the only subsystem");

  std::vector<std::string> rest_labels;
  std::vector<int> rest_dims;
  for (int k = 0; k < rho.subsystems(); ++k) {
    if (k == pos) continue;
    rest_labels.push_back(rho.labels()[k]);
    rest_dims.push_back(rho.dims()[k]);
  }

  IndexMap full(rho.dims());
  IndexMap rest(rest_dims);
  const int dr = rest.total();
  const int n = rho.subsystems();
  Matrix block = Matrix::Zero(dr, dr);
  std::vector<int> di(n), dj(n), ri(n - 1), rj(n - 1);
  for (int r = 0; r < dr; ++r) {
    rest.decode(r, ri.data());
    for (int c = 0; c < dr; ++c) {
      rest.decode(c, rj.data());
      Complex sum = 0;
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
          int kk = 0;
          for (int k = 0; k < n; ++k) {
            if (k == pos) {
              di[k] = a;
              dj[k] = b;
            } else {
              di[k] = ri[kk];
              dj[k] = rj[kk];
              ++kk;
            }
          }
          sum += std::conj(outcome_vector(a)) * rho.entries()(full.encode(di.data()), full.encode(dj.data())) *
                 outcome_vector(b);
        }
      }
      block(r, c) = sum;
    }
  }
  const double p = block.trace().real();
  MeasurementOutcome out;
  out.probability = std::max(p, 0.0);
  if (p > 1e-12) {
    out.conditional =
        DensityMatrix(std::move(rest_labels), std::move(rest_dims), block / p, Repair::Allow);
  }
  return out;
}

std::vector<MeasurementOutcome> measure_computational(const DensityMatrix& rho,
                                                      const std::string& label) {
  const int m = rho.dim_of(label);
  std::vector<MeasurementOutcome> outcomes;
  outcomes.reserve(m);
  for (int a = 0; a < m; ++a) {
    Vector v = Vector::Zero(m);
    v(a) = 1.0;
    outcomes.push_back(condition_on(rho, label, v));
  }
  return outcomes;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  return (a - b).cwiseAbs().maxCoeff();
}

double fidelity_with_pure(const DensityMatrix& rho, const PureState& psi) {
  if (rho.dim() != psi.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  const Complex f = (psi.amplitudes().adjoint() * rho.entries() * psi.amplitudes())(0);
  return std::clamp(f.real(), 0.0, 1.0 + 1e-12);
}

Matrix complete_orthonormal(int dim, const std::vector<std::pair<int, Vector>>& fixed_columns) {
  Matrix u = Matrix::Zero(dim, dim);
  std::vector<bool> used(dim, false);
  std::vector<Vector> chosen;
  for (const auto& [pos, col] : fixed_columns) {
    if (pos < 0 || pos >= dim || used[pos])
      throw std::invalid_argument("complete_orthonormal: bad column position");
    if (std::abs(col.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("complete_orthonormal: fixed column is not normalized");
    used[pos] = true;
    u.col(pos) = col;
    chosen.push_back(col);
  }
  int next = 0;
  for (int pos = 0; pos < dim; ++pos) {
    if (used[pos]) continue;
    bool placed = false;
    for (; next < dim && !placed; ++next) {
      Vector v = Vector::Zero(dim);
      v(next) = 1.0;
      for (const auto& c : chosen) v -= (c.adjoint() * v)(0) * c;
      if (v.norm() > 1e-10) {
        u.col(pos) = v / v.norm();
        chosen.push_back(u.col(pos));
        placed = true;
      }
    }
    if (!placed) throw std::runtime_error("complete_orthonormal: basis exhausted");
  }
  return u;
}

UnitaryOp cnot(const std::string& control, const std::string& target) {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1;  // |00> -> |00>
  m(1, 1) = 1;  // |01> -> |01>
  m(3, 2) = 1;  // |10> -> |11>
  m(2, 3) = 1;  // |11> -> |10>
  return UnitaryOp({control, target}, {2, 2}, std::move(m));
}

UnitaryOp identity_op(const std::vector<std::string>& labels, const std::vector<int>& dims) {
  int d = 1;
  for (int k : dims) d *= k;
  return UnitaryOp(labels, dims, Matrix::Identity(d, d));
}

PureState computational_basis_state(const std::vector<std::string>& labels,
                                    const std::vector<int>& dims, const std::vector<int>& digits) {
  if (digits.size() != dims.size())
    throw std::invalid_argument("basis state: digit count mismatch");
  IndexMap map(dims);
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (digits[k] < 0 || digits[k] >= dims[k])
      throw std::invalid_argument("basis state: digit out of range");
  Vector v = Vector::Zero(map.total());
  v(map.encode(digits.data())) = 1.0;
  return PureState(labels, dims, std::move(v));
}

DensityMatrix maximally_mixed(const std::vector<std::string>& labels, const std::vector<int>& dims) {
  int d = 1;
  for (int k : dims) d *= k;
  return DensityMatrix(labels, dims, Matrix::Identity(d, d) / static_cast<double>(d));
}

}  // namespace qcorr
