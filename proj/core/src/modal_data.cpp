#include "sbl/modal_data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sbl {

void ModalDataset::validate(int n_dof) const {
  if (n_segments < 3)
    throw InvariantViolation("dataset: n_segments = " + std::to_string(n_segments) +
                             ", but at least three segments are required (N_s >= 3) for the "
                             "frequency-precision estimate to be positive and finite");
  if (n_modes <= 0) throw InvariantViolation("dataset: n_modes must be positive");
  if (n_observed <= 0) throw InvariantViolation("dataset: observed_dofs must be non-empty");
  if (static_cast<int>(observed_dofs.size()) != n_observed)
    throw InvariantViolation("dataset: observed_dofs length differs from n_observed");
  for (int k = 0; k < n_observed; ++k) {
    if (observed_dofs[k] < 0) throw InvariantViolation("dataset: negative observed DOF index");
    if (k > 0 && observed_dofs[k] <= observed_dofs[k - 1])
      throw InvariantViolation("dataset: observed_dofs must be strictly increasing");
    if (n_dof > 0 && observed_dofs[k] >= n_dof)
      throw InvariantViolation("dataset: observed DOF " + std::to_string(observed_dofs[k]) +
                               " is out of range for a model with " + std::to_string(n_dof) + " DOFs");
  }
  if (freq_sq.rows() != n_segments || freq_sq.cols() != n_modes)
    throw InvariantViolation("dataset: freq_sq must be n_segments x n_modes");
  if (!freq_sq.allFinite() || (freq_sq.array() <= 0.0).any())
    throw InvariantViolation("dataset: freq_sq entries must be finite and strictly positive");
  if (static_cast<int>(mode_shapes.size()) != n_segments)
    throw InvariantViolation("dataset: mode_shapes must have n_segments entries");
  for (int r = 0; r < n_segments; ++r) {
    const Mat& s = mode_shapes[r];
    if (s.rows() != n_modes || s.cols() != n_observed)
      throw InvariantViolation("dataset: mode_shapes[" + std::to_string(r) + "] must be n_modes x n_observed");
    if (!s.allFinite()) throw InvariantViolation("dataset: mode_shapes contain non-finite values");
    for (int i = 0; i < n_modes; ++i)
      if (s.row(i).norm() == 0.0)
        throw InvariantViolation("dataset: mode_shapes[" + std::to_string(r) + "][" + std::to_string(i) +
                                 "] has zero norm");
  }
}

bool ModalDataset::operator==(const ModalDataset& o) const {
  if (n_segments != o.n_segments || n_modes != o.n_modes || n_observed != o.n_observed ||
      observed_dofs != o.observed_dofs || freq_sq.rows() != o.freq_sq.rows() ||
      freq_sq.cols() != o.freq_sq.cols() || freq_sq != o.freq_sq || mode_shapes.size() != o.mode_shapes.size())
    return false;
  for (std::size_t r = 0; r < mode_shapes.size(); ++r) {
    if (mode_shapes[r].rows() != o.mode_shapes[r].rows() || mode_shapes[r].cols() != o.mode_shapes[r].cols() ||
        mode_shapes[r] != o.mode_shapes[r])
      return false;
  }
  return true;
}

FlatModalData flatten_dataset(const ModalDataset& d) {
  FlatModalData f;
  f.omega_hat_sq.resize(static_cast<Eigen::Index>(d.n_segments) * d.n_modes);
  f.psi_hat.resize(static_cast<Eigen::Index>(d.n_segments) * d.n_modes * d.n_observed);
  Eigen::Index w = 0, p = 0;
  for (int r = 0; r < d.n_segments; ++r)
    for (int i = 0; i < d.n_modes; ++i) {
      f.omega_hat_sq(w++) = d.freq_sq(r, i);
      for (int k = 0; k < d.n_observed; ++k) f.psi_hat(p++) = d.mode_shapes[r](i, k);
    }
  return f;
}

ModalDataset unflatten_dataset(const ModalDataset& layout, const FlatModalData& flat) {
  ModalDataset d;
  d.n_segments = layout.n_segments;
  d.n_modes = layout.n_modes;
  d.n_observed = layout.n_observed;
  d.observed_dofs = layout.observed_dofs;
  const Eigen::Index nw = static_cast<Eigen::Index>(d.n_segments) * d.n_modes;
  if (flat.omega_hat_sq.size() != nw || flat.psi_hat.size() != nw * d.n_observed)
    throw InvalidArgument("unflatten_dataset: vector lengths do not match the layout");
  d.freq_sq.resize(d.n_segments, d.n_modes);
  d.mode_shapes.assign(d.n_segments, Mat(d.n_modes, d.n_observed));
  Eigen::Index w = 0, p = 0;
  for (int r = 0; r < d.n_segments; ++r)
    for (int i = 0; i < d.n_modes; ++i) {
      d.freq_sq(r, i) = flat.omega_hat_sq(w++);
      for (int k = 0; k < d.n_observed; ++k) d.mode_shapes[r](i, k) = flat.psi_hat(p++);
    }
  return d;
}

SelectionMaps build_selection(const std::vector<int>& observed_dofs, int n_dof, int n_modes, int n_segments) {
  if (n_dof <= 0 || n_modes <= 0 || n_segments <= 0)
    throw InvalidArgument("build_selection: sizes must be positive");
  std::vector<int> sorted = observed_dofs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("build_selection: duplicate observed DOF");
  for (int dof : observed_dofs)
    if (dof < 0 || dof >= n_dof)
      throw InvalidArgument("build_selection: observed DOF " + std::to_string(dof) + " out of range");
  const int n_obs = static_cast<int>(observed_dofs.size());
  SelectionMaps s;
  s.gamma = Mat::Zero(static_cast<Eigen::Index>(n_obs) * n_modes * n_segments,
                      static_cast<Eigen::Index>(n_modes) * n_dof);
  Eigen::Index row = 0;
  for (int r = 0; r < n_segments; ++r)
    for (int i = 0; i < n_modes; ++i)
      for (int k = 0; k < n_obs; ++k) s.gamma(row++, static_cast<Eigen::Index>(i) * n_dof + observed_dofs[k]) = 1.0;
  s.ell = Mat::Zero(static_cast<Eigen::Index>(n_segments) * n_modes, n_modes);
  for (int r = 0; r < n_segments; ++r) s.ell.block(static_cast<Eigen::Index>(r) * n_modes, 0, n_modes, n_modes).setIdentity();
  return s;
}

void normalize_dataset(ModalDataset& d) {
  for (int r = 0; r < d.n_segments; ++r) {
    std::vector<int> order(d.n_modes);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return d.freq_sq(r, x) < d.freq_sq(r, y); });
    const Vec f = d.freq_sq.row(r).transpose();
    const Mat s = d.mode_shapes[r];
    for (int i = 0; i < d.n_modes; ++i) {
      d.freq_sq(r, i) = f(order[i]);
      d.mode_shapes[r].row(i) = s.row(order[i]);
    }
    for (int i = 0; i < d.n_modes; ++i) {
      const double n = d.mode_shapes[r].row(i).norm();
      if (n == 0.0) throw InvariantViolation("dataset: zero-norm mode shape");
      // Leave already-normalized vectors bit-identical so save/load round-trips.
      if (std::abs(n - 1.0) > 1e-13) d.mode_shapes[r].row(i) /= n;
    }
  }
  // Fixing each segment's sign independently by its largest component is
  // unstable when two components tie in magnitude (common with partial
  // sensors), so alignment is done against a shared per-mode direction.
  for (int i = 0; i < d.n_modes; ++i) {
    Mat scatter = Mat::Zero(d.n_observed, d.n_observed);
    for (int r = 0; r < d.n_segments; ++r) {
      const Vec v = d.mode_shapes[r].row(i).transpose();
      scatter.noalias() += v * v.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(scatter);
    Vec u = es.eigenvectors().col(d.n_observed - 1);
    Eigen::Index imax = 0;
    u.cwiseAbs().maxCoeff(&imax);
    if (u(imax) < 0.0) u = -u;
    for (int r = 0; r < d.n_segments; ++r)
      if (d.mode_shapes[r].row(i).dot(u.transpose()) < 0.0) d.mode_shapes[r].row(i) *= -1.0;
  }
}

}  // namespace sbl
