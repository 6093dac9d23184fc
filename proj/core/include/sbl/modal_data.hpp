#pragma once

#include "sbl/common.hpp"

#include <string>
#include <vector>

namespace sbl {

// Identified modal data from N_s independent segments. Mode shapes are
// stored per segment as an N_m x N_o matrix (row i = mode i at the observed
// DOFs).
struct ModalDataset {
  int n_segments = 0;
  int n_modes = 0;
  int n_observed = 0;
  std::vector<int> observed_dofs;
  Mat freq_sq;                  // N_s x N_m, rad^2/s^2
  std::vector<Mat> mode_shapes;  // N_s entries of N_m x N_o

  // Pass n_dof > 0 to also check the DOF indices against a model.
  void validate(int n_dof = -1) const;
  bool operator==(const ModalDataset& other) const;
};

// Flattened vectors, segment-major, then mode, then sensor.
struct FlatModalData {
  Vec omega_hat_sq;  // N_s * N_m
  Vec psi_hat;       // N_s * N_m * N_o
};

FlatModalData flatten_dataset(const ModalDataset& d);
// Inverse of flatten_dataset; `layout` supplies the sizes and observed DOFs.
ModalDataset unflatten_dataset(const ModalDataset& layout, const FlatModalData& flat);

// Gamma picks the observed components of the stacked system mode shapes, once
// per segment; L stacks N_s identities of size N_m.
struct SelectionMaps {
  Mat gamma;  // (N_o N_m N_s) x (N_m N_d)
  Mat ell;    // (N_s N_m) x N_m
};

SelectionMaps build_selection(const std::vector<int>& observed_dofs, int n_dof, int n_modes, int n_segments);

// Puts shapes into the stored convention: every segment-mode vector is scaled
// to unit norm; then, per mode, segments are sign-aligned with the principal
// direction of that mode across segments, whose own sign is fixed so its
// largest-magnitude component is positive. Modes within each segment are
// reordered by ascending frequency.
void normalize_dataset(ModalDataset& d);

// JSON I/O. `freq_unit` may be "rad2/s2" (default) or "Hz"; Hz values are
// converted to (2 pi f)^2 on load and data are normalized on load.
ModalDataset load_dataset(const std::string& path);
void save_dataset(const ModalDataset& d, const std::string& path);

}  // namespace sbl
