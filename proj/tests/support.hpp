#pragma once

#include "sbl/sbl.hpp"

#include <random>

namespace sbl::testing {

inline Mat random_spd(std::mt19937_64& rng, int n, double shift = 0.5) {
  std::normal_distribution<double> z;
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = z(rng);
  Mat s = a * a.transpose() / n;
  s.diagonal().array() += shift;
  return s;
}

inline Vec random_vec(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

// Dense random basis with rank-2 PSD substructures.
inline StructuralBasis random_basis(std::mt19937_64& rng, int n_dof, int n_sub) {
  std::normal_distribution<double> z;
  StructuralBasis b;
  b.n_dof = n_dof;
  b.n_sub = n_sub;
  b.mass = random_spd(rng, n_dof, 1.0);
  b.k0 = 0.1 * random_spd(rng, n_dof, 0.1);
  for (int j = 0; j < n_sub; ++j) {
    Mat v(n_dof, 2);
    for (int i = 0; i < n_dof; ++i)
      for (int k = 0; k < 2; ++k) v(i, k) = z(rng);
    b.k_sub.push_back(v * v.transpose());
    b.labels.push_back("s" + std::to_string(j));
  }
  return b;
}

inline ResidualSystem random_system(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> z;
  ResidualSystem rs;
  rs.h.resize(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) rs.h(i, j) = z(rng);
  rs.b.resize(rows);
  for (int i = 0; i < rows; ++i) rs.b(i) = z(rng);
  return rs;
}

// Small shear building with synthetic data and a feasible hyper-state near
// the truth. prune_every > 0 marks every k-th component as pruned.
struct RandomInstance {
  Problem problem;
  HyperState state;
  Vec theta_hat;
};

inline RandomInstance random_instance(std::uint64_t seed, int n_stories = 2, int n_modes = 3, int prune_every = 0,
                                      bool partial = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ShearBuildingSpec spec;
  spec.n_stories = n_stories;
  spec.half_width_x = 1.0 + 0.5 * u(rng);
  spec.half_width_y = 1.0 + 0.5 * u(rng);
  for (int s = 0; s < n_stories; ++s) {
    spec.face_stiffness.push_back({1.0 + u(rng), 1.0 + u(rng), 1.0 + u(rng), 1.0 + u(rng)});
    spec.floor_mass.push_back(0.8 + 0.4 * u(rng));
    spec.floor_inertia.push_back(slab_inertia(spec.floor_mass.back(), spec.half_width_x, spec.half_width_y));
  }
  const StructuralBasis basis = build_shear_building(spec);
  std::vector<int> obs;
  for (int d = partial ? 3 : 0; d < basis.n_dof; ++d) obs.push_back(d);
  DamageScenario sc{"r", random_vec(rng, basis.n_sub, 0.85, 1.0), {}};
  NoiseSpec noise{0.01, 0.02, seed + 17};
  const SyntheticData sd = generate_dataset(basis, sc, obs, n_modes, 5, noise);

  RandomInstance inst{make_problem(basis, sd.dataset), {}, random_vec(rng, basis.n_sub, 0.9, 1.1)};
  HyperState& s = inst.state;
  const ModeSet m = solve_modes(basis, Vec::Ones(basis.n_sub), n_modes);
  s.omega_sq = m.omega_sq.cwiseProduct(random_vec(rng, n_modes, 0.95, 1.05));
  s.phi.resize(static_cast<Eigen::Index>(n_modes) * basis.n_dof);
  for (int i = 0; i < n_modes; ++i)
    s.phi.segment(static_cast<Eigen::Index>(i) * basis.n_dof, basis.n_dof) =
        m.shapes.row(i).transpose() + 0.05 * random_vec(rng, basis.n_dof);
  s.rho = random_vec(rng, n_modes, 0.5, 5.0);
  s.tau = random_vec(rng, n_modes, 0.1, 2.0);
  s.eta = 10.0 + 100.0 * u(rng);
  s.nu = 0.01 + u(rng);
  s.alpha = random_vec(rng, basis.n_sub, 0.001, 0.05);
  if (prune_every > 0)
    for (int j = 0; j < basis.n_sub; j += prune_every) s.alpha(j) = 0.0;
  s.beta = 5.0 + 50.0 * u(rng);
  s.a0 = 1.0;
  s.b0 = 0.5 + 2.0 * u(rng);
  s.kappa = 0.2 + u(rng);
  return inst;
}

inline double rel_err(const Vec& a, const Vec& b) {
  const double den = std::max({a.norm(), b.norm(), 1e-300});
  return (a - b).norm() / den;
}

inline double rel_err(double a, double b) {
  const double den = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / den;
}

}  // namespace sbl::testing
