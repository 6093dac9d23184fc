#pragma once

#include "sbl/kernels.hpp"

#include <utility>

namespace sbl {

struct InitValues {
  double eta_bar = 0.0;
  Vec rho_bar;
  double beta_bar = 0.0;
};

// Starting values of eta, rho and beta from the data alone.
InitValues init_hypers(const ModalDataset& data, int n_dof, double b0, double a0 = 1.0);

// ---- Single closed-form steps, evaluated at a given posterior ----

// Solves (beta F^T F + beta (I (x) W0) + eta Gamma^T Gamma) phi = eta Gamma^T psi_hat.
Vec phi_step(const Problem& p, const HyperState& s, const PosteriorState& post);

// Same system with the coupling W0 split into its diagonal, kept on the left,
// and its off-diagonal part applied to the current phi on the right.
Vec phi_step_split(const Problem& p, const HyperState& s, const PosteriorState& post);

Vec omega_sq_step(const Problem& p, const HyperState& s, const PosteriorState& post);

// (N_d N_m - sum_A (1 - Sigma_jj / alpha_j) + 2 (a0 - 1)) / (||H mu - b||^2 + 2 / b0).
double beta_step(const PosteriorState& post, const ResidualSystem& rs, const Vec& alpha, double b0, double a0);

// Sigma_jj + (theta_hat - mu)_j^2 on active indices, 0 elsewhere.
Vec alpha_step(const PosteriorState& post, const Vec& theta_hat);

// b0 = 2 beta / (a0 + sqrt(a0^2 + 4 kappa beta)), then kappa = 1 / b0.
std::pair<double, double> update_b0_kappa(double beta, double a0, double kappa);

// eta = (N_s N_m N_o - 2) / ||psi_hat - Gamma phi||^2 and nu = 1 / eta.
std::pair<double, double> update_eta(const Problem& p, const Vec& phi);

// rho_i = (N_s - 2) / sum_r (omega_hat_ri^2 - omega_i^2)^2 and tau = 1 / rho.
std::pair<Vec, Vec> update_rho(const Problem& p, const Vec& omega_sq);

// ---- Block maximizers of the objective ----
//
// Each one repeats its closed-form step with the posterior refreshed in
// between, so the returned block satisfies its own stationarity condition
// for the posterior it induces. A step that would lower the objective is
// rejected.

struct UpdateOptions {
  int max_inner = 2000;
  double tol = 1e-12;
  double ascent_slack = 1e-9;  // relative to max(1, |J|)
};

struct UpdateInfo {
  int iterations = 0;
  bool converged = false;
  bool rejected = false;  // a step lowered the objective and was undone
  bool clamped = false;   // omega^2 only: a nonpositive value was clamped
};

UpdateInfo update_phi(const Problem& p, HyperState& s, const Vec& theta_hat, const UpdateOptions& opt = {});
UpdateInfo update_omega_sq(const Problem& p, HyperState& s, const Vec& theta_hat, const UpdateOptions& opt = {});
UpdateInfo update_beta(const Problem& p, HyperState& s, const Vec& theta_hat, const UpdateOptions& opt = {});

// Exact coordinate maximization of the pseudo-evidence over each active
// alpha_j in turn, cycled until the values settle. A component whose
// optimum is at alpha_j = 0 is pruned; pruned components stay pruned.
UpdateInfo update_alpha(const Problem& p, HyperState& s, const Vec& theta_hat, const UpdateOptions& opt = {});

}  // namespace sbl
