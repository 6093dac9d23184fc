#pragma once

#include "sbl/common.hpp"
#include "sbl/modal_data.hpp"
#include "sbl/structural_model.hpp"

#include <utility>
#include <vector>

namespace sbl {

// System modal parameters and all hyper-parameters. Mode shapes are stacked
// per mode: phi = (Phi_1; ...; Phi_Nm), each of length N_d.
struct HyperState {
  Vec omega_sq;
  Vec phi;
  Vec rho;
  Vec tau;
  double eta = 1.0;
  double nu = 1.0;
  Vec alpha;  // 0 marks a pruned component
  double beta = 1.0;
  double a0 = 1.0;
  double b0 = 1.0;
  double kappa = 1.0;

  void validate(int n_dof, int n_modes, int n_sub) const;
  std::vector<bool> active() const;
};

// Stacked eigen-equation system: h * theta - b is the stacked residual
// (K(theta) - omega_i^2 M) Phi_i.
struct ResidualSystem {
  Vec b;
  Mat h;
};

struct PosteriorState {
  Vec mu;
  Mat sigma;  // zero rows and columns at pruned indices
  std::vector<bool> active;
  double log_det_precision = 0.0;  // log |Sigma_A^{-1}|
  double jitter = 0.0;

  int n_active() const;
};

// Model plus data, with the data-side sums used by every update.
struct Problem {
  StructuralBasis basis;
  ModalDataset data;
  int n_dof = 0;
  int n_modes = 0;
  int n_sub = 0;
  int n_segments = 0;
  int n_observed = 0;
  Vec freq_sum;      // per mode, sum over segments of omega_hat^2
  Mat psi_sum;       // N_d x N_m, sum over segments of Gamma^T psi (zeros at unobserved DOFs)
  Vec observed_mask;  // N_d, 1 at observed DOFs

  int n_eq() const { return n_dof * n_modes; }
};

Problem make_problem(const StructuralBasis& basis, const ModalDataset& data);

Vec build_b(const StructuralBasis& basis, const Vec& omega_sq, const Vec& phi);
Mat build_h(const StructuralBasis& basis, const Vec& phi);
ResidualSystem build_residual_system(const StructuralBasis& basis, const Vec& omega_sq, const Vec& phi);

// dH/dphi_q for the q-th entry of the stacked phi. H = sum_q phi_q Pi_q.
Mat partial_h(const StructuralBasis& basis, int n_modes, int q);

// T_q = Pi_q^T Pi_q and U_q = Pi_q^T sum_{s != q} phi_s Pi_s.
std::pair<Mat, Mat> build_t_u(const StructuralBasis& basis, const Vec& phi, int q);

// Block diagonal with blocks K(mu) - omega_i^2 M, so that F phi = H mu - b.
Mat build_f(const StructuralBasis& basis, const Vec& mu, const Vec& omega_sq);

// G = blkdiag(M Phi_i), c = stacked K(mu) Phi_i; G omega^2 - c = b - H mu.
std::pair<Mat, Vec> build_g_c(const StructuralBasis& basis, const Vec& mu, const Vec& phi);

// W0 = sum_{j,l} Sigma_jl K_j K_l. The Sigma-weighted part of the log-det
// gradient in phi is beta * (I (x) W0) phi.
Mat sigma_weighted_stiffness(const StructuralBasis& basis, const Mat& sigma);

// Gaussian conditional of theta given (b, H), with pruned components
// (alpha_j = 0) pinned to theta_hat_j.
PosteriorState conditional_posterior(const ResidualSystem& rs, double beta, const Vec& alpha, const Vec& theta_hat);

// log N(theta_hat | (H^T H)^{-1} H^T b, A + (beta H^T H)^{-1}).
double log_pseudo_evidence(const ResidualSystem& rs, double beta, const Vec& alpha, const Vec& theta_hat);

// Same quantity assembled from the posterior factors through the
// determinant and Woodbury identities (no (H^T H)^{-1}, no inverse of A).
double log_pseudo_evidence_factored(const ResidualSystem& rs, double beta, const Vec& alpha, const Vec& theta_hat);

struct OckhamTerms {
  double data_fit = 0.0;   // E_post[log N(theta_hat | theta, A)]
  double info_gain = 0.0;  // KL(post || prior), prior N(m, B)
};

// Decomposition of log_pseudo_evidence into data fit minus information gain.
// The prior is N(m, (beta H^T H)^{-1}) with m the least-squares solution; the
// likelihood of theta_hat is N(theta_hat | theta, A). Pruned components
// contribute neither term.
OckhamTerms ockham_decomposition(const ResidualSystem& rs, double beta, const Vec& alpha, const Vec& theta_hat);

// Objective up to a constant, evaluated with the active-set posterior.
double objective_j(const Problem& p, const HyperState& s, const Vec& theta_hat);

// Same objective assembled from the log pseudo-evidence over all components.
double objective_j_marginal(const Problem& p, const HyperState& s, const Vec& theta_hat);

// Individual pieces of the objective, for diagnostics and tests.
struct ObjectiveParts {
  double shape_misfit = 0.0;  // ||psi_hat - Gamma phi||^2
  double freq_misfit = 0.0;   // sum_i rho_i sum_r (omega_hat_ri^2 - omega_i^2)^2
  double eq_misfit = 0.0;     // ||H mu - b||^2
  double pseudo_data = 0.0;   // sum_A (theta_hat - mu)_j^2 / alpha_j
  double log_det_precision = 0.0;
  double total = 0.0;
};
ObjectiveParts objective_parts(const Problem& p, const HyperState& s, const Vec& theta_hat);

struct ObjectiveGradient {
  Vec phi;
  Vec omega_sq;
  Vec rho;
  Vec tau;
  Vec alpha;  // zero at pruned indices
  double eta = 0.0;
  double nu = 0.0;
  double beta = 0.0;
  double b0 = 0.0;
  double kappa = 0.0;
};

// Analytic gradient of objective_j in every coordinate of the hyper-state.
ObjectiveGradient objective_gradient(const Problem& p, const HyperState& s, const Vec& theta_hat);

struct LogDetGradient {
  Vec phi;    // beta tr(Sigma (2 phi_q T_q + U_q + U_q^T))
  Vec alpha;  // -Sigma_jj / alpha_j^2 on active indices
  double beta = 0.0;  // beta^{-1} sum_A (1 - Sigma_jj / alpha_j)
};

// Gradient of log |Sigma_A^{-1}| with Sigma_A^{-1} = beta H_A^T H_A + A_A^{-1}.
LogDetGradient log_det_precision_gradient(const Problem& p, const HyperState& s);

// Gradient of beta ||H mu - b||^2 in phi and omega^2 for fixed mu:
// 2 beta F^T F phi and 2 beta G^T (G omega^2 - c).
std::pair<Vec, Vec> misfit_gradient(const StructuralBasis& basis, const Vec& mu, const Vec& omega_sq,
                                    const Vec& phi, double beta);

}  // namespace sbl
