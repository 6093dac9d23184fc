#include "sbl/updates.hpp"

#include "sbl/linalg.hpp"

#include <cmath>

namespace sbl {

namespace {

PosteriorState posterior_of(const Problem& p, const HyperState& s, const Vec& theta_hat) {
  return conditional_posterior(build_residual_system(p.basis, s.omega_sq, s.phi), s.beta, s.alpha, theta_hat);
}

double slack(const UpdateOptions& opt, double j) { return opt.ascent_slack * std::max(1.0, std::abs(j)); }

// Per-mode system matrix beta F_i^2 + beta W + eta N_s D, D the observed-DOF mask.
Mat phi_block_matrix(const Problem& p, const HyperState& s, const Mat& k_mu, const Mat& w, int i) {
  const Mat fi = k_mu - s.omega_sq(i) * p.basis.mass;
  Mat a = s.beta * (fi * fi) + s.beta * w;
  a.diagonal() += s.eta * static_cast<double>(p.n_segments) * p.observed_mask;
  return symmetrize(a);
}

}  // namespace

InitValues init_hypers(const ModalDataset& data, int n_dof, double b0, double a0) {
  data.validate(n_dof);
  if (!(b0 > 0.0) || !(a0 > 0.0)) throw InvalidArgument("init_hypers: a0 and b0 must be positive");
  if (data.n_observed <= 2) throw InvalidArgument("init_hypers: at least three observed DOFs are required");
  const double n_psi = static_cast<double>(data.n_segments) * data.n_modes * data.n_observed;
  double psi_sq = 0.0;
  for (const Mat& m : data.mode_shapes) psi_sq += m.squaredNorm();
  InitValues v;
  v.eta_bar = (n_psi - 2.0) / psi_sq;
  v.rho_bar = (static_cast<double>(data.n_observed) - 2.0) *
              data.freq_sq.array().square().colwise().sum().transpose().inverse();
  v.beta_bar = 0.5 * b0 * (static_cast<double>(n_dof) * data.n_modes + 2.0 * (a0 - 1.0));
  return v;
}

Vec phi_step(const Problem& p, const HyperState& s, const PosteriorState& post) {
  const Mat k_mu = assemble_stiffness(p.basis, post.mu);
  const Mat w0 = sigma_weighted_stiffness(p.basis, post.sigma);
  const int nd = p.n_dof;
  Vec out(s.phi.size());
  for (int i = 0; i < p.n_modes; ++i) {
    const SpdFactor f = factor_spd(phi_block_matrix(p, s, k_mu, w0, i), "mode-shape system");
    out.segment(static_cast<Eigen::Index>(i) * nd, nd) = f.solve(Vec(s.eta * p.psi_sum.col(i)));
  }
  return out;
}

Vec phi_step_split(const Problem& p, const HyperState& s, const PosteriorState& post) {
  const Mat k_mu = assemble_stiffness(p.basis, post.mu);
  const Mat w0 = sigma_weighted_stiffness(p.basis, post.sigma);
  // tr(Sigma T_q) is the diagonal of W0; tr(Sigma U_q) is the off-diagonal
  // part of W0 applied to the current mode shape.
  const Mat w_diag = w0.diagonal().asDiagonal();
  const Mat w_off = w0 - w_diag;
  const int nd = p.n_dof;
  Vec out(s.phi.size());
  for (int i = 0; i < p.n_modes; ++i) {
    const auto seg = static_cast<Eigen::Index>(i) * nd;
    const SpdFactor f = factor_spd(phi_block_matrix(p, s, k_mu, w_diag, i), "mode-shape system");
    const Vec rhs = s.eta * p.psi_sum.col(i) - s.beta * (w_off * s.phi.segment(seg, nd));
    out.segment(seg, nd) = f.solve(rhs);
  }
  return out;
}

Vec omega_sq_step(const Problem& p, const HyperState& s, const PosteriorState& post) {
  const Mat k_mu = assemble_stiffness(p.basis, post.mu);
  const int nd = p.n_dof;
  Vec out(p.n_modes);
  for (int i = 0; i < p.n_modes; ++i) {
    const Vec ph = s.phi.segment(static_cast<Eigen::Index>(i) * nd, nd);
    const Vec g = p.basis.mass * ph;
    const Vec c = k_mu * ph;
    const double den = static_cast<double>(p.n_segments) * s.rho(i) + s.beta * g.squaredNorm();
    if (!(den > 0.0)) throw NumericalFailure("frequency system is not positive definite");
    out(i) = (s.rho(i) * p.freq_sum(i) + s.beta * g.dot(c)) / den;
  }
  return out;
}

double beta_step(const PosteriorState& post, const ResidualSystem& rs, const Vec& alpha, double b0, double a0) {
  double gamma = 0.0;
  for (Eigen::Index j = 0; j < alpha.size(); ++j)
    if (alpha(j) > 0.0) gamma += 1.0 - post.sigma(j, j) / alpha(j);
  const double num = static_cast<double>(rs.b.size()) - gamma + 2.0 * (a0 - 1.0);
  if (!(num > 0.0)) throw NumericalFailure("beta update: nonpositive numerator");
  const double den = (rs.h * post.mu - rs.b).squaredNorm() + 2.0 / b0;
  return num / den;
}

Vec alpha_step(const PosteriorState& post, const Vec& theta_hat) {
  Vec a = Vec::Zero(theta_hat.size());
  for (Eigen::Index j = 0; j < a.size(); ++j)
    if (post.active[static_cast<std::size_t>(j)]) {
      const double d = theta_hat(j) - post.mu(j);
      a(j) = post.sigma(j, j) + d * d;
    }
  return a;
}

std::pair<double, double> update_b0_kappa(double beta, double a0, double kappa) {
  if (!(beta > 0.0) || !(a0 > 0.0) || !(kappa > 0.0))
    throw InvalidArgument("update_b0_kappa: beta, a0 and kappa must be positive");
  const double b0 = 2.0 * beta / (a0 + std::sqrt(a0 * a0 + 4.0 * kappa * beta));
  return {b0, 1.0 / b0};
}

std::pair<double, double> update_eta(const Problem& p, const Vec& phi) {
  const double n = static_cast<double>(p.n_segments) * p.n_modes * p.n_observed;
  if (n <= 2.0) throw InvalidArgument("update_eta: N_s N_m N_o must exceed 2");
  double r = 0.0;
  for (int seg = 0; seg < p.n_segments; ++seg)
    for (int i = 0; i < p.n_modes; ++i)
      for (int k = 0; k < p.n_observed; ++k) {
        const double e = p.data.mode_shapes[seg](i, k) - phi(static_cast<Eigen::Index>(i) * p.n_dof + p.data.observed_dofs[k]);
        r += e * e;
      }
  if (!(r > 0.0)) throw DegenerateData("update_eta: zero mode-shape residual makes eta unbounded");
  const double eta = (n - 2.0) / r;
  return {eta, 1.0 / eta};
}

std::pair<Vec, Vec> update_rho(const Problem& p, const Vec& omega_sq) {
  if (p.n_segments < 3) throw InvalidArgument("update_rho: at least three segments are required");
  Vec rho(p.n_modes);
  for (int i = 0; i < p.n_modes; ++i) {
    const double dev = (p.data.freq_sq.col(i).array() - omega_sq(i)).square().sum();
    if (!(dev > 0.0)) throw DegenerateData("update_rho: zero frequency deviation makes rho unbounded");
    rho(i) = (static_cast<double>(p.n_segments) - 2.0) / dev;
  }
  return {rho, rho.cwiseInverse()};
}

UpdateInfo update_phi(const Problem& p, HyperState& s, const Vec& theta_hat, const UpdateOptions& opt) {
  UpdateInfo info;
  double j_cur = objective_j(p, s, theta_hat);
  // Near a flat optimum the solve's rounding can lower J slightly. The block
  // keeps its last iterate unless that ends below the starting objective, in
  // which case it returns the best iterate seen.
  const double j_start = j_cur;
  Vec best_phi = s.phi;
  double best_j = j_cur;
  for (info.iterations = 1; info.iterations <= opt.max_inner; ++info.iterations) {
    const Vec old = s.phi;
    s.phi = phi_step(p, s, posterior_of(p, s, theta_hat));
    const double j_new = objective_j(p, s, theta_hat);
    if (j_new < j_cur - slack(opt, j_cur)) {
      info.rejected = true;
      break;
    }
    j_cur = j_new;
    if (j_new > best_j) {
      best_j = j_new;
      best_phi = s.phi;
    }
    if ((s.phi - old).norm() <= opt.tol * old.norm()) {
      info.converged = true;
      break;
    }
  }
  if (info.rejected || objective_j(p, s, theta_hat) < j_start) s.phi = best_phi;
  return info;
}

UpdateInfo update_omega_sq(const Problem& p, HyperState& s, const Vec& theta_hat, const UpdateOptions& opt) {
  UpdateInfo info;
  for (info.iterations = 1; info.iterations <= opt.max_inner; ++info.iterations) {
    const Vec old = s.omega_sq;
    Vec next = omega_sq_step(p, s, posterior_of(p, s, theta_hat));
    for (int i = 0; i < p.n_modes; ++i)
      if (!(next(i) > 0.0)) {
        next(i) = 1e-12 * p.freq_sum(i) / static_cast<double>(p.n_segments);
        info.clamped = true;
      }
    s.omega_sq = next;
    if (((s.omega_sq - old).array().abs() / old.array()).maxCoeff() <= opt.tol) {
      info.converged = true;
      break;
    }
  }
  return info;
}

UpdateInfo update_beta(const Problem& p, HyperState& s, const Vec& theta_hat, const UpdateOptions& opt) {
  UpdateInfo info;
  const double beta0 = s.beta;
  const double j0 = objective_j(p, s, theta_hat);
  const ResidualSystem rs = build_residual_system(p.basis, s.omega_sq, s.phi);
  for (info.iterations = 1; info.iterations <= opt.max_inner; ++info.iterations) {
    const PosteriorState post = conditional_posterior(rs, s.beta, s.alpha, theta_hat);
    const double next = beta_step(post, rs, s.alpha, s.b0, s.a0);
    const double change = std::abs(std::log(next / s.beta));
    s.beta = next;
    if (change <= opt.tol) {
      info.converged = true;
      break;
    }
  }
  if (objective_j(p, s, theta_hat) < j0 - slack(opt, j0)) {
    s.beta = beta0;
    info.rejected = true;
  }
  return info;
}

UpdateInfo update_alpha(const Problem& p, HyperState& s, const Vec& theta_hat, const UpdateOptions& opt) {
  UpdateInfo info;
  const ResidualSystem rs = build_residual_system(p.basis, s.omega_sq, s.phi);
  const SpdFactor gram = factor_spd(symmetrize(rs.h.transpose() * rs.h), "H^T H");
  const Vec m = gram.solve(Vec(rs.h.transpose() * rs.b));
  const Mat b = symmetrize(gram.inverse() / s.beta);
  const Vec d = theta_hat - m;
  const int n = p.n_sub;
  const int max_sweeps = std::max(1, opt.max_inner);
  for (info.iterations = 1; info.iterations <= max_sweeps; ++info.iterations) {
    const Vec old = s.alpha;
    for (int j = 0; j < n; ++j) {
      if (!(s.alpha(j) > 0.0)) continue;
      // Covariance with component j's own variance removed.
      Mat c = b;
      for (int l = 0; l < n; ++l)
        if (l != j) c(l, l) += s.alpha(l);
      const SpdFactor f = factor_spd(c, "pseudo-evidence covariance");
      Vec e = Vec::Zero(n);
      e(j) = 1.0;
      const Vec ce = f.solve(e);
      const double sj = ce(j);
      const double qj = ce.dot(d);
      s.alpha(j) = qj * qj > sj ? (qj * qj - sj) / (sj * sj) : 0.0;
    }
    double change = 0.0;
    bool same_set = true;
    for (int j = 0; j < n; ++j) {
      const bool a_new = s.alpha(j) > 0.0;
      const bool a_old = old(j) > 0.0;
      if (a_new != a_old) same_set = false;
      if (a_new && a_old) change = std::max(change, std::abs(std::log(s.alpha(j) / old(j))));
    }
    if (same_set && change <= std::max(opt.tol, 1e-10)) {
      info.converged = true;
      break;
    }
  }
  return info;
}

}  // namespace sbl
