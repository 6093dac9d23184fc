#include "sbl/solver.hpp"

#include "sbl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sbl {

namespace {

PosteriorState posterior_of(const Problem& p, const HyperState& s, const Vec& theta_hat) {
  return conditional_posterior(build_residual_system(p.basis, s.omega_sq, s.phi), s.beta, s.alpha, theta_hat);
}

HyperState initial_state(const Problem& p, const SolverConfig& cfg) {
  const InitValues init = init_hypers(p.data, p.n_dof, cfg.b0);
  HyperState s;
  s.omega_sq = p.freq_sum / static_cast<double>(p.n_segments);
  s.eta = init.eta_bar;
  s.nu = 1.0 / s.eta;
  s.rho = init.rho_bar;
  s.tau = s.rho.cwiseInverse();
  s.beta = init.beta_bar;
  s.a0 = 1.0;
  s.b0 = cfg.b0;
  s.kappa = 1.0 / cfg.b0;
  return s;
}

void note_update(const UpdateInfo& info, const char* block, TraceRecord& rec, std::vector<std::string>& warnings,
                 int iteration) {
  std::ostringstream n;
  n << block << ':' << info.iterations;
  if (info.rejected) n << "(rejected)";
  if (!info.converged && !info.rejected) n << "(capped)";
  if (!rec.note.empty()) rec.note += ' ';
  rec.note += n.str();
  if (info.clamped) {
    std::ostringstream w;
    w << "iteration " << iteration << ": nonpositive " << block << " clamped to 1e-12 of the data mean";
    warnings.push_back(w.str());
  }
}

int count_active(const Vec& alpha) { return static_cast<int>((alpha.array() > 0.0).count()); }

// Largest standardized gap between mean identified frequencies and the
// calibrated model's frequencies.
double frequency_misfit_z(const Problem& p, const Vec& theta) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(assemble_stiffness(p.basis, theta), p.basis.mass,
                                                   Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return 0.0;
  double z = 0.0;
  const double ns = static_cast<double>(p.n_segments);
  for (int i = 0; i < p.n_modes && i < p.n_dof; ++i) {
    const double mean = p.freq_sum(i) / ns;
    const double var = (p.data.freq_sq.col(i).array() - mean).square().sum() / (ns - 1.0);
    const double se = std::sqrt(var / ns);
    if (se > 0.0) z = std::max(z, std::abs(mean - es.eigenvalues()(i)) / se);
  }
  return z;
}

}  // namespace

void SolverConfig::validate() const {
  auto bad = [](const char* w) { throw InvalidArgument(std::string("solver config: ") + w); };
  if (!(b0 > 0.0)) bad("b0 must be positive");
  if (!(alpha_min > 0.0)) bad("alpha_min must be positive");
  if (!(alpha_large > 0.0)) bad("alpha_large must be positive");
  if (!(tol_theta > 0.0)) bad("tol_theta must be positive");
  if (!(tol_log_alpha > 0.0)) bad("tol_log_alpha must be positive");
  if (max_iters <= 0) bad("max_iters must be positive");
  if (warmup_iters_before_constraint < 0) bad("warmup_iters_before_constraint must be nonnegative");
  if (!(misfit_z_threshold > 0.0)) bad("misfit_z_threshold must be positive");
  if (inner.max_inner <= 0 || !(inner.tol > 0.0) || !(inner.ascent_slack >= 0.0)) bad("invalid inner options");
}

bool convergence_check(ConvergenceKind kind, const Vec& prev, const Vec& curr, const std::vector<bool>& active,
                       double tol) {
  if (prev.size() != curr.size()) throw InvalidArgument("convergence_check: length mismatch");
  double change = 0.0;
  if (kind == ConvergenceKind::ThetaChange) {
    if (curr.size() > 0) change = (curr - prev).cwiseAbs().maxCoeff();
  } else {
    if (static_cast<Eigen::Index>(active.size()) != curr.size())
      throw InvalidArgument("convergence_check: active mask length mismatch");
    for (Eigen::Index j = 0; j < curr.size(); ++j)
      if (active[static_cast<std::size_t>(j)]) change = std::max(change, std::abs(std::log(curr(j)) - std::log(prev(j))));
  }
  return change < tol;
}

CalibrationResult run_calibration(const StructuralBasis& basis, const ModalDataset& data, const Vec& theta_0,
                                  const SolverConfig& cfg) {
  cfg.validate();
  const Problem p = make_problem(basis, data);
  if (theta_0.size() != p.n_sub) throw InvalidArgument("run_calibration: theta_0 has the wrong length");

  CalibrationResult res;
  HyperState s = initial_state(p, cfg);
  s.alpha = Vec::Constant(p.n_sub, cfg.alpha_large);

  // Starting mode shapes: the mode-shape system at theta_0 with no parameter
  // uncertainty.
  PosteriorState start;
  start.mu = theta_0;
  start.sigma = Mat::Zero(p.n_sub, p.n_sub);
  start.active.assign(static_cast<std::size_t>(p.n_sub), true);
  s.phi = Vec::Zero(static_cast<Eigen::Index>(p.n_modes) * p.n_dof);
  s.phi = phi_step(p, s, start);

  PosteriorState post = posterior_of(p, s, theta_0);
  TraceRecord r0;
  r0.objective = objective_j(p, s, theta_0);
  r0.n_active = p.n_sub;
  r0.beta = s.beta;
  r0.eta = s.eta;
  r0.b0 = s.b0;
  res.trace.push_back(r0);

  for (int it = 1; it <= cfg.max_iters; ++it) {
    TraceRecord rec;
    rec.iteration = it;
    note_update(update_phi(p, s, theta_0, cfg.inner), "phi", rec, res.warnings, it);
    std::tie(s.eta, s.nu) = update_eta(p, s.phi);
    note_update(update_omega_sq(p, s, theta_0, cfg.inner), "omega_sq", rec, res.warnings, it);
    std::tie(s.rho, s.tau) = update_rho(p, s.omega_sq);
    note_update(update_beta(p, s, theta_0, cfg.inner), "beta", rec, res.warnings, it);
    std::tie(s.b0, s.kappa) = update_b0_kappa(s.beta, s.a0, s.kappa);

    const PosteriorState next = posterior_of(p, s, theta_0);
    rec.objective = objective_j(p, s, theta_0);
    rec.max_delta_mu = (next.mu - post.mu).cwiseAbs().maxCoeff();
    rec.n_active = p.n_sub;
    rec.beta = s.beta;
    rec.eta = s.eta;
    rec.b0 = s.b0;
    res.trace.push_back(rec);
    const bool done =
        convergence_check(ConvergenceKind::ThetaChange, post.mu, next.mu, next.active, cfg.tol_theta);
    post = next;
    if (done) {
      res.theta_u_hat = post.mu;
      res.sigma_u = post.sigma;
      res.delta_map = s;
      res.iterations = it;
      return res;
    }
  }
  throw ConvergenceFailure("calibration did not converge within max_iters", res.trace);
}

MonitoringResult run_monitoring(const StructuralBasis& basis, const ModalDataset& data, const CalibrationResult& calib,
                                const SolverConfig& cfg) {
  cfg.validate();
  const Problem p = make_problem(basis, data);
  const Vec& theta_u = calib.theta_u_hat;
  if (theta_u.size() != p.n_sub) throw InvalidArgument("run_monitoring: calibration has the wrong number of substructures");
  if (calib.delta_map.omega_sq.size() != p.n_modes)
    throw InvalidArgument("run_monitoring: calibration and monitoring data have different mode counts");
  if (calib.delta_map.phi.size() != static_cast<Eigen::Index>(p.n_modes) * p.n_dof)
    throw InvalidArgument("run_monitoring: calibration mode shapes do not match the model");

  MonitoringResult res;
  res.theta_u_hat = theta_u;
  HyperState s = initial_state(p, cfg);
  s.alpha = Vec::Constant(p.n_sub, static_cast<double>(p.n_sub) * p.n_sub);
  s.omega_sq = calib.delta_map.omega_sq;
  s.phi = calib.delta_map.phi;

  PosteriorState post = posterior_of(p, s, theta_u);
  TraceRecord r0;
  r0.objective = objective_j(p, s, theta_u);
  r0.n_active = p.n_sub;
  r0.beta = s.beta;
  r0.eta = s.eta;
  r0.b0 = s.b0;
  res.trace.push_back(r0);

  Vec prev_alpha;
  bool converged = false;
  bool carried_prune = false;  // the previous iteration's post-check pruned something
  int it = 1;
  for (; it <= cfg.max_iters; ++it) {
    TraceRecord rec;
    rec.iteration = it;
    const int before = count_active(s.alpha);
    for (int j = 0; j < p.n_sub; ++j)
      if (s.alpha(j) < cfg.alpha_min) s.alpha(j) = 0.0;
    if (cfg.enforce_no_increase && it > cfg.warmup_iters_before_constraint) {
      const PosteriorState cur = posterior_of(p, s, theta_u);
      for (int j = 0; j < p.n_sub; ++j)
        if (s.alpha(j) > 0.0 && cur.mu(j) > theta_u(j)) s.alpha(j) = 0.0;
    }
    rec.pruning_event = carried_prune || count_active(s.alpha) != before;
    carried_prune = false;

    note_update(update_phi(p, s, theta_u, cfg.inner), "phi", rec, res.warnings, it);
    std::tie(s.eta, s.nu) = update_eta(p, s.phi);
    note_update(update_omega_sq(p, s, theta_u, cfg.inner), "omega_sq", rec, res.warnings, it);
    std::tie(s.rho, s.tau) = update_rho(p, s.omega_sq);
    note_update(update_beta(p, s, theta_u, cfg.inner), "beta", rec, res.warnings, it);
    std::tie(s.b0, s.kappa) = update_b0_kappa(s.beta, s.a0, s.kappa);
    note_update(update_alpha(p, s, theta_u, cfg.inner), "alpha", rec, res.warnings, it);

    const PosteriorState next = posterior_of(p, s, theta_u);
    rec.objective = objective_j(p, s, theta_u);
    rec.max_delta_mu = (next.mu - post.mu).cwiseAbs().maxCoeff();
    rec.n_active = count_active(s.alpha);
    rec.beta = s.beta;
    rec.eta = s.eta;
    rec.b0 = s.b0;
    post = next;

    bool done = false;
    if (prev_alpha.size() == p.n_sub) {
      std::vector<bool> both(static_cast<std::size_t>(p.n_sub));
      bool same_set = true;
      for (int j = 0; j < p.n_sub; ++j) {
        both[static_cast<std::size_t>(j)] = s.alpha(j) > 0.0 && prev_alpha(j) > 0.0;
        if ((s.alpha(j) > 0.0) != (prev_alpha(j) > 0.0)) same_set = false;
      }
      done = same_set && convergence_check(ConvergenceKind::LogAlphaChange, prev_alpha, s.alpha, both, cfg.tol_log_alpha);
    }
    if (done && cfg.enforce_no_increase) {
      // The constraint must hold for the final posterior, not only for the
      // one seen at the start of the iteration.
      bool violated = false;
      for (int j = 0; j < p.n_sub; ++j)
        if (s.alpha(j) > 0.0 && post.mu(j) > theta_u(j) + 1e-9) {
          s.alpha(j) = 0.0;
          violated = true;
        }
      if (violated) {
        rec.note += " post-check pruning";
        carried_prune = true;
        post = posterior_of(p, s, theta_u);
        done = false;
      }
    }
    res.trace.push_back(rec);
    prev_alpha = s.alpha;
    if (done) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ConvergenceFailure("monitoring did not converge within max_iters", res.trace);

  res.iterations = it;
  res.theta_d = post.mu;
  res.sigma_d = post.sigma;
  res.alpha_final = s.alpha;
  res.delta_map = s;
  res.stiffness_ratio = Vec::Ones(p.n_sub);
  res.cov_percent = Vec::Zero(p.n_sub);
  for (int j = 0; j < p.n_sub; ++j) {
    if (s.alpha(j) > 0.0) {
      res.stiffness_ratio(j) = post.mu(j) / theta_u(j);
      res.cov_percent(j) = 100.0 * std::sqrt(post.sigma(j, j)) / std::abs(post.mu(j));
    } else {
      res.pruned_set.push_back(j);
    }
  }
  res.all_pruned = static_cast<int>(res.pruned_set.size()) == p.n_sub;
  if (res.all_pruned) {
    res.misfit_z = frequency_misfit_z(p, theta_u);
    if (res.misfit_z > cfg.misfit_z_threshold) {
      res.misfit_warning = true;
      std::ostringstream w;
      w << "all substructures pruned, but identified frequencies deviate from the calibrated model by "
        << res.misfit_z << " standard errors";
      res.warnings.push_back(w.str());
    }
  }
  return res;
}

}  // namespace sbl
