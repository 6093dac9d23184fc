#include "sbl/kernels.hpp"

#include "sbl/linalg.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace sbl {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

void check_phi(const StructuralBasis& basis, const Vec& phi, const char* op) {
  if (basis.n_dof <= 0 || phi.size() % basis.n_dof != 0)
    throw InvalidArgument(std::string(op) + ": phi length is not a multiple of n_dof");
}

Eigen::Index n_modes_of(const StructuralBasis& basis, const Vec& phi) { return phi.size() / basis.n_dof; }

std::vector<int> active_indices(const Vec& alpha) {
  std::vector<int> a;
  for (Eigen::Index j = 0; j < alpha.size(); ++j)
    if (alpha(j) > 0.0) a.push_back(static_cast<int>(j));
  return a;
}

std::vector<int> pruned_indices(const Vec& alpha) {
  std::vector<int> p;
  for (Eigen::Index j = 0; j < alpha.size(); ++j)
    if (!(alpha(j) > 0.0)) p.push_back(static_cast<int>(j));
  return p;
}

Mat columns(const Mat& m, const std::vector<int>& idx) {
  Mat out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = m.col(idx[k]);
  return out;
}

Vec entries(const Vec& v, const std::vector<int>& idx) {
  Vec out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out(static_cast<Eigen::Index>(k)) = v(idx[k]);
  return out;
}

Mat sub_block(const Mat& m, const std::vector<int>& r, const std::vector<int>& c) {
  Mat out(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t k = 0; k < c.size(); ++k)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = m(r[i], c[k]);
  return out;
}

void check_posterior_args(const ResidualSystem& rs, double beta, const Vec& alpha, const Vec& theta_hat,
                          const char* op) {
  require(rs.h.rows() == rs.b.size(), std::string(op) + ": b and H row counts differ");
  require(alpha.size() == rs.h.cols() && theta_hat.size() == rs.h.cols(),
          std::string(op) + ": alpha/theta_hat length must equal the number of columns of H");
  require(beta > 0.0 && std::isfinite(beta), std::string(op) + ": beta must be positive");
  require((alpha.array() >= 0.0).all() && alpha.allFinite(), std::string(op) + ": alpha must be nonnegative");
}

// Least-squares pieces: factor of beta H^T H, m = (H^T H)^{-1} H^T b, ||b - H m||^2.
struct LeastSquares {
  SpdFactor gram;  // H^T H
  Vec m;
  double residual_sq = 0.0;
};

LeastSquares least_squares(const ResidualSystem& rs) {
  LeastSquares ls;
  ls.gram = factor_spd(symmetrize(rs.h.transpose() * rs.h), "H^T H");
  ls.m = ls.gram.solve(Vec(rs.h.transpose() * rs.b));
  ls.residual_sq = (rs.b - rs.h * ls.m).squaredNorm();
  return ls;
}

}  // namespace

void HyperState::validate(int n_dof, int n_modes, int n_sub) const {
  auto fail = [](const std::string& w) { throw InvalidArgument("hyper-state: " + w); };
  if (omega_sq.size() != n_modes || rho.size() != n_modes || tau.size() != n_modes)
    fail("omega_sq, rho and tau must have n_modes entries");
  if (phi.size() != static_cast<Eigen::Index>(n_modes) * n_dof) fail("phi must have n_modes * n_dof entries");
  if (alpha.size() != n_sub) fail("alpha must have n_sub entries");
  if (!(omega_sq.array() > 0.0).all()) fail("omega_sq must be positive");
  if (!(rho.array() > 0.0).all() || !(tau.array() > 0.0).all()) fail("rho and tau must be positive");
  if (!(eta > 0.0) || !(nu > 0.0) || !(beta > 0.0) || !(a0 > 0.0) || !(b0 > 0.0) || !(kappa > 0.0))
    fail("eta, nu, beta, a0, b0 and kappa must be positive");
  if (!(alpha.array() >= 0.0).all()) fail("alpha must be nonnegative");
  if (!phi.allFinite()) fail("phi must be finite");
}

std::vector<bool> HyperState::active() const {
  std::vector<bool> a(static_cast<std::size_t>(alpha.size()));
  for (Eigen::Index j = 0; j < alpha.size(); ++j) a[static_cast<std::size_t>(j)] = alpha(j) > 0.0;
  return a;
}

int PosteriorState::n_active() const {
  int n = 0;
  for (bool a : active) n += a ? 1 : 0;
  return n;
}

Problem make_problem(const StructuralBasis& basis, const ModalDataset& data) {
  basis.validate();
  data.validate(basis.n_dof);
  Problem p;
  p.basis = basis;
  p.data = data;
  p.n_dof = basis.n_dof;
  p.n_modes = data.n_modes;
  p.n_sub = basis.n_sub;
  p.n_segments = data.n_segments;
  p.n_observed = data.n_observed;
  p.freq_sum = data.freq_sq.colwise().sum().transpose();
  p.psi_sum = Mat::Zero(p.n_dof, p.n_modes);
  p.observed_mask = Vec::Zero(p.n_dof);
  for (int k = 0; k < p.n_observed; ++k) p.observed_mask(data.observed_dofs[k]) = 1.0;
  for (int r = 0; r < p.n_segments; ++r)
    for (int i = 0; i < p.n_modes; ++i)
      for (int k = 0; k < p.n_observed; ++k) p.psi_sum(data.observed_dofs[k], i) += data.mode_shapes[r](i, k);
  return p;
}

Vec build_b(const StructuralBasis& basis, const Vec& omega_sq, const Vec& phi) {
  check_phi(basis, phi, "build_b");
  const Eigen::Index nm = n_modes_of(basis, phi);
  require(omega_sq.size() == nm, "build_b: omega_sq length must equal the number of modes");
  const int nd = basis.n_dof;
  Vec b(phi.size());
  for (Eigen::Index i = 0; i < nm; ++i)
    b.segment(i * nd, nd) = (omega_sq(i) * basis.mass - basis.k0) * phi.segment(i * nd, nd);
  return b;
}

Mat build_h(const StructuralBasis& basis, const Vec& phi) {
  check_phi(basis, phi, "build_h");
  const Eigen::Index nm = n_modes_of(basis, phi);
  const int nd = basis.n_dof;
  Mat h(phi.size(), basis.n_sub);
  for (Eigen::Index i = 0; i < nm; ++i)
    for (int j = 0; j < basis.n_sub; ++j) h.col(j).segment(i * nd, nd) = basis.k_sub[j] * phi.segment(i * nd, nd);
  return h;
}

ResidualSystem build_residual_system(const StructuralBasis& basis, const Vec& omega_sq, const Vec& phi) {
  return {build_b(basis, omega_sq, phi), build_h(basis, phi)};
}

Mat partial_h(const StructuralBasis& basis, int n_modes, int q) {
  const int nd = basis.n_dof;
  if (n_modes <= 0 || q < 0 || q >= n_modes * nd) throw InvalidArgument("partial_h: index out of range");
  const int i = q / nd;
  const int a = q % nd;
  Mat pi = Mat::Zero(static_cast<Eigen::Index>(n_modes) * nd, basis.n_sub);
  for (int j = 0; j < basis.n_sub; ++j) pi.col(j).segment(static_cast<Eigen::Index>(i) * nd, nd) = basis.k_sub[j].col(a);
  return pi;
}

std::pair<Mat, Mat> build_t_u(const StructuralBasis& basis, const Vec& phi, int q) {
  check_phi(basis, phi, "build_t_u");
  const int nm = static_cast<int>(n_modes_of(basis, phi));
  if (q < 0 || q >= phi.size()) throw InvalidArgument("build_t_u: index out of range");
  const Mat pi = partial_h(basis, nm, q);
  const Mat t = pi.transpose() * pi;
  const Mat rest = build_h(basis, phi) - phi(q) * pi;
  const Mat u = pi.transpose() * rest;
  return {t, u};
}

Mat build_f(const StructuralBasis& basis, const Vec& mu, const Vec& omega_sq) {
  const Mat k = assemble_stiffness(basis, mu);
  const int nd = basis.n_dof;
  const Eigen::Index nm = omega_sq.size();
  require(nm > 0, "build_f: omega_sq must be non-empty");
  Mat f = Mat::Zero(nm * nd, nm * nd);
  for (Eigen::Index i = 0; i < nm; ++i) f.block(i * nd, i * nd, nd, nd) = k - omega_sq(i) * basis.mass;
  return f;
}

std::pair<Mat, Vec> build_g_c(const StructuralBasis& basis, const Vec& mu, const Vec& phi) {
  check_phi(basis, phi, "build_g_c");
  const Mat k = assemble_stiffness(basis, mu);
  const Eigen::Index nm = n_modes_of(basis, phi);
  const int nd = basis.n_dof;
  Mat g = Mat::Zero(phi.size(), nm);
  Vec c(phi.size());
  for (Eigen::Index i = 0; i < nm; ++i) {
    g.col(i).segment(i * nd, nd) = basis.mass * phi.segment(i * nd, nd);
    c.segment(i * nd, nd) = k * phi.segment(i * nd, nd);
  }
  return {g, c};
}

Mat sigma_weighted_stiffness(const StructuralBasis& basis, const Mat& sigma) {
  require(sigma.rows() == basis.n_sub && sigma.cols() == basis.n_sub,
          "sigma_weighted_stiffness: sigma must be n_sub x n_sub");
  const int nd = basis.n_dof;
  Mat w0 = Mat::Zero(nd, nd);
  for (int j = 0; j < basis.n_sub; ++j) {
    Mat s = Mat::Zero(nd, nd);
    bool any = false;
    for (int l = 0; l < basis.n_sub; ++l)
      if (sigma(j, l) != 0.0) {
        s.noalias() += sigma(j, l) * basis.k_sub[l];
        any = true;
      }
    if (any) w0.noalias() += basis.k_sub[j] * s;
  }
  return symmetrize(w0);
}

PosteriorState conditional_posterior(const ResidualSystem& rs, double beta, const Vec& alpha, const Vec& theta_hat) {
  check_posterior_args(rs, beta, alpha, theta_hat, "conditional_posterior");
  const Eigen::Index n = alpha.size();
  PosteriorState post;
  post.mu = theta_hat;
  post.sigma = Mat::Zero(n, n);
  post.active.assign(static_cast<std::size_t>(n), false);
  const auto act = active_indices(alpha);
  if (act.empty()) return post;
  const auto prn = pruned_indices(alpha);
  Vec b_red = rs.b;
  for (int j : prn) b_red.noalias() -= rs.h.col(j) * theta_hat(j);
  const Mat ha = columns(rs.h, act);
  const Vec alpha_a = entries(alpha, act);
  Mat prec = beta * (ha.transpose() * ha);
  prec.diagonal().array() += alpha_a.array().inverse();
  prec = symmetrize(prec);
  const SpdFactor f = factor_spd(prec, "posterior precision");
  const Vec rhs = beta * (ha.transpose() * b_red) + (entries(theta_hat, act).array() / alpha_a.array()).matrix();
  const Vec mu_a = f.solve(rhs);
  const Mat sig_a = symmetrize(f.inverse());
  for (std::size_t k = 0; k < act.size(); ++k) {
    post.mu(act[k]) = mu_a(static_cast<Eigen::Index>(k));
    post.active[static_cast<std::size_t>(act[k])] = true;
    for (std::size_t l = 0; l < act.size(); ++l)
      post.sigma(act[k], act[l]) = sig_a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
  }
  post.log_det_precision = f.log_det();
  post.jitter = f.jitter;
  return post;
}

double log_pseudo_evidence(const ResidualSystem& rs, double beta, const Vec& alpha, const Vec& theta_hat) {
  check_posterior_args(rs, beta, alpha, theta_hat, "log_pseudo_evidence");
  const LeastSquares ls = least_squares(rs);
  const Eigen::Index n = alpha.size();
  Mat c = ls.gram.inverse() / beta;
  c.diagonal() += alpha;
  const SpdFactor fc = factor_spd(symmetrize(c), "pseudo-evidence covariance");
  const Vec d = theta_hat - ls.m;
  return -0.5 * (static_cast<double>(n) * kLog2Pi + fc.log_det() + d.dot(fc.solve(d)));
}

double log_pseudo_evidence_factored(const ResidualSystem& rs, double beta, const Vec& alpha, const Vec& theta_hat) {
  check_posterior_args(rs, beta, alpha, theta_hat, "log_pseudo_evidence_factored");
  require((alpha.array() > 0.0).all(), "log_pseudo_evidence_factored: every component must be active");
  const LeastSquares ls = least_squares(rs);
  const PosteriorState post = conditional_posterior(rs, beta, alpha, theta_hat);
  const double n = static_cast<double>(alpha.size());
  // log|A + (beta H^T H)^{-1}| = -n log beta - log|H^T H| + log|A| + log|Sigma^{-1}|
  const double log_det_c =
      -n * std::log(beta) - ls.gram.log_det() + alpha.array().log().sum() + post.log_det_precision;
  // Quadratic form through the posterior mean.
  const Vec d = theta_hat - post.mu;
  const double quad = beta * (rs.h * post.mu - rs.b).squaredNorm() + (d.array().square() / alpha.array()).sum() -
                      beta * ls.residual_sq;
  return -0.5 * (n * kLog2Pi + log_det_c + quad);
}

OckhamTerms ockham_decomposition(const ResidualSystem& rs, double beta, const Vec& alpha, const Vec& theta_hat) {
  check_posterior_args(rs, beta, alpha, theta_hat, "ockham_decomposition");
  const LeastSquares ls = least_squares(rs);
  const PosteriorState post = conditional_posterior(rs, beta, alpha, theta_hat);
  const auto act = active_indices(alpha);
  const auto prn = pruned_indices(alpha);
  const Mat lambda = beta * symmetrize(rs.h.transpose() * rs.h);
  OckhamTerms out;

  // Pinned components: the divergent parts of fit and divergence cancel,
  // leaving the prior predictive density of theta_hat_P.
  if (!prn.empty()) {
    const Mat b_pp = sub_block(ls.gram.inverse() / beta, prn, prn);
    const SpdFactor f = factor_spd(b_pp, "pruned prior covariance");
    const Vec d = entries(theta_hat, prn) - entries(ls.m, prn);
    out.data_fit += -0.5 * (static_cast<double>(prn.size()) * kLog2Pi + f.log_det() + d.dot(f.solve(d)));
  }
  if (act.empty()) return out;

  const Mat l_aa = sub_block(lambda, act, act);
  Vec m_c = entries(ls.m, act);
  if (!prn.empty()) {
    const Mat l_ap = sub_block(lambda, act, prn);
    const SpdFactor f = factor_spd(l_aa, "conditional prior precision");
    m_c -= f.solve(Vec(l_ap * (entries(theta_hat, prn) - entries(ls.m, prn))));
  }
  const Vec mu_a = entries(post.mu, act);
  const Mat sig_a = sub_block(post.sigma, act, act);
  const Vec alpha_a = entries(alpha, act);
  const Vec d = entries(theta_hat, act) - mu_a;
  for (std::size_t k = 0; k < act.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    out.data_fit += -0.5 * (kLog2Pi + std::log(alpha_a(kk)) + (d(kk) * d(kk) + sig_a(kk, kk)) / alpha_a(kk));
  }
  const SpdFactor fl = factor_spd(l_aa, "conditional prior precision");
  const Vec e = mu_a - m_c;
  out.info_gain = 0.5 * ((l_aa.cwiseProduct(sig_a)).sum() + e.dot(l_aa * e) - static_cast<double>(act.size()) -
                         fl.log_det() + post.log_det_precision);
  return out;
}

namespace {

// Terms of the objective that do not involve the theta posterior.
double outer_terms(const Problem& p, const HyperState& s, double shape_misfit, double freq_misfit) {
  const double n_eq = static_cast<double>(p.n_eq());
  const double n_psi = static_cast<double>(p.n_segments) * p.n_modes * p.n_observed;
  double v = -0.5 * s.eta * shape_misfit - 0.5 * freq_misfit;
  v += (s.a0 - 1.0) * std::log(s.beta) + 0.5 * n_eq * std::log(s.beta);
  v += 0.5 * n_psi * std::log(s.eta);
  v += 0.5 * static_cast<double>(p.n_segments) * s.rho.array().log().sum();
  v += std::log(s.nu) - s.nu * s.eta;
  v += (s.tau.array().log() - s.tau.array() * s.rho.array()).sum();
  v += -s.beta / s.b0 - s.a0 * std::log(s.b0) - std::lgamma(s.a0);
  v += std::log(s.kappa) - s.kappa * s.b0;
  return v;
}

double shape_misfit_of(const Problem& p, const Vec& phi) {
  double r = 0.0;
  for (int seg = 0; seg < p.n_segments; ++seg)
    for (int i = 0; i < p.n_modes; ++i)
      for (int k = 0; k < p.n_observed; ++k) {
        const double e = p.data.mode_shapes[seg](i, k) - phi(static_cast<Eigen::Index>(i) * p.n_dof + p.data.observed_dofs[k]);
        r += e * e;
      }
  return r;
}

double freq_misfit_of(const Problem& p, const HyperState& s) {
  double r = 0.0;
  for (int seg = 0; seg < p.n_segments; ++seg)
    for (int i = 0; i < p.n_modes; ++i) {
      const double e = p.data.freq_sq(seg, i) - s.omega_sq(i);
      r += s.rho(i) * e * e;
    }
  return r;
}

}  // namespace

ObjectiveParts objective_parts(const Problem& p, const HyperState& s, const Vec& theta_hat) {
  s.validate(p.n_dof, p.n_modes, p.n_sub);
  require(theta_hat.size() == p.n_sub, "objective_j: theta_hat has the wrong length");
  const ResidualSystem rs = build_residual_system(p.basis, s.omega_sq, s.phi);
  const PosteriorState post = conditional_posterior(rs, s.beta, s.alpha, theta_hat);
  ObjectiveParts o;
  o.shape_misfit = shape_misfit_of(p, s.phi);
  o.freq_misfit = freq_misfit_of(p, s);
  o.eq_misfit = (rs.h * post.mu - rs.b).squaredNorm();
  double log_alpha = 0.0;
  for (int j = 0; j < p.n_sub; ++j)
    if (s.alpha(j) > 0.0) {
      const double d = theta_hat(j) - post.mu(j);
      o.pseudo_data += d * d / s.alpha(j);
      log_alpha += std::log(s.alpha(j));
    }
  o.log_det_precision = post.log_det_precision;
  o.total = outer_terms(p, s, o.shape_misfit, o.freq_misfit) - 0.5 * o.pseudo_data - 0.5 * o.log_det_precision -
            0.5 * log_alpha - 0.5 * s.beta * o.eq_misfit;
  return o;
}

double objective_j(const Problem& p, const HyperState& s, const Vec& theta_hat) {
  return objective_parts(p, s, theta_hat).total;
}

double objective_j_marginal(const Problem& p, const HyperState& s, const Vec& theta_hat) {
  s.validate(p.n_dof, p.n_modes, p.n_sub);
  require(theta_hat.size() == p.n_sub, "objective_j_marginal: theta_hat has the wrong length");
  const ResidualSystem rs = build_residual_system(p.basis, s.omega_sq, s.phi);
  const LeastSquares ls = least_squares(rs);
  const double n_theta = static_cast<double>(p.n_sub);
  const double lpe = log_pseudo_evidence(rs, s.beta, s.alpha, theta_hat);
  // log of the integral over theta of N(theta_hat | theta, A) exp(-beta/2 ||H theta - b||^2)
  const double theta_part = lpe + 0.5 * n_theta * kLog2Pi - 0.5 * s.beta * ls.residual_sq -
                            0.5 * (n_theta * std::log(s.beta) + ls.gram.log_det());
  return theta_part + outer_terms(p, s, shape_misfit_of(p, s.phi), freq_misfit_of(p, s));
}

ObjectiveGradient objective_gradient(const Problem& p, const HyperState& s, const Vec& theta_hat) {
  s.validate(p.n_dof, p.n_modes, p.n_sub);
  const int nd = p.n_dof;
  const int nm = p.n_modes;
  const ResidualSystem rs = build_residual_system(p.basis, s.omega_sq, s.phi);
  const PosteriorState post = conditional_posterior(rs, s.beta, s.alpha, theta_hat);
  const Mat k_mu = assemble_stiffness(p.basis, post.mu);
  const Mat w0 = sigma_weighted_stiffness(p.basis, post.sigma);
  const double ns = static_cast<double>(p.n_segments);

  ObjectiveGradient g;
  g.phi.resize(s.phi.size());
  g.omega_sq.resize(nm);
  for (int i = 0; i < nm; ++i) {
    const Vec ph = s.phi.segment(static_cast<Eigen::Index>(i) * nd, nd);
    const Mat fi = k_mu - s.omega_sq(i) * p.basis.mass;
    const Vec data_term = s.eta * (p.psi_sum.col(i) - ns * p.observed_mask.cwiseProduct(ph));
    g.phi.segment(static_cast<Eigen::Index>(i) * nd, nd) = data_term - s.beta * (fi * (fi * ph)) - s.beta * (w0 * ph);
    const Vec gi = p.basis.mass * ph;
    const Vec ci = k_mu * ph;
    g.omega_sq(i) = s.rho(i) * (p.freq_sum(i) - ns * s.omega_sq(i)) - s.beta * gi.dot(gi * s.omega_sq(i) - ci);
  }

  g.alpha = Vec::Zero(p.n_sub);
  double gamma = 0.0;
  for (int j = 0; j < p.n_sub; ++j) {
    if (!(s.alpha(j) > 0.0)) continue;
    const double a = s.alpha(j);
    const double d = theta_hat(j) - post.mu(j);
    g.alpha(j) = 0.5 * (d * d + post.sigma(j, j)) / (a * a) - 0.5 / a;
    gamma += 1.0 - post.sigma(j, j) / a;
  }
  const double n_eq = static_cast<double>(p.n_eq());
  const double eq_misfit = (rs.h * post.mu - rs.b).squaredNorm();
  g.beta = -0.5 * eq_misfit + (0.5 * n_eq + s.a0 - 1.0) / s.beta - 0.5 * gamma / s.beta - 1.0 / s.b0;

  const double n_psi = static_cast<double>(p.n_segments) * nm * p.n_observed;
  g.eta = -0.5 * shape_misfit_of(p, s.phi) + 0.5 * n_psi / s.eta - s.nu;
  g.nu = 1.0 / s.nu - s.eta;
  g.rho.resize(nm);
  for (int i = 0; i < nm; ++i) {
    const double dev = (p.data.freq_sq.col(i).array() - s.omega_sq(i)).square().sum();
    g.rho(i) = -0.5 * dev + 0.5 * ns / s.rho(i) - s.tau(i);
  }
  g.tau = s.tau.array().inverse() - s.rho.array();
  g.b0 = s.beta / (s.b0 * s.b0) - s.a0 / s.b0 - s.kappa;
  g.kappa = 1.0 / s.kappa - s.b0;
  return g;
}

LogDetGradient log_det_precision_gradient(const Problem& p, const HyperState& s) {
  const ResidualSystem rs = build_residual_system(p.basis, s.omega_sq, s.phi);
  // The precision does not depend on theta_hat; any vector of the right size works.
  const PosteriorState post = conditional_posterior(rs, s.beta, s.alpha, Vec::Ones(p.n_sub));
  const Mat w0 = sigma_weighted_stiffness(p.basis, post.sigma);
  LogDetGradient g;
  g.phi.resize(s.phi.size());
  for (int i = 0; i < p.n_modes; ++i) {
    const auto seg = static_cast<Eigen::Index>(i) * p.n_dof;
    g.phi.segment(seg, p.n_dof) = 2.0 * s.beta * (w0 * s.phi.segment(seg, p.n_dof));
  }
  g.alpha = Vec::Zero(p.n_sub);
  double gamma = 0.0;
  for (int j = 0; j < p.n_sub; ++j)
    if (s.alpha(j) > 0.0) {
      g.alpha(j) = -post.sigma(j, j) / (s.alpha(j) * s.alpha(j));
      gamma += 1.0 - post.sigma(j, j) / s.alpha(j);
    }
  g.beta = gamma / s.beta;
  return g;
}

std::pair<Vec, Vec> misfit_gradient(const StructuralBasis& basis, const Vec& mu, const Vec& omega_sq,
                                    const Vec& phi, double beta) {
  const Mat f = build_f(basis, mu, omega_sq);
  const auto [g, c] = build_g_c(basis, mu, phi);
  return {2.0 * beta * (f.transpose() * (f * phi)), 2.0 * beta * (g.transpose() * (g * omega_sq - c))};
}

}  // namespace sbl
