#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace sbl;
using namespace sbl::testing;

namespace {

StructuralBasis identity_mass_basis(int nd, int nsub, std::mt19937_64& rng) {
  StructuralBasis b = random_basis(rng, nd, nsub);
  b.mass = Mat::Identity(nd, nd);
  b.k0 = Mat::Zero(nd, nd);
  return b;
}

StructuralBasis scalar_basis(double k) {
  StructuralBasis b;
  b.n_dof = 1;
  b.n_sub = 1;
  b.mass = Mat::Identity(1, 1);
  b.k0 = Mat::Zero(1, 1);
  b.k_sub = {Mat::Constant(1, 1, k)};
  b.labels = {"k"};
  return b;
}

}  // namespace

// ---- b, H and their derivatives ----

TEST(BuildB, IdentityMassExample) {
  std::mt19937_64 rng(1);
  StructuralBasis b = identity_mass_basis(2, 1, rng);
  Vec phi(2);
  phi << 1, 0;
  const Vec out = build_b(b, Vec::Constant(1, 4.0), phi);
  EXPECT_EQ(out(0), 4.0);
  EXPECT_EQ(out(1), 0.0);
}

TEST(BuildB, ZeroShapesGiveZero) {
  std::mt19937_64 rng(2);
  const StructuralBasis b = random_basis(rng, 3, 2);
  EXPECT_EQ(build_b(b, Vec::Ones(2), Vec::Zero(6)), Vec::Zero(6));
}

TEST(BuildB, MatchesDenseBlocks) {
  std::mt19937_64 rng(3);
  const StructuralBasis b = random_basis(rng, 3, 4);
  const Vec om = random_vec(rng, 2, 0.5, 2.0);
  const Vec phi = random_vec(rng, 6);
  const Vec out = build_b(b, om, phi);
  for (int i = 0; i < 2; ++i) {
    const Vec blk = om(i) * (b.mass * phi.segment(3 * i, 3)) - b.k0 * phi.segment(3 * i, 3);
    EXPECT_LE((out.segment(3 * i, 3) - blk).cwiseAbs().maxCoeff(), 1e-14 * std::max(1.0, blk.norm()));
  }
}

TEST(BuildH, ScalarCase) {
  const Mat h = build_h(scalar_basis(2.5), Vec::Ones(1));
  EXPECT_EQ(h(0, 0), 2.5);
}

TEST(BuildH, ResidualIdentity) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    const StructuralBasis b = random_basis(rng, 4, 3);
    const Vec om = random_vec(rng, 2, 0.5, 2.0), phi = random_vec(rng, 8), th = random_vec(rng, 3, 0.5, 1.5);
    const ResidualSystem rs = build_residual_system(b, om, phi);
    const Mat k = assemble_stiffness(b, th);
    for (int i = 0; i < 2; ++i) {
      const double direct = ((k - om(i) * b.mass) * phi.segment(4 * i, 4)).squaredNorm();
      const double via = (rs.h * th - rs.b).segment(4 * i, 4).squaredNorm();
      EXPECT_LE(rel_err(direct, via), 1e-12);
    }
  }
}

TEST(BuildH, LinearInPhi) {
  std::mt19937_64 rng(5);
  const StructuralBasis b = random_basis(rng, 3, 3);
  const Vec p1 = random_vec(rng, 6), p2 = random_vec(rng, 6);
  EXPECT_LE(mat_rel_err(build_h(b, p1 + p2), build_h(b, p1) + build_h(b, p2)), 1e-14);
}

TEST(PartialH, ReconstructsH) {
  std::mt19937_64 rng(6);
  const StructuralBasis b = random_basis(rng, 3, 4);
  const Vec phi = random_vec(rng, 6);
  Mat sum = Mat::Zero(6, 4);
  for (int q = 0; q < 6; ++q) sum += phi(q) * partial_h(b, 2, q);
  const Mat h = build_h(b, phi);
  EXPECT_LE((sum - h).cwiseAbs().maxCoeff(), 1e-14 * std::max(1.0, h.cwiseAbs().maxCoeff()));
}

TEST(PartialH, FiniteDifference) {
  std::mt19937_64 rng(7);
  const StructuralBasis b = random_basis(rng, 3, 2);
  const Vec phi = random_vec(rng, 6);
  const double eps = 1e-7;
  for (int q = 0; q < 6; ++q) {
    Vec pe = phi;
    pe(q) += eps;
    const Mat fd = (build_h(b, pe) - build_h(b, phi)) / eps;
    EXPECT_LE((fd - partial_h(b, 2, q)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(PartialH, ScalarAndRange) {
  EXPECT_EQ(partial_h(scalar_basis(3.0), 1, 0)(0, 0), 3.0);
  EXPECT_THROW(partial_h(scalar_basis(3.0), 1, 1), InvalidArgument);
}

TEST(BuildTU, DerivativeOfGram) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 5; ++t) {
    const StructuralBasis b = random_basis(rng, 3, 3);
    const Vec phi = random_vec(rng, 6);
    for (int q = 0; q < 6; ++q) {
      const auto [tq, uq] = build_t_u(b, phi, q);
      Vec pp = phi, pm = phi;
      const double h = 1e-5;
      pp(q) += h;
      pm(q) -= h;
      const Mat hp = build_h(b, pp), hm = build_h(b, pm);
      const Mat fd = (hp.transpose() * hp - hm.transpose() * hm) / (2 * h);
      const Mat an = 2 * phi(q) * tq + uq + uq.transpose();
      EXPECT_LE((fd - an).cwiseAbs().maxCoeff(), 1e-6 * std::max(1.0, an.cwiseAbs().maxCoeff()));
    }
  }
}

TEST(BuildTU, SingleComponentHasNoCoupling) {
  std::mt19937_64 rng(9);
  const StructuralBasis b = random_basis(rng, 3, 3);
  Vec phi = Vec::Zero(6);
  phi(4) = 0.7;
  EXPECT_EQ(build_t_u(b, phi, 4).second, Mat::Zero(3, 3));
}

TEST(BuildTU, TIsSymmetricPsd) {
  std::mt19937_64 rng(10);
  const StructuralBasis b = random_basis(rng, 3, 3);
  const Vec phi = random_vec(rng, 6);
  for (int q = 0; q < 6; ++q) {
    const Mat t = build_t_u(b, phi, q).first;
    EXPECT_EQ(t, t.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(t);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * std::max(1.0, t.norm()));
  }
}

TEST(BuildTU, TraceWithSigmaEqualsW0Diagonal) {
  std::mt19937_64 rng(11);
  const StructuralBasis b = random_basis(rng, 3, 4);
  const Vec phi = random_vec(rng, 6);
  const Mat sigma = random_spd(rng, 4);
  const Mat w0 = sigma_weighted_stiffness(b, sigma);
  for (int q = 0; q < 6; ++q) {
    const auto [t, u] = build_t_u(b, phi, q);
    const int a = q % 3, i = q / 3;
    EXPECT_LE(rel_err((sigma * t).trace(), w0(a, a)), 1e-12);
    // tr(Sigma U_q) = off-diagonal of W0 applied to the current shape.
    Vec ph = phi.segment(3 * i, 3);
    ph(a) = 0.0;
    EXPECT_LE(rel_err((sigma * u).trace(), w0.row(a).dot(ph)), 1e-12);
  }
}

TEST(BuildF, DefiningIdentity) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    const StructuralBasis b = random_basis(rng, 4, 3);
    const Vec mu = random_vec(rng, 3, 0.5, 1.5), om = random_vec(rng, 3, 0.2, 3.0), phi = random_vec(rng, 12);
    const Vec lhs = build_f(b, mu, om) * phi;
    const Vec rhs = build_h(b, phi) * mu - build_b(b, om, phi);
    EXPECT_LE((lhs - rhs).norm(), 1e-13 * std::max(1.0, lhs.norm()));
  }
}

TEST(BuildF, SingleModeAndZeroStiffness) {
  std::mt19937_64 rng(13);
  StructuralBasis b = random_basis(rng, 3, 2);
  const Vec mu = random_vec(rng, 2);
  EXPECT_LE(mat_rel_err(build_f(b, mu, Vec::Constant(1, 2.0)), assemble_stiffness(b, mu) - 2.0 * b.mass), 1e-15);
  b.k0.setZero();
  Vec om(2);
  om << 1.5, 3.0;
  const Mat f = build_f(b, Vec::Zero(2), om);
  EXPECT_EQ(Mat(f.block(0, 0, 3, 3)), Mat(-1.5 * b.mass));
  EXPECT_EQ(Mat(f.block(3, 3, 3, 3)), Mat(-3.0 * b.mass));
  EXPECT_EQ(Mat(f.block(0, 3, 3, 3)), Mat::Zero(3, 3));
}

TEST(BuildGC, ResidualNormIdentity) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 10; ++t) {
    const StructuralBasis b = random_basis(rng, 4, 3);
    const Vec mu = random_vec(rng, 3, 0.5, 1.5), om = random_vec(rng, 2, 0.2, 3.0), phi = random_vec(rng, 8);
    const auto [g, c] = build_g_c(b, mu, phi);
    const Vec r1 = g * om - c;
    const Vec r2 = build_h(b, phi) * mu - build_b(b, om, phi);
    EXPECT_LE(rel_err(r1.norm(), r2.norm()), 1e-13);
    EXPECT_LE((r1 + r2).norm(), 1e-13 * std::max(1.0, r1.norm()));
  }
}

TEST(BuildGC, UnitAndZeroCases) {
  std::mt19937_64 rng(15);
  const StructuralBasis b = identity_mass_basis(3, 2, rng);
  Vec e1 = Vec::Zero(3);
  e1(0) = 1.0;
  EXPECT_EQ(build_g_c(b, Vec::Ones(2), e1).first, Mat(e1));
  StructuralBasis b2 = random_basis(rng, 3, 2);
  const Vec phi = random_vec(rng, 6);
  const Vec c = build_g_c(b2, Vec::Zero(2), phi).second;
  EXPECT_EQ(Vec(c.segment(0, 3)), Vec(b2.k0 * phi.segment(0, 3)));
  EXPECT_EQ(Vec(c.segment(3, 3)), Vec(b2.k0 * phi.segment(3, 3)));
}

// ---- Conditional posterior ----

TEST(Posterior, LargeAlphaGivesLeastSquares) {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 10; ++t) {
    const ResidualSystem rs = random_system(rng, 12, 4);
    const Vec th = random_vec(rng, 4);
    const PosteriorState post = conditional_posterior(rs, 3.0, Vec::Constant(4, 1e9), th);
    const Vec ls = (rs.h.transpose() * rs.h).ldlt().solve(rs.h.transpose() * rs.b);
    EXPECT_LE(rel_err(post.mu, ls), 1e-6);
  }
}

TEST(Posterior, ZeroHGivesPrior) {
  std::mt19937_64 rng(17);
  ResidualSystem rs = random_system(rng, 6, 3);
  rs.h.setZero();
  const Vec th = random_vec(rng, 3), alpha = random_vec(rng, 3, 0.1, 1.0);
  const PosteriorState post = conditional_posterior(rs, 2.0, alpha, th);
  EXPECT_LE(rel_err(post.mu, th), 1e-15);
  EXPECT_LE(mat_rel_err(post.sigma, Mat(alpha.asDiagonal())), 1e-15);
}

TEST(Posterior, MatchesDenseInverse) {
  std::mt19937_64 rng(18);
  for (int t = 0; t < 20; ++t) {
    const ResidualSystem rs = random_system(rng, 5, 2);
    const Vec th = random_vec(rng, 2), alpha = random_vec(rng, 2, 0.05, 2.0);
    const double beta = 0.5 + t;
    const Mat a_inv = alpha.cwiseInverse().asDiagonal();
    const Mat sigma = (beta * rs.h.transpose() * rs.h + a_inv).inverse();
    const Vec mu = sigma * (beta * rs.h.transpose() * rs.b + a_inv * th);
    const PosteriorState post = conditional_posterior(rs, beta, alpha, th);
    EXPECT_LE(rel_err(post.mu, mu), 1e-12);
    EXPECT_LE(mat_rel_err(post.sigma, sigma), 1e-12);
  }
}

TEST(Posterior, PrunedComponentsArePinnedExactly) {
  std::mt19937_64 rng(19);
  const ResidualSystem rs = random_system(rng, 10, 5);
  const Vec th = random_vec(rng, 5);
  Vec alpha = random_vec(rng, 5, 0.05, 1.0);
  alpha(1) = 0.0;
  alpha(3) = 0.0;
  const PosteriorState post = conditional_posterior(rs, 4.0, alpha, th);
  for (int j : {1, 3}) {
    EXPECT_EQ(post.mu(j), th(j));
    EXPECT_FALSE(post.active[j]);
    for (int l = 0; l < 5; ++l) {
      EXPECT_EQ(post.sigma(j, l), 0.0);
      EXPECT_EQ(post.sigma(l, j), 0.0);
    }
  }
  EXPECT_EQ(post.n_active(), 3);
  // Active block equals the dense solve with pruned columns moved to the data side.
  const std::vector<int> act = {0, 2, 4};
  Mat ha(10, 3);
  Vec bb = rs.b - rs.h.col(1) * th(1) - rs.h.col(3) * th(3);
  Vec aa(3), ta(3);
  for (int k = 0; k < 3; ++k) {
    ha.col(k) = rs.h.col(act[k]);
    aa(k) = alpha(act[k]);
    ta(k) = th(act[k]);
  }
  const Mat sig = (4.0 * ha.transpose() * ha + Mat(aa.cwiseInverse().asDiagonal())).inverse();
  const Vec mu = sig * (4.0 * ha.transpose() * bb + aa.cwiseInverse().cwiseProduct(ta));
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(post.mu(act[k]), mu(k), 1e-12);
}

TEST(Posterior, SigmaSymmetricPositive) {
  std::mt19937_64 rng(20);
  const ResidualSystem rs = random_system(rng, 8, 5);
  const PosteriorState post = conditional_posterior(rs, 10.0, random_vec(rng, 5, 0.01, 1.0), random_vec(rng, 5));
  EXPECT_EQ(post.sigma, post.sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(post.sigma);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Posterior, NonFiniteSystemFails) {
  ResidualSystem rs;
  rs.h = Mat::Ones(4, 2);
  rs.h(2, 1) = std::numeric_limits<double>::quiet_NaN();
  rs.b = Vec::Zero(4);
  EXPECT_THROW(conditional_posterior(rs, 1.0, Vec::Ones(2), Vec::Zero(2)), NumericalFailure);
}

TEST(Linalg, JitterRescuesSingularPsd) {
  const SpdFactor f = factor_spd(Mat::Ones(3, 3), "test");
  EXPECT_GE(f.escalations, 1);
  EXPECT_GT(f.jitter, 0.0);
  EXPECT_LE(f.jitter, 1e-12 * 1e4);
}

TEST(Linalg, IndefiniteMatrixReportsCondition) {
  Mat a = Mat::Identity(2, 2);
  a(1, 1) = -1.0;
  try {
    factor_spd(a, "test");
    FAIL() << "expected NumericalFailure";
  } catch (const NumericalFailure& e) {
    EXPECT_TRUE(std::isinf(e.condition()));
    EXPECT_NE(std::string(e.what()).find("condition"), std::string::npos);
  }
}

// ---- Pseudo-evidence ----

TEST(PseudoEvidence, PerfectFit) {
  const int n = 3;
  ResidualSystem rs;
  rs.h = Mat::Identity(n, n);
  std::mt19937_64 rng(21);
  const Vec th = random_vec(rng, n);
  rs.b = th;
  const Vec alpha = random_vec(rng, n, 0.1, 1.0);
  const double beta = 2.5;
  double expect = 0.0;
  for (int j = 0; j < n; ++j) expect += -0.5 * std::log(2 * M_PI * (alpha(j) + 1.0 / beta));
  EXPECT_LE(rel_err(log_pseudo_evidence(rs, beta, alpha, th), expect), 1e-14);
  EXPECT_LE(rel_err(log_pseudo_evidence_factored(rs, beta, alpha, th), expect), 1e-12);
}

TEST(PseudoEvidence, OneDimensionalQuadrature) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 20; ++t) {
    const EvidenceInstance e = random_evidence_instance(rng, 1, 6);
    const double closed = log_pseudo_evidence(e.rs, e.beta, e.alpha, e.theta_hat);
    const double quad = lpe_quadrature_1d(e.rs, e.beta, e.alpha(0), e.theta_hat(0));
    EXPECT_LE(std::abs(std::exp(closed) - std::exp(quad)), 1e-8 * std::exp(closed)) << "instance " << t;
  }
}

TEST(PseudoEvidence, ThreeDimensionalMonteCarlo) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 3; ++t) {
    EvidenceInstance e = random_evidence_instance(rng, 3, 8);
    e.alpha = Vec::Constant(3, 0.3);
    e.beta = 2.0;
    const double closed = std::exp(log_pseudo_evidence(e.rs, e.beta, e.alpha, e.theta_hat));
    const MonteCarloEstimate mc = lpe_monte_carlo(e.rs, e.beta, e.alpha, e.theta_hat, 1000000, 100 + t);
    EXPECT_LE(std::abs(mc.mean - closed), 3.0 * mc.std_error) << "instance " << t;
  }
}

TEST(PseudoEvidence, FactoredFormAgrees) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 50; ++t) {
    const EvidenceInstance e = random_evidence_instance(rng, 1 + t % 6, 20);
    EXPECT_LE(rel_err(log_pseudo_evidence(e.rs, e.beta, e.alpha, e.theta_hat),
                      log_pseudo_evidence_factored(e.rs, e.beta, e.alpha, e.theta_hat)),
              1e-10);
  }
}

TEST(Identities, DeterminantWoodburyQuadratic) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 6;
    const int rows = n + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(20 - n));
    const IdentityErrors err = identity_errors(random_evidence_instance(rng, n, rows));
    EXPECT_LE(err.det, 1e-9) << "instance " << t;
    EXPECT_LE(err.woodbury, 1e-9) << "instance " << t;
    EXPECT_LE(err.quad, 1e-9) << "instance " << t;
  }
}

// ---- Objective and gradients ----

TEST(Objective, BothFormsAgree) {
  for (int seed = 0; seed < 20; ++seed) {
    const RandomInstance r = random_instance(100 + seed, 2, 3, seed % 3 == 0 ? 3 : 0);
    const double a = objective_j(r.problem, r.state, r.theta_hat);
    const double b = objective_j_marginal(r.problem, r.state, r.theta_hat);
    EXPECT_LE(rel_err(a, b), 1e-10) << "seed " << seed;
  }
}

TEST(Objective, PartsSumToTotal) {
  const RandomInstance r = random_instance(7);
  const ObjectiveParts o = objective_parts(r.problem, r.state, r.theta_hat);
  EXPECT_EQ(o.total, objective_j(r.problem, r.state, r.theta_hat));
  EXPECT_GT(o.shape_misfit, 0.0);
  EXPECT_GT(o.freq_misfit, 0.0);
}

TEST(Objective, RejectsInvalidState) {
  RandomInstance r = random_instance(8);
  r.state.beta = -1.0;
  EXPECT_THROW(objective_j(r.problem, r.state, r.theta_hat), InvalidArgument);
}

TEST(Gradient, MatchesFiniteDifferences) {
  for (int seed = 0; seed < 10; ++seed) {
    const RandomInstance r = random_instance(200 + seed, 2, 3, seed % 4 == 1 ? 4 : 0);
    const auto f = [&](const HyperState& s) { return objective_j(r.problem, s, r.theta_hat); };
    for (const BlockError& e : objective_gradient_errors(r.problem, r.state, r.theta_hat, f))
      EXPECT_LE(e.rel, 1e-5) << "seed " << seed << " block " << e.block;
  }
}

TEST(Gradient, MatchesFiniteDifferencesOfMarginalForm) {
  for (int seed = 0; seed < 5; ++seed) {
    const RandomInstance r = random_instance(300 + seed);
    const auto f = [&](const HyperState& s) { return objective_j_marginal(r.problem, s, r.theta_hat); };
    for (const BlockError& e : objective_gradient_errors(r.problem, r.state, r.theta_hat, f))
      EXPECT_LE(e.rel, 1e-5) << "seed " << seed << " block " << e.block;
  }
}

TEST(Gradient, LogDetPrecision) {
  for (int seed = 0; seed < 10; ++seed) {
    const RandomInstance r = random_instance(400 + seed, 2, 3, seed % 3 == 2 ? 3 : 0);
    for (const BlockError& e : log_det_gradient_errors(r.problem, r.state))
      EXPECT_LE(e.rel, 1e-5) << "seed " << seed << " block " << e.block;
  }
}

TEST(Gradient, EquationMisfit) {
  for (int seed = 0; seed < 10; ++seed) {
    const RandomInstance r = random_instance(500 + seed);
    std::mt19937_64 rng(seed);
    const Vec mu = random_vec(rng, r.problem.n_sub, 0.8, 1.1);
    for (const BlockError& e : misfit_gradient_errors(r.problem, r.state, mu))
      EXPECT_LE(e.rel, 1e-5) << "seed " << seed << " block " << e.block;
  }
}

TEST(Gradient, PosteriorMeanDerivativesDropOut) {
  // The theta-dependent part of the objective is stationary in mu at the
  // posterior mean, so perturbing mu changes it only at second order.
  const RandomInstance r = random_instance(600);
  const ResidualSystem rs = build_residual_system(r.problem.basis, r.state.omega_sq, r.state.phi);
  const PosteriorState post = conditional_posterior(rs, r.state.beta, r.state.alpha, r.theta_hat);
  const auto q = [&](const Vec& mu) {
    const Vec d = r.theta_hat - mu;
    return -0.5 * (r.state.beta * (rs.h * mu - rs.b).squaredNorm() +
                   (d.array().square() / r.state.alpha.array()).sum());
  };
  std::mt19937_64 rng(601);
  const Vec v = random_vec(rng, r.problem.n_sub).normalized();
  const double base = q(post.mu);
  const double d1 = base - q(post.mu + 1e-3 * v);
  const double d2 = base - q(post.mu + 1e-4 * v);
  EXPECT_GT(d1, 0.0);
  EXPECT_NEAR(d1 / d2, 100.0, 1e-3);
}

// ---- Ockham decomposition ----

TEST(Ockham, SumsToPseudoEvidence) {
  std::mt19937_64 rng(26);
  for (int t = 0; t < 50; ++t) {
    EvidenceInstance e = random_evidence_instance(rng, 2 + t % 5, 20);
    if (t % 2 == 1) e.alpha(t % e.alpha.size()) = 0.0;
    const OckhamTerms o = ockham_decomposition(e.rs, e.beta, e.alpha, e.theta_hat);
    EXPECT_LE(rel_err(o.data_fit - o.info_gain, log_pseudo_evidence(e.rs, e.beta, e.alpha, e.theta_hat)), 1e-10)
        << "instance " << t;
  }
}

TEST(Ockham, SymmetricHandCase) {
  const int n = 3;
  const double beta = 4.0;
  ResidualSystem rs;
  rs.h = Mat::Identity(n, n);
  std::mt19937_64 rng(27);
  const Vec th = random_vec(rng, n);
  rs.b = th;
  const OckhamTerms o = ockham_decomposition(rs, beta, Vec::Constant(n, 1.0 / beta), th);
  EXPECT_NEAR(o.data_fit, -0.5 * n * (std::log(2 * M_PI) - std::log(beta) + 0.5), 1e-13);
  EXPECT_NEAR(o.info_gain, 0.5 * n * (std::log(2.0) - 0.5), 1e-13);
}

TEST(Ockham, InformationGainShrinksAsPseudoDataLoosen) {
  std::mt19937_64 rng(28);
  for (int t = 0; t < 10; ++t) {
    const EvidenceInstance e = random_evidence_instance(rng, 4, 12);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = -4; k <= 8; ++k) {
      const OckhamTerms o = ockham_decomposition(e.rs, e.beta, e.alpha * std::pow(10.0, k), e.theta_hat);
      EXPECT_GE(o.info_gain, -1e-12);
      EXPECT_LE(o.info_gain, prev * (1 + 1e-12));
      prev = o.info_gain;
    }
    EXPECT_LT(prev, 1e-6);
  }
}
