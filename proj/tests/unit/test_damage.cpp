#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace sbl;
using namespace sbl::testing;

namespace {

// Small hand-built calibration/monitoring pair: three substructures, the
// middle one damaged.
std::pair<CalibrationResult, MonitoringResult> hand_results() {
  CalibrationResult c;
  c.theta_u_hat = Vec(3);
  c.theta_u_hat << 1.0, 1.5, 0.8;
  c.sigma_u = Mat::Zero(3, 3);
  c.sigma_u.diagonal() << 0.0004, 0.0009, 0.000064;
  c.sigma_u(0, 1) = c.sigma_u(1, 0) = 0.0001;
  MonitoringResult m;
  m.theta_d = c.theta_u_hat;
  m.theta_d(1) = 1.32;
  m.sigma_d = Mat::Zero(3, 3);
  m.sigma_d(1, 1) = 0.0016;
  m.alpha_final = Vec::Zero(3);
  m.alpha_final(1) = 0.02;
  return {c, m};
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(SBL_FIXTURE_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_golden(const std::string& name, const std::string& actual) {
  if (std::getenv("SBL_UPDATE_FIXTURES")) {
    std::ofstream(std::string(SBL_FIXTURE_DIR) + "/" + name) << actual;
    return;
  }
  EXPECT_EQ(read_fixture(name), actual) << "set SBL_UPDATE_FIXTURES=1 to regenerate " << name;
}

}  // namespace

TEST(DamageProbability, MeansCrossAtOneHalf) {
  EXPECT_DOUBLE_EQ(damage_probability(1.0, 0.02, 0.88, 0.03, 1.0 - 0.88), 0.5);
  EXPECT_EQ(damage_probability(0.9, 0.05, 0.9, 0.05, 0.0), 0.5);
}

TEST(DamageProbability, DegenerateSigmas) {
  EXPECT_EQ(damage_probability(1.0, 0.0, 0.8, 0.0, 0.1), 1.0);
  EXPECT_EQ(damage_probability(1.0, 0.0, 0.95, 0.0, 0.1), 0.0);
  EXPECT_EQ(damage_probability(1.0, 0.0, 1.0, 0.0, 0.0), 0.5);
}

TEST(DamageProbability, RejectsBadFraction) {
  EXPECT_THROW(damage_probability(1, 0.1, 1, 0.1, 1.0), InvalidArgument);
  EXPECT_THROW(damage_probability(1, 0.1, 1, 0.1, -0.01), InvalidArgument);
  EXPECT_THROW(damage_probability(1, -0.1, 1, 0.1, 0.0), InvalidArgument);
}

TEST(DamageProbability, MatchesMonteCarloOnCoarseGrid) {
  std::mt19937_64 rng(1);
  const long n = 1000000;
  for (double mu_u : {0.9, 1.1})
    for (double s_u : {0.01, 0.05})
      for (double mu_d : {0.8, 1.0})
        for (double s_d : {0.02, 0.08}) {
          const double f = 0.1;
          const double p = damage_probability(mu_u, s_u, mu_d, s_d, f);
          const double mc = damage_monte_carlo(mu_u, s_u, mu_d, s_d, f, n, rng);
          const double se = std::sqrt(p * (1 - p) / n);
          EXPECT_LE(std::abs(mc - p), 4 * se) << mu_u << ' ' << s_u << ' ' << mu_d << ' ' << s_d;
        }
}

TEST(DamageProbability, AsPrintedPairingSwapsVariances) {
  const double t = 0.9, mu_u = 1.0, s_u = 0.02, mu_d = 0.85, s_d = 0.05;
  const double as_printed = damage_probability(mu_u, s_u, mu_d, s_d, 0.1, VariancePairing::AsPrinted);
  const double z = (t * mu_u - mu_d) / std::sqrt(t * t * s_d * s_d + s_u * s_u);
  EXPECT_NEAR(as_printed, 0.5 * std::erfc(-z / std::sqrt(2.0)), 1e-15);
  EXPECT_NE(as_printed, damage_probability(mu_u, s_u, mu_d, s_d, 0.1));
}

TEST(DamageProbability, ClearDamageIsCertain) {
  for (double f : {0.0, 0.025, 0.05}) EXPECT_GT(damage_probability(1.0, 0.01, 0.88, 0.01, f), 0.99);
  EXPECT_GT(damage_probability(1.0, 0.003, 0.88, 0.003, 0.10), 0.99);
}

TEST(DamageCurve, DeepDamageMedianNearSeventyPercent) {
  const double mu_d = 0.302, s_d = 0.36148 * 0.302;
  GridSpec g{0.0, 0.95, 1e-4};
  const DamageCurve c = damage_curve("1,-y", 1.0, 0.01, mu_d, s_d, g);
  double crossing = -1;
  for (std::size_t k = 1; k < c.f_grid.size(); ++k)
    if (c.p_dam[k - 1] >= 0.5 && c.p_dam[k] < 0.5) crossing = c.f_grid[k];
  EXPECT_NEAR(crossing, 0.70, 0.005);
}

TEST(DamageCurve, PrunedComponentStartsAtOneHalf) {
  const DamageCurve c = damage_curve("p", 1.0, 0.02, 1.0, 0.0, GridSpec{});
  EXPECT_EQ(c.p_dam.front(), 0.5);
  EXPECT_LT(c.p_dam.back(), 1e-12);
  EXPECT_EQ(c.f_grid.size(), 181u);
  EXPECT_DOUBLE_EQ(c.f_grid.back(), 0.9);
}

TEST(DamageCurve, NonIncreasingForPositiveMeans) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const Vec v = random_vec(rng, 4, 0.0, 1.0);
    const double mu_u = 0.2 + 1.5 * v(0), mu_d = 0.2 + 1.5 * v(1);
    const double s_u = 0.5 * v(2) * mu_u, s_d = 0.5 * v(3) * mu_d;
    const DamageCurve c = damage_curve("x", mu_u, s_u, mu_d, s_d, GridSpec{});
    for (std::size_t k = 1; k < c.p_dam.size(); ++k) ASSERT_LE(c.p_dam[k], c.p_dam[k - 1]) << t;
    for (double p : c.p_dam) ASSERT_TRUE(p >= 0.0 && p <= 1.0);
  }
}

TEST(GridSpec, RejectsBadGrids) {
  EXPECT_THROW((GridSpec{0.0, 1.0, 0.1}.points()), InvalidArgument);
  EXPECT_THROW((GridSpec{0.5, 0.4, 0.1}.points()), InvalidArgument);
  EXPECT_THROW((GridSpec{0.0, 0.5, 0.0}.points()), InvalidArgument);
}

TEST(Report, CoefficientsOfVariationByHand) {
  const auto [c, m] = hand_results();
  const DamageReport r = build_report({"a", "b", "c"}, c, m, GridSpec{});
  EXPECT_NEAR(r.rows[0].cov_u_percent, 2.0, 1e-12);
  EXPECT_NEAR(r.rows[1].cov_u_percent, 2.0, 1e-12);
  EXPECT_NEAR(r.rows[2].cov_u_percent, 1.0, 1e-12);
  EXPECT_NEAR(r.rows[1].ratio, 0.88, 1e-15);
  EXPECT_NEAR(r.rows[1].cov_percent, 100 * 0.04 / 1.32, 1e-12);
  EXPECT_TRUE(r.rows[1].damaged);
  for (int j : {0, 2}) {
    EXPECT_TRUE(r.rows[j].pruned);
    EXPECT_EQ(r.rows[j].ratio, 1.0);
    EXPECT_EQ(r.rows[j].cov_percent, 0.0);
  }
}

TEST(Report, AllPrunedRowsAreUnity) {
  auto [c, m] = hand_results();
  m.alpha_final.setZero();
  m.theta_d = c.theta_u_hat;
  m.sigma_d.setZero();
  const DamageReport r = build_report({"a", "b", "c"}, c, m, GridSpec{});
  for (const ReportRow& row : r.rows) {
    EXPECT_EQ(row.ratio, 1.0);
    EXPECT_EQ(row.cov_percent, 0.0);
    EXPECT_FALSE(row.damaged);
  }
  const std::string text = render_report_text(r);
  EXPECT_EQ(text.find("DAMAGED"), std::string::npos);
  EXPECT_NE(text.find("1.000      0.000  pruned"), std::string::npos);
}

TEST(Report, MismatchedCountsRejected) {
  const auto [c, m] = hand_results();
  EXPECT_THROW(build_report({"a", "b"}, c, m, GridSpec{}), InvalidArgument);
}

TEST(Report, CurvesCsvLayout) {
  const auto [c, m] = hand_results();
  const DamageReport r = build_report({"1,+x", "1,+y", "1,-x"}, c, m, GridSpec{0.0, 0.1, 0.05});
  const std::string csv = render_curves_csv(r);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "substructure,f,p_dam");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3 * 3);
  EXPECT_NE(csv.find("\"1,+y\",0.0500,"), std::string::npos);
}

TEST(Report, GoldenText) {
  const auto [c, m] = hand_results();
  DamageReport r = build_report({"1,+x", "1,+y", "1,-x"}, c, m, GridSpec{});
  check_golden("report_small.txt", render_report_text(r));
}
