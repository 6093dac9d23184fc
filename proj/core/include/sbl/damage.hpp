#pragma once

#include "sbl/solver.hpp"

#include <string>
#include <vector>

namespace sbl {

enum class VariancePairing {
  Consistent,  // (1-f)^2 sigma_u^2 + sigma_d^2, matching P(theta_d < (1-f) theta_u)
  AsPrinted,   // (1-f)^2 sigma_d^2 + sigma_u^2
};

// P(theta_d < (1 - f) theta_u) for independent Gaussians.
double damage_probability(double mu_u, double sigma_u, double mu_d, double sigma_d, double f,
                          VariancePairing pairing = VariancePairing::Consistent);

struct GridSpec {
  double start = 0.0;
  double stop = 0.9;
  double step = 0.005;

  std::vector<double> points() const;
};

struct DamageCurve {
  std::string substructure;
  std::vector<double> f_grid;
  std::vector<double> p_dam;
};

DamageCurve damage_curve(const std::string& label, double mu_u, double sigma_u, double mu_d, double sigma_d,
                         const GridSpec& grid, VariancePairing pairing = VariancePairing::Consistent);

struct ReportRow {
  std::string label;
  double theta_u = 0.0;
  double cov_u_percent = 0.0;
  double ratio = 1.0;
  double cov_percent = 0.0;
  bool pruned = true;
  bool damaged = false;  // active and ratio < 1
  DamageCurve curve;
};

struct DamageReport {
  std::vector<ReportRow> rows;
  std::string calibration_id;
  std::string monitoring_id;
  std::string pairing;
  std::vector<std::string> warnings;
};

// Curves use the marginal posterior standard deviations of calibration and
// monitoring.
DamageReport build_report(const std::vector<std::string>& labels, const CalibrationResult& calib,
                          const MonitoringResult& monitor, const GridSpec& grid,
                          VariancePairing pairing = VariancePairing::Consistent);

// Aligned text table: label, calibrated theta and c.o.v., ratio, c.o.v., flag.
std::string render_report_text(const DamageReport& report);

// CSV with header "substructure,f,p_dam".
std::string render_curves_csv(const DamageReport& report);

}  // namespace sbl
