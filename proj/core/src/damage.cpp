#include "sbl/damage.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace sbl {

double damage_probability(double mu_u, double sigma_u, double mu_d, double sigma_d, double f,
                          VariancePairing pairing) {
  if (!(f >= 0.0 && f < 1.0)) throw InvalidArgument("damage_probability: f must lie in [0, 1)");
  if (!(sigma_u >= 0.0) || !(sigma_d >= 0.0)) throw InvalidArgument("damage_probability: sigmas must be nonnegative");
  const double t = 1.0 - f;
  const double var = pairing == VariancePairing::Consistent ? t * t * sigma_u * sigma_u + sigma_d * sigma_d
                                                            : t * t * sigma_d * sigma_d + sigma_u * sigma_u;
  const double gap = t * mu_u - mu_d;
  if (var == 0.0) return gap > 0.0 ? 1.0 : (gap < 0.0 ? 0.0 : 0.5);
  return 0.5 * std::erfc(-gap / std::sqrt(2.0 * var));
}

std::vector<double> GridSpec::points() const {
  if (!(start >= 0.0) || !(stop < 1.0) || !(step > 0.0) || stop < start)
    throw InvalidArgument("grid: need 0 <= start <= stop < 1 and step > 0");
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long k = 0; k <= n; ++k) g.push_back(start + static_cast<double>(k) * step);
  return g;
}

DamageCurve damage_curve(const std::string& label, double mu_u, double sigma_u, double mu_d, double sigma_d,
                         const GridSpec& grid, VariancePairing pairing) {
  DamageCurve c;
  c.substructure = label;
  c.f_grid = grid.points();
  c.p_dam.reserve(c.f_grid.size());
  for (double f : c.f_grid) c.p_dam.push_back(damage_probability(mu_u, sigma_u, mu_d, sigma_d, f, pairing));
  return c;
}

DamageReport build_report(const std::vector<std::string>& labels, const CalibrationResult& calib,
                          const MonitoringResult& monitor, const GridSpec& grid, VariancePairing pairing) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (calib.theta_u_hat.size() != n || monitor.theta_d.size() != n || calib.sigma_u.rows() != n ||
      monitor.sigma_d.rows() != n)
    throw InvalidArgument("build_report: substructure counts of model, calibration and monitoring differ");
  DamageReport rep;
  rep.pairing = pairing == VariancePairing::Consistent ? "consistent" : "as-printed";
  rep.warnings = monitor.warnings;
  for (Eigen::Index j = 0; j < n; ++j) {
    ReportRow row;
    row.label = labels[static_cast<std::size_t>(j)];
    const double mu_u = calib.theta_u_hat(j);
    const double sd_u = std::sqrt(std::max(0.0, calib.sigma_u(j, j)));
    const double mu_d = monitor.theta_d(j);
    const double sd_d = std::sqrt(std::max(0.0, monitor.sigma_d(j, j)));
    row.theta_u = mu_u;
    row.cov_u_percent = 100.0 * sd_u / std::abs(mu_u);
    row.pruned = !(monitor.alpha_final(j) > 0.0);
    if (row.pruned) {
      row.ratio = 1.0;
      row.cov_percent = 0.0;
    } else {
      row.ratio = mu_d / mu_u;
      row.cov_percent = 100.0 * sd_d / std::abs(mu_d);
    }
    row.damaged = !row.pruned && row.ratio < 1.0;
    row.curve = damage_curve(row.label, mu_u, sd_u, mu_d, sd_d, grid, pairing);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string render_report_text(const DamageReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %10s  %s\n", "substructure", "theta_u", "cov_u(%)",
                "ratio", "cov(%)", "status");
  out << line;
  for (const ReportRow& r : report.rows) {
    const char* status = r.pruned ? "pruned" : (r.damaged ? "DAMAGED" : "active");
    std::snprintf(line, sizeof line, "%-12s %10.4f %10.3f %10.3f %10.3f  %s\n", r.label.c_str(), r.theta_u,
                  r.cov_u_percent, r.ratio, r.cov_percent, status);
    out << line;
  }
  for (const std::string& w : report.warnings) out << "warning: " << w << '\n';
  return out.str();
}

std::string render_curves_csv(const DamageReport& report) {
  std::ostringstream out;
  out << "substructure,f,p_dam\n";
  char buf[64];
  for (const ReportRow& r : report.rows)
    for (std::size_t k = 0; k < r.curve.f_grid.size(); ++k) {
      std::snprintf(buf, sizeof buf, ",%.4f,%.10g\n", r.curve.f_grid[k], r.curve.p_dam[k]);
      out << '"' << r.label << '"' << buf;
    }
  return out.str();
}

}  // namespace sbl
