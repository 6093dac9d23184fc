#pragma once

#include "sbl/updates.hpp"

#include <string>
#include <vector>

namespace sbl {

struct SolverConfig {
  double b0 = 1.0;
  double alpha_min = 1e-9;
  double alpha_large = 1e9;
  double tol_theta = 1e-3;
  double tol_log_alpha = 5e-3;
  int max_iters = 500;
  bool enforce_no_increase = true;
  int warmup_iters_before_constraint = 2;
  // All-pruned monitoring runs are flagged when some mode's mean identified
  // frequency sits more than this many standard errors from the calibrated
  // model's frequency.
  double misfit_z_threshold = 6.0;
  UpdateOptions inner;

  void validate() const;
};

struct TraceRecord {
  int iteration = 0;
  double objective = 0.0;
  double max_delta_mu = 0.0;
  int n_active = 0;
  double beta = 0.0;
  double eta = 0.0;
  double b0 = 0.0;
  bool pruning_event = false;  // pruning rules changed the active set before this iteration's updates
  std::string note;
};

using Trace = std::vector<TraceRecord>;

class ConvergenceFailure : public NumericalError {
 public:
  ConvergenceFailure(const std::string& what, Trace trace) : NumericalError(what), trace_(std::move(trace)) {}
  const Trace& trace() const { return trace_; }

 private:
  Trace trace_;
};

struct CalibrationResult {
  Vec theta_u_hat;
  Mat sigma_u;
  HyperState delta_map;
  Trace trace;
  int iterations = 0;
  std::vector<std::string> warnings;
};

struct MonitoringResult {
  Vec theta_d;
  Mat sigma_d;
  Vec alpha_final;
  std::vector<int> pruned_set;
  Vec stiffness_ratio;
  Vec cov_percent;
  Vec theta_u_hat;
  HyperState delta_map;
  Trace trace;
  int iterations = 0;
  bool all_pruned = false;
  bool misfit_warning = false;
  double misfit_z = 0.0;
  std::vector<std::string> warnings;
};

// Calibration: sparseness off, alpha fixed at alpha_large, theta_0 as the
// pseudo-data. Stops when max |delta mu| < tol_theta.
CalibrationResult run_calibration(const StructuralBasis& basis, const ModalDataset& data, const Vec& theta_0,
                                  const SolverConfig& cfg);

// Monitoring with likelihood-variance pruning and, optionally, the rule that
// pins any component whose mean rises above its calibrated value.
MonitoringResult run_monitoring(const StructuralBasis& basis, const ModalDataset& data, const CalibrationResult& calib,
                                const SolverConfig& cfg);

enum class ConvergenceKind { ThetaChange, LogAlphaChange };

// ThetaChange: max_j |curr_j - prev_j| < tol over all j. LogAlphaChange: max
// over active j of |log curr_j - log prev_j| < tol, vacuously true if none.
bool convergence_check(ConvergenceKind kind, const Vec& prev, const Vec& curr, const std::vector<bool>& active,
                       double tol);

}  // namespace sbl
