#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sbl::cli {

struct Options {
  std::vector<std::string> argv;

  std::string model;
  std::string dataset;
  std::string calibration;
  std::string monitoring;
  std::string out = ".";
  std::string config;
  std::string preset;
  std::uint64_t seed = 0;
  int jobs = 1;

  // Solver overrides; flags win over the config file.
  std::optional<double> b0;
  std::optional<double> alpha_min;
  std::optional<double> tol_theta;
  std::optional<double> tol_log_alpha;
  std::optional<int> max_iters;
  std::optional<bool> no_increase_constraint;

  // Assessment overrides.
  bool eq44_as_printed = false;
  std::optional<double> f_start;
  std::optional<double> f_stop;
  std::optional<double> f_step;

  // Synthetic data.
  std::string scenario;
  std::vector<std::string> reductions;
  std::string sensors = "full";
  int modes = 8;
  int segments = 10;
  std::optional<double> freq_cov;
  std::optional<double> shape_sigma;

  // Sweeps.
  std::vector<double> b0_values;
};

int cmd_calibrate(const Options& o);
int cmd_monitor(const Options& o);
int cmd_assess(const Options& o);
int cmd_synth(const Options& o);
int cmd_sweep(const Options& o);

}  // namespace sbl::cli
