#include "commands.hpp"

#include "sbl/common.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_solver_flags(CLI::App* c, sbl::cli::Options& o) {
  c->add_option("--config", o.config, "Run config file (flags override it)");
  c->add_option("--b0", o.b0, "Prior scale of the prediction-error precision");
  c->add_option("--alpha-min", o.alpha_min, "Pruning threshold on alpha");
  c->add_option("--tol-theta", o.tol_theta, "Calibration stopping tolerance on theta");
  c->add_option("--tol-log-alpha", o.tol_log_alpha, "Monitoring stopping tolerance on log alpha");
  c->add_option("--max-iters", o.max_iters, "Outer iteration cap");
  c->add_option("--seed", o.seed, "Seed recorded in the manifest");
  c->add_option("--out", o.out, "Output directory")->capture_default_str();
}

void add_grid_flags(CLI::App* c, sbl::cli::Options& o) {
  c->add_flag("--eq44-as-printed", o.eq44_as_printed, "Use the as-printed variance pairing for damage curves");
  c->add_option("--f-start", o.f_start, "First damage fraction of the curve grid");
  c->add_option("--f-stop", o.f_stop, "Last damage fraction of the curve grid");
  c->add_option("--f-step", o.f_step, "Damage fraction step");
}

}  // namespace

int main(int argc, char** argv) {
  sbl::cli::Options o;
  o.argv.assign(argv, argv + argc);

  CLI::App app{"Sparse Bayesian stiffness identification and damage assessment"};
  app.require_subcommand(1);

  auto* calibrate = app.add_subcommand("calibrate", "Identify the undamaged stiffness from calibration data");
  calibrate->add_option("--model", o.model, "Structural model file")->required();
  calibrate->add_option("--dataset", o.dataset, "Modal dataset file")->required();
  add_solver_flags(calibrate, o);

  auto* monitor = app.add_subcommand("monitor", "Sparse stiffness-loss identification against a calibration");
  monitor->add_option("--model", o.model, "Structural model file")->required();
  monitor->add_option("--dataset", o.dataset, "Modal dataset file")->required();
  monitor->add_option("--calibration", o.calibration, "calibration.json from the calibrate command")->required();
  monitor->add_option("--no-increase-constraint", o.no_increase_constraint,
                      "Pin components whose stiffness rises above calibration (true/false)");
  add_solver_flags(monitor, o);
  add_grid_flags(monitor, o);

  auto* assess = app.add_subcommand("assess", "Damage probability curves and report");
  assess->add_option("--calibration", o.calibration, "calibration.json")->required();
  assess->add_option("--monitoring", o.monitoring, "monitoring.json")->required();
  assess->add_option("--model", o.model, "Structural model file, for substructure labels");
  assess->add_option("--config", o.config, "Run config file (flags override it)");
  assess->add_option("--seed", o.seed, "Seed recorded in the manifest");
  assess->add_option("--out", o.out, "Output directory")->capture_default_str();
  add_grid_flags(assess, o);

  auto* synth = app.add_subcommand("synth", "Generate synthetic modal data");
  synth->add_option("--preset", o.preset, "Emit a whole benchmark suite (benchmark4)");
  synth->add_option("--model", o.model, "Model file (default: the four-story benchmark building)");
  synth->add_option("--scenario", o.scenario, "Named damage pattern (DP1B, DP2B, DP3B, DP3Bu, undamaged)");
  synth->add_option("--reduction", o.reductions, "Stiffness loss as label=fraction, repeatable");
  synth->add_option("--sensors", o.sensors, "full, partial or a comma-separated DOF list")->capture_default_str();
  synth->add_option("--modes", o.modes, "Number of modes")->capture_default_str();
  synth->add_option("--segments", o.segments, "Number of data segments")->capture_default_str();
  synth->add_option("--freq-cov", o.freq_cov, "C.o.v. of the identified squared frequencies");
  synth->add_option("--shape-sigma", o.shape_sigma, "Per-component mode shape noise");
  synth->add_option("--seed", o.seed, "Noise seed")->capture_default_str();
  synth->add_option("--jobs", o.jobs, "Worker threads for the preset")->capture_default_str();
  synth->add_option("--out", o.out, "Output directory")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Repeat calibration or monitoring over several b0 values");
  sweep->add_option("--model", o.model, "Structural model file")->required();
  sweep->add_option("--dataset", o.dataset, "Modal dataset file")->required();
  sweep->add_option("--calibration", o.calibration, "Sweep monitoring against this calibration instead");
  sweep->add_option("--b0-values", o.b0_values, "Comma-separated b0 values")->required()->delimiter(',');
  sweep->add_option("--no-increase-constraint", o.no_increase_constraint, "As for monitor");
  sweep->add_option("--alpha-min", o.alpha_min, "Pruning threshold on alpha");
  sweep->add_option("--tol-theta", o.tol_theta, "Calibration stopping tolerance on theta");
  sweep->add_option("--tol-log-alpha", o.tol_log_alpha, "Monitoring stopping tolerance on log alpha");
  sweep->add_option("--max-iters", o.max_iters, "Outer iteration cap");
  sweep->add_option("--config", o.config, "Run config file (flags override it)");
  sweep->add_option("--seed", o.seed, "Seed recorded in the manifest");
  sweep->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
  sweep->add_option("--out", o.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*calibrate) return sbl::cli::cmd_calibrate(o);
    if (*monitor) return sbl::cli::cmd_monitor(o);
    if (*assess) return sbl::cli::cmd_assess(o);
    if (*synth) return sbl::cli::cmd_synth(o);
    if (*sweep) return sbl::cli::cmd_sweep(o);
  } catch (const sbl::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sbl::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
