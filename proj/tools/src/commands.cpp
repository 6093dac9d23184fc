#include "commands.hpp"

#include "manifest.hpp"

#include "sbl/sbl.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

namespace sbl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string in_dir(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create output directory '" + dir + "': " + ec.message());
}

const std::string& require(const std::string& value, const std::string& flag) {
  if (value.empty()) throw InvalidArgument(flag + " is required");
  return value;
}

// Prefixes input errors with the offending file so messages stay actionable.
template <class F>
auto with_file(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

StructuralBasis read_model(const std::string& path) {
  return with_file(path, [&] { return load_model(path); });
}

ModalDataset read_dataset(const std::string& path) {
  return with_file(path, [&] { return parse_dataset(read_text_file(path)); });
}

CalibrationResult read_calibration(const std::string& path) {
  return with_file(path, [&] { return load_calibration(path); });
}

MonitoringResult read_monitoring(const std::string& path) {
  return with_file(path, [&] { return load_monitoring(path); });
}

RunConfig resolve_config(const Options& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : with_file(o.config, [&] { return load_run_config(o.config); });
  if (o.b0) c.solver.b0 = *o.b0;
  if (o.alpha_min) c.solver.alpha_min = *o.alpha_min;
  if (o.tol_theta) c.solver.tol_theta = *o.tol_theta;
  if (o.tol_log_alpha) c.solver.tol_log_alpha = *o.tol_log_alpha;
  if (o.max_iters) c.solver.max_iters = *o.max_iters;
  if (o.no_increase_constraint) c.solver.enforce_no_increase = *o.no_increase_constraint;
  if (o.eq44_as_printed) c.eq44_as_printed = true;
  if (o.f_start) c.grid.start = *o.f_start;
  if (o.f_stop) c.grid.stop = *o.f_stop;
  if (o.f_step) c.grid.step = *o.f_step;
  c.solver.validate();
  c.grid.points();
  return c;
}

json config_snapshot(const RunConfig& c) { return json::parse(run_config_to_string(c)); }

VariancePairing pairing_of(const RunConfig& c) {
  return c.eq44_as_printed ? VariancePairing::AsPrinted : VariancePairing::Consistent;
}

// Runs `solve`, writing the trace CSV on success and on numerical failure so
// a failed run always leaves its trace behind.
template <class F>
auto solve_with_trace(const std::string& out_dir, Manifest& m, F&& solve) {
  const std::string trace_path = in_dir(out_dir, "trace.csv");
  try {
    auto result = solve();
    write_text_file(trace_path, trace_to_csv(result.trace));
    m.add_output(trace_path);
    return result;
  } catch (const ConvergenceFailure& e) {
    write_text_file(trace_path, trace_to_csv(e.trace()));
    m.add_output(trace_path);
    m.add_warning(e.what());
    m.write(out_dir, "numerical-failure");
    throw NumericalError(std::string(e.what()) + " (trace: " + trace_path + ")");
  } catch (const NumericalError& e) {
    write_text_file(trace_path, trace_to_csv({}));
    m.add_output(trace_path);
    m.add_warning(e.what());
    m.write(out_dir, "numerical-failure");
    throw NumericalError(std::string(e.what()) + " (trace: " + trace_path + ")");
  }
}

void write_output(Manifest& m, const std::string& path, const std::string& text) {
  write_text_file(path, text);
  m.add_output(path);
}

void write_report(Manifest& m, const std::string& out_dir, const DamageReport& r, bool curves) {
  write_output(m, in_dir(out_dir, "report.txt"), render_report_text(r));
  write_output(m, in_dir(out_dir, "report.json"), report_to_string(r));
  if (curves) write_output(m, in_dir(out_dir, "damage_curves.csv"), render_curves_csv(r));
}

// Runs body(0..n-1) on up to `jobs` threads; the first exception is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < n;) {
      try {
        body(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<int> resolve_sensors(const std::string& spec, const StructuralBasis& b) {
  if (spec == "full") {
    std::vector<int> all(static_cast<std::size_t>(b.n_dof));
    for (int k = 0; k < b.n_dof; ++k) all[static_cast<std::size_t>(k)] = k;
    return all;
  }
  if (spec == "partial") {
    if (b.n_dof != 12) throw InvalidArgument("--sensors partial applies to the four-story building only");
    return benchmark_sensors("partial");
  }
  std::vector<int> dofs;
  std::stringstream ss(spec);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      std::size_t used = 0;
      dofs.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw InvalidArgument("--sensors: expected full, partial or a comma-separated DOF list, got '" + spec + "'");
    }
  }
  return dofs;
}

DamageScenario resolve_scenario(const Options& o) {
  DamageScenario sc{o.scenario.empty() ? "custom" : o.scenario, {}, {}};
  if (!o.scenario.empty()) {
    bool found = false;
    for (const DamageScenario& s : benchmark_scenarios())
      if (s.name == o.scenario) {
        sc = s;
        found = true;
      }
    if (!found && o.reductions.empty() && o.scenario != "undamaged")
      throw InvalidArgument("--scenario: unknown scenario '" + o.scenario + "'");
  }
  for (const std::string& r : o.reductions) {
    const auto [label, frac] = parse_reduction(r);
    sc.reductions[label] = frac;
  }
  return sc;
}

NoiseSpec resolve_noise(const Options& o, std::uint64_t seed) {
  NoiseSpec n;
  if (o.freq_cov) n.freq_cov = *o.freq_cov;
  if (o.shape_sigma) n.shape_sigma = *o.shape_sigma;
  n.seed = seed;
  return n;
}

void write_suite(const Options& o, Manifest& m) {
  if (o.preset != "benchmark4") throw InvalidArgument("--preset: unknown preset '" + o.preset + "'");
  const ShearBuildingSpec spec = benchmark_building_spec();
  const BenchmarkSuite suite = make_benchmark_suite(spec, o.seed);
  write_output(m, in_dir(o.out, "model.json"), shear_building_to_string(spec));
  std::vector<std::string> dataset_paths(suite.cases.size()), truth_paths(suite.cases.size());
  for (std::size_t k = 0; k < suite.cases.size(); ++k) {
    const std::string dir = in_dir(o.out, suite.cases[k].name);
    ensure_dir(dir);
    dataset_paths[k] = in_dir(dir, "dataset.json");
    truth_paths[k] = in_dir(dir, "truth.json");
  }
  parallel_for(suite.cases.size(), o.jobs, [&](std::size_t k) {
    write_text_file(dataset_paths[k], dataset_to_string(suite.cases[k].data.dataset));
    write_text_file(truth_paths[k], ground_truth_to_string(suite.cases[k].data.truth));
  });
  json index = json::array();
  for (std::size_t k = 0; k < suite.cases.size(); ++k) {
    const BenchmarkCase& c = suite.cases[k];
    m.add_output(dataset_paths[k]);
    m.add_output(truth_paths[k]);
    index.push_back({{"name", c.name},
                     {"sensors", c.sensors},
                     {"stage", c.stage},
                     {"dataset", c.name + "/dataset.json"},
                     {"truth", c.name + "/truth.json"},
                     {"seed", c.data.truth.noise.seed}});
  }
  write_output(m, in_dir(o.out, "suite.json"), json{{"preset", o.preset}, {"seed", o.seed}, {"cases", index}}.dump(2) + "\n");
}

void write_single(const Options& o, Manifest& m) {
  std::string model_text;
  StructuralBasis basis;
  if (o.model.empty()) {
    model_text = shear_building_to_string(benchmark_building_spec());
    basis = build_shear_building(benchmark_building_spec());
  } else {
    model_text = with_file(o.model, [&] { return read_text_file(o.model); });
    basis = with_file(o.model, [&] { return parse_model(model_text); });
    m.add_input("model", o.model);
  }
  const DamageScenario sc = resolve_scenario(o);
  const SyntheticData s =
      generate_dataset(basis, sc, resolve_sensors(o.sensors, basis), o.modes, o.segments, resolve_noise(o, o.seed));
  write_output(m, in_dir(o.out, "model.json"), model_text);
  write_output(m, in_dir(o.out, "dataset.json"), dataset_to_string(s.dataset));
  write_output(m, in_dir(o.out, "truth.json"), ground_truth_to_string(s.truth));
}

std::string format_b0(double b0) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", b0);
  return buf;
}

}  // namespace

int cmd_calibrate(const Options& o) {
  Manifest m("calibrate", o.argv);
  m.set_seed(o.seed);
  const RunConfig cfg = resolve_config(o);
  m.set_config(config_snapshot(cfg));
  const StructuralBasis basis = read_model(require(o.model, "--model"));
  const ModalDataset data = read_dataset(require(o.dataset, "--dataset"));
  m.add_input("model", o.model);
  m.add_input("dataset", o.dataset);
  ensure_dir(o.out);
  const CalibrationResult r =
      solve_with_trace(o.out, m, [&] { return run_calibration(basis, data, Vec::Ones(basis.n_sub), cfg.solver); });
  write_output(m, in_dir(o.out, "calibration.json"), calibration_to_string(r));
  m.add_warnings(r.warnings);
  m.set_extra("iterations", r.iterations);
  m.write(o.out, "ok");
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << '\n';
  return 0;
}

int cmd_monitor(const Options& o) {
  Manifest m("monitor", o.argv);
  m.set_seed(o.seed);
  const RunConfig cfg = resolve_config(o);
  m.set_config(config_snapshot(cfg));
  const StructuralBasis basis = read_model(require(o.model, "--model"));
  const ModalDataset data = read_dataset(require(o.dataset, "--dataset"));
  const CalibrationResult calib = read_calibration(require(o.calibration, "--calibration"));
  m.add_input("model", o.model);
  m.add_input("dataset", o.dataset);
  m.add_input("calibration", o.calibration);
  m.set_extra("no_increase_constraint", cfg.solver.enforce_no_increase);
  ensure_dir(o.out);
  const MonitoringResult r = solve_with_trace(o.out, m, [&] { return run_monitoring(basis, data, calib, cfg.solver); });
  const std::string mon_path = in_dir(o.out, "monitoring.json");
  const std::string mon_text = monitoring_to_string(r);
  write_output(m, mon_path, mon_text);
  DamageReport rep = build_report(basis.labels, calib, r, cfg.grid, pairing_of(cfg));
  rep.calibration_id = sha256_file(o.calibration);
  rep.monitoring_id = sha256_hex(mon_text);
  write_report(m, o.out, rep, false);
  m.add_warnings(r.warnings);
  m.set_extra("iterations", r.iterations);
  m.write(o.out, "ok");
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << '\n';
  return 0;
}

int cmd_assess(const Options& o) {
  Manifest m("assess", o.argv);
  m.set_seed(o.seed);
  const RunConfig cfg = resolve_config(o);
  m.set_config(config_snapshot(cfg));
  const CalibrationResult calib = read_calibration(require(o.calibration, "--calibration"));
  const MonitoringResult mon = read_monitoring(require(o.monitoring, "--monitoring"));
  m.add_input("calibration", o.calibration);
  m.add_input("monitoring", o.monitoring);
  std::vector<std::string> labels;
  if (!o.model.empty()) {
    labels = read_model(o.model).labels;
    m.add_input("model", o.model);
  } else {
    for (Eigen::Index k = 0; k < calib.theta_u_hat.size(); ++k) labels.push_back("theta" + std::to_string(k + 1));
  }
  DamageReport rep = build_report(labels, calib, mon, cfg.grid, pairing_of(cfg));
  rep.calibration_id = sha256_file(o.calibration);
  rep.monitoring_id = sha256_file(o.monitoring);
  ensure_dir(o.out);
  write_report(m, o.out, rep, true);
  m.add_warnings(rep.warnings);
  m.write(o.out, "ok");
  return 0;
}

int cmd_synth(const Options& o) {
  Manifest m("synth", o.argv);
  m.set_seed(o.seed);
  ensure_dir(o.out);
  if (!o.preset.empty())
    write_suite(o, m);
  else
    write_single(o, m);
  m.write(o.out, "ok");
  return 0;
}

int cmd_sweep(const Options& o) {
  Manifest m("sweep", o.argv);
  m.set_seed(o.seed);
  if (o.b0_values.empty()) throw InvalidArgument("--b0-values is required");
  const RunConfig cfg = resolve_config(o);
  m.set_config(config_snapshot(cfg));
  const StructuralBasis basis = read_model(require(o.model, "--model"));
  const ModalDataset data = read_dataset(require(o.dataset, "--dataset"));
  m.add_input("model", o.model);
  m.add_input("dataset", o.dataset);
  const bool monitoring = !o.calibration.empty();
  CalibrationResult calib;
  if (monitoring) {
    calib = read_calibration(o.calibration);
    m.add_input("calibration", o.calibration);
  }
  for (double b0 : o.b0_values)
    if (!(b0 > 0.0)) throw InvalidArgument("--b0-values: every value must be positive");
  ensure_dir(o.out);

  struct Row {
    std::string status = "ok";
    int iterations = 0;
    double objective = 0.0;
    int n_active = 0;
    double theta_min = 0.0, theta_max = 0.0;
    std::string damaged;
  };
  std::vector<Row> rows(o.b0_values.size());
  std::vector<std::string> dirs(o.b0_values.size());
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    dirs[k] = in_dir(o.out, "b0_" + format_b0(o.b0_values[k]));
    ensure_dir(dirs[k]);
  }
  parallel_for(o.b0_values.size(), o.jobs, [&](std::size_t k) {
    SolverConfig sc = cfg.solver;
    sc.b0 = o.b0_values[k];
    Row& row = rows[k];
    const std::string trace_path = in_dir(dirs[k], "trace.csv");
    try {
      if (monitoring) {
        const MonitoringResult r = run_monitoring(basis, data, calib, sc);
        write_text_file(in_dir(dirs[k], "monitoring.json"), monitoring_to_string(r));
        write_text_file(trace_path, trace_to_csv(r.trace));
        row.iterations = r.iterations;
        row.objective = r.trace.back().objective;
        row.n_active = static_cast<int>((r.alpha_final.array() > 0.0).count());
        row.theta_min = r.stiffness_ratio.minCoeff();
        row.theta_max = r.stiffness_ratio.maxCoeff();
        for (int j = 0; j < basis.n_sub; ++j)
          if (r.alpha_final(j) > 0.0 && r.stiffness_ratio(j) < 1.0)
            row.damaged += (row.damaged.empty() ? "" : " ") + basis.labels[static_cast<std::size_t>(j)];
      } else {
        const CalibrationResult r = run_calibration(basis, data, Vec::Ones(basis.n_sub), sc);
        write_text_file(in_dir(dirs[k], "calibration.json"), calibration_to_string(r));
        write_text_file(trace_path, trace_to_csv(r.trace));
        row.iterations = r.iterations;
        row.objective = r.trace.back().objective;
        row.n_active = basis.n_sub;
        row.theta_min = r.theta_u_hat.minCoeff();
        row.theta_max = r.theta_u_hat.maxCoeff();
      }
    } catch (const ConvergenceFailure& e) {
      write_text_file(trace_path, trace_to_csv(e.trace()));
      row.status = "numerical-failure";
    } catch (const NumericalError&) {
      row.status = "numerical-failure";
    }
  });

  std::ostringstream csv;
  csv.precision(12);
  csv << "b0,status,iterations,objective,n_active," << (monitoring ? "ratio_min,ratio_max" : "theta_min,theta_max")
      << ",damaged\n";
  bool failed = false;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row& r = rows[k];
    failed = failed || r.status != "ok";
    csv << format_b0(o.b0_values[k]) << ',' << r.status << ',' << r.iterations << ',' << r.objective << ','
        << r.n_active << ',' << r.theta_min << ',' << r.theta_max << ",\"" << r.damaged << "\"\n";
    m.add_output(dirs[k]);
  }
  write_output(m, in_dir(o.out, "sweep.csv"), csv.str());
  m.set_extra("mode", monitoring ? "monitoring" : "calibration");
  m.write(o.out, failed ? "partial-failure" : "ok");
  if (failed) throw NumericalError("some sweep runs failed numerically (see " + in_dir(o.out, "sweep.csv") + ")");
  return 0;
}

}  // namespace sbl::cli
