#include <sbl/sbl.hpp>

#include <benchmark/benchmark.h>

namespace {

// Four-story building, full sensors, with calibration and one monitoring set.
struct Fixture {
  sbl::BenchmarkSuite suite = sbl::make_benchmark_suite(sbl::benchmark_building_spec(), 1);
  const sbl::BenchmarkCase& calibration_case = find("full/calibration");
  const sbl::BenchmarkCase& damaged_case = find("full/DP1B");
  sbl::SolverConfig calibration_cfg = [] {
    sbl::SolverConfig c;
    c.b0 = 100.0;
    return c;
  }();
  sbl::CalibrationResult calib = sbl::run_calibration(suite.basis, calibration_case.data.dataset,
                                                      sbl::Vec::Ones(suite.basis.n_sub), calibration_cfg);
  sbl::Problem problem = sbl::make_problem(suite.basis, damaged_case.data.dataset);

  const sbl::BenchmarkCase& find(const std::string& name) const {
    for (const auto& c : suite.cases)
      if (c.name == name) return c;
    throw std::runtime_error("missing case " + name);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_ObjectiveJ(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(sbl::objective_j(f.problem, f.calib.delta_map, f.calib.theta_u_hat));
}
BENCHMARK(BM_ObjectiveJ);

void BM_ConditionalPosterior(benchmark::State& state) {
  const Fixture& f = fixture();
  const sbl::HyperState& s = f.calib.delta_map;
  const sbl::ResidualSystem rs = sbl::build_residual_system(f.problem.basis, s.omega_sq, s.phi);
  for (auto _ : state) benchmark::DoNotOptimize(sbl::conditional_posterior(rs, s.beta, s.alpha, f.calib.theta_u_hat));
}
BENCHMARK(BM_ConditionalPosterior);

void BM_PhiStep(benchmark::State& state) {
  const Fixture& f = fixture();
  const sbl::HyperState& s = f.calib.delta_map;
  const sbl::PosteriorState post = sbl::conditional_posterior(
      sbl::build_residual_system(f.problem.basis, s.omega_sq, s.phi), s.beta, s.alpha, f.calib.theta_u_hat);
  for (auto _ : state) benchmark::DoNotOptimize(sbl::phi_step(f.problem, s, post));
}
BENCHMARK(BM_PhiStep);

void BM_Calibration(benchmark::State& state) {
  const Fixture& f = fixture();
  const sbl::Vec theta_0 = sbl::Vec::Ones(f.suite.basis.n_sub);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        sbl::run_calibration(f.suite.basis, f.calibration_case.data.dataset, theta_0, f.calibration_cfg));
}
BENCHMARK(BM_Calibration)->Unit(benchmark::kMillisecond);

void BM_Monitoring(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(sbl::run_monitoring(f.suite.basis, f.damaged_case.data.dataset, f.calib, {}));
}
BENCHMARK(BM_Monitoring)->Unit(benchmark::kMillisecond);

void BM_DamageCurve(benchmark::State& state) {
  const sbl::GridSpec grid;
  for (auto _ : state) benchmark::DoNotOptimize(sbl::damage_curve("1,+y", 1.0, 0.004, 0.887, 0.01, grid));
}
BENCHMARK(BM_DamageCurve);

}  // namespace

BENCHMARK_MAIN();
