#include "sbl/synth.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace sbl {

namespace {

void fix_sign(Eigen::Ref<Vec> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0.0) v = -v;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ModeSet solve_modes(const StructuralBasis& basis, const Vec& theta, int n_modes) {
  if (n_modes <= 0 || n_modes > basis.n_dof) throw InvalidArgument("solve_modes: n_modes out of range");
  const Mat k = assemble_stiffness(basis, theta);
  if (Eigen::LLT<Mat>(k).info() != Eigen::Success)
    throw InvalidArgument("solve_modes: K(theta) is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(k, basis.mass);
  if (es.info() != Eigen::Success) throw NumericalFailure("solve_modes: eigensolver failed");
  ModeSet m;
  m.omega_sq = es.eigenvalues().head(n_modes);
  m.shapes.resize(n_modes, basis.n_dof);
  for (int i = 0; i < n_modes; ++i) {
    Vec v = es.eigenvectors().col(i);
    v /= v.norm();
    fix_sign(v);
    m.shapes.row(i) = v.transpose();
  }
  return m;
}

Vec DamageScenario::theta(const StructuralBasis& basis) const {
  Vec t = base_theta.size() == 0 ? Vec::Ones(basis.n_sub) : base_theta;
  if (t.size() != basis.n_sub) throw InvalidArgument("scenario '" + name + "': base_theta has the wrong length");
  for (const auto& [label, frac] : reductions) {
    const int j = basis.index_of(label);
    if (j < 0) throw InvalidArgument("scenario '" + name + "': unknown substructure label '" + label + "'");
    if (!(frac > 0.0 && frac <= 1.0))
      throw InvalidArgument("scenario '" + name + "': reduction for '" + label + "' must be in (0, 1]");
    t(j) *= 1.0 - frac;
  }
  return t;
}

std::pair<std::string, double> parse_reduction(const std::string& text) {
  const auto eq = text.rfind('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw InvalidArgument("reduction '" + text + "' must look like label=fraction");
  const std::string label = text.substr(0, eq);
  const std::string value = text.substr(eq + 1);
  std::size_t used = 0;
  double frac = 0.0;
  try {
    frac = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size()) throw InvalidArgument("reduction '" + text + "': fraction is not a number");
  return {label, frac};
}

SyntheticData generate_dataset(const StructuralBasis& basis, const DamageScenario& scenario,
                               const std::vector<int>& observed_dofs, int n_modes, int n_segments,
                               const NoiseSpec& noise) {
  if (n_segments < 3) throw InvalidArgument("generate_dataset: at least three segments are required");
  if (!(noise.freq_cov >= 0.0) || !(noise.shape_sigma >= 0.0))
    throw InvalidArgument("generate_dataset: noise levels must be nonnegative");
  const Vec theta = scenario.theta(basis);
  const ModeSet modes = solve_modes(basis, theta, n_modes);
  const int n_obs = static_cast<int>(observed_dofs.size());

  SyntheticData out;
  ModalDataset& d = out.dataset;
  d.n_segments = n_segments;
  d.n_modes = n_modes;
  d.n_observed = n_obs;
  d.observed_dofs = observed_dofs;
  d.freq_sq.resize(n_segments, n_modes);
  d.mode_shapes.assign(n_segments, Mat(n_modes, n_obs));

  std::vector<Vec> clean_obs(n_modes, Vec(n_obs));
  for (int i = 0; i < n_modes; ++i) {
    for (int k = 0; k < n_obs; ++k) {
      if (observed_dofs[k] < 0 || observed_dofs[k] >= basis.n_dof)
        throw InvalidArgument("generate_dataset: observed DOF out of range");
      clean_obs[i](k) = modes.shapes(i, observed_dofs[k]);
    }
    const double n = clean_obs[i].norm();
    if (n == 0.0) throw InvalidArgument("generate_dataset: a mode has no motion at the observed DOFs");
    clean_obs[i] /= n;
  }

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int r = 0; r < n_segments; ++r)
    for (int i = 0; i < n_modes; ++i) {
      d.freq_sq(r, i) = modes.omega_sq(i) * (1.0 + noise.freq_cov * z(rng));
      Vec v(n_obs);
      double norm = 0.0;
      for (int attempt = 0; attempt < 100 && norm == 0.0; ++attempt) {
        for (int k = 0; k < n_obs; ++k) v(k) = clean_obs[i](k) + noise.shape_sigma * z(rng);
        norm = v.norm();
      }
      if (norm == 0.0) throw NumericalFailure("generate_dataset: could not draw a nonzero mode shape");
      d.mode_shapes[r].row(i) = (v / norm).transpose();
    }
  normalize_dataset(d);
  d.validate(basis.n_dof);

  out.truth.scenario = scenario.name;
  out.truth.theta = theta;
  out.truth.clean = modes;
  out.truth.observed_dofs = observed_dofs;
  out.truth.noise = noise;
  out.truth.n_segments = n_segments;
  return out;
}

std::vector<DamageScenario> benchmark_scenarios() {
  std::vector<DamageScenario> s;
  s.push_back({"undamaged", {}, {}});
  s.push_back({"DP1B", {}, {{"1,+y", 0.113}, {"1,-y", 0.113}}});
  s.push_back({"DP2B", {}, {{"1,+y", 0.0565}, {"1,-y", 0.0565}}});
  s.push_back({"DP3B", {}, {{"1,+y", 0.113}, {"1,-y", 0.113}, {"3,+y", 0.0565}, {"3,-y", 0.0565}}});
  s.push_back({"DP3Bu", {}, {{"1,-y", 0.113}, {"3,-y", 0.0565}}});
  return s;
}

std::vector<int> benchmark_sensors(const std::string& which) {
  if (which == "full") return {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  if (which == "partial") return {6, 7, 8, 9, 10, 11};
  throw InvalidArgument("unknown sensor set '" + which + "' (expected full or partial)");
}

BenchmarkSuite make_benchmark_suite(const ShearBuildingSpec& spec, std::uint64_t seed) {
  if (spec.n_stories != 4) throw InvalidArgument("make_benchmark_suite: a four-story building is required");
  BenchmarkSuite suite;
  suite.basis = build_shear_building(spec);
  const int n_modes = 8;
  std::uint64_t k = 0;
  for (const std::string sensors : {"full", "partial"}) {
    const auto obs = benchmark_sensors(sensors);
    NoiseSpec noise;
    noise.seed = splitmix64(seed + k++);
    DamageScenario undamaged{"undamaged", {}, {}};
    suite.cases.push_back(
        {sensors + "/calibration", sensors, "calibration", generate_dataset(suite.basis, undamaged, obs, n_modes, 100, noise)});
    for (const DamageScenario& sc : benchmark_scenarios()) {
      noise.seed = splitmix64(seed + k++);
      suite.cases.push_back(
          {sensors + "/" + sc.name, sensors, "monitoring", generate_dataset(suite.basis, sc, obs, n_modes, 10, noise)});
    }
  }
  return suite;
}

}  // namespace sbl
