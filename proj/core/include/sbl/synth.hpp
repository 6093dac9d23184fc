#pragma once

#include "sbl/modal_data.hpp"
#include "sbl/structural_model.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sbl {

struct ModeSet {
  Vec omega_sq;  // ascending
  Mat shapes;    // n_modes x N_d, unit norm, largest-magnitude component positive
};

// Lowest n_modes eigenpairs of the pencil (K(theta), M).
ModeSet solve_modes(const StructuralBasis& basis, const Vec& theta, int n_modes);

struct DamageScenario {
  std::string name;
  Vec base_theta;                             // empty means all ones
  std::map<std::string, double> reductions;   // label -> fraction of stiffness lost, in (0, 1]

  Vec theta(const StructuralBasis& basis) const;
};

struct NoiseSpec {
  double freq_cov = 0.005;     // c.o.v. of identified omega^2
  double shape_sigma = 0.01;   // per-component shape noise on unit-norm shapes
  std::uint64_t seed = 0;
};

struct GroundTruth {
  std::string scenario;
  Vec theta;
  ModeSet clean;
  std::vector<int> observed_dofs;
  NoiseSpec noise;
  int n_segments = 0;
};

struct SyntheticData {
  ModalDataset dataset;
  GroundTruth truth;
};

// Per segment r and mode i: omega_hat^2 = omega_i^2 (1 + freq_cov z) and
// psi_hat = normalize(phi_i restricted to sensors, normalized, + shape_sigma z),
// with z drawn from a mt19937_64 seeded by noise.seed, in that order.
SyntheticData generate_dataset(const StructuralBasis& basis, const DamageScenario& scenario,
                               const std::vector<int>& observed_dofs, int n_modes, int n_segments,
                               const NoiseSpec& noise);

// Parses "label=fraction" such as "1,+y=0.113".
std::pair<std::string, double> parse_reduction(const std::string& text);

struct BenchmarkCase {
  std::string name;      // e.g. "full/DP1B"
  std::string sensors;   // "full" or "partial"
  std::string stage;     // "calibration" or "monitoring"
  SyntheticData data;
};

struct BenchmarkSuite {
  StructuralBasis basis;
  std::vector<BenchmarkCase> cases;
};

// Damage pattern analogues on the four-story building: DP1B (faces 1,+y and
// 1,-y lose 11.3%), DP2B (same faces, 5.65%), DP3B (DP1B plus 3,+y and 3,-y
// at 5.65%), DP3Bu (1,-y at 11.3% and 3,-y at 5.65%), plus an undamaged
// monitoring set.
std::vector<DamageScenario> benchmark_scenarios();

// Observed DOFs: every floor ("full") or floors 3 and roof ("partial").
std::vector<int> benchmark_sensors(const std::string& which);

// Per sensor set: one undamaged calibration set with 100 segments and one
// 10-segment monitoring set per scenario, 8 modes, default noise. Case k
// (in emission order) uses seed splitmix64(seed + k).
BenchmarkSuite make_benchmark_suite(const ShearBuildingSpec& spec, std::uint64_t seed);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace sbl
