#pragma once

#include "sbl/damage.hpp"
#include "sbl/modal_data.hpp"
#include "sbl/solver.hpp"
#include "sbl/structural_model.hpp"
#include "sbl/synth.hpp"

#include <string>

namespace sbl {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Model documents carry either explicit matrices ("mass", "k0", "k_sub",
// optional "labels") or a "shear_building" block.
StructuralBasis parse_model(const std::string& json_text);
StructuralBasis load_model(const std::string& path);
std::string model_to_string(const StructuralBasis& basis);
std::string shear_building_to_string(const ShearBuildingSpec& spec);
ShearBuildingSpec parse_shear_building(const std::string& json_text);

ModalDataset parse_dataset(const std::string& json_text);
std::string dataset_to_string(const ModalDataset& d);

// Settings shared by the command-line tool, read from a config file with
// optional "solver" and "assess" sections.
struct RunConfig {
  SolverConfig solver;
  GridSpec grid;
  bool eq44_as_printed = false;
};
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_string(const RunConfig& cfg);

std::string calibration_to_string(const CalibrationResult& r);
CalibrationResult parse_calibration(const std::string& json_text);
CalibrationResult load_calibration(const std::string& path);

std::string monitoring_to_string(const MonitoringResult& r);
MonitoringResult parse_monitoring(const std::string& json_text);
MonitoringResult load_monitoring(const std::string& path);

std::string report_to_string(const DamageReport& r);
std::string ground_truth_to_string(const GroundTruth& g);

// Columns: iteration,objective,max_delta_mu,n_active,beta,eta,b0,pruning_event,note
std::string trace_to_csv(const Trace& trace);

}  // namespace sbl
