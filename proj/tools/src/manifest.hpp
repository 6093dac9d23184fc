#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace sbl::cli {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// Record of one command invocation, written as manifest.json in the output
// directory.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv);

  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void set_config(nlohmann::json config) { config_ = std::move(config); }
  void add_input(const std::string& role, const std::string& path);
  void add_output(const std::string& path) { outputs_.push_back(path); }
  void add_warning(const std::string& w) { warnings_.push_back(w); }
  void add_warnings(const std::vector<std::string>& ws);
  void set_extra(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }
  void write(const std::string& out_dir, const std::string& status);

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::uint64_t seed_ = 0;
  nlohmann::json config_ = nlohmann::json::object();
  nlohmann::json inputs_ = nlohmann::json::array();
  std::vector<std::string> outputs_;
  std::vector<std::string> warnings_;
  nlohmann::json extra_ = nlohmann::json::object();
  std::chrono::steady_clock::time_point start_;
};

}  // namespace sbl::cli
