#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace rpe {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario {
  TaylorGreen,
  Random,
  Blowup,
  WellPrepared,
  ReduceToEuler,
  LinearRotation,
  FastRotation,
  EpsilonSweep,
};

std::string scenario_name(Scenario s);

struct SimConfig {
  Scenario scenario = Scenario::Random;
  int n = 32;
  double omega = 0.0;
  double dt = 0.0;  // 0 = auto
  double t_end = 1.0;
  int output_stride = 10;
  std::string output_dir = "out";
  bool filter = false;
  bool nonlinear = true;
  bool snapshots = false;
  std::uint64_t seed = 1;

  // Norm used for diagnostics and error metrics.
  double r = 3.0;
  double tau = 0.1;

  // Scenario parameters.
  double lambda = 5.0;
  double epsilon = 0.1;
  std::vector<double> epsilon_list{0.2, 0.1, 0.05};
  std::vector<double> omega_list{25.0, 50.0, 100.0, 200.0};
  double tau0 = 1.0;
  double data_omega = 20.0;  // rotation rate used to build well-prepared data
  double barotropic_amplitude = 1.0;
  double baroclinic_amplitude = 0.5;
  int mode_cap = 3;  // random initial data

  // Constants for the predicted schedules.
  double c_m = 2.0;
  double c_r = 1.0;

  // Blowup monitor.
  bool monitor_blowup = false;
  double amplification_threshold = 100.0;
  double tail_threshold = 1e-3;
};

// Parses and validates; throws ConfigError on unknown keys, wrong types or
// invalid values.
SimConfig parse_config(const nlohmann::json& j);
SimConfig load_config(const std::string& path);
nlohmann::json to_json(const SimConfig& c);
nlohmann::json read_json_file(const std::string& path);

}  // namespace rpe
