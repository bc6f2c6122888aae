#include "rpe/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace rpe {

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::TaylorGreen: return "taylor-green";
    case Scenario::Random: return "random";
    case Scenario::Blowup: return "blowup";
    case Scenario::WellPrepared: return "well-prepared";
    case Scenario::ReduceToEuler: return "reduce-to-euler";
    case Scenario::LinearRotation: return "linear-rotation";
    case Scenario::FastRotation: return "fast-rotation";
    case Scenario::EpsilonSweep: return "epsilon-sweep";
  }
  return "?";
}

namespace {

const std::map<std::string, Scenario>& scenario_table() {
  static const std::map<std::string, Scenario> t = {
      {"taylor-green", Scenario::TaylorGreen},       {"random", Scenario::Random},
      {"blowup", Scenario::Blowup},                  {"well-prepared", Scenario::WellPrepared},
      {"reduce-to-euler", Scenario::ReduceToEuler},  {"linear-rotation", Scenario::LinearRotation},
      {"fast-rotation", Scenario::FastRotation},     {"epsilon-sweep", Scenario::EpsilonSweep},
  };
  return t;
}

template <class T>
void get(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

void get_number(const nlohmann::json& j, const char* key, double& out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
  out = j.at(key).get<double>();
  if (!std::isfinite(out)) throw ConfigError(std::string("config key '") + key + "' must be finite");
}

void get_int(const nlohmann::json& j, const char* key, int& out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number_integer()) throw ConfigError(std::string("config key '") + key + "' must be an integer");
  out = j.at(key).get<int>();
}

}  // namespace

SimConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "scenario", "N", "omega", "dt", "t_end", "output_stride", "output_dir", "filter", "nonlinear",
      "snapshots", "seed", "r", "tau", "lambda", "epsilon", "epsilon_list", "omega_list", "tau0",
      "data_omega", "barotropic_amplitude", "baroclinic_amplitude", "mode_cap", "C_M", "C_r",
      "monitor_blowup", "amplification_threshold", "tail_threshold"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");

  SimConfig c;
  if (j.contains("scenario")) {
    std::string name;
    get(j, "scenario", name);
    auto it = scenario_table().find(name);
    if (it == scenario_table().end()) throw ConfigError("unknown scenario '" + name + "'");
    c.scenario = it->second;
  }
  if (c.scenario == Scenario::Blowup) c.monitor_blowup = true;

  get_int(j, "N", c.n);
  get_number(j, "omega", c.omega);
  if (j.contains("dt")) {
    const auto& d = j.at("dt");
    if (d.is_string() && d.get<std::string>() == "auto") {
      c.dt = 0.0;
    } else if (d.is_number()) {
      c.dt = d.get<double>();
      if (!(c.dt > 0.0)) throw ConfigError("dt must be positive or \"auto\"");
    } else {
      throw ConfigError("dt must be a number or \"auto\"");
    }
  }
  get_number(j, "t_end", c.t_end);
  get_int(j, "output_stride", c.output_stride);
  get(j, "output_dir", c.output_dir);
  get(j, "filter", c.filter);
  get(j, "nonlinear", c.nonlinear);
  get(j, "snapshots", c.snapshots);
  get(j, "seed", c.seed);
  get_number(j, "r", c.r);
  get_number(j, "tau", c.tau);
  get_number(j, "lambda", c.lambda);
  get_number(j, "epsilon", c.epsilon);
  get(j, "epsilon_list", c.epsilon_list);
  get(j, "omega_list", c.omega_list);
  get_number(j, "tau0", c.tau0);
  get_number(j, "data_omega", c.data_omega);
  get_number(j, "barotropic_amplitude", c.barotropic_amplitude);
  get_number(j, "baroclinic_amplitude", c.baroclinic_amplitude);
  get_int(j, "mode_cap", c.mode_cap);
  get_number(j, "C_M", c.c_m);
  get_number(j, "C_r", c.c_r);
  get(j, "monitor_blowup", c.monitor_blowup);
  get_number(j, "amplification_threshold", c.amplification_threshold);
  get_number(j, "tail_threshold", c.tail_threshold);

  if (c.n < 8 || c.n % 2 != 0) throw ConfigError("N must be even and at least 8");
  if (c.t_end < 0.0) throw ConfigError("t_end must be nonnegative");
  if (c.output_stride < 1) throw ConfigError("output_stride must be at least 1");
  if (c.r < 0.0 || c.tau < 0.0) throw ConfigError("r and tau must be nonnegative");
  if (c.mode_cap < 1 || 3 * c.mode_cap > c.n) throw ConfigError("mode_cap must be in [1, N/3]");
  if (c.scenario == Scenario::Blowup && !(c.lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");
  if (c.scenario == Scenario::WellPrepared && !(std::abs(c.data_omega) > std::exp(1.0)))
    throw ConfigError("data_omega must exceed e in magnitude");
  if (c.scenario == Scenario::FastRotation) {
    if (c.omega_list.empty()) throw ConfigError("omega_list must not be empty");
    if (!(std::abs(c.data_omega) > std::exp(1.0))) throw ConfigError("data_omega must exceed e in magnitude");
  }
  if (c.scenario == Scenario::EpsilonSweep && c.epsilon_list.empty())
    throw ConfigError("epsilon_list must not be empty");
  for (double e : c.epsilon_list)
    if (e < 0.0) throw ConfigError("epsilon values must be nonnegative");
  if (c.tau0 <= 0.0) throw ConfigError("tau0 must be positive");
  if (c.c_m <= 1.0 || c.c_r <= 0.0) throw ConfigError("C_M must exceed 1 and C_r must be positive");
  if (c.amplification_threshold <= 1.0 || c.tail_threshold <= 0.0 || c.tail_threshold >= 1.0)
    throw ConfigError("blowup thresholds out of range");
  return c;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

SimConfig load_config(const std::string& path) { return parse_config(read_json_file(path)); }

nlohmann::json to_json(const SimConfig& c) {
  nlohmann::json j;
  j["scenario"] = scenario_name(c.scenario);
  j["N"] = c.n;
  j["omega"] = c.omega;
  if (c.dt > 0.0)
    j["dt"] = c.dt;
  else
    j["dt"] = "auto";
  j["t_end"] = c.t_end;
  j["output_stride"] = c.output_stride;
  j["output_dir"] = c.output_dir;
  j["filter"] = c.filter;
  j["nonlinear"] = c.nonlinear;
  j["snapshots"] = c.snapshots;
  j["seed"] = c.seed;
  j["r"] = c.r;
  j["tau"] = c.tau;
  j["lambda"] = c.lambda;
  j["epsilon"] = c.epsilon;
  j["epsilon_list"] = c.epsilon_list;
  j["omega_list"] = c.omega_list;
  j["tau0"] = c.tau0;
  j["data_omega"] = c.data_omega;
  j["barotropic_amplitude"] = c.barotropic_amplitude;
  j["baroclinic_amplitude"] = c.baroclinic_amplitude;
  j["mode_cap"] = c.mode_cap;
  j["C_M"] = c.c_m;
  j["C_r"] = c.c_r;
  j["monitor_blowup"] = c.monitor_blowup;
  j["amplification_threshold"] = c.amplification_threshold;
  j["tail_threshold"] = c.tail_threshold;
  return j;
}

}  // namespace rpe
