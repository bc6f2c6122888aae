#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpe/config.hpp"

namespace rpe {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitBlowup = 4,
};

inline constexpr int kCsvVersion = 1;

struct CommandOptions {
  std::optional<std::string> out;  // overrides the config's output directory
  int threads = 1;
  bool verbose = false;
  std::ostream* log = nullptr;  // progress messages when verbose
};

// 17 significant digits; "nan" and "inf" spelled out.
std::string format_double(double x);
const std::vector<std::string>& diagnostic_columns();

int run_command(const SimConfig& config, const CommandOptions& opt);
int sweep_command(const nlohmann::json& doc, const CommandOptions& opt);
int compare_command(const nlohmann::json& doc, const CommandOptions& opt);

struct LemmaSuiteConfig {
  std::vector<int> grids{16, 32};
  int samples = 200;
  int identity_samples = 100;
  int identity_grid = 16;
  int mode_cap = 3;
  unsigned long long seed = 20240601;
  double r = 3.0;         // A1 to A7 and planar
  double r_banach = 2.0;  // Banach algebra
  double r_high = 3.5;    // r > 3 branch of the planar estimate
  double tau = 0.05;
  double identity_tau = 0.1;
  std::string output_dir = "out";
};

LemmaSuiteConfig parse_lemma_config(const nlohmann::json& j);
// Runs the suite and returns the JSON report; `ok` reports whether every
// identity and estimate met its criterion.
nlohmann::json run_lemma_suite(const LemmaSuiteConfig& c, int threads, bool& ok);
int verify_lemmas_command(const nlohmann::json& doc, const CommandOptions& opt);

nlohmann::json info_report(const SimConfig& config);
int info_command(const SimConfig& config, const CommandOptions& opt, std::ostream& os);

}  // namespace rpe
