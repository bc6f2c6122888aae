// Command-line front end: run, sweep, compare, verify-lemmas, info.
#include <CLI11.hpp>

#include <iostream>

#include "rpe/config.hpp"
#include "rpe/pe_dynamics.hpp"
#include "rpe/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Rotating primitive equations simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  int threads = 1;
  bool verbose = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out, "Output directory (overrides the config)");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--verbose", verbose, "Print progress to stderr");
  };
  CLI::App* run = app.add_subcommand("run", "Run one scenario");
  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  CLI::App* compare = app.add_subcommand("compare", "Compare two snapshot runs");
  CLI::App* lemmas = app.add_subcommand("verify-lemmas", "Check identities and estimate ratios");
  CLI::App* info = app.add_subcommand("info", "Print the resolved config and predicted lifespans");
  for (CLI::App* s : {run, sweep, compare, lemmas, info}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rpe::kExitConfig;
  }

  rpe::CommandOptions opt;
  if (!out.empty()) opt.out = out;
  opt.threads = threads;
  opt.verbose = verbose;
  opt.log = &std::cerr;

  try {
    if (run->parsed()) return rpe::run_command(rpe::load_config(config_path), opt);
    if (info->parsed()) return rpe::info_command(rpe::load_config(config_path), opt, std::cout);
    const nlohmann::json doc = rpe::read_json_file(config_path);
    if (sweep->parsed()) return rpe::sweep_command(doc, opt);
    if (compare->parsed()) return rpe::compare_command(doc, opt);
    if (lemmas->parsed()) return rpe::verify_lemmas_command(doc, opt);
  } catch (const rpe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return rpe::kExitConfig;
  } catch (const rpe::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return rpe::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rpe::kExitNumerical;
  }
  return rpe::kExitOk;
}
