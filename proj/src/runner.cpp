#include "rpe/runner.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "rpe/gevrey.hpp"
#include "rpe/lemmas.hpp"
#include "rpe/scenarios.hpp"

namespace rpe {

namespace fs = std::filesystem;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

const std::vector<std::string>& diagnostic_columns() {
  static const std::vector<std::string> cols = {
      "t",           "l2_vbar",        "l2_vtilde",     "hr_vbar",        "hr_vtilde",
      "analytic_vbar", "analytic_vtilde", "split_residual", "tau_hat",      "amplification",
      "tail_fraction", "error_vbar",     "error_vtilde"};
  return cols;
}

namespace {

void logv(const CommandOptions& opt, const std::string& msg) {
  if (opt.verbose && opt.log) *opt.log << msg << '\n';
}

std::string resolve_out(const std::string& from_config, const CommandOptions& opt) {
  return opt.out ? *opt.out : from_config;
}

void write_json(const fs::path& p, const nlohmann::json& j) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << j.dump(2) << '\n';
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& p, const std::vector<std::string>& header) : os_(p) {
    if (!os_) throw std::runtime_error("cannot write " + p.string());
    row_strings(header);
  }
  void row(const std::vector<double>& values) {
    std::vector<std::string> s;
    s.reserve(values.size());
    for (double v : values) s.push_back(format_double(v));
    row_strings(s);
  }
  void row_strings(const std::vector<std::string>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) os_ << (i ? "," : "") << s[i];
    os_ << '\n';
  }

 private:
  std::ofstream os_;
};

double tau_hat_or_nan(const VectorField& v) {
  try {
    return estimate_radius(v, default_shell_range(v.n())).tau_hat;
  } catch (const std::invalid_argument&) {
    return std::nan("");
  }
}

struct Recorder {
  const SimConfig& c;
  CsvWriter csv;
  fs::path snapdir;
  int index = 0;
  double max_split = 0.0;

  Recorder(const SimConfig& cfg, const fs::path& out)
      : c(cfg), csv(out / "diagnostics.csv", diagnostic_columns()) {
    if (c.snapshots) {
      snapdir = out / "snapshots";
      fs::create_directories(snapdir);
    }
  }

  void record(const PEState& s, const BlowupStatus& st, ErrorPair err) {
    const NormSpec hr{c.r, 0.0, 1.0}, an{c.r, c.tau, 1.0};
    const double ab = analytic_norm(s.vbar, an), at = analytic_norm(s.vtilde, an);
    const double af = analytic_norm(s.full(), an);
    const double split = af > 0.0 ? std::abs(af * af - ab * ab - at * at) / (af * af) : 0.0;
    max_split = std::max(max_split, split);
    csv.row({s.t, l2_norm(s.vbar), l2_norm(s.vtilde), sobolev_norm(s.vbar, hr.r), sobolev_norm(s.vtilde, hr.r), ab,
             at, split, tau_hat_or_nan(s.full()), st.amplification, st.tail_fraction, err.bar, err.tilde});
    if (c.snapshots) {
      char name[32];
      std::snprintf(name, sizeof(name), "snap_%06d", index);
      write_snapshot((snapdir / (std::string(name) + ".bin")).string(),
                     {s.vbar.c1, s.vbar.c2, s.vtilde.c1, s.vtilde.c2});
      write_json(snapdir / (std::string(name) + ".json"),
                 {{"t", s.t}, {"N", s.n()}, {"index", index},
                  {"components", {"vbar1", "vbar2", "vtilde1", "vtilde2"}}});
    }
    ++index;
  }
};

nlohmann::json base_metadata(const SimConfig& c) {
  return {{"csv_version", kCsvVersion}, {"columns", diagnostic_columns()}, {"config", to_json(c)}};
}

int run_fast_rotation(const SimConfig& c, const fs::path& out, const CommandOptions& opt) {
  const VectorField vbar0 = random_barotropic(c.n, c.mode_cap, c.barotropic_amplitude, c.seed);
  const WellPreparedData d = scenario_well_prepared(c.n, c.data_omega, c.tau0, c.r, vbar0);
  logv(opt, "fast-rotation: |k| = " + std::to_string(d.k_norm));
  const FastRotationResult res = scenario_fast_rotation(c, d.state);
  CsvWriter table(out / "fast_rotation.csv", {"omega", "error", "time_of_max"});
  for (const auto& r : res.rows) table.row({r.omega, r.error, r.time_of_max});
  CsvWriter series(out / "fast_rotation_series.csv", {"omega", "t", "error_vbar", "error_vtilde"});
  for (const auto& s : res.series)
    for (std::size_t i = 0; i < s.t.size(); ++i) series.row({s.omega, s.t[i], s.err[i].bar, s.err[i].tilde});
  nlohmann::json meta = base_metadata(c);
  meta["columns"] = {"omega", "error", "time_of_max"};
  meta["well_prepared"] = {{"k", {d.k.k1, d.k.k2, d.k.k3}},
                           {"k_norm", d.k_norm},
                           {"amplitude", d.amplitude},
                           {"sobolev_norm_H3.5", d.sobolev_norm_small},
                           {"analytic_norm_Hr+2", d.analytic_norm_big}};
  write_json(out / "metadata.json", meta);
  return kExitOk;
}

int run_epsilon_sweep(const SimConfig& c, const fs::path& out) {
  const auto rows = scenario_epsilon_sweep(c);
  CsvWriter table(out / "epsilon_sweep.csv", {"epsilon", "doubling_time", "error_at_end", "sup_error"});
  for (const auto& r : rows) table.row({r.epsilon, r.doubling_time, r.error_at_end, r.sup_error});
  nlohmann::json meta = base_metadata(c);
  meta["columns"] = {"epsilon", "doubling_time", "error_at_end", "sup_error"};
  write_json(out / "metadata.json", meta);
  return kExitOk;
}

}  // namespace

int run_command(const SimConfig& config, const CommandOptions& opt) {
  SimConfig c = config;
  c.output_dir = resolve_out(c.output_dir, opt);
  const fs::path out(c.output_dir);
  fs::create_directories(out);
  logv(opt, "scenario " + scenario_name(c.scenario) + ", N = " + std::to_string(c.n));

  if (c.scenario == Scenario::FastRotation) return run_fast_rotation(c, out, opt);
  if (c.scenario == Scenario::EpsilonSweep) return run_epsilon_sweep(c, out);
  if (c.scenario == Scenario::LinearRotation) c.nonlinear = false;

  const PEState init = initial_state(c);
  const NormSpec an{c.r, c.tau, 1.0};
  IntegrationSettings is;
  is.omega = c.omega;
  is.dt = c.dt;
  is.t_end = c.t_end;
  is.stride = c.output_stride;
  is.step.nonlinear = c.nonlinear;
  is.step.filter = c.filter;
  is.monitor_blowup = c.monitor_blowup;
  is.thresholds = {c.amplification_threshold, c.tail_threshold};

  std::vector<LimitState> euler;
  if (c.scenario == Scenario::ReduceToEuler) {
    LimitSettings ls;
    ls.dt = c.dt > 0.0 ? c.dt : default_dt(init);
    ls.t_end = c.t_end;
    ls.stride = c.output_stride;
    ls.step.evolve_baroclinic = false;
    ls.step.filter = c.filter;
    integrate_limit(ls, make_limit_state(init), [&](const LimitState& s) { euler.push_back(s); });
  }

  nlohmann::json meta = base_metadata(c);
  if (c.scenario == Scenario::WellPrepared) {
    const VectorField vbar0 = random_barotropic(c.n, c.mode_cap, c.barotropic_amplitude, c.seed);
    const WellPreparedData d = scenario_well_prepared(c.n, c.data_omega, c.tau0, c.r, vbar0);
    meta["well_prepared"] = {{"k", {d.k.k1, d.k.k2, d.k.k3}},
                             {"k_norm", d.k_norm},
                             {"amplitude", d.amplitude},
                             {"sobolev_norm_H3.5", d.sobolev_norm_small},
                             {"analytic_norm_Hr+2", d.analytic_norm_big}};
  }

  Recorder rec(c, out);
  std::size_t idx = 0;
  double max_err = 0.0;
  const double nan = std::nan("");
  IntegrationResult res;
  try {
    res = integrate(is, init, [&](const PEState& s, const BlowupStatus& st) {
      ErrorPair e{nan, nan};
      if (c.scenario == Scenario::ReduceToEuler && idx < euler.size()) {
        e = state_difference(s, make_pe_state(euler[idx].Vbar, euler[idx].t), an);
        e.tilde = analytic_norm(s.vtilde, an);
      } else if (c.scenario == Scenario::LinearRotation) {
        e = state_difference(s, linear_rotation_solution(init, c.omega, s.t), an);
      }
      if (std::isfinite(e.bar)) max_err = std::max(max_err, e.sum());
      rec.record(s, st, e);
      ++idx;
    });
  } catch (const NumericalFailure& ex) {
    meta["status"] = "numerical-failure";
    meta["message"] = ex.what();
    write_json(out / "metadata.json", meta);
    return kExitNumerical;
  }
  meta["dt"] = res.dt;
  meta["steps"] = res.steps;
  meta["records"] = rec.index;
  meta["max_split_residual"] = rec.max_split;
  if (c.scenario == Scenario::ReduceToEuler || c.scenario == Scenario::LinearRotation) meta["max_error"] = max_err;
  if (res.blowup) {
    meta["status"] = "blowup";
    meta["blowup_time"] = res.blowup_time;
    meta["last_valid_time"] = res.last_valid_time;
    meta["criterion"] = res.criterion;
    write_json(out / "metadata.json", meta);
    logv(opt, "blowup flagged at t = " + format_double(res.blowup_time) + " (" + res.criterion + ")");
    return kExitBlowup;
  }
  meta["status"] = "ok";
  write_json(out / "metadata.json", meta);
  return kExitOk;
}

int sweep_command(const nlohmann::json& doc, const CommandOptions& opt) {
  if (!doc.is_object()) throw ConfigError("sweep config must be a JSON object");
  for (const auto& [k, v] : doc.items())
    if (k != "base" && k != "vary" && k != "output_dir") throw ConfigError("unknown sweep key '" + k + "'");
  if (!doc.contains("base") || !doc.contains("vary")) throw ConfigError("sweep config needs 'base' and 'vary'");
  const nlohmann::json& base = doc.at("base");
  const nlohmann::json& vary = doc.at("vary");
  if (!vary.is_object() || vary.empty()) throw ConfigError("'vary' must be a nonempty object of value lists");
  std::string outdir = doc.value("output_dir", std::string("out"));
  outdir = resolve_out(outdir, opt);

  // Cartesian product of the varied keys, in key order.
  std::vector<nlohmann::json> runs{base};
  for (const auto& [key, values] : vary.items()) {
    if (!values.is_array() || values.empty()) throw ConfigError("vary." + key + " must be a nonempty array");
    std::vector<nlohmann::json> next;
    for (const auto& r : runs)
      for (const auto& v : values) {
        nlohmann::json x = r;
        x[key] = v;
        next.push_back(x);
      }
    runs = std::move(next);
  }
  std::vector<SimConfig> cfgs;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "run_%03zu", i);
    runs[i]["output_dir"] = (fs::path(outdir) / name).string();
    cfgs.push_back(parse_config(runs[i]));
  }
  fs::create_directories(outdir);

  std::vector<int> codes(cfgs.size(), 0);
  std::atomic<std::size_t> next{0};
  std::mutex log_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) {
      CommandOptions o;
      o.verbose = false;
      try {
        codes[i] = run_command(cfgs[i], o);
      } catch (const ConfigError&) {
        codes[i] = kExitConfig;
      } catch (const std::exception&) {
        codes[i] = kExitNumerical;
      }
      std::lock_guard<std::mutex> lock(log_mu);
      logv(opt, "run " + std::to_string(i) + " finished with code " + std::to_string(codes[i]));
    }
  };
  const int nt = std::max(1, std::min<int>(opt.threads, static_cast<int>(cfgs.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  CsvWriter table(fs::path(outdir) / "sweep.csv", {"run", "output_dir", "exit_code"});
  int worst = kExitOk;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    table.row_strings({std::to_string(i), cfgs[i].output_dir, std::to_string(codes[i])});
    if (codes[i] == kExitConfig || codes[i] == kExitNumerical) worst = std::max(worst, codes[i]);
  }
  return worst;
}

int compare_command(const nlohmann::json& doc, const CommandOptions& opt) {
  if (!doc.is_object()) throw ConfigError("compare config must be a JSON object");
  static const std::set<std::string> known = {"run_a", "run_b", "r", "tau", "output_dir"};
  for (const auto& [k, v] : doc.items())
    if (!known.count(k)) throw ConfigError("unknown compare key '" + k + "'");
  if (!doc.contains("run_a") || !doc.contains("run_b")) throw ConfigError("compare config needs run_a and run_b");
  NormSpec spec{doc.value("r", 3.0), doc.value("tau", 0.1), 1.0};
  if (spec.r < 0.0 || spec.tau < 0.0) throw ConfigError("r and tau must be nonnegative");
  std::vector<TrajectoryPoint> pts;
  try {
    pts = compare_trajectories(doc.at("run_a").get<std::string>(), doc.at("run_b").get<std::string>(), spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const fs::path out(resolve_out(doc.value("output_dir", std::string("out")), opt));
  fs::create_directories(out);
  CsvWriter csv(out / "compare.csv", {"t", "error_vbar", "error_vtilde"});
  double worst = 0.0;
  for (const auto& p : pts) {
    csv.row({p.t, p.err.bar, p.err.tilde});
    worst = std::max(worst, p.err.sum());
  }
  logv(opt, "max combined difference " + format_double(worst));
  return kExitOk;
}

LemmaSuiteConfig parse_lemma_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("lemma config must be a JSON object");
  static const std::set<std::string> known = {"grids",  "samples", "identity_samples", "identity_grid",
                                              "mode_cap", "seed",  "r",                "r_banach",
                                              "r_high", "tau",     "identity_tau",     "output_dir"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ConfigError("unknown lemma config key '" + k + "'");
  LemmaSuiteConfig c;
  try {
    c.grids = j.value("grids", c.grids);
    c.samples = j.value("samples", c.samples);
    c.identity_samples = j.value("identity_samples", c.identity_samples);
    c.identity_grid = j.value("identity_grid", c.identity_grid);
    c.mode_cap = j.value("mode_cap", c.mode_cap);
    c.seed = j.value("seed", c.seed);
    c.r = j.value("r", c.r);
    c.r_banach = j.value("r_banach", c.r_banach);
    c.r_high = j.value("r_high", c.r_high);
    c.tau = j.value("tau", c.tau);
    c.identity_tau = j.value("identity_tau", c.identity_tau);
    c.output_dir = j.value("output_dir", c.output_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("lemma config has a wrong type: ") + e.what());
  }
  if (c.grids.empty() || c.samples < 1 || c.identity_samples < 1) throw ConfigError("empty lemma ensemble");
  for (int n : c.grids)
    if (n < 8 || n % 2 != 0 || 4 * c.mode_cap >= n) throw ConfigError("grid too small for the mode cap");
  if (c.r <= 2.5 || c.r_banach <= 1.5 || c.r_high <= 3.0 || c.tau < 0.0)
    throw ConfigError("lemma parameters outside their validity ranges");
  return c;
}

nlohmann::json run_lemma_suite(const LemmaSuiteConfig& c, int threads, bool& ok) {
  ok = true;
  nlohmann::json rep;
  const IdentityReport ids =
      check_identities(EnsembleSpec{c.identity_grid, c.mode_cap, c.identity_samples, c.seed}, c.identity_tau);
  rep["identities"] = to_json(ids);
  rep["identities"]["pass"] = ids.worst() <= 1e-12;
  ok = ok && ids.worst() <= 1e-12;

  struct Job {
    std::string name;
    LemmaKind kind;
    bool banach;
    double r;
  };
  std::vector<Job> jobs{{"banach", LemmaKind::A1, true, c.r_banach}};
  for (LemmaKind k : all_lemma_kinds()) jobs.push_back({lemma_name(k), k, false, c.r});
  jobs.push_back({"planar (r>3)", LemmaKind::Planar, false, c.r_high});

  std::vector<std::vector<EstimateReport>> results(jobs.size(), std::vector<EstimateReport>(c.grids.size()));
  std::atomic<std::size_t> next{0};
  const std::size_t total = jobs.size() * c.grids.size();
  auto worker = [&] {
    for (std::size_t t = next++; t < total; t = next++) {
      const std::size_t j = t / c.grids.size(), g = t % c.grids.size();
      const EnsembleSpec e{c.grids[g], c.mode_cap, c.samples, c.seed};
      EstimateReport r = jobs[j].banach ? check_banach_algebra(e, jobs[j].r, c.tau)
                                        : check_nonlinear_estimate(jobs[j].kind, e, jobs[j].r, c.tau);
      r.lemma = jobs[j].name;
      results[j][g] = r;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, threads); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  rep["estimates"] = nlohmann::json::array();
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    nlohmann::json e;
    e["lemma"] = jobs[j].name;
    e["per_grid"] = nlohmann::json::array();
    double lo = INFINITY, hi = 0.0;
    bool finite = true;
    for (const auto& r : results[j]) {
      e["per_grid"].push_back(to_json(r));
      finite = finite && std::isfinite(r.max_ratio);
      lo = std::min(lo, r.max_ratio);
      hi = std::max(hi, r.max_ratio);
    }
    const double variation = hi > 0.0 ? (hi - lo) / hi : 0.0;
    e["relative_variation"] = variation;
    e["pass"] = finite && variation < 0.2;
    ok = ok && finite && variation < 0.2;
    rep["estimates"].push_back(e);
  }
  rep["pass"] = ok;
  return rep;
}

int verify_lemmas_command(const nlohmann::json& doc, const CommandOptions& opt) {
  const LemmaSuiteConfig c = parse_lemma_config(doc);
  bool ok = false;
  const nlohmann::json rep = run_lemma_suite(c, opt.threads, ok);
  const fs::path out(resolve_out(c.output_dir, opt));
  fs::create_directories(out);
  write_json(out / "lemmas.json", rep);
  logv(opt, std::string("lemma suite ") + (ok ? "passed" : "failed"));
  return ok ? kExitOk : kExitNumerical;
}

nlohmann::json info_report(const SimConfig& c) {
  nlohmann::json j;
  j["config"] = to_json(c);
  j["fftw"] = std::string(fftw_version);
  j["csv_version"] = kCsvVersion;
  j["columns"] = diagnostic_columns();
  if (c.scenario != Scenario::EpsilonSweep) {
    const PEState init = initial_state(c);
    j["default_dt"] = default_dt(init);
    const NormSpec s{c.r, c.tau0, 1.0};
    const double m0 = std::pow(analytic_norm(init.vbar, s), 2) + std::pow(analytic_norm(init.vtilde, s), 2);
    j["M0"] = m0;
    LifespanParams p;
    p.tau0 = c.tau0;
    p.m0 = m0;
    p.cr = c.c_r;
    p.cm = c.c_m;
    p.epsilon = c.epsilon;
    p.omega0 = c.omega;
    j["predicted_local_lifespan"] = predicted_lifespan(LifespanKind::Local, p);
    if (c.epsilon > 0.0) j["predicted_small_baroclinic_lifespan"] = predicted_lifespan(LifespanKind::SmallBaroclinic, p);
    try {
      j["predicted_fast_rotation_lifespan"] = predicted_lifespan(LifespanKind::FastRotation, p);
    } catch (const std::domain_error&) {
      j["predicted_fast_rotation_lifespan"] = nullptr;
    }
  }
  return j;
}

int info_command(const SimConfig& config, const CommandOptions& /*opt*/, std::ostream& os) {
  os << info_report(config).dump(2) << '\n';
  return kExitOk;
}

}  // namespace rpe
