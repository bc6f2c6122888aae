#include "rpe/scenarios.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <filesystem>
#include <random>
#include <stdexcept>

#include "rpe/lemmas.hpp"

namespace rpe {

namespace fs = std::filesystem;

VectorField taylor_green(int n, double amp) {
  // psi = cos(2 pi x1) cos(2 pi x2): four modes (+-1, +-1, 0) with coefficient 1/4.
  SpectralField psi(n);
  for (int a : {-1, 1})
    for (int b : {-1, 1}) psi.at({a, b, 0}) = 0.25 * amp;
  return {-derivative(psi, 2), derivative(psi, 1)};
}

VectorField random_barotropic(int n, int cap, double amp, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField psi(n);
  for (int k1 = -cap; k1 <= cap; ++k1)
    for (int k2 = -cap; k2 <= cap; ++k2) {
      const double re = normal(rng), im = normal(rng);
      const double k = std::hypot(k1, k2);
      psi.at({k1, k2, 0}) = cplx(re, im) * std::exp(-k);
    }
  enforce_hermitian(psi);
  psi[0] = 0.0;
  VectorField v{-derivative(psi, 2), derivative(psi, 1)};
  const double l2 = l2_norm(v);
  if (l2 > 0.0) v *= amp / l2;
  return v;
}

VectorField random_baroclinic(int n, int cap, double amp, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  VectorField v = random_vector(n, cap, rng, FieldShape::ZeroVerticalMean);
  v = enforce_z_parity(v, Parity::Even);
  enforce_hermitian(v);
  const double l2 = l2_norm(v);
  if (l2 > 0.0) v *= amp / l2;
  return v;
}

std::vector<double> blowup_profile_coefficients(int n) {
  const int m = n / 3;
  std::vector<double> q(m + 1, 0.0);
  auto g = [](double zeta) { return -zeta * zeta + 1.0 / 3.0; };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  for (int k = 0; k <= m; ++k) {
    const double w = k == 0 ? 1.0 : 2.0;
    q[k] = w * GK::integrate([&](double zeta) { return g(zeta) * std::cos(kPi * k * zeta); }, 0.0, 1.0, 10, 1e-15);
  }
  return q;
}

double blowup_profile(const std::vector<double>& q, double z) {
  double s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) s += q[k] * std::cos(kTwoPi * static_cast<double>(k) * z);
  return s;
}

PEState scenario_blowup(int n, double lambda, double omega) {
  const std::vector<double> q = blowup_profile_coefficients(n);
  VectorField v(n);
  // sin(2 pi x1) has coefficients -i/2 at k1 = 1 and +i/2 at k1 = -1.
  for (int s : {-1, 1}) {
    const cplx sinc(0.0, -0.5 * s);
    for (std::size_t k = 0; k < q.size(); ++k) {
      const int k3 = static_cast<int>(k);
      if (k3 == 0) {
        v.c1.at({s, 0, 0}) += lambda * q[0] * sinc;
      } else {
        v.c1.at({s, 0, k3}) += lambda * 0.5 * q[k] * sinc;
        v.c1.at({s, 0, -k3}) += lambda * 0.5 * q[k] * sinc;
      }
    }
    v.c2.at({s, 0, 0}) = -omega * sinc;
  }
  return make_pe_state(v);
}

int well_prepared_wavenumber(double omega, double tau0) {
  const double x = std::log(std::abs(omega)) / tau0;
  return static_cast<int>(std::ceil(x - 1e-12));
}

WaveVector well_prepared_mode(int m) {
  if (m < 1) throw std::invalid_argument("well-prepared mode needs |k| >= 1");
  WaveVector best{0, 0, m};
  int best_class = 2;
  for (int a = 0; a <= m; ++a)
    for (int b = 0; b <= m; ++b)
      for (int c = 1; c <= m; ++c) {
        if (a * a + b * b + c * c != m * m) continue;
        const int cls = (a > 0 && b > 0) ? 0 : ((a > 0 || b > 0) ? 1 : 2);
        if (cls < best_class) {
          best_class = cls;
          best = {a, b, c};
        }
      }
  return best;
}

WellPreparedData scenario_well_prepared(int n, double omega, double tau0, double r, const VectorField& vbar0) {
  if (!(std::abs(omega) > std::exp(1.0))) throw std::invalid_argument("well-prepared data needs |omega| > e");
  WellPreparedData d;
  d.k_norm = well_prepared_wavenumber(omega, tau0);
  if (3 * d.k_norm > n) throw std::invalid_argument("required |k| exceeds N/3");
  d.k = well_prepared_mode(d.k_norm);
  const double lw = std::log(std::abs(omega));
  d.amplitude = std::pow(lw, -r - 2.0) / std::abs(omega);
  VectorField vt(n);
  for (int s1 : {-1, 1})
    for (int s3 : {-1, 1}) vt.c1.at({s1 * d.k.k1, s1 * d.k.k2, s3 * d.k.k3}) = d.amplitude;
  d.state = make_pe_state(vbar0 + vt);
  d.sobolev_norm_small = sobolev_norm(d.state.vtilde, 3.5);
  d.analytic_norm_big = analytic_norm(d.state.vtilde, NormSpec{r + 2.0, tau0, 1.0});
  return d;
}

ErrorPair state_difference(const PEState& a, const PEState& b, const NormSpec& spec) {
  return {analytic_norm(a.vbar - b.vbar, spec), analytic_norm(a.vtilde - b.vtilde, spec)};
}

PEState limit_as_rotating(const LimitState& s, double omega) {
  return {s.Vbar, reconstruct_vtilde(u_views(s.Vtilde), omega, s.t), s.t};
}

FastRotationResult scenario_fast_rotation(const SimConfig& c, const PEState& initial) {
  const NormSpec spec{c.r, c.tau, 1.0};
  LimitSettings ls;
  ls.dt = c.dt > 0.0 ? c.dt : default_dt(initial);
  ls.t_end = c.t_end;
  ls.stride = c.output_stride;
  ls.step.filter = c.filter;
  std::vector<LimitState> limit;
  integrate_limit(ls, make_limit_state(initial), [&](const LimitState& s) { limit.push_back(s); });

  FastRotationResult out;
  for (double om : c.omega_list) {
    IntegrationSettings is;
    is.omega = om;
    is.dt = ls.dt;
    is.t_end = c.t_end;
    is.stride = c.output_stride;
    is.step.nonlinear = c.nonlinear;
    is.step.filter = c.filter;
    FastRotationSeries series;
    series.omega = om;
    FastRotationRow row{om, 0.0, 0.0};
    std::size_t idx = 0;
    integrate(is, initial, [&](const PEState& s, const BlowupStatus&) {
      if (idx >= limit.size()) throw std::logic_error("trajectory length mismatch");
      const ErrorPair e = state_difference(s, limit_as_rotating(limit[idx], om), spec);
      series.t.push_back(s.t);
      series.err.push_back(e);
      if (e.sum() > row.error) {
        row.error = e.sum();
        row.time_of_max = s.t;
      }
      ++idx;
    });
    out.rows.push_back(row);
    out.series.push_back(std::move(series));
  }
  return out;
}

std::vector<EpsilonRow> scenario_epsilon_sweep(const SimConfig& c) {
  const NormSpec spec{c.r, c.tau, 1.0};
  const NormSpec data_spec{c.r, c.tau0, 1.0};
  const VectorField vbar0 = random_barotropic(c.n, c.mode_cap, c.barotropic_amplitude, c.seed);
  VectorField shape = random_baroclinic(c.n, c.mode_cap, 1.0, c.seed + 1);
  shape *= 1.0 / analytic_norm(shape, data_spec);

  const PEState base = make_pe_state(vbar0);
  const double dt = c.dt > 0.0 ? c.dt : default_dt(make_pe_state(vbar0 + shape));
  LimitSettings ls;
  ls.dt = dt;
  ls.t_end = c.t_end;
  ls.stride = c.output_stride;
  ls.step.evolve_baroclinic = false;
  ls.step.filter = c.filter;
  std::vector<LimitState> euler;
  integrate_limit(ls, make_limit_state(base), [&](const LimitState& s) { euler.push_back(s); });

  std::vector<EpsilonRow> rows;
  for (double eps : c.epsilon_list) {
    EpsilonRow row;
    row.epsilon = eps;
    const PEState init = make_pe_state(vbar0 + cplx(eps) * shape);
    const double n0 = analytic_norm(init.vtilde, spec);
    IntegrationSettings is;
    is.omega = c.omega;
    is.dt = dt;
    is.t_end = c.t_end;
    is.stride = c.output_stride;
    is.step.nonlinear = c.nonlinear;
    is.step.filter = c.filter;
    std::size_t idx = 0;
    integrate(is, init, [&](const PEState& s, const BlowupStatus&) {
      if (idx >= euler.size()) throw std::logic_error("trajectory length mismatch");
      const VectorField diff = s.full() - euler[idx].Vbar;
      const double e = analytic_norm(diff, spec);
      row.sup_error = std::max(row.sup_error, e);
      row.error_at_end = e;
      if (n0 > 0.0 && !std::isfinite(row.doubling_time) && analytic_norm(s.vtilde, spec) >= 2.0 * n0)
        row.doubling_time = s.t;
      ++idx;
    });
    rows.push_back(row);
  }
  return rows;
}

PEState initial_state(const SimConfig& c) {
  switch (c.scenario) {
    case Scenario::TaylorGreen:
      return make_pe_state(taylor_green(c.n, c.barotropic_amplitude));
    case Scenario::Blowup:
      return scenario_blowup(c.n, c.lambda, c.omega);
    case Scenario::WellPrepared:
    case Scenario::FastRotation:
      return scenario_well_prepared(c.n, c.data_omega, c.tau0, c.r,
                                    random_barotropic(c.n, c.mode_cap, c.barotropic_amplitude, c.seed))
          .state;
    case Scenario::ReduceToEuler:
      return make_pe_state(random_barotropic(c.n, c.mode_cap, c.barotropic_amplitude, c.seed));
    case Scenario::Random:
    case Scenario::LinearRotation:
    case Scenario::EpsilonSweep:
      return make_pe_state(random_barotropic(c.n, c.mode_cap, c.barotropic_amplitude, c.seed) +
                           random_baroclinic(c.n, c.mode_cap, c.baroclinic_amplitude, c.seed + 1));
  }
  throw std::invalid_argument("unknown scenario");
}

namespace {

struct SnapshotEntry {
  double t;
  PEState state;
};

std::vector<SnapshotEntry> load_run(const std::string& dir);

}  // namespace

std::vector<TrajectoryPoint> compare_trajectories(const std::string& dir_a, const std::string& dir_b,
                                                  const NormSpec& spec) {
  const auto a = load_run(dir_a);
  const auto b = load_run(dir_b);
  if (a.size() != b.size()) throw std::invalid_argument("runs have different numbers of snapshots");
  std::vector<TrajectoryPoint> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].state.n() != b[i].state.n()) throw std::invalid_argument("grid size mismatch between runs");
    if (std::abs(a[i].t - b[i].t) > 1e-12 * std::max(1.0, std::abs(a[i].t)))
      throw std::invalid_argument("output times differ between runs");
    out.push_back({a[i].t, state_difference(a[i].state, b[i].state, spec)});
  }
  return out;
}

namespace {

std::vector<SnapshotEntry> load_run(const std::string& dir) {
  const fs::path snaps = fs::path(dir) / "snapshots";
  if (!fs::is_directory(snaps)) throw std::invalid_argument("no snapshots directory in " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(snaps))
    if (e.path().extension() == ".bin") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<SnapshotEntry> out;
  for (const auto& f : files) {
    const auto comps = read_snapshot(f.string());
    if (comps.size() != 4) throw std::invalid_argument("snapshot " + f.string() + " does not have 4 components");
    fs::path side = f;
    side.replace_extension(".json");
    const nlohmann::json meta = read_json_file(side.string());
    PEState s{{comps[0], comps[1]}, {comps[2], comps[3]}, meta.at("t").get<double>()};
    out.push_back({s.t, std::move(s)});
  }
  return out;
}

}  // namespace

}  // namespace rpe
