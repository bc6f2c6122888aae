#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "rpe/config.hpp"
#include "rpe/gevrey.hpp"
#include "rpe/pe_dynamics.hpp"
#include "rpe/resonant_limit.hpp"

namespace rpe {

// vbar = amp * grad_perp[cos(2 pi x1) cos(2 pi x2)], a steady 2D Euler flow.
VectorField taylor_green(int n, double amp = 1.0);
// Divergence-free barotropic field from a random stream function on
// max|k_i| <= cap with e^{-|k|} decay, scaled to L2 norm `amp`.
VectorField random_barotropic(int n, int cap, double amp, std::uint64_t seed);
// Real baroclinic field, even in z, empty k3 = 0 plane, scaled to L2 norm `amp`.
VectorField random_baroclinic(int n, int cap, double amp, std::uint64_t seed);

// Cosine coefficients q_k (k = 0..N/3) of the vertical profile -zeta^2 + 1/3,
// zeta = 2|z| in [0, 1], so that Q(z) = sum_k q_k cos(2 pi k z).
std::vector<double> blowup_profile_coefficients(int n);
double blowup_profile(const std::vector<double>& q, double z);
// v0 = (lambda Q(z) sin(2 pi x1), -omega sin(2 pi x1)).
PEState scenario_blowup(int n, double lambda, double omega);

struct WellPreparedData {
  PEState state;
  WaveVector k;
  int k_norm = 0;
  double amplitude = 0.0;
  double sobolev_norm_small = 0.0;  // ||vtilde_0||_{H^{3.5}}
  double analytic_norm_big = 0.0;   // ||e^{tau0 A} vtilde_0||_{H^{r+2}}
};

// Required |k| = ceil(ln|omega| / tau0).
int well_prepared_wavenumber(double omega, double tau0);
// Lattice vector with |k| = m and k3 != 0, preferring all-nonzero components,
// then nonzero horizontal part; lexicographically first within a class.
WaveVector well_prepared_mode(int m);
WellPreparedData scenario_well_prepared(int n, double omega, double tau0, double r, const VectorField& vbar0);

// Analytic H^r norms of the barotropic and baroclinic differences.
struct ErrorPair {
  double bar = 0.0;
  double tilde = 0.0;
  double sum() const { return bar + tilde; }
};

ErrorPair state_difference(const PEState& a, const PEState& b, const NormSpec& spec);
// Limit state rotated to the PE phase: Vtilde -> U+ e^{i omega t} + c.c.
PEState limit_as_rotating(const LimitState& s, double omega);

struct FastRotationRow {
  double omega = 0.0;
  double error = 0.0;
  double time_of_max = 0.0;
};

struct FastRotationSeries {
  double omega = 0.0;
  std::vector<double> t;
  std::vector<ErrorPair> err;
};

struct FastRotationResult {
  std::vector<FastRotationRow> rows;
  std::vector<FastRotationSeries> series;
};

FastRotationResult scenario_fast_rotation(const SimConfig& c, const PEState& initial);

struct EpsilonRow {
  double epsilon = 0.0;
  double doubling_time = std::numeric_limits<double>::infinity();
  double error_at_end = 0.0;
  double sup_error = 0.0;
};

std::vector<EpsilonRow> scenario_epsilon_sweep(const SimConfig& c);

// Initial state for the single-run scenarios.
PEState initial_state(const SimConfig& c);

struct TrajectoryPoint {
  double t = 0.0;
  ErrorPair err;
};

// Per-time analytic differences of two runs stored as snapshot directories.
std::vector<TrajectoryPoint> compare_trajectories(const std::string& dir_a, const std::string& dir_b,
                                                  const NormSpec& spec);

}  // namespace rpe
