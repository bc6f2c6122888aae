#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "rpe/projections.hpp"

namespace rpe {

struct PEState {
  BarotropicField vbar;
  BaroclinicField vtilde;
  double t = 0.0;

  int n() const { return vbar.n(); }
  // v = vbar + vtilde as one field.
  VectorField full() const { return vbar + vtilde; }
};

struct OscState {
  BarotropicField vbar;
  ComplexVelocity uplus;
  double t = 0.0;
  double omega = 0.0;

  int n() const { return vbar.n(); }
};

struct PETendency {
  VectorField vbar, vtilde;
};

struct OscTendency {
  VectorField vbar, uplus;
};

// Splits v into (vbar, vtilde) and applies the state invariants.
PEState make_pe_state(const VectorField& v, double t = 0.0);

PETendency rhs_pe(const VectorField& vbar, const VectorField& vtilde, double omega, bool nonlinear = true);
VectorField rhs_barotropic(const VectorField& vbar, const VectorField& vtilde, bool nonlinear = true);
VectorField rhs_baroclinic(const VectorField& vbar, const VectorField& vtilde, double omega,
                           bool nonlinear = true);
OscTendency rhs_osc(const OscState& s, bool nonlinear = true);

OscState to_osc(const PEState& s, double omega);
PEState to_pe(const OscState& s);
// vtilde = u+ e^{i omega t} + conj(u+) e^{-i omega t}.
VectorField reconstruct_vtilde(const VectorField& uplus, double omega, double t);

struct StepOptions {
  bool nonlinear = true;
  bool filter = false;
  double filter_strength = 36.0;
  int filter_order = 36;
};

// Re-imposes parity, mean zero, divergence free, dealiasing and Hermitian
// symmetry of vbar; projects u+ onto its admissible subspace.
void enforce_invariants(OscState& s);
void apply_filter(VectorField& v, double strength, int order);

// One classical RK4 step of the oscillatory system. Throws NumericalFailure
// on non-finite values.
OscState step(const OscState& s, double dt, const StepOptions& opt = {});
PEState step(const PEState& s, double omega, double dt, const StepOptions& opt = {});

PEState linear_rotation_solution(const PEState& v0, double omega, double t);

struct BlowupThresholds {
  double amplification = 100.0;
  double tail_fraction = 1e-3;
};

struct BlowupStatus {
  double amplification = 0.0;
  double tail_fraction = 0.0;
  bool flagged = false;
  std::string criterion;
};

// max over the grid of |d v1 / d x1| for v = vbar + vtilde.
double max_grad_v1(const PEState& s);
// Energy fraction in the outermost retained layer max|k_i| = floor(N/3).
double spectral_tail_fraction(const VectorField& v);
BlowupStatus blowup_monitor(const PEState& s, double initial_grad, const BlowupThresholds& th);

double max_velocity(const PEState& s);
// 0.5 (1/N) / max(1, |v|_inf).
double default_dt(const PEState& s);

struct IntegrationSettings {
  double omega = 0.0;
  double dt = 0.0;  // <= 0 selects default_dt
  double t_end = 0.0;
  int stride = 1;
  StepOptions step;
  bool monitor_blowup = false;
  BlowupThresholds thresholds;
};

struct IntegrationResult {
  PEState final_state;
  int steps = 0;
  double dt = 0.0;
  bool blowup = false;
  double blowup_time = 0.0;
  double last_valid_time = 0.0;
  std::string criterion;
  BlowupStatus last_status;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Observer receives the state at t = 0 and every `stride` steps, plus the
// final state.
using Observer = std::function<void(const PEState&, const BlowupStatus&)>;

IntegrationResult integrate(const IntegrationSettings& settings, const PEState& initial,
                            const Observer& observer = {});

bool all_finite(const VectorField& v);

}  // namespace rpe
