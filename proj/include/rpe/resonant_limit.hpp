#pragma once

#include <functional>

#include "rpe/pe_dynamics.hpp"

namespace rpe {

struct LimitState {
  BarotropicField Vbar;
  BaroclinicField Vtilde;
  double t = 0.0;
};

LimitState make_limit_state(const PEState& s);

VectorField rhs_euler2d(const VectorField& Vbar);
VectorField rhs_limit_baroclinic(const VectorField& Vbar, const VectorField& Vtilde);
// Tendency of U+ in its own form, -(Vbar.grad)U+ - 1/2 (U+.grad)(Vbar + i Vbar_perp).
VectorField rhs_limit_uplus(const VectorField& Vbar, const VectorField& Uplus);
ComplexVelocity u_views(const VectorField& Vtilde);

struct LimitStepOptions {
  bool evolve_baroclinic = true;
  bool filter = false;
  double filter_strength = 36.0;
  int filter_order = 36;
};

LimitState step_limit(const LimitState& s, double dt, const LimitStepOptions& opt = {});

struct LimitSettings {
  double dt = 0.0;  // <= 0 selects default_dt of the initial state
  double t_end = 0.0;
  int stride = 1;
  LimitStepOptions step;
};

using LimitObserver = std::function<void(const LimitState&)>;

LimitState integrate_limit(const LimitSettings& settings, const LimitState& initial,
                           const LimitObserver& observer = {});

// K(t) = C_M^{exp(C_r t)}; bounds the barotropic H^{r+1} norm.
double limit_envelope_barotropic(double cm, double cr, double t);
// |Vtilde_0| e^{K(t)}; bounds the baroclinic H^r norm.
double limit_envelope_baroclinic(double v0, double cm, double cr, double t);

}  // namespace rpe
