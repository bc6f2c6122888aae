#include "rpe/resonant_limit.hpp"

#include <algorithm>
#include <cmath>

#include "rpe/internal.hpp"

namespace rpe {

using detail::Grad;
using detail::forward_dealiased;
using detail::phys_grad;

LimitState make_limit_state(const PEState& s) { return {s.vbar, s.vtilde, s.t}; }

VectorField rhs_euler2d(const VectorField& Vbar) {
  const int n = Vbar.n();
  const Grad V[2] = {phys_grad(Vbar.c1), phys_grad(Vbar.c2)};
  const std::size_t len = V[0].f.size();
  PhysicalField S1[2] = {PhysicalField(len), PhysicalField(len)};
  for (std::size_t i = 0; i < len; ++i)
    for (int c = 0; c < 2; ++c) S1[c][i] = V[0].f[i] * V[c].fx[i] + V[1].f[i] * V[c].fy[i];
  const VectorField s1{forward_dealiased(S1[0], n), forward_dealiased(S1[1], n)};
  // Same operation sequence as the PE barotropic tendency with no baroclinic part.
  VectorField out = leray2d_unchecked(barotropic(s1));
  out += leray2d_unchecked(VectorField(n));
  out *= -1.0;
  return out;
}

VectorField rhs_limit_baroclinic(const VectorField& Vbar, const VectorField& Vtilde) {
  const int n = Vbar.n();
  const Grad V[2] = {phys_grad(Vbar.c1), phys_grad(Vbar.c2)};
  const Grad T[2] = {phys_grad(Vtilde.c1), phys_grad(Vtilde.c2)};
  const std::size_t len = V[0].f.size();
  PhysicalField S[2] = {PhysicalField(len), PhysicalField(len)};
  for (std::size_t i = 0; i < len; ++i) {
    const cplx curl = V[1].fx[i] - V[0].fy[i];
    const cplx tperp[2] = {-T[1].f[i], T[0].f[i]};
    for (int c = 0; c < 2; ++c)
      S[c][i] = V[0].f[i] * T[c].fx[i] + V[1].f[i] * T[c].fy[i] + 0.5 * tperp[c] * curl;
  }
  VectorField out{forward_dealiased(S[0], n), forward_dealiased(S[1], n)};
  out *= -1.0;
  return baroclinic(out);
}

VectorField rhs_limit_uplus(const VectorField& Vbar, const VectorField& Uplus) {
  const int n = Vbar.n();
  const Grad V[2] = {phys_grad(Vbar.c1), phys_grad(Vbar.c2)};
  const Grad U[2] = {phys_grad(Uplus.c1), phys_grad(Uplus.c2)};
  const std::size_t len = V[0].f.size();
  const cplx I(0.0, 1.0);
  PhysicalField S[2] = {PhysicalField(len), PhysicalField(len)};
  for (std::size_t i = 0; i < len; ++i) {
    const cplx bx[2] = {V[0].fx[i] - I * V[1].fx[i], V[1].fx[i] + I * V[0].fx[i]};
    const cplx by[2] = {V[0].fy[i] - I * V[1].fy[i], V[1].fy[i] + I * V[0].fy[i]};
    for (int c = 0; c < 2; ++c)
      S[c][i] = V[0].f[i] * U[c].fx[i] + V[1].f[i] * U[c].fy[i] + 0.5 * (U[0].f[i] * bx[c] + U[1].f[i] * by[c]);
  }
  VectorField out{forward_dealiased(S[0], n), forward_dealiased(S[1], n)};
  out *= -1.0;
  return baroclinic(out);
}

ComplexVelocity u_views(const VectorField& Vtilde) { return p_plus(Vtilde); }

namespace {

struct LimitTendency {
  VectorField Vbar, Vtilde;
};

LimitTendency rhs_limit(const LimitState& s, bool evolve_baroclinic) {
  LimitTendency k{rhs_euler2d(s.Vbar), VectorField(s.Vbar.n())};
  if (evolve_baroclinic) k.Vtilde = rhs_limit_baroclinic(s.Vbar, s.Vtilde);
  return k;
}

LimitState advance(const LimitState& s, const LimitTendency& k, double h, double t) {
  LimitState o = s;
  o.Vbar.axpy(h, k.Vbar);
  o.Vtilde.axpy(h, k.Vtilde);
  o.t = t;
  return o;
}

}  // namespace

LimitState step_limit(const LimitState& s, double dt, const LimitStepOptions& opt) {
  const bool b = opt.evolve_baroclinic;
  const LimitTendency k1 = rhs_limit(s, b);
  const LimitTendency k2 = rhs_limit(advance(s, k1, 0.5 * dt, s.t + 0.5 * dt), b);
  const LimitTendency k3 = rhs_limit(advance(s, k2, 0.5 * dt, s.t + 0.5 * dt), b);
  const LimitTendency k4 = rhs_limit(advance(s, k3, dt, s.t + dt), b);
  LimitState o = s;
  o.t = s.t + dt;
  const double a = dt / 6.0, c = dt / 3.0;
  o.Vbar.axpy(a, k1.Vbar).axpy(c, k2.Vbar).axpy(c, k3.Vbar).axpy(a, k4.Vbar);
  o.Vtilde.axpy(a, k1.Vtilde).axpy(c, k2.Vtilde).axpy(c, k3.Vtilde).axpy(a, k4.Vtilde);
  if (!all_finite(o.Vbar) || !all_finite(o.Vtilde))
    throw NumericalFailure("non-finite values in limit system at t = " + std::to_string(o.t));
  detail::enforce_barotropic(o.Vbar);
  o.Vtilde = dealias(enforce_z_parity(baroclinic(o.Vtilde), Parity::Even));
  enforce_hermitian(o.Vtilde);
  if (opt.filter) {
    apply_filter(o.Vbar, opt.filter_strength, opt.filter_order);
    apply_filter(o.Vtilde, opt.filter_strength, opt.filter_order);
  }
  return o;
}

LimitState integrate_limit(const LimitSettings& cfg, const LimitState& initial, const LimitObserver& observer) {
  const PEState as_pe{initial.Vbar, initial.Vtilde, initial.t};
  const double dt_req = cfg.dt > 0.0 ? cfg.dt : default_dt(as_pe);
  const long steps = cfg.t_end > 0.0 ? std::max(1L, static_cast<long>(std::ceil(cfg.t_end / dt_req - 1e-9))) : 0;
  const double h = steps > 0 ? cfg.t_end / steps : dt_req;
  const int stride = std::max(1, cfg.stride);
  LimitState s = initial;
  if (observer) observer(s);
  for (long i = 0; i < steps; ++i) {
    s = step_limit(s, h, cfg.step);
    s.t = initial.t + (i + 1) * h;
    if (observer && ((i + 1) % stride == 0 || i + 1 == steps)) observer(s);
  }
  return s;
}

double limit_envelope_barotropic(double cm, double cr, double t) { return std::pow(cm, std::exp(cr * t)); }

double limit_envelope_baroclinic(double v0, double cm, double cr, double t) {
  return v0 * std::exp(limit_envelope_barotropic(cm, cr, t));
}

}  // namespace rpe
