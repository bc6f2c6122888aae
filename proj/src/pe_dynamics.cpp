#include "rpe/pe_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "rpe/internal.hpp"

namespace rpe {

using detail::Grad;
using detail::forward_dealiased;
using detail::phys_grad;

void detail::enforce_barotropic(VectorField& v) {
  v = barotropic(v);
  v.c1[0] = 0.0;
  v.c2[0] = 0.0;
  v = leray2d_unchecked(v);
  dealias_inplace(v.c1);
  dealias_inplace(v.c2);
  enforce_hermitian(v);
}

Grad detail::phys_grad(const SpectralField& f) {
  return {to_physical(f), to_physical(derivative(f, 1)), to_physical(derivative(f, 2))};
}

SpectralField detail::forward_dealiased(const PhysicalField& p, int n) {
  SpectralField f = from_physical(p, n);
  dealias_inplace(f);
  return f;
}

PEState make_pe_state(const VectorField& v, double t) {
  PEState s{barotropic(v), baroclinic(v), t};
  detail::enforce_barotropic(s.vbar);
  s.vtilde = dealias(enforce_z_parity(s.vtilde, Parity::Even));
  enforce_hermitian(s.vtilde);
  return s;
}

PETendency rhs_pe(const VectorField& vbar, const VectorField& vtilde, double omega, bool nonlinear) {
  const int n = vbar.n();
  PETendency out{VectorField(n), VectorField(n)};
  out.vtilde = cplx(-omega) * perp(vtilde);
  if (!nonlinear) return out;

  const Grad V[2] = {phys_grad(vbar.c1), phys_grad(vbar.c2)};
  const Grad T[2] = {phys_grad(vtilde.c1), phys_grad(vtilde.c2)};
  const PhysicalField Tz[2] = {to_physical(derivative(vtilde.c1, 3)), to_physical(derivative(vtilde.c2, 3))};
  const PhysicalField W = to_physical(vertical_integral_div(vtilde));

  const std::size_t len = W.size();
  PhysicalField S1[2], S2[2], S3[2];
  for (int c = 0; c < 2; ++c) {
    S1[c].resize(len);
    S2[c].resize(len);
    S3[c].resize(len);
  }
  for (std::size_t i = 0; i < len; ++i) {
    const cplx divt = T[0].fx[i] + T[1].fy[i];
    for (int c = 0; c < 2; ++c) {
      S1[c][i] = V[0].f[i] * V[c].fx[i] + V[1].f[i] * V[c].fy[i];
      const cplx adv = T[0].f[i] * T[c].fx[i] + T[1].f[i] * T[c].fy[i];
      S2[c][i] = adv + divt * T[c].f[i];
      S3[c][i] = adv + T[0].f[i] * V[c].fx[i] + T[1].f[i] * V[c].fy[i] + V[0].f[i] * T[c].fx[i] +
                 V[1].f[i] * T[c].fy[i] - W[i] * Tz[c][i];
    }
  }
  const VectorField s1{forward_dealiased(S1[0], n), forward_dealiased(S1[1], n)};
  const VectorField s2{forward_dealiased(S2[0], n), forward_dealiased(S2[1], n)};
  const VectorField s3{forward_dealiased(S3[0], n), forward_dealiased(S3[1], n)};

  const VectorField s2bar = barotropic(s2);
  out.vbar = leray2d_unchecked(barotropic(s1));
  out.vbar += leray2d_unchecked(s2bar);
  out.vbar *= -1.0;
  out.vtilde -= baroclinic(s3 - s2bar);
  return out;
}

VectorField rhs_barotropic(const VectorField& vbar, const VectorField& vtilde, bool nonlinear) {
  return rhs_pe(vbar, vtilde, 0.0, nonlinear).vbar;
}

VectorField rhs_baroclinic(const VectorField& vbar, const VectorField& vtilde, double omega, bool nonlinear) {
  return rhs_pe(vbar, vtilde, omega, nonlinear).vtilde;
}

OscTendency rhs_osc(const OscState& s, bool nonlinear) {
  const int n = s.n();
  OscTendency out{VectorField(n), VectorField(n)};
  if (!nonlinear) return out;

  const cplx e1 = std::polar(1.0, s.omega * s.t);
  const cplx em1 = std::conj(e1);
  const cplx em2 = em1 * em1;
  const cplx e2 = e1 * e1;

  const Grad V[2] = {phys_grad(s.vbar.c1), phys_grad(s.vbar.c2)};
  const Grad U[2] = {phys_grad(s.uplus.c1), phys_grad(s.uplus.c2)};
  const PhysicalField Uz[2] = {to_physical(derivative(s.uplus.c1, 3)), to_physical(derivative(s.uplus.c2, 3))};
  const PhysicalField Wp = to_physical(vertical_integral_div(s.uplus));

  const std::size_t len = Wp.size();
  PhysicalField S1[2], Qpp[2], Qmp[2], G[2];
  for (int c = 0; c < 2; ++c) {
    S1[c].resize(len);
    Qpp[c].resize(len);
    Qmp[c].resize(len);
    G[c].resize(len);
  }
  const cplx I(0.0, 1.0);
  for (std::size_t i = 0; i < len; ++i) {
    // u- and its derivatives are pointwise conjugates of u+.
    const cplx m1 = std::conj(U[0].f[i]), m2 = std::conj(U[1].f[i]);
    const cplx wm = std::conj(Wp[i]);
    const cplx divp = U[0].fx[i] + U[1].fy[i];
    const cplx divm = std::conj(divp);
    // b = vbar + i vbar_perp = (v1 - i v2, v2 + i v1), differentiated.
    const cplx bx[2] = {V[0].fx[i] - I * V[1].fx[i], V[1].fx[i] + I * V[0].fx[i]};
    const cplx by[2] = {V[0].fy[i] - I * V[1].fy[i], V[1].fy[i] + I * V[0].fy[i]};
    for (int c = 0; c < 2; ++c) {
      S1[c][i] = V[0].f[i] * V[c].fx[i] + V[1].f[i] * V[c].fy[i];
      const cplx pp = U[0].f[i] * U[c].fx[i] + U[1].f[i] * U[c].fy[i];
      const cplx mp = m1 * U[c].fx[i] + m2 * U[c].fy[i];
      Qpp[c][i] = pp + divp * U[c].f[i];
      Qmp[c][i] = mp + divm * U[c].f[i];
      const cplx i1 = pp - Wp[i] * Uz[c][i];
      const cplx i0 = V[0].f[i] * U[c].fx[i] + V[1].f[i] * U[c].fy[i] +
                      0.5 * (U[0].f[i] * bx[c] + U[1].f[i] * by[c]);
      const cplx im1 = mp - wm * Uz[c][i];
      const cplx im2 = 0.5 * (m1 * bx[c] + m2 * by[c]);
      G[c][i] = e1 * i1 + i0 + em1 * im1 + em2 * im2;
    }
  }
  const VectorField s1{forward_dealiased(S1[0], n), forward_dealiased(S1[1], n)};
  const VectorField qpp{forward_dealiased(Qpp[0], n), forward_dealiased(Qpp[1], n)};
  const VectorField qmp{forward_dealiased(Qmp[0], n), forward_dealiased(Qmp[1], n)};
  const VectorField g{forward_dealiased(G[0], n), forward_dealiased(G[1], n)};

  const VectorField qbar = barotropic(qpp);
  VectorField source = e2 * qbar;
  source += conj_field(source);
  out.vbar = leray2d_unchecked(barotropic(s1));
  out.vbar += leray2d_unchecked(source);
  out.vbar *= -1.0;

  VectorField ut = g;
  ut.axpy(-e1, qbar);
  ut.axpy(-em1, barotropic(qmp));
  out.uplus = -1.0 * baroclinic(ut);
  return out;
}

OscState to_osc(const PEState& s, double omega) {
  OscState o{s.vbar, p_plus(s.vtilde), s.t, omega};
  o.uplus *= std::polar(1.0, -omega * s.t);
  return o;
}

VectorField reconstruct_vtilde(const VectorField& uplus, double omega, double t) {
  VectorField a = std::polar(1.0, omega * t) * uplus;
  return a + conj_field(a);
}

PEState to_pe(const OscState& s) { return {s.vbar, reconstruct_vtilde(s.uplus, s.omega, s.t), s.t}; }

void enforce_invariants(OscState& s) {
  detail::enforce_barotropic(s.vbar);
  VectorField u = baroclinic(s.uplus);
  u = enforce_z_parity(u, Parity::Even);
  dealias_inplace(u.c1);
  dealias_inplace(u.c2);
  s.uplus = plus_eigenpart(u);
}

void apply_filter(VectorField& v, double strength, int order) {
  const int n = v.n();
  const double kc = static_cast<double>(n / 3);
  for (std::size_t i = 0; i < v.c1.size(); ++i) {
    const double x = v.c1.wave(i).max_abs() / kc;
    const double sigma = std::exp(-strength * std::pow(x, order));
    v.c1[i] *= sigma;
    v.c2[i] *= sigma;
  }
}

bool all_finite(const VectorField& v) {
  for (const auto* c : {&v.c1, &v.c2})
    for (const auto& x : c->coeffs())
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

namespace {

OscState advance(const OscState& s, const OscTendency& k, double h, double t) {
  OscState o = s;
  o.vbar.axpy(h, k.vbar);
  o.uplus.axpy(h, k.uplus);
  o.t = t;
  return o;
}

}  // namespace

OscState step(const OscState& s, double dt, const StepOptions& opt) {
  const OscTendency k1 = rhs_osc(s, opt.nonlinear);
  const OscTendency k2 = rhs_osc(advance(s, k1, 0.5 * dt, s.t + 0.5 * dt), opt.nonlinear);
  const OscTendency k3 = rhs_osc(advance(s, k2, 0.5 * dt, s.t + 0.5 * dt), opt.nonlinear);
  const OscTendency k4 = rhs_osc(advance(s, k3, dt, s.t + dt), opt.nonlinear);
  OscState o = s;
  o.t = s.t + dt;
  const double a = dt / 6.0, b = dt / 3.0;
  o.vbar.axpy(a, k1.vbar).axpy(b, k2.vbar).axpy(b, k3.vbar).axpy(a, k4.vbar);
  o.uplus.axpy(a, k1.uplus).axpy(b, k2.uplus).axpy(b, k3.uplus).axpy(a, k4.uplus);
  if (!all_finite(o.vbar) || !all_finite(o.uplus))
    throw NumericalFailure("non-finite values at t = " + std::to_string(o.t));
  enforce_invariants(o);
  if (opt.filter) {
    apply_filter(o.vbar, opt.filter_strength, opt.filter_order);
    apply_filter(o.uplus, opt.filter_strength, opt.filter_order);
  }
  return o;
}

PEState step(const PEState& s, double omega, double dt, const StepOptions& opt) {
  return to_pe(step(to_osc(s, omega), dt, opt));
}

PEState linear_rotation_solution(const PEState& v0, double omega, double t) {
  const double c = std::cos(omega * t), sn = std::sin(omega * t);
  PEState out = v0;
  out.t = t;
  out.vtilde.c1 = cplx(c) * v0.vtilde.c1 + cplx(sn) * v0.vtilde.c2;
  out.vtilde.c2 = cplx(-sn) * v0.vtilde.c1 + cplx(c) * v0.vtilde.c2;
  return out;
}

double max_grad_v1(const PEState& s) {
  const PhysicalField d = to_physical(derivative(s.vbar.c1 + s.vtilde.c1, 1));
  double m = 0.0;
  for (const auto& x : d) m = std::max(m, std::abs(x.real()));
  return m;
}

double spectral_tail_fraction(const VectorField& v) {
  const int layer = v.n() / 3;
  double top = 0.0, total = 0.0;
  for (std::size_t i = 0; i < v.c1.size(); ++i) {
    const double e = std::norm(v.c1[i]) + std::norm(v.c2[i]);
    total += e;
    if (v.c1.wave(i).max_abs() == layer) top += e;
  }
  return total > 0.0 ? top / total : 0.0;
}

BlowupStatus blowup_monitor(const PEState& s, double initial_grad, const BlowupThresholds& th) {
  BlowupStatus st;
  const VectorField v = s.full();
  if (!all_finite(v)) {
    st.flagged = true;
    st.criterion = "non-finite";
    return st;
  }
  const double g = max_grad_v1(s);
  st.amplification = initial_grad > 0.0 ? g / initial_grad : 0.0;
  st.tail_fraction = spectral_tail_fraction(v);
  if (st.amplification >= th.amplification) {
    st.flagged = true;
    st.criterion = "gradient-amplification";
  } else if (st.tail_fraction >= th.tail_fraction) {
    st.flagged = true;
    st.criterion = "spectral-tail";
  }
  return st;
}

double max_velocity(const PEState& s) {
  const VectorField v = s.full();
  double m = 0.0;
  for (const auto* c : {&v.c1, &v.c2}) {
    const PhysicalField p = to_physical(*c);
    for (const auto& x : p) m = std::max(m, std::abs(x.real()));
  }
  return m;
}

double default_dt(const PEState& s) { return 0.5 * (1.0 / s.n()) / std::max(1.0, max_velocity(s)); }

IntegrationResult integrate(const IntegrationSettings& cfg, const PEState& initial, const Observer& observer) {
  IntegrationResult res;
  res.final_state = initial;
  const double dt_req = cfg.dt > 0.0 ? cfg.dt : default_dt(initial);
  const long steps = cfg.t_end > 0.0 ? std::max(1L, static_cast<long>(std::ceil(cfg.t_end / dt_req - 1e-9))) : 0;
  const double h = steps > 0 ? cfg.t_end / steps : dt_req;
  res.dt = h;
  const int stride = std::max(1, cfg.stride);

  const double g0 = cfg.monitor_blowup ? max_grad_v1(initial) : 0.0;
  auto status_of = [&](const PEState& s) {
    return cfg.monitor_blowup ? blowup_monitor(s, g0, cfg.thresholds) : BlowupStatus{};
  };

  OscState s = to_osc(initial, cfg.omega);
  const double t0 = initial.t;
  res.last_status = status_of(initial);
  if (observer) observer(initial, res.last_status);
  for (long i = 0; i < steps; ++i) {
    OscState next;
    try {
      next = step(s, h, cfg.step);
    } catch (const NumericalFailure&) {
      if (!cfg.monitor_blowup) throw;
      res.blowup = true;
      res.blowup_time = t0 + (i + 1) * h;
      res.criterion = "non-finite";
      break;
    }
    next.t = t0 + (i + 1) * h;
    s = std::move(next);
    res.steps = static_cast<int>(i + 1);
    const bool last = i + 1 == steps;
    const bool emit = (i + 1) % stride == 0 || last;
    if (!emit && !cfg.monitor_blowup) continue;
    const PEState pe = to_pe(s);
    const BlowupStatus st = status_of(pe);
    res.last_status = st;
    res.final_state = pe;
    if (st.flagged) {
      res.blowup = true;
      res.blowup_time = pe.t;
      res.criterion = st.criterion;
      if (observer) observer(pe, st);
      break;
    }
    res.last_valid_time = pe.t;
    if (emit && observer) observer(pe, st);
  }
  if (!res.blowup && steps > 0) {
    res.final_state = to_pe(s);
    res.last_valid_time = res.final_state.t;
  }
  return res;
}

}  // namespace rpe
