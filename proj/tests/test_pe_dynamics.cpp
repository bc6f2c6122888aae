#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rpe/pe_dynamics.hpp"
#include "rpe/resonant_limit.hpp"
#include "rpe/scenarios.hpp"

using namespace rpe;

namespace {

PEState random_state(int n, int cap, std::uint64_t seed, double bt = 1.0, double bc = 0.7) {
  return make_pe_state(random_barotropic(n, cap, bt, seed) + random_baroclinic(n, cap, bc, seed + 1000));
}

VectorField sin_x_cos_z(int n) {
  VectorField v(n);
  for (int s1 : {-1, 1})
    for (int s3 : {-1, 1}) v.c1.at({s1, 0, s3}) = cplx(0.0, -0.25 * s1);
  return v;
}

double rel(const VectorField& a, const VectorField& ref) {
  return oracle::max_abs_diff(a, ref) / std::max(1e-300, oracle::max_abs(ref));
}

// vtilde tendency implied by the u+ tendency at time t
VectorField vtilde_rate(const OscState& s, const VectorField& uplus_rate) {
  VectorField d = uplus_rate;
  d.axpy(cplx(0.0, s.omega), s.uplus);
  return reconstruct_vtilde(d, s.omega, s.t);
}

}  // namespace

TEST_CASE("rhs_barotropic examples") {
  const int n = 16;
  const VectorField tg = taylor_green(n);
  CHECK(oracle::max_abs(rhs_barotropic(tg, VectorField(n))) < 1e-13);
  CHECK(oracle::max_abs(rhs_barotropic(VectorField(n), VectorField(n))) == 0.0);

  const VectorField vt = sin_x_cos_z(n);
  const auto ref = oracle::rhs_pe(VectorField(n), vt, 0.0, 5);
  CHECK(oracle::max_abs_diff(rhs_barotropic(VectorField(n), vt), ref.vbar) < 1e-13);

  const PEState s = random_state(n, 3, 21);
  const VectorField t = rhs_barotropic(s.vbar, s.vtilde);
  CHECK(l2_norm(horizontal_divergence(t)) < 1e-12 * l2_norm(t));
  CHECK(l2_norm(baroclinic(t)) == 0.0);
}

TEST_CASE("rhs_baroclinic examples") {
  const int n = 16;
  const VectorField tg = taylor_green(n);
  CHECK(oracle::max_abs(rhs_baroclinic(tg, VectorField(n), 3.0)) == 0.0);

  const PEState s = random_state(n, 3, 22);
  CHECK(rel(rhs_baroclinic(s.vbar, s.vtilde, 7.0, false), -7.0 * perp(s.vtilde)) < 1e-15);

  for (double omega : {0.0, 10.0}) {
    const auto ref = oracle::rhs_pe(s.vbar, s.vtilde, omega, 5);
    const PETendency t = rhs_pe(s.vbar, s.vtilde, omega);
    CHECK(rel(t.vtilde, ref.vtilde) < 1e-12);
    CHECK(rel(t.vbar, ref.vbar) < 1e-12);
    CHECK(l2_norm(barotropic(t.vtilde)) < 1e-14 * l2_norm(t.vtilde));
  }
}

TEST_CASE("rhs_osc examples") {
  const int n = 16;
  const PEState s = random_state(n, 3, 23);

  OscState bare{s.vbar, VectorField(n), 0.3, 5.0};
  CHECK(rel(rhs_osc(bare).vbar, rhs_euler2d(s.vbar)) < 1e-14);

  for (double omega : {0.0, 10.0, 1000.0})
    for (double t : {0.0, 0.37}) {
      PEState st = s;
      st.t = t;
      const OscState o = to_osc(st, omega);
      const OscTendency ot = rhs_osc(o);
      const PETendency pt = rhs_pe(s.vbar, s.vtilde, omega);
      CHECK(rel(ot.vbar, pt.vbar) < 1e-12);
      CHECK(rel(vtilde_rate(o, ot.uplus), pt.vtilde) < 1e-12);
    }
}

TEST_CASE("rhs_osc self-interaction group matches quadrature") {
  const int n = 16;
  const VectorField u = p_plus(random_state(n, 2, 24).vtilde);
  // tendency = sum_p e^{i p theta} I_p with p in {1, 0, -1, -2}; four phases separate them
  VectorField i1(n);
  for (int j = 0; j < 4; ++j) {
    const double theta = 0.5 * kPi * j;
    const OscState o{VectorField(n), u, theta, 1.0};
    i1.axpy(0.25 * std::polar(1.0, -theta), rhs_osc(o).uplus);
  }
  CHECK(rel(i1, oracle::osc_self_group(u, 5)) < 1e-12);
}

TEST_CASE("step examples") {
  const int n = 16;
  const OscState zero{VectorField(n), VectorField(n), 0.0, 3.0};
  const OscState z1 = step(zero, 0.01);
  CHECK(oracle::max_abs(z1.vbar) == 0.0);
  CHECK(oracle::max_abs(z1.uplus) == 0.0);

  const PEState s = random_state(n, 3, 25);
  const double omega = 10.0, dt = 0.05;
  StepOptions lin;
  lin.nonlinear = false;
  const PEState s1 = step(s, omega, dt, lin);
  const double c = std::cos(omega * dt), sn = std::sin(omega * dt);
  const VectorField ref{c * s.vtilde.c1 + sn * s.vtilde.c2, -sn * s.vtilde.c1 + c * s.vtilde.c2};
  CHECK(rel(s1.vtilde, ref) < 1e-13);
  CHECK(rel(s1.vbar, s.vbar) < 1e-15);

  PEState e = random_state(n, 3, 26, 0.5, 0.25);
  const double e0 = norm2(e.full());
  for (int i = 0; i < 1000; ++i) e = step(e, 2.0, 1e-3);
  CHECK(std::abs(norm2(e.full()) - e0) <= 1e-8 * e0);
}

TEST_CASE("reconstructed vtilde stays real") {
  const int n = 16;
  OscState o = to_osc(random_state(n, 3, 27), 40.0);
  for (int i = 0; i < 20; ++i) {
    o = step(o, 2e-3);
    const VectorField vt = reconstruct_vtilde(o.uplus, o.omega, o.t);
    CHECK(hermitian_defect(vt.c1) <= 1e-13 * l2_norm(vt));
    CHECK(hermitian_defect(vt.c2) <= 1e-13 * l2_norm(vt));
  }
}

TEST_CASE("integrate examples") {
  const int n = 16;
  const PEState s = random_state(n, 3, 28);
  IntegrationSettings z;
  z.t_end = 0.0;
  int calls = 0;
  const IntegrationResult r0 = integrate(z, s, [&](const PEState&, const BlowupStatus&) { ++calls; });
  CHECK(r0.steps == 0);
  CHECK(calls == 1);
  CHECK(rel(r0.final_state.vtilde, s.vtilde) == 0.0);

  // vtilde_0 = 0 reduces to 2D Euler
  const PEState b = make_pe_state(s.vbar);
  IntegrationSettings is;
  is.omega = 50.0;
  is.dt = 2e-3;
  is.t_end = 0.1;
  is.stride = 5;
  std::vector<PEState> pe;
  integrate(is, b, [&](const PEState& st, const BlowupStatus&) { pe.push_back(st); });
  LimitSettings ls;
  ls.dt = 2e-3;
  ls.t_end = 0.1;
  ls.stride = 5;
  std::vector<LimitState> eu;
  integrate_limit(ls, make_limit_state(b), [&](const LimitState& st) { eu.push_back(st); });
  REQUIRE(pe.size() == eu.size());
  for (std::size_t i = 0; i < pe.size(); ++i) {
    CHECK(oracle::max_abs_diff(pe[i].vbar, eu[i].Vbar) <= 1e-10);
    CHECK(oracle::max_abs(pe[i].vtilde) == 0.0);
  }
}

TEST_CASE("blowup scenario terminates early") {
  IntegrationSettings is;
  is.t_end = 2.0;
  is.monitor_blowup = true;
  const IntegrationResult r = integrate(is, scenario_blowup(32, 5.0, 0.0));
  CHECK(r.blowup);
  CHECK(r.blowup_time < 2.0);
}

TEST_CASE("linear_rotation_solution examples") {
  const int n = 16;
  const PEState s = random_state(n, 3, 29);
  const PEState q = linear_rotation_solution(s, 2.0, 0.25 * kPi);
  CHECK(rel(q.vtilde, VectorField{s.vtilde.c2, -1.0 * s.vtilde.c1}) < 1e-15);
  CHECK(rel(q.vbar, s.vbar) == 0.0);
  CHECK(rel(linear_rotation_solution(s, 1.0, kTwoPi).vtilde, s.vtilde) < 1e-15);
  CHECK(rel(linear_rotation_solution(s, 0.0, 3.7).vtilde, s.vtilde) == 0.0);
}

TEST_CASE("blowup monitor stays quiet on steady and linear runs") {
  const int n = 16;
  bool flagged = false;
  IntegrationSettings is;
  is.t_end = 0.5;
  is.monitor_blowup = true;
  const auto obs = [&](const PEState&, const BlowupStatus& st) { flagged = flagged || st.flagged; };
  const IntegrationResult r = integrate(is, make_pe_state(taylor_green(n)), obs);
  CHECK_FALSE(r.blowup);
  CHECK_FALSE(flagged);

  is.omega = 10.0;
  is.step.nonlinear = false;
  const IntegrationResult q = integrate(is, random_state(n, 3, 30), obs);
  CHECK_FALSE(q.blowup);
  CHECK_FALSE(flagged);
}
