#include <doctest.h>

#include <cmath>
#include <random>

#include "rpe/gevrey.hpp"
#include "rpe/lemmas.hpp"

using namespace rpe;

namespace {

// real mode pair at k = (1,0,0) with unit L2 norm
SpectralField unit_mode(int n) {
  SpectralField f(n);
  f.at({1, 0, 0}) = std::sqrt(0.5);
  f.at({-1, 0, 0}) = std::sqrt(0.5);
  return f;
}

SpectralField exp_spectrum(int n, double tau0, double scale = 1.0) {
  SpectralField f(n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const WaveVector k = f.wave(i);
    if (k.max_abs() == 0 || !retained(k, n)) continue;
    f[i] = scale * std::exp(-tau0 * k.norm());
  }
  return f;
}

}  // namespace

TEST_CASE("sobolev_norm examples") {
  CHECK(sobolev_norm(unit_mode(8), 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(sobolev_norm(SpectralField(8), 2.0) == 0.0);
  std::mt19937_64 rng(1);
  const SpectralField f = random_scalar(16, 3, rng);
  CHECK(sobolev_norm(f, 0.0) == doctest::Approx(std::sqrt(2.0) * l2_norm(f)).epsilon(1e-14));
}

TEST_CASE("analytic_norm examples") {
  std::mt19937_64 rng(2);
  const SpectralField f = random_scalar(16, 3, rng);
  CHECK(analytic_norm(f, {2.5, 0.0, 1.0}) == doctest::Approx(sobolev_norm(f, 2.5)).epsilon(1e-14));
  CHECK(analytic_norm(unit_mode(8), {2.0, 0.1, 1.0}) == doctest::Approx(std::sqrt(1.0 + std::exp(0.2))).epsilon(1e-15));
  CHECK(analytic_norm(SpectralField(8), {2.0, 0.1, 1.0}) == 0.0);

  const NormSpec s{3.0, 0.2, 1.0};
  const double a = analytic_norm(f, s), b = analytic_seminorm(f, s), l = l2_norm(f);
  CHECK(a * a == doctest::Approx(b * b + l * l).epsilon(1e-14));
  CHECK(analytic_norm(f, {3.0, 0.3, 1.0}) >= a);
  CHECK(analytic_norm(f, {3.5, 0.2, 1.0}) >= a);

  // e^{2 tau |k|} alone overflows here, the norm does not
  const double big = analytic_norm(exp_spectrum(64, 15.0), {3.0, 15.0, 1.0});
  CHECK(std::isfinite(big));
  CHECK(big > 1.0);
  CHECK_THROWS(analytic_norm(f, {-1.0, 0.0, 1.0}));
}

TEST_CASE("estimate_radius examples") {
  const auto e = estimate_radius(exp_spectrum(64, 0.5), default_shell_range(64));
  CHECK(std::abs(e.tau_hat - 0.5) < 1e-6);
  CHECK(e.shells_used >= 3);
  const auto scaled = estimate_radius(exp_spectrum(64, 0.5, 7.0), default_shell_range(64));
  CHECK(std::abs(scaled.tau_hat - e.tau_hat) < 1e-12);

  // compact spectrum: only populated shells count
  SpectralField c(64);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = c.wave(i).norm();
    if (k >= 8 && k <= 14) c[i] = std::exp(-0.3 * k);
  }
  const auto ec = estimate_radius(c, default_shell_range(64));
  CHECK(std::abs(ec.tau_hat - 0.3) < 1e-6);

  SpectralField w(64);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (retained(w.wave(i), 64) && w.wave(i).max_abs() > 0) w[i] = 1.0;
  CHECK(estimate_radius(w, default_shell_range(64)).tau_hat == doctest::Approx(0.0).epsilon(1e-12));

  SpectralField few(64);
  few.at({9, 0, 0}) = 1.0;
  CHECK_THROWS_AS(estimate_radius(few, default_shell_range(64)), std::invalid_argument);
}

TEST_CASE("predicted_tau_local examples") {
  CHECK(predicted_tau_local(1.0, 3.0, 1.0, 0.0) == 1.0);
  CHECK(predicted_tau_local(1.0, 0.0, 1.0, 0.25) == doctest::Approx(0.5));
  LifespanParams p;
  p.tau0 = 1.3;
  p.m0 = 0.7;
  p.cr = 0.9;
  const double t = predicted_lifespan(LifespanKind::Local, p);
  // tau0 - 2 t Cr (1 + M0) vanishes at tau0 / (2 Cr (1 + M0)); the lifespan
  // keeps an extra 1 in the denominator
  CHECK(t == doctest::Approx(p.tau0 / (1.0 + 2.0 * p.cr * (1.0 + p.m0))));
  CHECK(predicted_tau_local(p.tau0, p.m0, p.cr, p.tau0 / (2.0 * p.cr * (1.0 + p.m0))) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(predicted_tau_local(p.tau0, p.m0, p.cr, t) > 0.0);
}

TEST_CASE("predicted_lifespan examples") {
  LifespanParams p;
  p.tau0 = 1.0;
  p.m0 = 0.0;
  p.cr = 1.0;
  CHECK(predicted_lifespan(LifespanKind::Local, p) == doctest::Approx(1.0 / 3.0));

  p.epsilon = 0.1;
  const double t1 = predicted_lifespan(LifespanKind::SmallBaroclinic, p);
  p.epsilon = 0.05;
  const double t2 = predicted_lifespan(LifespanKind::SmallBaroclinic, p);
  CHECK(t2 > t1);

  p.omega0 = 1e4;
  const double f1 = predicted_lifespan(LifespanKind::FastRotation, p);
  p.omega0 = 1e8;
  const double f2 = predicted_lifespan(LifespanKind::FastRotation, p);
  CHECK(f2 > f1);

  p.omega0 = 2.0;
  CHECK_THROWS_AS(predicted_lifespan(LifespanKind::FastRotation, p), std::domain_error);
  CHECK(euler_growth_bound(1.0, 1.0, 0.0) == doctest::Approx(1.0 + std::exp(1.0)));
}
