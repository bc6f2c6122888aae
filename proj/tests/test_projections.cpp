#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rpe/lemmas.hpp"
#include "rpe/projections.hpp"
#include "rpe/scenarios.hpp"

using namespace rpe;

namespace {

// sin(2 pi x1) cos(2 pi z) as coefficients
SpectralField sin_x_cos_z(int n) {
  SpectralField f(n);
  for (int s1 : {-1, 1})
    for (int s3 : {-1, 1}) f.at({s1, 0, s3}) = cplx(0.0, -0.25 * s1);
  return f;
}

// cos(2 pi x1) sin(2 pi z)
SpectralField cos_x_sin_z(int n) {
  SpectralField f(n);
  for (int s1 : {-1, 1})
    for (int s3 : {-1, 1}) f.at({s1, 0, s3}) = cplx(0.0, -0.25 * s3);
  return f;
}

VectorField rand_vec(int n, std::uint64_t seed, FieldShape shape = FieldShape::General) {
  std::mt19937_64 rng(seed);
  return random_vector(n, 3, rng, shape);
}

bool near(const VectorField& a, const VectorField& b, double tol) {
  return oracle::max_abs_diff(a, b) <= tol * std::max(1.0, oracle::max_abs(a));
}

}  // namespace

TEST_CASE("barotropic examples") {
  const int n = 16;
  const VectorField v = rand_vec(n, 1);
  const VectorField a = barotropic(v);
  CHECK(near(barotropic(a), a, 0.0));
  VectorField b(n);
  b.c1.at({1, 0, 1}) = 0.5;
  b.c1.at({-1, 0, -1}) = 0.5;
  CHECK(l2_norm(barotropic(b)) == 0.0);

  // a(x') + b(x') cos(2 pi z): vertical quadrature of the samples recovers a
  VectorField ab = a;
  ab.c1 += sin_x_cos_z(n);
  const auto samples = oracle::eval(ab.c1);
  oracle::Values avg(samples.size(), 0.0);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      cplx s = 0.0;
      for (int i3 = 0; i3 < n; ++i3) s += samples[(i1 * n + i2) * n + i3];
      for (int i3 = 0; i3 < n; ++i3) avg[(i1 * n + i2) * n + i3] = s / double(n);
    }
  const SpectralField ref = oracle::project(avg, n, n / 2 - 1);
  CHECK(l2_norm(barotropic(ab).c1 - ref) < 1e-13);
}

TEST_CASE("baroclinic examples") {
  const int n = 16;
  const VectorField v = rand_vec(n, 2);
  CHECK(l2_norm(baroclinic(barotropic(v))) == 0.0);
  VectorField b(n);
  b.c1 = sin_x_cos_z(n);
  CHECK(near(baroclinic(b), b, 0.0));
  CHECK(l2_norm(barotropic(baroclinic(v))) == 0.0);
}

TEST_CASE("leray2d examples") {
  const int n = 16;
  const VectorField v = random_barotropic(n, 3, 1.0, 5);
  CHECK(near(leray2d(v), v, 1e-15));

  std::mt19937_64 rng(4);
  const SpectralField psi = barotropic(random_scalar(n, 3, rng));
  const VectorField grad{derivative(psi, 1), derivative(psi, 2)};
  CHECK(oracle::max_abs(leray2d(grad)) < 1e-14 * oracle::max_abs(grad));

  VectorField phi(n);
  phi.c1.at({1, 1, 0}) = 1.0;
  const VectorField p = leray2d_unchecked(phi);
  CHECK(std::abs(p.c1.at({1, 1, 0}) - 0.5) < 1e-15);
  CHECK(std::abs(p.c2.at({1, 1, 0}) + 0.5) < 1e-15);

  const VectorField q = leray2d(barotropic(rand_vec(n, 9)));
  CHECK(l2_norm(horizontal_divergence(q)) < 1e-12 * l2_norm(q));
  CHECK(near(leray2d(q), q, 1e-15));

  VectorField mean(n);
  mean.c1.at({0, 0, 0}) = 1.0;
  CHECK_THROWS_AS(leray2d(mean), std::invalid_argument);
}

TEST_CASE("p_plus examples") {
  const int n = 16;
  CHECK(l2_norm(p_plus(barotropic(rand_vec(n, 3)))) == 0.0);

  VectorField a(n);
  a.c1 = sin_x_cos_z(n);
  const VectorField p = p_plus(a);
  CHECK(l2_norm(p.c1 - cplx(0.5) * a.c1) < 1e-16);
  CHECK(l2_norm(p.c2 - cplx(0.0, 0.5) * a.c1) < 1e-16);

  const VectorField v = rand_vec(n, 4);
  CHECK(near(barotropic(v) + p_plus(v) + p_minus(v), v, 1e-15));
  CHECK(near(p_plus(p_plus(v)), p_plus(v), 1e-15));
}

TEST_CASE("perp examples") {
  const int n = 8;
  VectorField one(n);
  one.c1.at({0, 0, 0}) = 1.0;
  const VectorField p = perp(one);
  CHECK(p.c1.at({0, 0, 0}) == cplx(0.0));
  CHECK(p.c2.at({0, 0, 0}) == cplx(1.0));
  const VectorField v = rand_vec(16, 6);
  CHECK(near(perp(perp(v)), -1.0 * v, 0.0));
  CHECK(l2_norm(perp(VectorField(n))) == 0.0);
}

TEST_CASE("vertical_integral_div examples") {
  const int n = 16;
  VectorField v(n);
  v.c1 = sin_x_cos_z(n);
  CHECK(l2_norm(vertical_integral_div(v) - cos_x_sin_z(n)) < 1e-15);

  VectorField flat(n);  // x'-independent
  flat.c1.at({0, 0, 1}) = 0.5;
  flat.c1.at({0, 0, -1}) = 0.5;
  CHECK(l2_norm(vertical_integral_div(flat)) == 0.0);

  const VectorField r = baroclinic(rand_vec(n, 7, FieldShape::ZeroVerticalMean));
  const auto w = vertical_integral_div(r);
  const auto samples = inverse_transform(w);
  const auto ref = oracle::eval_vertical_integral_div(r);
  double at_zero = 0.0, err = 0.0, scale = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) at_zero = std::max(at_zero, std::abs(samples[(i1 * n + i2) * n]));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    err = std::max(err, std::abs(samples[i] - ref[i]));
    scale = std::max(scale, std::abs(ref[i]));
  }
  CHECK(at_zero < 1e-13 * scale);
  CHECK(err < 1e-13 * scale);

  CHECK_THROWS_AS(vertical_integral_div(rand_vec(n, 8)), std::invalid_argument);
}

TEST_CASE("recover_w examples") {
  const int n = 16;
  CHECK(l2_norm(recover_w(VectorField(n))) == 0.0);
  VectorField v(n);
  v.c1 = sin_x_cos_z(n);
  CHECK(l2_norm(recover_w(v) + cos_x_sin_z(n)) < 1e-15);

  const VectorField r = enforce_z_parity(baroclinic(rand_vec(n, 10, FieldShape::ZeroVerticalMean)), Parity::Even);
  const SpectralField w = recover_w(r);
  const SpectralField res = derivative(w, 3) + horizontal_divergence(r);
  CHECK(l2_norm(res) <= 1e-12 * l2_norm(horizontal_divergence(r)));
  CHECK(l2_norm(enforce_z_parity(w, Parity::Odd) - w) <= 1e-15 * l2_norm(w));
}

TEST_CASE("projection invariants") {
  const int n = 16;
  const VectorField v = rand_vec(n, 12), g = rand_vec(n, 13);
  const double total = norm2(v);
  CHECK(std::abs(norm2(barotropic(v)) + norm2(baroclinic(v)) - total) <= 1e-14 * total);
  CHECK(l2_norm(p_plus(p_minus(v))) == 0.0);
  CHECK(l2_norm(barotropic(p_plus(v))) == 0.0);
  CHECK(l2_norm(p_plus(barotropic(v))) == 0.0);
  CHECK(std::abs(pairing(p_plus(v), g) - pairing(v, p_minus(g))) <= 1e-13 * l2_norm(v) * l2_norm(g));
  const VectorField b = barotropic(v);
  CHECK(near(leray2d(barotropic(b)), barotropic(leray2d(b)), 1e-15));
  CHECK(std::abs(2.0 * norm2(p_plus(v)) - norm2(baroclinic(v))) <= 1e-14 * total);
}
