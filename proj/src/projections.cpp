#include "rpe/projections.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rpe {

VectorField& VectorField::operator+=(const VectorField& o) {
  c1 += o.c1;
  c2 += o.c2;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  c1 -= o.c1;
  c2 -= o.c2;
  return *this;
}

VectorField& VectorField::operator*=(cplx a) {
  c1 *= a;
  c2 *= a;
  return *this;
}

VectorField& VectorField::axpy(cplx a, const VectorField& o) {
  c1.axpy(a, o.c1);
  c2.axpy(a, o.c2);
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(cplx a, VectorField f) { return f *= a; }

double norm2(const VectorField& v) { return norm2(v.c1) + norm2(v.c2); }
double l2_norm(const VectorField& v) { return std::sqrt(norm2(v)); }
cplx pairing(const VectorField& f, const VectorField& g) {
  return pairing(f.c1, g.c1) + pairing(f.c2, g.c2);
}
cplx inner(const VectorField& f, const VectorField& g) { return inner(f.c1, g.c1) + inner(f.c2, g.c2); }

double max_abs_coeff(const VectorField& v) {
  double m = 0.0;
  for (const auto* c : {&v.c1, &v.c2})
    for (const auto& x : c->coeffs()) m = std::max(m, std::abs(x));
  return m;
}

VectorField conj_field(const VectorField& v) { return {conj_field(v.c1), conj_field(v.c2)}; }
VectorField dealias(const VectorField& v) { return {dealias(v.c1), dealias(v.c2)}; }
VectorField enforce_z_parity(const VectorField& v, Parity p) {
  return {enforce_z_parity(v.c1, p), enforce_z_parity(v.c2, p)};
}
void enforce_hermitian(VectorField& v) {
  enforce_hermitian(v.c1);
  enforce_hermitian(v.c2);
}
VectorField derivative(const VectorField& v, int axis) {
  return {derivative(v.c1, axis), derivative(v.c2, axis)};
}

SpectralField horizontal_divergence(const VectorField& v) {
  SpectralField d(v.n());
  const int n = v.n();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const WaveVector k = d.wave(i);
    const double k1 = k.k1 == -n / 2 ? 0.0 : k.k1;
    const double k2 = k.k2 == -n / 2 ? 0.0 : k.k2;
    d[i] = cplx(0.0, kTwoPi) * (k1 * v.c1[i] + k2 * v.c2[i]);
  }
  return d;
}

SpectralField barotropic(const SpectralField& f) {
  SpectralField g(f.n());
  const std::size_t n = f.n();
  for (std::size_t base = 0; base < f.size(); base += n) g[base] = f[base];
  return g;
}

VectorField barotropic(const VectorField& v) { return {barotropic(v.c1), barotropic(v.c2)}; }
VectorField baroclinic(const VectorField& v) { return v - barotropic(v); }

VectorField leray2d_unchecked(const VectorField& phi) {
  VectorField out = phi;
  const int n = phi.n();
  for (std::size_t i = 0; i < out.c1.size(); ++i) {
    const WaveVector k = out.c1.wave(i);
    if (k.k1 == 0 && k.k2 == 0) {
      if (k.k3 == 0) {
        out.c1[i] = 0.0;
        out.c2[i] = 0.0;
      }
      continue;
    }
    // Nyquist wavenumbers are treated as zero, consistent with derivative().
    const double k1 = k.k1 == -n / 2 ? 0.0 : k.k1;
    const double k2 = k.k2 == -n / 2 ? 0.0 : k.k2;
    const double kk = k1 * k1 + k2 * k2;
    if (kk == 0.0) continue;
    const cplx dot = k1 * phi.c1[i] + k2 * phi.c2[i];
    out.c1[i] = phi.c1[i] - dot * (k1 / kk);
    out.c2[i] = phi.c2[i] - dot * (k2 / kk);
  }
  return out;
}

VectorField leray2d(const VectorField& phi) {
  const double mean = std::max(std::abs(phi.c1[0]), std::abs(phi.c2[0]));
  if (mean > 1e-12 * std::max(1.0, l2_norm(phi))) throw std::invalid_argument("leray2d: input has nonzero mean");
  return leray2d_unchecked(phi);
}

VectorField perp(const VectorField& v) { return {-v.c2, v.c1}; }

VectorField p_plus(const VectorField& v) {
  VectorField t = baroclinic(v);
  VectorField out = t;
  out.axpy(cplx(0.0, 1.0), perp(t));
  return 0.5 * out;
}

VectorField p_minus(const VectorField& v) {
  VectorField t = baroclinic(v);
  VectorField out = t;
  out.axpy(cplx(0.0, -1.0), perp(t));
  return 0.5 * out;
}

VectorField plus_eigenpart(const VectorField& u) {
  VectorField out = u;
  out.axpy(cplx(0.0, 1.0), perp(u));
  return 0.5 * out;
}

SpectralField vertical_integral_div(const VectorField& v) {
  const std::size_t n = v.n();
  double plane = 0.0;
  for (std::size_t base = 0; base < v.c1.size(); base += n)
    plane = std::max({plane, std::abs(v.c1[base]), std::abs(v.c2[base])});
  if (plane > 1e-12 * std::max(1.0, l2_norm(v)))
    throw std::invalid_argument("vertical_integral_div: input has a nonzero k3 = 0 plane");
  const SpectralField d = horizontal_divergence(v);
  SpectralField out(v.n());
  const int ni = v.n();
  for (std::size_t base = 0; base < d.size(); base += n) {
    cplx acc = 0.0;
    for (std::size_t i3 = 1; i3 < n; ++i3) {
      const int k3 = wavenumber(static_cast<int>(i3), ni);
      // Nyquist k3 is never retained in a dealiased field; skip it for safety.
      if (k3 == -ni / 2) continue;
      const cplx c = d[base + i3] / cplx(0.0, kTwoPi * k3);
      out[base + i3] = c;
      acc -= c;
    }
    out[base] = acc;
  }
  return out;
}

SpectralField recover_w(const VectorField& v) {
  return enforce_z_parity(-vertical_integral_div(v), Parity::Odd);
}

SpectralField apply_weight(const SpectralField& f, double r, double tau) {
  SpectralField g(f.n());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double k = f.wave(i).norm();
    const double w = (k == 0.0 ? (r == 0.0 ? 1.0 : 0.0) : std::pow(k, r)) * std::exp(tau * k);
    g[i] = w * f[i];
  }
  return g;
}

VectorField apply_weight(const VectorField& v, double r, double tau) {
  return {apply_weight(v.c1, r, tau), apply_weight(v.c2, r, tau)};
}

}  // namespace rpe
