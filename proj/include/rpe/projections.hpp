#pragma once

#include "rpe/spectral.hpp"

namespace rpe {

// Two-component horizontal field (v1, v2) on the 3-torus.
struct VectorField {
  SpectralField c1, c2;

  VectorField() = default;
  explicit VectorField(int n) : c1(n), c2(n) {}
  VectorField(SpectralField a, SpectralField b) : c1(std::move(a)), c2(std::move(b)) {}

  int n() const { return c1.n(); }
  SpectralField& operator[](int c) { return c == 0 ? c1 : c2; }
  const SpectralField& operator[](int c) const { return c == 0 ? c1 : c2; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(cplx a);
  VectorField& axpy(cplx a, const VectorField& o);
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(cplx a, VectorField f);

// Role names. The invariants are documented, not type-enforced:
//  barotropic: k3 = 0 plane only, divergence free, zero mean;
//  baroclinic: k3 = 0 plane zero, even in z;
//  complex velocity (u+, U+): k3 = 0 plane zero, no Hermitian constraint.
using HorizontalVelocity = VectorField;
using BarotropicField = VectorField;
using BaroclinicField = VectorField;
using ComplexVelocity = VectorField;

double norm2(const VectorField& v);
double l2_norm(const VectorField& v);
cplx pairing(const VectorField& f, const VectorField& g);
cplx inner(const VectorField& f, const VectorField& g);
double max_abs_coeff(const VectorField& v);

VectorField conj_field(const VectorField& v);
VectorField dealias(const VectorField& v);
VectorField enforce_z_parity(const VectorField& v, Parity parity);
void enforce_hermitian(VectorField& v);
VectorField derivative(const VectorField& v, int axis);
// 2*pi*i*(k1 f1 + k2 f2).
SpectralField horizontal_divergence(const VectorField& v);

VectorField barotropic(const VectorField& v);
VectorField baroclinic(const VectorField& v);
SpectralField barotropic(const SpectralField& f);
// Checked Leray projection; rejects a nonzero mean.
VectorField leray2d(const VectorField& phi);
// Same projection with the mean mode dropped instead of checked.
VectorField leray2d_unchecked(const VectorField& phi);
VectorField perp(const VectorField& v);
VectorField p_plus(const VectorField& v);
VectorField p_minus(const VectorField& v);
// Projection onto {u : u_perp = -i u}; the range of P+ on baroclinic fields.
VectorField plus_eigenpart(const VectorField& u);

// Integral from 0 to z of the horizontal divergence, for fields with empty
// k3 = 0 plane (up to tolerance).
SpectralField vertical_integral_div(const VectorField& v);
SpectralField recover_w(const VectorField& v);

// Multiply every mode by |k|^r e^{tau |k|} (|0|^0 taken as 1 when r = 0).
SpectralField apply_weight(const SpectralField& f, double r, double tau);
VectorField apply_weight(const VectorField& v, double r, double tau);

}  // namespace rpe
