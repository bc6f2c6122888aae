#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

using rpe::kTwoPi;
using rpe::WaveVector;

namespace {

cplx phase(double theta) { return {std::cos(theta), std::sin(theta)}; }

struct Mode {
  WaveVector k;
  cplx c;
};

std::vector<Mode> modes_of(const SpectralField& f) {
  std::vector<Mode> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != cplx(0.0)) out.push_back({f.wave(i), f[i]});
  return out;
}

// e^{2 pi i k j / n} for k, j in [0, n)
std::vector<cplx> exp_table(int n) {
  std::vector<cplx> t(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) t[k * n + j] = phase(kTwoPi * k * j / n);
  return t;
}

cplx e(const std::vector<cplx>& t, int n, int k, int j) { return t[((k % n + n) % n) * n + j]; }

std::size_t idx(int n, int i1, int i2, int i3) { return (static_cast<std::size_t>(i1) * n + i2) * n + i3; }

}  // namespace

cplx dft_coefficient(const std::vector<double>& samples, int n, const WaveVector& k) {
  cplx s = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3)
        s += samples[idx(n, i1, i2, i3)] * phase(-kTwoPi * (k.k1 * i1 + k.k2 * i2 + k.k3 * i3) / n);
  return s / (static_cast<double>(n) * n * n);
}

Values eval(const SpectralField& f, int axis) {
  const int n = f.n();
  const auto t = exp_table(n);
  Values out(f.size(), 0.0);
  for (const Mode& m : modes_of(f)) {
    cplx c = m.c;
    if (axis == 1) c *= cplx(0.0, kTwoPi * m.k.k1);
    if (axis == 2) c *= cplx(0.0, kTwoPi * m.k.k2);
    if (axis == 3) c *= cplx(0.0, kTwoPi * m.k.k3);
    if (c == cplx(0.0)) continue;
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) {
        const cplx a = c * e(t, n, m.k.k1, i1) * e(t, n, m.k.k2, i2);
        for (int i3 = 0; i3 < n; ++i3) out[idx(n, i1, i2, i3)] += a * e(t, n, m.k.k3, i3);
      }
  }
  return out;
}

Values eval_vertical_integral_div(const VectorField& v) {
  const int n = v.n();
  const auto t = exp_table(n);
  Values out(v.c1.size(), 0.0);
  for (std::size_t i = 0; i < v.c1.size(); ++i) {
    const WaveVector k = v.c1.wave(i);
    const cplx d = cplx(0.0, kTwoPi) * (double(k.k1) * v.c1[i] + double(k.k2) * v.c2[i]);
    if (d == cplx(0.0)) continue;
    if (k.k3 == 0) {
      if (std::abs(d) > 1e-14) throw std::invalid_argument("oracle: divergence with nonzero vertical mean");
      continue;
    }
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) {
        const cplx a = d * e(t, n, k.k1, i1) * e(t, n, k.k2, i2);
        for (int i3 = 0; i3 < n; ++i3) {
          // int_0^z e^{2 pi i k3 s} ds
          const cplx prim = (e(t, n, k.k3, i3) - 1.0) / cplx(0.0, kTwoPi * k.k3);
          out[idx(n, i1, i2, i3)] += a * prim;
        }
      }
  }
  return out;
}

SpectralField project(const Values& p, int n, int kmax) {
  const auto t = exp_table(n);
  SpectralField f(n);
  const int w = 2 * kmax + 1;
  // separable partial sums: over i3, then i2, then i1
  std::vector<cplx> s3(static_cast<std::size_t>(n) * n * w, 0.0);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int k3 = -kmax; k3 <= kmax; ++k3) {
        cplx s = 0.0;
        for (int i3 = 0; i3 < n; ++i3) s += p[idx(n, i1, i2, i3)] * std::conj(e(t, n, k3, i3));
        s3[(static_cast<std::size_t>(i1) * n + i2) * w + (k3 + kmax)] = s;
      }
  std::vector<cplx> s2(static_cast<std::size_t>(n) * w * w, 0.0);
  for (int i1 = 0; i1 < n; ++i1)
    for (int k2 = -kmax; k2 <= kmax; ++k2)
      for (int k3 = -kmax; k3 <= kmax; ++k3) {
        cplx s = 0.0;
        for (int i2 = 0; i2 < n; ++i2)
          s += s3[(static_cast<std::size_t>(i1) * n + i2) * w + (k3 + kmax)] * std::conj(e(t, n, k2, i2));
        s2[(static_cast<std::size_t>(i1) * w + (k2 + kmax)) * w + (k3 + kmax)] = s;
      }
  const double norm = 1.0 / (static_cast<double>(n) * n * n);
  for (int k1 = -kmax; k1 <= kmax; ++k1)
    for (int k2 = -kmax; k2 <= kmax; ++k2)
      for (int k3 = -kmax; k3 <= kmax; ++k3) {
        cplx s = 0.0;
        for (int i1 = 0; i1 < n; ++i1)
          s += s2[(static_cast<std::size_t>(i1) * w + (k2 + kmax)) * w + (k3 + kmax)] * std::conj(e(t, n, k1, i1));
        f.at({k1, k2, k3}) = s * norm;
      }
  return f;
}

Values mul(const Values& a, const Values& b) {
  Values out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

Values add(const Values& a, const Values& b, cplx cb) {
  Values out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + cb * b[i];
  return out;
}

VectorField vertical_mean(const VectorField& v) {
  VectorField out(v.n());
  for (std::size_t i = 0; i < v.c1.size(); ++i)
    if (v.c1.wave(i).k3 == 0) {
      out.c1[i] = v.c1[i];
      out.c2[i] = v.c2[i];
    }
  return out;
}

VectorField leray(const VectorField& v) {
  VectorField out(v.n());
  for (std::size_t i = 0; i < v.c1.size(); ++i) {
    const WaveVector k = v.c1.wave(i);
    const double kk = double(k.k1) * k.k1 + double(k.k2) * k.k2;
    if (kk == 0.0) continue;
    const cplx dot = double(k.k1) * v.c1[i] + double(k.k2) * v.c2[i];
    out.c1[i] = v.c1[i] - dot * double(k.k1) / kk;
    out.c2[i] = v.c2[i] - dot * double(k.k2) / kk;
  }
  return out;
}

VectorField perp(const VectorField& v) { return {-1.0 * v.c2, v.c1}; }

std::vector<Values> advect(const VectorField& f, const VectorField& g) {
  const Values f1 = eval(f.c1), f2 = eval(f.c2);
  std::vector<Values> out;
  for (const SpectralField* gc : {&g.c1, &g.c2})
    out.push_back(add(mul(f1, eval(*gc, 1)), mul(f2, eval(*gc, 2))));
  return out;
}

std::vector<Values> div_times(const VectorField& f, const VectorField& g) {
  const Values d = add(eval(f.c1, 1), eval(f.c2, 2));
  return {mul(d, eval(g.c1)), mul(d, eval(g.c2))};
}

namespace {

VectorField project_pair(const std::vector<Values>& p, int n, int kmax) {
  return {project(p[0], n, kmax), project(p[1], n, kmax)};
}

std::vector<Values> sum(const std::vector<Values>& a, const std::vector<Values>& b, cplx cb = 1.0) {
  return {add(a[0], b[0], cb), add(a[1], b[1], cb)};
}

// W d_z g with W = int_0^z div f
std::vector<Values> vertical_transport(const VectorField& f, const VectorField& g) {
  const Values w = eval_vertical_integral_div(f);
  return {mul(w, eval(g.c1, 3)), mul(w, eval(g.c2, 3))};
}

}  // namespace

rpe::PETendency rhs_pe(const VectorField& vbar, const VectorField& vtilde, double omega, int kmax) {
  const int n = vbar.n();
  const VectorField s1 = project_pair(advect(vbar, vbar), n, kmax);
  const VectorField s2 = project_pair(sum(advect(vtilde, vtilde), div_times(vtilde, vtilde)), n, kmax);
  rpe::PETendency t;
  t.vbar = -1.0 * oracle::leray(s1 + vertical_mean(s2));
  const auto bracket = sum(sum(advect(vtilde, vtilde), advect(vtilde, vbar)),
                           sum(advect(vbar, vtilde), vertical_transport(vtilde, vtilde), -1.0));
  VectorField b = project_pair(bracket, n, kmax) - vertical_mean(s2) + omega * oracle::perp(vtilde);
  t.vtilde = -1.0 * b;
  return t;
}

VectorField rhs_euler2d(const VectorField& V, int kmax) {
  return -1.0 * leray(project_pair(advect(V, V), V.n(), kmax));
}

VectorField rhs_limit_baroclinic(const VectorField& V, const VectorField& Vt, int kmax) {
  const Values omega = add(eval(V.c2, 1), eval(V.c1, 2), -1.0);
  const VectorField vp = oracle::perp(Vt);
  std::vector<Values> stretch{mul(eval(vp.c1), omega), mul(eval(vp.c2), omega)};
  return -1.0 * project_pair(sum(advect(V, Vt), stretch, 0.5), V.n(), kmax);
}

VectorField osc_self_group(const VectorField& u, int kmax) {
  const int n = u.n();
  const VectorField q = project_pair(sum(advect(u, u), div_times(u, u)), n, kmax);
  const VectorField g = project_pair(sum(advect(u, u), vertical_transport(u, u), -1.0), n, kmax);
  const VectorField b = g - vertical_mean(q);
  return -1.0 * (b - vertical_mean(b));
}

double weighted_seminorm(const VectorField& v, double s, double tau) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.c1.size(); ++i) {
    const double k = v.c1.wave(i).norm();
    if (k == 0.0) continue;
    acc += std::pow(k, 2 * s) * std::exp(2 * tau * k) * (std::norm(v.c1[i]) + std::norm(v.c2[i]));
  }
  return std::sqrt(acc);
}

double weighted_inner(const VectorField& a, const VectorField& b, double r, double tau) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.c1.size(); ++i) {
    const double k = a.c1.wave(i).norm();
    if (k == 0.0) continue;
    const double w = std::pow(k, 2 * r) * std::exp(2 * tau * k);
    acc += w * (a.c1[i] * std::conj(b.c1[i]) + a.c2[i] * std::conj(b.c2[i])).real();
  }
  return acc;
}

double max_abs_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.c1.size(); ++i)
    m = std::max({m, std::abs(a.c1[i] - b.c1[i]), std::abs(a.c2[i] - b.c2[i])});
  return m;
}

double max_abs(const VectorField& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.c1.size(); ++i) m = std::max({m, std::abs(a.c1[i]), std::abs(a.c2[i])});
  return m;
}

}  // namespace oracle
