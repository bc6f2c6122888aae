#pragma once

#include "rpe/projections.hpp"

namespace rpe {

struct NormSpec {
  double r = 0.0;
  double tau = 0.0;
  double s = 1.0;  // Gevrey order; only s = 1 is supported
};

struct RadiusEstimate {
  double tau_hat = 0.0;
  double fit_residual = 0.0;
  int shells_used = 0;
};

struct ShellRange {
  int lo = 0;
  int hi = 0;
};

double sobolev_norm(const SpectralField& f, double r);
double sobolev_norm(const VectorField& v, double r);
double analytic_norm(const SpectralField& f, const NormSpec& spec);
double analytic_norm(const VectorField& v, const NormSpec& spec);
// ||A^r e^{tau A} f||: the weight without the constant 1.
double analytic_seminorm(const SpectralField& f, const NormSpec& spec);
double analytic_seminorm(const VectorField& v, const NormSpec& spec);

// Default window [N/8, N/3] in shell index round(|k|).
ShellRange default_shell_range(int n);
RadiusEstimate estimate_radius(const SpectralField& f, ShellRange range);
RadiusEstimate estimate_radius(const VectorField& v, ShellRange range);

double predicted_tau_local(double tau0, double m0, double cr, double t);

enum class LifespanKind { Local, SmallBaroclinic, FastRotation };

struct LifespanParams {
  double tau0 = 1.0;
  double m0 = 0.0;       // local
  double cr = 1.0;
  double cm = 2.0;
  double epsilon = 0.1;  // small baroclinic
  double omega0 = 1e4;   // fast rotation
  double c_tau0 = 1.0;   // fast rotation prefactor
};

double predicted_lifespan(LifespanKind kind, const LifespanParams& p);
// (M + e)^{e^{C_r t}}.
double euler_growth_bound(double m, double cr, double t);

}  // namespace rpe
