#include "rpe/gevrey.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

namespace rpe {

namespace {

void check_spec(const NormSpec& spec) {
  if (spec.r < 0.0 || spec.tau < 0.0) throw std::invalid_argument("norm spec requires r >= 0 and tau >= 0");
  if (spec.s != 1.0) throw std::invalid_argument("only Gevrey order s = 1 is supported");
}

// log of |k|^{2r} e^{2 tau |k|}, -inf for the zero mode when r > 0.
double log_weight(double k, double r, double tau) {
  if (k == 0.0) return r == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return 2.0 * r * std::log(k) + 2.0 * tau * k;
}

// Sum of w_k |f_k|^2 with the weights given in log form, accumulated in a
// scaled way so large tau |k| does not overflow.
template <class Fields>
double weighted_sqrt(const Fields& comps, double r, double tau, bool include_one) {
  const SpectralField& f0 = *comps.front();
  double logmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f0.size(); ++i) {
    double a = 0.0;
    for (const auto* c : comps) a += std::norm((*c)[i]);
    if (a == 0.0) continue;
    const double lw = log_weight(f0.wave(i).norm(), r, tau);
    const double term = include_one ? std::max(lw, 0.0) : lw;
    logmax = std::max(logmax, term + std::log(a));
  }
  if (!std::isfinite(logmax)) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < f0.size(); ++i) {
    double a = 0.0;
    for (const auto* c : comps) a += std::norm((*c)[i]);
    if (a == 0.0) continue;
    const double lw = log_weight(f0.wave(i).norm(), r, tau);
    double w = std::exp(lw + std::log(a) - logmax);
    if (include_one) w += std::exp(std::log(a) - logmax);
    s += w;
  }
  return std::exp(0.5 * (std::log(s) + logmax));
}

}  // namespace

double sobolev_norm(const SpectralField& f, double r) { return analytic_norm(f, NormSpec{r, 0.0, 1.0}); }
double sobolev_norm(const VectorField& v, double r) { return analytic_norm(v, NormSpec{r, 0.0, 1.0}); }

double analytic_norm(const SpectralField& f, const NormSpec& spec) {
  check_spec(spec);
  const std::vector<const SpectralField*> c{&f};
  return weighted_sqrt(c, spec.r, spec.tau, true);
}

double analytic_norm(const VectorField& v, const NormSpec& spec) {
  check_spec(spec);
  const std::vector<const SpectralField*> c{&v.c1, &v.c2};
  return weighted_sqrt(c, spec.r, spec.tau, true);
}

double analytic_seminorm(const SpectralField& f, const NormSpec& spec) {
  check_spec(spec);
  const std::vector<const SpectralField*> c{&f};
  return weighted_sqrt(c, spec.r, spec.tau, false);
}

double analytic_seminorm(const VectorField& v, const NormSpec& spec) {
  check_spec(spec);
  const std::vector<const SpectralField*> c{&v.c1, &v.c2};
  return weighted_sqrt(c, spec.r, spec.tau, false);
}

ShellRange default_shell_range(int n) { return {n / 8, n / 3}; }

namespace {

RadiusEstimate fit_shells(const std::vector<const SpectralField*>& comps, ShellRange range) {
  const SpectralField& f0 = *comps.front();
  // shell index -> (max amplitude, |k| of the maximizing mode)
  std::map<int, std::pair<double, double>> shells;
  for (std::size_t i = 0; i < f0.size(); ++i) {
    const double k = f0.wave(i).norm();
    const int s = static_cast<int>(std::lround(k));
    if (s < range.lo || s > range.hi) continue;
    double a = 0.0;
    for (const auto* c : comps) a = std::max(a, std::abs((*c)[i]));
    auto& e = shells[s];
    if (a > e.first || (a == e.first && k < e.second)) e = {a, k};
  }
  std::vector<double> xs, ys;
  for (const auto& [s, e] : shells) {
    if (e.first <= 0.0) continue;
    xs.push_back(e.second);
    ys.push_back(-std::log(e.first));
  }
  if (xs.size() < 3) throw std::invalid_argument("estimate_radius: fewer than 3 nonempty shells in range");
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double icpt = my - slope * mx;
  double res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = ys[i] - (icpt + slope * xs[i]);
    res += d * d;
  }
  return {std::max(0.0, slope), std::sqrt(res / m), static_cast<int>(xs.size())};
}

}  // namespace

RadiusEstimate estimate_radius(const SpectralField& f, ShellRange range) { return fit_shells({&f}, range); }

RadiusEstimate estimate_radius(const VectorField& v, ShellRange range) { return fit_shells({&v.c1, &v.c2}, range); }

double predicted_tau_local(double tau0, double m0, double cr, double t) {
  if (cr <= 0.0) throw std::invalid_argument("C_r must be positive");
  return tau0 - 2.0 * t * cr * (1.0 + m0);
}

namespace {

double bisect_root(const std::function<double(double)>& g, double lo, double hi) {
  if (g(lo) > 0.0) throw std::domain_error("no root in search bracket");
  int expand = 0;
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++expand > 200) throw std::domain_error("no root in search bracket");
  }
  boost::math::tools::eps_tolerance<double> tol(50);
  boost::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::bisect(g, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

}  // namespace

double predicted_lifespan(LifespanKind kind, const LifespanParams& p) {
  switch (kind) {
    case LifespanKind::Local:
      if (p.cr <= 0.0) throw std::invalid_argument("C_r must be positive");
      return p.tau0 / (1.0 + 2.0 * p.cr * (1.0 + p.m0));
    case LifespanKind::SmallBaroclinic: {
      if (p.epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
      const double target = p.tau0 / (2.0 * p.epsilon);
      auto integrand = [&](double s) { return std::exp(std::pow(p.cm, std::exp(p.cr * s))); };
      auto g = [&](double t) {
        if (t <= 0.0) return -target;
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, t, 15, 1e-13) -
               target;
      };
      return bisect_root(g, 0.0, 1.0);
    }
    case LifespanKind::FastRotation: {
      // C e^{Ktilde(T)} = |Omega0| with Ktilde(t) = exp(C_M^{exp(C_r t)}); solved in log-log form.
      const double ratio = std::abs(p.omega0) / p.c_tau0;
      if (ratio <= 1.0 || std::log(ratio) <= 1.0) throw std::domain_error("no root in search bracket");
      const double rhs = std::log(std::log(ratio));
      auto g = [&](double t) { return std::pow(p.cm, std::exp(p.cr * t)) - rhs; };
      return bisect_root(g, 0.0, 1.0);
    }
  }
  throw std::invalid_argument("unknown lifespan kind");
}

double euler_growth_bound(double m, double cr, double t) { return std::pow(m + std::exp(1.0), std::exp(cr * t)); }

}  // namespace rpe
