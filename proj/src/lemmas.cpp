#include "rpe/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rpe/gevrey.hpp"

namespace rpe {

double IdentityReport::worst() const {
  double w = 0.0;
  for (const auto& [k, v] : max_residual) w = std::max(w, v);
  return w;
}

std::string lemma_name(LemmaKind k) {
  switch (k) {
    case LemmaKind::A1: return "A1";
    case LemmaKind::A2: return "A2";
    case LemmaKind::A3: return "A3";
    case LemmaKind::A4: return "A4";
    case LemmaKind::A5: return "A5";
    case LemmaKind::A6: return "A6";
    case LemmaKind::A7: return "A7";
    case LemmaKind::Planar: return "planar";
  }
  return "?";
}

std::vector<LemmaKind> all_lemma_kinds() {
  return {LemmaKind::A1, LemmaKind::A2, LemmaKind::A3, LemmaKind::A4,
          LemmaKind::A5, LemmaKind::A6, LemmaKind::A7, LemmaKind::Planar};
}

std::uint64_t sample_seed(const EnsembleSpec& e, int i) {
  return e.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(i) + 1;
}

SpectralField random_scalar(int n, int cap, std::mt19937_64& rng, FieldShape shape) {
  if (2 * cap >= n / 2) throw std::invalid_argument("mode cap too large for unaliased products on this grid");
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField f(n);
  const int cap3 = shape == FieldShape::Planar ? 0 : cap;
  for (int k1 = -cap; k1 <= cap; ++k1)
    for (int k2 = -cap; k2 <= cap; ++k2)
      for (int k3 = -cap3; k3 <= cap3; ++k3) {
        const double re = normal(rng), im = normal(rng);
        f.at({k1, k2, k3}) = cplx(re, im) / std::sqrt(2.0);
      }
  enforce_hermitian(f);
  f[0] = 0.0;
  if (shape == FieldShape::ZeroVerticalMean) f -= barotropic(f);
  return f;
}

VectorField random_vector(int n, int cap, std::mt19937_64& rng, FieldShape shape) {
  SpectralField a = random_scalar(n, cap, rng, shape);
  SpectralField b = random_scalar(n, cap, rng, shape);
  return {std::move(a), std::move(b)};
}

SpectralField product(const SpectralField& a, const SpectralField& b) {
  const PhysicalField pa = to_physical(a), pb = to_physical(b);
  PhysicalField p(pa.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = pa[i] * pb[i];
  return from_physical(p, a.n());
}

VectorField advect(const VectorField& f, const VectorField& g) {
  VectorField out(f.n());
  for (int c = 0; c < 2; ++c)
    out[c] = product(f.c1, derivative(g[c], 1)) + product(f.c2, derivative(g[c], 2));
  return out;
}

VectorField div_times(const VectorField& f, const VectorField& g) {
  const SpectralField d = horizontal_divergence(f);
  return {product(d, g.c1), product(d, g.c2)};
}

VectorField vertical_transport(const VectorField& f, const VectorField& g) {
  const SpectralField w = vertical_integral_div(f);
  return {product(w, derivative(g.c1, 3)), product(w, derivative(g.c2, 3))};
}

double RatioParts::ratio() const {
  if (lhs == 0.0) return 0.0;
  if (rhs == 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

namespace {

double real_inner(const VectorField& a, const VectorField& b) { return inner(a, b).real(); }

double mean_abs(const VectorField& v) { return std::sqrt(std::norm(v.c1[0]) + std::norm(v.c2[0])); }

double max_abs_physical(const SpectralField& f) {
  double m = 0.0;
  for (const auto& x : to_physical(f)) m = std::max(m, std::abs(x));
  return m;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool has_zero_plane(const VectorField& v) {
  return l2_norm(barotropic(v)) <= 1e-13 * std::max(1.0, l2_norm(v));
}

}  // namespace

RatioParts banach_ratio(const SpectralField& f, const SpectralField& g, double r, double tau) {
  require(r > 1.5, "Banach algebra check requires r > 3/2");
  const NormSpec s{r, tau, 1.0};
  return {analytic_norm(product(f, g), s), analytic_norm(f, s) * analytic_norm(g, s)};
}

RatioParts estimate_ratio(LemmaKind kind, const VectorField& f, const VectorField& g, const VectorField& h, double r,
                          double tau) {
  auto Ns = [&](const VectorField& v, double s) { return analytic_seminorm(v, NormSpec{s, tau, 1.0}); };
  auto Ps = [&](const VectorField& v, double s) { return analytic_seminorm(v, NormSpec{s, 0.0, 1.0}); };
  auto W = [&](const VectorField& v) { return apply_weight(v, r, tau); };
  auto Wf = [&](const SpectralField& v) { return apply_weight(v, r, tau); };
  const VectorField wh = W(h);
  const double half = r + 0.5;
  RatioParts p;
  switch (kind) {
    case LemmaKind::A1:
      require(r > 2.0, "A1 requires r > 2");
      p.lhs = std::abs(real_inner(W(advect(f, g)), wh));
      p.rhs = (Ns(f, r) + mean_abs(f)) * Ns(g, half) * Ns(h, half) + Ns(f, half) * Ns(g, r) * Ns(h, r);
      break;
    case LemmaKind::A2:
      require(r > 2.0, "A2 requires r > 2");
      p.lhs = std::abs(real_inner(W(div_times(f, g)), wh));
      p.rhs = (Ns(g, r) + mean_abs(g)) * Ns(f, half) * Ns(h, half) + Ns(g, half) * Ns(f, r) * Ns(h, r);
      break;
    case LemmaKind::A3:
      require(r > 2.0, "A3 requires r > 2");
      require(has_zero_plane(f), "A3 requires f with zero vertical mean");
      p.lhs = std::abs(real_inner(W(vertical_transport(f, g)), wh));
      p.rhs = Ns(f, r) * Ns(g, half) * Ns(h, half) + Ns(g, r) * Ns(f, half) * Ns(h, half) +
              Ns(h, r) * Ns(f, half) * Ns(g, half);
      break;
    case LemmaKind::A4:
      require(r > 2.5, "A4 requires r > 5/2");
      p.lhs = std::abs(real_inner(W(advect(f, g)), wh) - real_inner(advect(f, W(g)), wh));
      p.rhs = Ps(f, r) * Ps(g, r) * Ps(h, r) + tau * Ns(f, half) * Ns(g, half) * Ns(h, half);
      break;
    case LemmaKind::A5:
      require(r > 2.5, "A5 requires r > 5/2");
      p.lhs = std::abs(real_inner(W(div_times(f, g)), wh) - real_inner(div_times(W(f), g), wh));
      p.rhs = Ps(f, r) * Ps(g, r) * Ps(h, r) + tau * Ns(f, half) * Ns(g, half) * Ns(h, half);
      break;
    case LemmaKind::A6: {
      require(r > 2.5, "A6 requires r > 5/2");
      require(has_zero_plane(f), "A6 requires f with zero vertical mean");
      const SpectralField w = vertical_integral_div(f);
      const VectorField wgz = W(derivative(g, 3));
      const VectorField second{product(w, wgz.c1), product(w, wgz.c2)};
      p.lhs = std::abs(real_inner(W(vertical_transport(f, g)), wh) - real_inner(second, wh));
      p.rhs = Ps(f, r + 1.0) * Ps(g, r) * Ps(h, r) + tau * Ns(f, r + 1.5) * Ns(g, half) * Ns(h, half);
      break;
    }
    case LemmaKind::A7: {
      require(r > 2.5, "A7 requires r > 5/2");
      require(has_zero_plane(f), "A7 requires f with zero vertical mean");
      const SpectralField ww = Wf(vertical_integral_div(f));
      const VectorField gz = derivative(g, 3);
      const VectorField second{product(gz.c1, ww), product(gz.c2, ww)};
      p.lhs = std::abs(real_inner(W(vertical_transport(f, g)), wh) - real_inner(second, wh));
      p.rhs = Ps(g, r + 1.0) * Ps(f, r) * Ps(h, r) + tau * Ns(g, r + 1.5) * Ns(f, half) * Ns(h, half);
      break;
    }
    case LemmaKind::Planar: {
      // Two-dimensional statement; h is unused, the pairing is with g itself.
      require(r > 2.5, "planar estimate requires r > 5/2");
      const VectorField wg = W(g);
      p.lhs = std::abs(real_inner(W(advect(f, g)), wg));
      const double divinf = max_abs_physical(horizontal_divergence(f));
      const double fpart = r > 3.0 ? Ns(f, r) : Ns(f, half);
      p.rhs = Ps(f, r) * Ps(g, r) * Ps(g, r) + divinf * Ns(g, r) * Ns(g, r) + tau * fpart * Ns(g, half) * Ns(g, half);
      break;
    }
  }
  return p;
}

namespace {

double rel(double diff, double scale) { return scale > 0.0 ? diff / scale : diff; }

void record(IdentityReport& rep, const std::string& name, double v) {
  auto& slot = rep.max_residual[name];
  slot = std::max(slot, v);
}

}  // namespace

IdentityReport check_identities(const EnsembleSpec& e, double tau) {
  IdentityReport rep;
  rep.samples = e.samples;
  const NormSpec an{2.0, tau, 1.0};
  for (int i = 0; i < e.samples; ++i) {
    std::mt19937_64 rng(sample_seed(e, i));
    const VectorField v = random_vector(e.n, e.mode_cap, rng);
    const VectorField w = random_vector(e.n, e.mode_cap, rng);
    const double nv = l2_norm(v), nw = l2_norm(w);
    const VectorField p0 = barotropic(v), pp = p_plus(v), pm = p_minus(v), vt = baroclinic(v);

    record(rep, "decomposition", rel(l2_norm(p0 + pp + pm - v), nv));
    record(rep, "P+P+=P+", rel(l2_norm(p_plus(pp) - pp), l2_norm(pp)));
    record(rep, "P-P-=P-", rel(l2_norm(p_minus(pm) - pm), l2_norm(pm)));
    record(rep, "P0P0=P0", rel(l2_norm(barotropic(p0) - p0), l2_norm(p0)));
    record(rep, "P+P-=0", rel(l2_norm(p_plus(pm)), nv));
    record(rep, "P-P+=0", rel(l2_norm(p_minus(pp)), nv));
    record(rep, "P0P+=0", rel(l2_norm(barotropic(pp)), nv));
    record(rep, "P+P0=0", rel(l2_norm(p_plus(p0)), nv));

    record(rep, "adjoint P+/P-", rel(std::abs(pairing(pp, w) - pairing(v, p_minus(w))), nv * nw));
    record(rep, "adjoint P-/P+", rel(std::abs(pairing(pm, w) - pairing(v, p_plus(w))), nv * nw));
    record(rep, "adjoint P0", rel(std::abs(pairing(p0, w) - pairing(v, barotropic(w))), nv * nw));

    record(rep, "PhP0=P0Ph", rel(l2_norm(leray2d(p0) - barotropic(leray2d(v))), nv));
    for (int axis = 1; axis <= 3; ++axis) {
      const VectorField dv = derivative(v, axis);
      const double sc = std::max(l2_norm(dv), nv);
      record(rep, "P+ commutes with derivative", rel(l2_norm(p_plus(dv) - derivative(pp, axis)), sc));
      record(rep, "P0 commutes with derivative", rel(l2_norm(barotropic(dv) - derivative(p0, axis)), sc));
      record(rep, "Ph commutes with derivative", rel(l2_norm(leray2d(dv) - derivative(leray2d(v), axis)), sc));
    }
    const VectorField av = apply_weight(v, 2.0, tau);
    const double sa = l2_norm(av);
    record(rep, "P+ commutes with A^r e^{tA}", rel(l2_norm(p_plus(av) - apply_weight(pp, 2.0, tau)), sa));
    record(rep, "P0 commutes with A^r e^{tA}", rel(l2_norm(barotropic(av) - apply_weight(p0, 2.0, tau)), sa));
    record(rep, "Ph commutes with A^r e^{tA}",
           rel(l2_norm(leray2d(av) - apply_weight(leray2d(v), 2.0, tau)), sa));

    const double e2 = norm2(v);
    record(rep, "L2 split", rel(std::abs(e2 - norm2(p0) - norm2(vt)), e2));
    const double a2 = std::pow(analytic_norm(v, an), 2);
    record(rep, "analytic split",
           rel(std::abs(a2 - std::pow(analytic_norm(p0, an), 2) - std::pow(analytic_norm(vt, an), 2)), a2));
    const double a2s = std::pow(analytic_seminorm(v, an), 2) + e2;
    record(rep, "analytic = seminorm + L2", rel(std::abs(a2 - a2s), a2));
    const double t2 = norm2(vt);
    record(rep, "|u+|^2 = |vt|^2/2", rel(std::abs(norm2(pp) - 0.5 * t2), t2));
    record(rep, "|u-|^2 = |vt|^2/2", rel(std::abs(norm2(pm) - 0.5 * t2), t2));
    const double at2 = std::pow(analytic_norm(vt, an), 2);
    record(rep, "analytic |u+|^2 = |vt|^2/2",
           rel(std::abs(std::pow(analytic_norm(pp, an), 2) - 0.5 * at2), at2));
  }
  return rep;
}

EstimateReport check_banach_algebra(const EnsembleSpec& e, double r, double tau) {
  EstimateReport rep{"banach", 0.0, e.samples, -1, 0, r, tau, e.n};
  for (int i = 0; i < e.samples; ++i) {
    const std::uint64_t s = sample_seed(e, i);
    std::mt19937_64 rng(s);
    const SpectralField f = random_scalar(e.n, e.mode_cap, rng);
    const SpectralField g = random_scalar(e.n, e.mode_cap, rng);
    const double q = banach_ratio(f, g, r, tau).ratio();
    if (q > rep.max_ratio || rep.worst_sample < 0) {
      rep.max_ratio = q;
      rep.worst_sample = i;
      rep.worst_seed = s;
    }
  }
  return rep;
}

EstimateReport check_nonlinear_estimate(LemmaKind kind, const EnsembleSpec& e, double r, double tau) {
  EstimateReport rep{lemma_name(kind), 0.0, e.samples, -1, 0, r, tau, e.n};
  const bool vertical = kind == LemmaKind::A3 || kind == LemmaKind::A6 || kind == LemmaKind::A7;
  const FieldShape fshape =
      kind == LemmaKind::Planar ? FieldShape::Planar : (vertical ? FieldShape::ZeroVerticalMean : FieldShape::General);
  const FieldShape other = kind == LemmaKind::Planar ? FieldShape::Planar : FieldShape::General;
  for (int i = 0; i < e.samples; ++i) {
    const std::uint64_t s = sample_seed(e, i);
    std::mt19937_64 rng(s);
    const VectorField f = random_vector(e.n, e.mode_cap, rng, fshape);
    const VectorField g = random_vector(e.n, e.mode_cap, rng, other);
    const VectorField h = random_vector(e.n, e.mode_cap, rng, other);
    const double q = estimate_ratio(kind, f, g, h, r, tau).ratio();
    if (q > rep.max_ratio || rep.worst_sample < 0) {
      rep.max_ratio = q;
      rep.worst_sample = i;
      rep.worst_seed = s;
    }
  }
  return rep;
}

nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json j;
  j["samples"] = r.samples;
  j["max_residual"] = r.max_residual;
  j["worst"] = r.worst();
  return j;
}

nlohmann::json to_json(const EstimateReport& r) {
  return {{"lemma", r.lemma},   {"max_ratio", r.max_ratio}, {"samples", r.samples},
          {"worst_sample", r.worst_sample}, {"worst_seed", r.worst_seed}, {"r", r.r},
          {"tau", r.tau},       {"N", r.n},
          {"note", r.lemma == "A1" || r.lemma == "A2" ? "mean-zero ensemble; the |f_0| branch is not exercised" : ""}};
}

}  // namespace rpe
