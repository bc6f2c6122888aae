#include "rpe/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace rpe {

double WaveVector::norm() const {
  return std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 +
                   static_cast<double>(k3) * k3);
}

int WaveVector::max_abs() const { return std::max({std::abs(k1), std::abs(k2), std::abs(k3)}); }

SpectralField::SpectralField(int n) : n_(n) {
  if (n <= 0 || n % 2 != 0) throw std::invalid_argument("grid size must be a positive even integer");
  grid_ = grid_for(n);
  c_.assign(static_cast<std::size_t>(n) * n * n, cplx(0.0, 0.0));
}

const SpectralField::Grid* SpectralField::grid_for(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Grid>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& g = cache[n];
  if (!g) {
    g = std::make_unique<Grid>();
    const std::size_t m = n, len = m * m * m;
    g->waves.resize(len);
    g->neg.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t i3 = i % m, i2 = (i / m) % m, i1 = i / (m * m);
      g->waves[i] = {wavenumber(static_cast<int>(i1), n), wavenumber(static_cast<int>(i2), n),
                     wavenumber(static_cast<int>(i3), n)};
      g->neg[i] = (((m - i1) % m) * m + (m - i2) % m) * m + (m - i3) % m;
    }
  }
  return g.get();
}

std::size_t SpectralField::index(const WaveVector& k) const {
  return (static_cast<std::size_t>(fft_index(k.k1, n_)) * n_ + fft_index(k.k2, n_)) * n_ +
         fft_index(k.k3, n_);
}

cplx& SpectralField::at(const WaveVector& k) { return c_[index(k)]; }
const cplx& SpectralField::at(const WaveVector& k) const { return c_[index(k)]; }

static void check_same(const SpectralField& a, const SpectralField& b) {
  if (a.n() != b.n()) throw std::invalid_argument("grid size mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(cplx a) {
  for (auto& v : c_) v *= a;
  return *this;
}

SpectralField& SpectralField::axpy(cplx a, const SpectralField& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += a * o.c_[i];
  return *this;
}

void SpectralField::set_zero() { std::fill(c_.begin(), c_.end(), cplx(0.0, 0.0)); }

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(cplx a, SpectralField f) { return f *= a; }
SpectralField operator-(SpectralField f) { return f *= -1.0; }

namespace {

class FftPlans {
 public:
  explicit FftPlans(int n) : n_(n) {
    const std::size_t len = static_cast<std::size_t>(n) * n * n;
    auto* a = fftw_alloc_complex(len);
    auto* b = fftw_alloc_complex(len);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_3d(n, n, n, a, b, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_3d(n, n, n, a, b, FFTW_BACKWARD, flags);
    fftw_free(a);
    fftw_free(b);
    if (!fwd_ || !bwd_) throw std::runtime_error("FFTW planning failed");
  }
  ~FftPlans() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(const cplx* in, cplx* out) const {
    fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }
  void backward(const cplx* in, cplx* out) const {
    fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }

 private:
  int n_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

const FftPlans& plans_for(int n) {
  // Planner calls are not thread safe; execution with new arrays is.
  static std::mutex mu;
  static std::map<int, std::unique_ptr<FftPlans>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<FftPlans>(n)).first;
  return *it->second;
}

}  // namespace

PhysicalField to_physical(const SpectralField& f) {
  PhysicalField out(f.size());
  plans_for(f.n()).backward(f.coeffs().data(), out.data());
  return out;
}

SpectralField from_physical(const PhysicalField& p, int n) {
  SpectralField f(n);
  if (p.size() != f.size()) throw std::invalid_argument("sample count does not match N^3");
  plans_for(n).forward(p.data(), f.coeffs().data());
  const double scale = 1.0 / static_cast<double>(f.size());
  for (auto& v : f.coeffs()) v *= scale;
  return f;
}

SpectralField forward_transform(std::span<const double> samples, int n) {
  if (n <= 0 || n % 2 != 0) throw std::invalid_argument("grid size must be a positive even integer");
  const std::size_t len = static_cast<std::size_t>(n) * n * n;
  if (samples.size() != len) throw std::invalid_argument("sample count does not match N^3");
  PhysicalField p(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (!std::isfinite(samples[i])) throw std::invalid_argument("non-finite sample");
    p[i] = samples[i];
  }
  SpectralField f = from_physical(p, n);
  enforce_hermitian(f);
  return f;
}

std::vector<double> inverse_transform(const SpectralField& f) {
  const double scale = std::max(1.0, std::sqrt(norm2(f)));
  if (hermitian_defect(f) > 1e-10 * scale)
    throw std::invalid_argument("coefficients are not Hermitian symmetric");
  const PhysicalField p = to_physical(f);
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i].real();
  return out;
}

SpectralField derivative(const SpectralField& f, int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("axis must be 1, 2 or 3");
  SpectralField d(f.n());
  const int n = f.n();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const WaveVector k = f.wave(i);
    const int ka = axis == 1 ? k.k1 : (axis == 2 ? k.k2 : k.k3);
    // The unpaired Nyquist wavenumber has no real derivative; drop it.
    if (ka == -n / 2) continue;
    d[i] = f[i] * cplx(0.0, kTwoPi * ka);
  }
  return d;
}

bool retained(const WaveVector& k, int n) { return 3 * k.max_abs() <= n; }

void dealias_inplace(SpectralField& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!retained(f.wave(i), f.n())) f[i] = 0.0;
}

SpectralField dealias(const SpectralField& f) {
  SpectralField g = f;
  dealias_inplace(g);
  return g;
}

SpectralField enforce_z_parity(const SpectralField& f, Parity parity) {
  SpectralField g(f.n());
  const std::size_t n = f.n();
  for (std::size_t base = 0; base < f.size(); base += n) {
    for (std::size_t i3 = 0; i3 < n; ++i3) {
      const std::size_t j3 = (n - i3) % n;
      const cplx a = f[base + i3], b = f[base + j3];
      g[base + i3] = parity == Parity::Even ? 0.5 * (a + b) : 0.5 * (a - b);
    }
    if (parity == Parity::Odd) {
      g[base] = 0.0;
      g[base + n / 2] = 0.0;
    }
  }
  return g;
}

void enforce_hermitian(SpectralField& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::size_t j = f.neg_index(i);
    if (j < i) continue;
    if (j == i) {
      f[i] = f[i].real();
    } else {
      const cplx avg = 0.5 * (f[i] + std::conj(f[j]));
      f[i] = avg;
      f[j] = std::conj(avg);
    }
  }
}

double hermitian_defect(const SpectralField& f) {
  double d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    d = std::max(d, std::abs(f[i] - std::conj(f[f.neg_index(i)])));
  return d;
}

SpectralField conj_field(const SpectralField& f) {
  SpectralField g(f.n());
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = std::conj(f[f.neg_index(i)]);
  return g;
}

double norm2(const SpectralField& f) {
  double s = 0.0;
  for (const auto& v : f.coeffs()) s += std::norm(v);
  return s;
}

double l2_norm(const SpectralField& f) { return std::sqrt(norm2(f)); }

cplx pairing(const SpectralField& f, const SpectralField& g) {
  check_same(f, g);
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[g.neg_index(i)];
  return s;
}

cplx inner(const SpectralField& f, const SpectralField& g) {
  check_same(f, g);
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
  return s;
}

namespace {

constexpr char kMagic[8] = {'R', 'P', 'E', 'S', 'N', 'A', 'P', '1'};

template <class T>
void put_le(std::ofstream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get_le(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated snapshot");
  return v;
}

// Lexicographic WaveVector order: k1, then k2, then k3, each from -N/2 up.
template <class Fn>
void for_each_lex(int n, Fn&& fn) {
  for (int k1 = -n / 2; k1 < n / 2; ++k1)
    for (int k2 = -n / 2; k2 < n / 2; ++k2)
      for (int k3 = -n / 2; k3 < n / 2; ++k3) fn(WaveVector{k1, k2, k3});
}

}  // namespace

void write_snapshot(const std::string& path, const std::vector<SpectralField>& comps) {
  if (comps.empty()) throw std::invalid_argument("snapshot needs at least one component");
  const int n = comps.front().n();
  for (const auto& c : comps) check_same(c, comps.front());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  os.write(kMagic, sizeof(kMagic));
  put_le<std::int32_t>(os, n);
  put_le<std::int32_t>(os, static_cast<std::int32_t>(comps.size()));
  for (const auto& c : comps)
    for_each_lex(n, [&](const WaveVector& k) {
      put_le<double>(os, c.at(k).real());
      put_le<double>(os, c.at(k).imag());
    });
  if (!os) throw std::runtime_error("write failed for " + path);
}

std::vector<SpectralField> read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("bad snapshot magic in " + path);
  const int n = get_le<std::int32_t>(is);
  const int count = get_le<std::int32_t>(is);
  if (n <= 0 || n % 2 != 0 || count <= 0) throw std::runtime_error("bad snapshot header in " + path);
  std::vector<SpectralField> comps;
  for (int c = 0; c < count; ++c) {
    SpectralField f(n);
    for_each_lex(n, [&](const WaveVector& k) {
      const double re = get_le<double>(is);
      const double im = get_le<double>(is);
      f.at(k) = cplx(re, im);
    });
    comps.push_back(std::move(f));
  }
  return comps;
}

}  // namespace rpe
