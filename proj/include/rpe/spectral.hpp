#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rpe {

using cplx = std::complex<double>;
using PhysicalField = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct WaveVector {
  int k1 = 0, k2 = 0, k3 = 0;
  auto operator<=>(const WaveVector&) const = default;
  double norm() const;
  int max_abs() const;
};

// Signed wavenumber of FFT index i on an n-point axis. Index n/2 maps to -n/2.
inline int wavenumber(int i, int n) { return i < n / 2 ? i : i - n; }
// FFT index of signed wavenumber k (taken mod n).
inline int fft_index(int k, int n) { return ((k % n) + n) % n; }

// Fourier coefficients on an N^3 grid, stored in FFT index order
// (i1*N + i2)*N + i3. No symmetry is imposed by the type itself; real fields
// carry Hermitian symmetry, complex ones (u+) do not.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(int n);

  int n() const { return n_; }
  std::size_t size() const { return c_.size(); }
  bool empty() const { return c_.empty(); }

  cplx& operator[](std::size_t i) { return c_[i]; }
  const cplx& operator[](std::size_t i) const { return c_[i]; }
  cplx& at(const WaveVector& k);
  const cplx& at(const WaveVector& k) const;
  std::size_t index(const WaveVector& k) const;
  WaveVector wave(std::size_t i) const { return grid_->waves[i]; }
  // Index of the mode -k.
  std::size_t neg_index(std::size_t i) const { return grid_->neg[i]; }

  std::span<cplx> coeffs() { return c_; }
  std::span<const cplx> coeffs() const { return c_; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(cplx a);
  SpectralField& axpy(cplx a, const SpectralField& o);

  void set_zero();

 private:
  struct Grid {
    std::vector<WaveVector> waves;
    std::vector<std::size_t> neg;
  };
  static const Grid* grid_for(int n);

  int n_ = 0;
  const Grid* grid_ = nullptr;  // shared per-N index tables
  std::vector<cplx> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(cplx a, SpectralField f);
SpectralField operator-(SpectralField f);

enum class Parity { Even, Odd };

// Transforms. forward divides by N^3 so the k=0 coefficient is the mean.
SpectralField forward_transform(std::span<const double> samples, int n);
std::vector<double> inverse_transform(const SpectralField& f);
// Complex variants used for pseudo-spectral products.
PhysicalField to_physical(const SpectralField& f);
SpectralField from_physical(const PhysicalField& p, int n);

SpectralField derivative(const SpectralField& f, int axis);
SpectralField dealias(const SpectralField& f);
void dealias_inplace(SpectralField& f);
bool retained(const WaveVector& k, int n);
SpectralField enforce_z_parity(const SpectralField& f, Parity parity);
void enforce_hermitian(SpectralField& f);
// Max |f_k - conj(f_-k)| over all modes.
double hermitian_defect(const SpectralField& f);
// Coefficients of the pointwise complex conjugate of f.
SpectralField conj_field(const SpectralField& f);

// Sum of |f_k|^2, which equals the L2 norm squared on the unit torus.
double norm2(const SpectralField& f);
double l2_norm(const SpectralField& f);
// Bilinear pairing: integral of f*g over the torus.
cplx pairing(const SpectralField& f, const SpectralField& g);
// Sesquilinear inner product: integral of f*conj(g).
cplx inner(const SpectralField& f, const SpectralField& g);

// Grid point coordinate along one axis.
inline double grid_coord(int i, int n) { return static_cast<double>(i) / n; }

// Snapshot I/O: magic, N (int32), component count (int32), then (re, im)
// float64 pairs per component in lexicographic WaveVector order.
void write_snapshot(const std::string& path, const std::vector<SpectralField>& comps);
std::vector<SpectralField> read_snapshot(const std::string& path);

}  // namespace rpe
