// FFTW-backed spectral workspace shared by the grid, approximation and
// construction code. Internal header.

#ifndef LAGTORI_SRC_FFT_HPP
#define LAGTORI_SRC_FFT_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "lagtori/grid.hpp"

namespace lagtori::detail {

/// fftw_malloc'd complex buffer; alignment matters for bit-reproducible
/// SIMD paths inside FFTW.
class FftBuffer {
 public:
  explicit FftBuffer(std::size_t n = 0);
  FftBuffer(const FftBuffer& other);
  FftBuffer& operator=(const FftBuffer& other);
  FftBuffer(FftBuffer&& other) noexcept;
  FftBuffer& operator=(FftBuffer&& other) noexcept;
  ~FftBuffer();

  std::size_t size() const { return n_; }
  Complex* data() { return data_; }
  const Complex* data() const { return data_; }
  std::span<Complex> span() { return {data_, n_}; }
  std::span<const Complex> span() const { return {data_, n_}; }

 private:
  Complex* data_ = nullptr;
  std::size_t n_ = 0;
};

/// Coefficients c_xi of the trigonometric interpolant of a grid function,
/// stored in FFT order (index j <-> frequency j for j <= M/2, j - M above).
/// Index M/2 holds the Nyquist pair with the convention that multipliers are
/// averaged over +M/2 and -M/2.
class Spectrum {
 public:
  Spectrum(int dims, int resolution);

  static Spectrum forward(const GridFunction& f);
  GridFunction inverse() const;

  int dims() const { return dims_; }
  int resolution() const { return resolution_; }
  std::size_t size() const { return buf_.size(); }
  std::span<Complex> data() { return buf_.span(); }
  std::span<const Complex> data() const { return buf_.span(); }

  /// Multiply by prod_a factors[a][j_a]; each factor vector has length M.
  void apply_axis_factors(const std::vector<std::vector<Complex>>& factors);

  /// Multiply coefficient by m(frequency multi-index). The Nyquist index is
  /// reported as +M/2.
  void apply(const std::function<Complex(std::span<const int>)>& m);

 private:
  int dims_;
  int resolution_;
  FftBuffer buf_;
};

/// Signed frequency for FFT index j.
inline int fft_frequency(int j, int m) { return j <= m / 2 ? j : j - m; }

/// Per-axis factor table for a one-dimensional multiplier m(xi); the Nyquist
/// entry is 0.5*(m(M/2) + m(-M/2)).
std::vector<Complex> axis_factor(int resolution, const std::function<Complex(int)>& m);

/// In-place multi-dimensional transform. sign = -1 forward, +1 backward.
void fft_inplace(FftBuffer& buf, int dims, int resolution, int sign);

}  // namespace lagtori::detail

#endif  // LAGTORI_SRC_FFT_HPP
