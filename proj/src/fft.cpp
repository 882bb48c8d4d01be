#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <new>

namespace lagtori::detail {

namespace {

// The FFTW planner is not re-entrant; plan creation and destruction are
// serialised, execution is not.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftBuffer::FftBuffer(std::size_t n) : n_(n) {
  if (n_ == 0) return;
  data_ = reinterpret_cast<Complex*>(fftw_alloc_complex(n_));
  if (data_ == nullptr) throw std::bad_alloc();
  std::fill(data_, data_ + n_, Complex{});
}

FftBuffer::FftBuffer(const FftBuffer& other) : FftBuffer(other.n_) {
  std::copy(other.data_, other.data_ + n_, data_);
}

FftBuffer& FftBuffer::operator=(const FftBuffer& other) {
  if (this != &other) {
    FftBuffer tmp(other);
    *this = std::move(tmp);
  }
  return *this;
}

FftBuffer::FftBuffer(FftBuffer&& other) noexcept : data_(other.data_), n_(other.n_) {
  other.data_ = nullptr;
  other.n_ = 0;
}

FftBuffer& FftBuffer::operator=(FftBuffer&& other) noexcept {
  if (this != &other) {
    if (data_) fftw_free(data_);
    data_ = other.data_;
    n_ = other.n_;
    other.data_ = nullptr;
    other.n_ = 0;
  }
  return *this;
}

FftBuffer::~FftBuffer() {
  if (data_) fftw_free(data_);
}

void fft_inplace(FftBuffer& buf, int dims, int resolution, int sign) {
  std::vector<int> n(static_cast<std::size_t>(dims), resolution);
  auto* ptr = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    // FFTW_ESTIMATE picks the algorithm without timing runs, so repeated
    // runs use identical code paths.
    plan = fftw_plan_dft(dims, n.data(), ptr, ptr, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                         FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

Spectrum::Spectrum(int dims, int resolution)
    : dims_(dims), resolution_(resolution) {
  std::size_t n = 1;
  for (int a = 0; a < dims; ++a) n *= static_cast<std::size_t>(resolution);
  buf_ = FftBuffer(n);
}

namespace {

// Node x_j = -pi + 2 pi j / M turns exp(i xi x_j) into (-1)^xi times the
// plain DFT kernel. The sign depends only on the parity of sum(j_a).
void apply_node_phase(std::span<Complex> data, int dims, int m) {
  std::vector<int> idx(static_cast<std::size_t>(dims), 0);
  int parity = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (parity) data[i] = -data[i];
    for (int a = dims - 1; a >= 0; --a) {
      auto& j = idx[static_cast<std::size_t>(a)];
      ++j;
      parity ^= 1;
      if (j < m) break;
      // wrapped to 0: the -m step is even, parity unchanged
      j = 0;
    }
  }
}

}  // namespace

Spectrum Spectrum::forward(const GridFunction& f) {
  Spectrum s(f.dims(), f.resolution());
  auto vals = f.values();
  auto out = s.data();
  for (std::size_t i = 0; i < vals.size(); ++i) out[i] = Complex(vals[i], 0.0);
  fft_inplace(s.buf_, s.dims_, s.resolution_, -1);
  const double scale = 1.0 / static_cast<double>(vals.size());
  for (auto& c : out) c *= scale;
  apply_node_phase(out, s.dims_, s.resolution_);
  return s;
}

GridFunction Spectrum::inverse() const {
  FftBuffer tmp(buf_);
  apply_node_phase(tmp.span(), dims_, resolution_);
  fft_inplace(tmp, dims_, resolution_, +1);
  std::vector<double> vals(tmp.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = tmp.data()[i].real();
  return GridFunction(dims_, resolution_, std::move(vals));
}

void Spectrum::apply_axis_factors(const std::vector<std::vector<Complex>>& factors) {
  const int m = resolution_;
  auto d = data();
  if (dims_ == 1) {
    for (int j = 0; j < m; ++j) d[static_cast<std::size_t>(j)] *= factors[0][static_cast<std::size_t>(j)];
    return;
  }
  // Product of all but the last axis is constant along the fastest axis.
  std::vector<int> idx(static_cast<std::size_t>(dims_ - 1), 0);
  const auto& last = factors[static_cast<std::size_t>(dims_ - 1)];
  std::size_t offset = 0;
  const std::size_t rows = d.size() / static_cast<std::size_t>(m);
  for (std::size_t row = 0; row < rows; ++row) {
    Complex lead(1.0, 0.0);
    for (int a = 0; a < dims_ - 1; ++a)
      lead *= factors[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
    for (int j = 0; j < m; ++j) d[offset + static_cast<std::size_t>(j)] *= lead * last[static_cast<std::size_t>(j)];
    offset += static_cast<std::size_t>(m);
    for (int a = dims_ - 2; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < m) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
  }
}

void Spectrum::apply(const std::function<Complex(std::span<const int>)>& mult) {
  const int m = resolution_;
  std::vector<int> idx(static_cast<std::size_t>(dims_), 0);
  std::vector<int> freq(static_cast<std::size_t>(dims_), 0);
  auto d = data();
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (int a = 0; a < dims_; ++a)
      freq[static_cast<std::size_t>(a)] = fft_frequency(idx[static_cast<std::size_t>(a)], m);
    d[i] *= mult(freq);
    for (int a = dims_ - 1; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < m) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
  }
}

std::vector<Complex> axis_factor(int resolution, const std::function<Complex(int)>& m) {
  std::vector<Complex> f(static_cast<std::size_t>(resolution));
  for (int j = 0; j < resolution; ++j) {
    if (j == resolution / 2)
      f[static_cast<std::size_t>(j)] = 0.5 * (m(resolution / 2) + m(-resolution / 2));
    else
      f[static_cast<std::size_t>(j)] = m(fft_frequency(j, resolution));
  }
  return f;
}

}  // namespace lagtori::detail
