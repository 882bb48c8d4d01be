#include "lagtori/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fft.hpp"

namespace lagtori {

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

int next_power_of_two(int m) {
  int p = 1;
  while (p < m) p <<= 1;
  return p;
}

double wrap_angle(double x) {
  double r = std::fmod(x + kPi, kTwoPi);
  if (r < 0) r += kTwoPi;
  r -= kPi;
  // fmod can land exactly on +pi after the shift back
  if (r >= kPi) r -= kTwoPi;
  return r;
}

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(int dims, int resolution, std::vector<double> values)
    : dims_(dims), resolution_(resolution), values_(std::move(values)) {
  if (dims_ < 1) throw std::invalid_argument("GridFunction: dims must be >= 1");
  if (!is_power_of_two(resolution_) || resolution_ < 2)
    throw std::invalid_argument("GridFunction: resolution must be a power of two >= 2, got " +
                                std::to_string(resolution_));
  std::size_t expected = 1;
  for (int a = 0; a < dims_; ++a) expected *= static_cast<std::size_t>(resolution_);
  if (values_.size() != expected)
    throw std::invalid_argument("GridFunction: expected " + std::to_string(expected) +
                                " values, got " + std::to_string(values_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite sample");
}

GridFunction GridFunction::zeros(int dims, int resolution) { return constant(dims, resolution, 0.0); }

GridFunction GridFunction::constant(int dims, int resolution, double c) {
  std::size_t n = 1;
  for (int a = 0; a < dims; ++a) n *= static_cast<std::size_t>(resolution);
  return GridFunction(dims, resolution, std::vector<double>(n, c));
}

GridFunction GridFunction::sample(int dims, int resolution,
                                  const std::function<double(std::span<const double>)>& f) {
  GridFunction g = zeros(dims, resolution);
  std::vector<int> idx(static_cast<std::size_t>(dims), 0);
  std::vector<double> x(static_cast<std::size_t>(dims), g.node(0));
  for (std::size_t i = 0; i < g.values_.size(); ++i) {
    const double v = f(x);
    if (!std::isfinite(v)) throw std::invalid_argument("GridFunction::sample: non-finite sample");
    g.values_[i] = v;
    for (int a = dims - 1; a >= 0; --a) {
      auto& j = idx[static_cast<std::size_t>(a)];
      if (++j < resolution) {
        x[static_cast<std::size_t>(a)] = g.node(j);
        break;
      }
      j = 0;
      x[static_cast<std::size_t>(a)] = g.node(0);
    }
  }
  return g;
}

double GridFunction::node(int j) const { return -kPi + kTwoPi * j / resolution_; }

std::vector<double> GridFunction::point(std::size_t i) const {
  std::vector<double> x(static_cast<std::size_t>(dims_));
  for (int a = dims_ - 1; a >= 0; --a) {
    x[static_cast<std::size_t>(a)] = node(static_cast<int>(i % static_cast<std::size_t>(resolution_)));
    i /= static_cast<std::size_t>(resolution_);
  }
  return x;
}

std::size_t GridFunction::flat_index(std::span<const int> idx) const {
  std::size_t i = 0;
  for (int a = 0; a < dims_; ++a) {
    int j = idx[static_cast<std::size_t>(a)] % resolution_;
    if (j < 0) j += resolution_;
    i = i * static_cast<std::size_t>(resolution_) + static_cast<std::size_t>(j);
  }
  return i;
}

double GridFunction::mean() const {
  // Pairwise-free plain sum; order is fixed so results are reproducible.
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

void GridFunction::require_same_shape(const GridFunction& other) const {
  if (dims_ != other.dims_ || resolution_ != other.resolution_)
    throw std::invalid_argument("GridFunction: shape mismatch");
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  require_same_shape(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  require_same_shape(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

// ---------------------------------------------------------------------------
// TrigPoly

namespace {

std::size_t lattice_size(int dims, int degree) {
  std::size_t n = 1;
  for (int a = 0; a < dims; ++a) n *= static_cast<std::size_t>(2 * degree + 1);
  return n;
}

// Contract the coefficient lattice against per-axis exponentials, last axis
// first (it is the fastest-varying one).
template <class Scalar>
Complex contract(std::span<const Complex> coeffs, int dims, int degree, std::span<const Scalar> x) {
  const std::size_t width = static_cast<std::size_t>(2 * degree + 1);
  std::vector<Complex> cur(coeffs.begin(), coeffs.end());
  std::vector<Complex> e(width);
  const Complex i1(0.0, 1.0);
  for (int a = dims - 1; a >= 0; --a) {
    const Complex xa(x[static_cast<std::size_t>(a)]);
    // exp(i xi x) by recurrence would accumulate rounding; direct is cheap.
    for (std::size_t j = 0; j < width; ++j)
      e[j] = std::exp(i1 * static_cast<double>(static_cast<int>(j) - degree) * xa);
    const std::size_t rows = cur.size() / width;
    std::vector<Complex> next(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      Complex s{};
      const Complex* row = cur.data() + r * width;
      for (std::size_t j = 0; j < width; ++j) s += row[j] * e[j];
      next[r] = s;
    }
    cur = std::move(next);
  }
  return cur[0];
}

}  // namespace

TrigPoly::TrigPoly(int dims, int degree)
    : dims_(dims), degree_(degree), coeffs_(lattice_size(dims, degree)) {
  if (dims < 1) throw std::invalid_argument("TrigPoly: dims must be >= 1");
  if (degree < 0) throw std::invalid_argument("TrigPoly: degree must be >= 0");
}

TrigPoly::TrigPoly(int dims, int degree, std::vector<Complex> coeffs) : TrigPoly(dims, degree) {
  if (coeffs.size() != coeffs_.size())
    throw std::invalid_argument("TrigPoly: coefficient count does not match lattice");
  coeffs_ = std::move(coeffs);
}

std::size_t TrigPoly::index(std::span<const int> freq) const {
  if (freq.size() != static_cast<std::size_t>(dims_))
    throw std::invalid_argument("TrigPoly: frequency has wrong dimension");
  std::size_t i = 0;
  for (int a = 0; a < dims_; ++a) {
    const int f = freq[static_cast<std::size_t>(a)];
    if (f < -degree_ || f > degree_) return coeffs_.size();
    i = i * static_cast<std::size_t>(2 * degree_ + 1) + static_cast<std::size_t>(f + degree_);
  }
  return i;
}

Complex TrigPoly::coeff(std::span<const int> freq) const {
  const auto i = index(freq);
  return i < coeffs_.size() ? coeffs_[i] : Complex{};
}

void TrigPoly::set_coeff(std::span<const int> freq, Complex c) {
  const auto i = index(freq);
  if (i >= coeffs_.size()) throw std::out_of_range("TrigPoly: frequency outside lattice");
  coeffs_[i] = c;
}

std::vector<int> TrigPoly::frequency(std::size_t i) const {
  std::vector<int> f(static_cast<std::size_t>(dims_));
  const auto width = static_cast<std::size_t>(2 * degree_ + 1);
  for (int a = dims_ - 1; a >= 0; --a) {
    f[static_cast<std::size_t>(a)] = static_cast<int>(i % width) - degree_;
    i /= width;
  }
  return f;
}

double TrigPoly::mean() const {
  std::vector<int> zero(static_cast<std::size_t>(dims_), 0);
  return coeff(zero).real();
}

double TrigPoly::evaluate(std::span<const double> x) const {
  return contract<double>(coeffs_, dims_, degree_, x).real();
}

Complex TrigPoly::evaluate(std::span<const Complex> x) const {
  if (x.size() != static_cast<std::size_t>(dims_)) throw std::invalid_argument("TrigPoly: point has wrong dimension");
  // Real form sum Re(c) cos(xi.z) - Im(c) sin(xi.z): the holomorphic extension
  // of the real part, so the result is exactly real on real arguments.
  Complex acc{};
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Complex c = coeffs_[i];
    if (c == Complex{}) continue;
    const auto xi = frequency(i);
    Complex phase{};
    for (std::size_t a = 0; a < xi.size(); ++a) phase += static_cast<double>(xi[a]) * x[a];
    acc += c.real() * std::cos(phase) - c.imag() * std::sin(phase);
  }
  return acc;
}

double TrigPoly::hermitian_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    // The lattice is point-symmetric in flat index: -xi sits at size-1-i.
    const Complex mirror = coeffs_[coeffs_.size() - 1 - i];
    worst = std::max(worst, std::abs(coeffs_[i] - std::conj(mirror)));
  }
  return worst;
}

TrigPoly TrigPoly::multiplied(const std::function<Complex(std::span<const int>)>& m) const {
  TrigPoly out = *this;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == Complex{}) continue;
    out.coeffs_[i] *= m(frequency(i));
  }
  return out;
}

TrigPoly TrigPoly::with_degree(int degree) const {
  TrigPoly out(dims_, degree);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const auto f = frequency(i);
    const bool inside = std::all_of(f.begin(), f.end(), [&](int v) { return std::abs(v) <= degree; });
    if (inside) out.set_coeff(f, coeffs_[i]);
  }
  return out;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& other) {
  if (dims_ != other.dims_) throw std::invalid_argument("TrigPoly: dimension mismatch");
  if (other.degree_ > degree_) *this = with_degree(other.degree_);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i)
    coeffs_[index(other.frequency(i))] += other.coeffs_[i];
  return *this;
}

TrigPoly& TrigPoly::operator*=(double a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

// ---------------------------------------------------------------------------
// Transforms

TrigPoly to_spectrum(const GridFunction& f) {
  const int m = f.resolution();
  if (m < 4) throw std::invalid_argument("to_spectrum: resolution must be >= 4");
  for (double v : f.values())
    if (!std::isfinite(v)) throw std::invalid_argument("to_spectrum: non-finite sample");
  const auto spec = detail::Spectrum::forward(f);
  const int deg = m / 2;
  TrigPoly p(f.dims(), deg);
  std::vector<int> idx(static_cast<std::size_t>(f.dims()));
  const auto data = spec.data();
  std::vector<Complex> coeffs(p.coeffs().size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const auto freq = p.frequency(i);
    double share = 1.0;
    std::size_t flat = 0;
    for (int a = 0; a < f.dims(); ++a) {
      const int xi = freq[static_cast<std::size_t>(a)];
      if (std::abs(xi) == deg) share *= 0.5;
      const int j = ((xi % m) + m) % m;
      flat = flat * static_cast<std::size_t>(m) + static_cast<std::size_t>(j);
    }
    coeffs[i] = data[flat] * share;
  }
  return TrigPoly(f.dims(), deg, std::move(coeffs));
}

GridFunction from_spectrum(const TrigPoly& p, int resolution) {
  if (!is_power_of_two(resolution) || resolution < 2)
    throw std::invalid_argument("from_spectrum: resolution must be a power of two");
  if (resolution < 2 * p.degree())
    throw ResolutionError("from_spectrum: resolution " + std::to_string(resolution) +
                          " aliases a degree-" + std::to_string(p.degree()) + " polynomial");
  detail::Spectrum spec(p.dims(), resolution);
  auto data = spec.data();
  const auto coeffs = p.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == Complex{}) continue;
    const auto freq = p.frequency(i);
    std::size_t flat = 0;
    for (int a = 0; a < p.dims(); ++a) {
      const int j = ((freq[static_cast<std::size_t>(a)] % resolution) + resolution) % resolution;
      flat = flat * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(j);
    }
    data[flat] += coeffs[i];
  }
  return spec.inverse();
}

// ---------------------------------------------------------------------------
// Derivatives and norms

namespace {

std::vector<Complex> derivative_factor(int m, int order) {
  return detail::axis_factor(m, [order](int xi) {
    return std::pow(Complex(0.0, static_cast<double>(xi)), order);
  });
}

GridFunction differentiate(const detail::Spectrum& spec, std::span<const int> beta,
                           const std::vector<std::vector<Complex>>& tables) {
  detail::Spectrum work = spec;
  std::vector<std::vector<Complex>> factors;
  factors.reserve(beta.size());
  for (std::size_t a = 0; a < beta.size(); ++a)
    factors.push_back(tables[static_cast<std::size_t>(beta[a])]);
  work.apply_axis_factors(factors);
  return work.inverse();
}

// All multi-indices of length dims with total order <= rmax, in
// lexicographic order.
void enumerate_orders(int dims, int rmax, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == dims) {
    out.push_back(cur);
    return;
  }
  const int used = std::accumulate(cur.begin(), cur.end(), 0);
  for (int b = 0; b + used <= rmax; ++b) {
    cur.push_back(b);
    enumerate_orders(dims, rmax, cur, out);
    cur.pop_back();
  }
}

}  // namespace

GridFunction spectral_derivative(const GridFunction& f, int axis, int order) {
  if (order < 0) throw std::invalid_argument("spectral_derivative: order must be >= 0");
  if (axis < 0 || axis >= f.dims()) throw std::invalid_argument("spectral_derivative: bad axis");
  std::vector<int> beta(static_cast<std::size_t>(f.dims()), 0);
  beta[static_cast<std::size_t>(axis)] = order;
  return spectral_derivative(f, beta);
}

GridFunction spectral_derivative(const GridFunction& f, std::span<const int> beta) {
  if (beta.size() != static_cast<std::size_t>(f.dims()))
    throw std::invalid_argument("spectral_derivative: multi-index has wrong length");
  for (int b : beta)
    if (b < 0) throw std::invalid_argument("spectral_derivative: order must be >= 0");
  if (std::all_of(beta.begin(), beta.end(), [](int b) { return b == 0; })) return f;
  auto spec = detail::Spectrum::forward(f);
  std::vector<std::vector<Complex>> factors;
  for (int b : beta) factors.push_back(derivative_factor(f.resolution(), b));
  spec.apply_axis_factors(factors);
  return spec.inverse();
}

double c0_norm(const GridFunction& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> cr_norms(const GridFunction& f, int rmax) {
  if (rmax < 0) throw std::invalid_argument("cr_norm: order must be >= 0");
  std::vector<double> by_order(static_cast<std::size_t>(rmax + 1), 0.0);
  by_order[0] = c0_norm(f);
  if (rmax > 0) {
    const auto spec = detail::Spectrum::forward(f);
    std::vector<std::vector<Complex>> tables;
    for (int r = 0; r <= rmax; ++r) tables.push_back(derivative_factor(f.resolution(), r));
    std::vector<std::vector<int>> orders;
    std::vector<int> cur;
    enumerate_orders(f.dims(), rmax, cur, orders);
    for (const auto& beta : orders) {
      const int total = std::accumulate(beta.begin(), beta.end(), 0);
      if (total == 0) continue;
      const double v = c0_norm(differentiate(spec, beta, tables));
      auto& slot = by_order[static_cast<std::size_t>(total)];
      slot = std::max(slot, v);
    }
  }
  // C^r takes every order up to r.
  for (std::size_t r = 1; r < by_order.size(); ++r) by_order[r] = std::max(by_order[r], by_order[r - 1]);
  return by_order;
}

double cr_norm(const GridFunction& f, int r) { return cr_norms(f, r).back(); }

namespace {

double interpolation_bound(double lower, double upper, double alpha) {
  if (lower == 0.0 || upper == 0.0) return 0.0;
  return 2.0 * std::pow(lower, 1.0 - alpha) * std::pow(upper, alpha);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("holder_norm: alpha must lie in (0, 1)");
}

}  // namespace

double holder_norm(const GridFunction& f, int r, double alpha) {
  check_alpha(alpha);
  if (r < 0) throw std::invalid_argument("holder_norm: r must be >= 0");
  const auto norms = cr_norms(f, r + 1);
  return interpolation_bound(norms[static_cast<std::size_t>(r)], norms[static_cast<std::size_t>(r + 1)], alpha);
}

NormReport measure_norms(const GridFunction& f, int rmax,
                         std::span<const std::pair<int, double>> holder_orders) {
  int top = rmax;
  for (const auto& [r, alpha] : holder_orders) {
    check_alpha(alpha);
    top = std::max(top, r + 1);
  }
  const auto norms = cr_norms(f, top);
  NormReport rep;
  rep.c0 = norms[0];
  for (int r = 0; r <= rmax; ++r) rep.cr[r] = norms[static_cast<std::size_t>(r)];
  for (const auto& [r, alpha] : holder_orders)
    rep.holder[{r, alpha}] =
        interpolation_bound(norms[static_cast<std::size_t>(r)], norms[static_cast<std::size_t>(r + 1)], alpha);
  return rep;
}

}  // namespace lagtori
