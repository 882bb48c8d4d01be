#include "lagtori/approx.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fft.hpp"

namespace lagtori {

ApproxParams ApproxParams::uniform(int dims, int m, int r, double A, double sigma) {
  ApproxParams p;
  p.degrees.assign(static_cast<std::size_t>(dims), m);
  p.orders.assign(static_cast<std::size_t>(dims), r);
  p.A = A;
  p.sigma = sigma;
  return p;
}

void ApproxParams::validate(int dims) const {
  if (degrees.size() != static_cast<std::size_t>(dims))
    throw std::invalid_argument("ApproxParams: need one degree per axis");
  for (int m : degrees)
    if (m < 1) throw std::invalid_argument("ApproxParams: degrees must be >= 1");
  if (!orders.empty() && orders.size() != static_cast<std::size_t>(dims))
    throw std::invalid_argument("ApproxParams: need one smoothness order per axis");
  for (int r : orders)
    if (r < 1) throw std::invalid_argument("ApproxParams: smoothness orders must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("ApproxParams: sigma must be positive");
  if (!(A > 0.0)) throw std::invalid_argument("ApproxParams: A must be positive");
}

double fejer_weight(int xi, int m) {
  return std::max(0.0, 1.0 - std::abs(static_cast<double>(xi)) / m);
}

double vallee_poussin_weight(int xi, int m) { return 2.0 * fejer_weight(xi, 2 * m) - fejer_weight(xi, m); }

namespace {

void check_axis(const GridFunction& f, int axis) {
  if (axis < 0 || axis >= f.dims()) throw std::invalid_argument("approx: axis out of range");
}

GridFunction weighted(const GridFunction& f, int axis, const std::function<Complex(int)>& w) {
  auto spec = detail::Spectrum::forward(f);
  std::vector<std::vector<Complex>> factors;
  for (int a = 0; a < f.dims(); ++a)
    factors.push_back(a == axis ? detail::axis_factor(f.resolution(), w)
                                : std::vector<Complex>(static_cast<std::size_t>(f.resolution()), 1.0));
  spec.apply_axis_factors(factors);
  return spec.inverse();
}

void require_resolved(const GridFunction& f, std::span<const int> degrees) {
  for (int m : degrees)
    if (f.resolution() < 4 * m)
      throw ResolutionError("vallee_poussin_tensor: resolution " + std::to_string(f.resolution()) +
                            " cannot hold degree " + std::to_string(2 * m - 1));
}

std::vector<std::vector<Complex>> tensor_factors(int resolution, std::span<const int> degrees) {
  std::vector<std::vector<Complex>> factors;
  for (int m : degrees)
    factors.push_back(detail::axis_factor(resolution, [m](int xi) { return Complex(vallee_poussin_weight(xi, m)); }));
  return factors;
}

}  // namespace

GridFunction fejer(const GridFunction& f, int axis, int m) {
  if (m < 1) throw std::invalid_argument("fejer: m must be >= 1");
  check_axis(f, axis);
  return weighted(f, axis, [m](int xi) { return Complex(fejer_weight(xi, m)); });
}

GridFunction vallee_poussin(const GridFunction& f, int axis, int m) {
  if (m < 1) throw std::invalid_argument("vallee_poussin: m must be >= 1");
  check_axis(f, axis);
  return weighted(f, axis, [m](int xi) { return Complex(vallee_poussin_weight(xi, m)); });
}

TrigPoly vallee_poussin_tensor(const GridFunction& f, const ApproxParams& params) {
  params.validate(f.dims());
  std::vector<int> order(static_cast<std::size_t>(f.dims()));
  std::iota(order.begin(), order.end(), 0);
  return vallee_poussin_tensor(f, params.degrees, order);
}

TrigPoly vallee_poussin_tensor(const GridFunction& f, std::span<const int> degrees,
                               std::span<const int> axis_order) {
  const int d = f.dims();
  if (degrees.size() != static_cast<std::size_t>(d) || axis_order.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("vallee_poussin_tensor: need one degree and one axis slot per dimension");
  for (int m : degrees)
    if (m < 1) throw std::invalid_argument("vallee_poussin_tensor: degrees must be >= 1");
  require_resolved(f, degrees);

  auto spectrum = to_spectrum(f);
  // Apply innermost first, as in P^{[j1]}(P^{[j2]}(...)).
  for (auto it = axis_order.rbegin(); it != axis_order.rend(); ++it) {
    const int axis = *it;
    if (axis < 0 || axis >= d) throw std::invalid_argument("vallee_poussin_tensor: bad axis in order");
    const int m = degrees[static_cast<std::size_t>(axis)];
    spectrum = spectrum.multiplied([axis, m](std::span<const int> xi) {
      return Complex(vallee_poussin_weight(xi[static_cast<std::size_t>(axis)], m));
    });
  }
  const int top = *std::max_element(degrees.begin(), degrees.end());
  return spectrum.with_degree(2 * top - 1);
}

GridFunction vallee_poussin_tensor_grid(const GridFunction& f, std::span<const int> degrees) {
  if (degrees.size() != static_cast<std::size_t>(f.dims()))
    throw std::invalid_argument("vallee_poussin_tensor: need one degree per axis");
  require_resolved(f, degrees);
  auto spec = detail::Spectrum::forward(f);
  spec.apply_axis_factors(tensor_factors(f.resolution(), degrees));
  return spec.inverse();
}

std::string JacksonCertificate::to_json() const {
  nlohmann::ordered_json j;
  j["N"] = N;
  j["k"] = k;
  j["error"] = error;
  j["bound"] = bound;
  j["pass"] = pass;
  return j.dump();
}

JacksonCertificate jackson_error(const GridFunction& f, const ApproxParams& params) {
  params.validate(f.dims());
  if (params.orders.empty()) throw std::invalid_argument("jackson_error: smoothness orders required");
  const auto approx = vallee_poussin_tensor_grid(f, params.degrees);

  JacksonCertificate cert;
  cert.error = c0_norm(f - approx);

  std::size_t jbar = 0;
  double worst = -1.0;
  for (std::size_t j = 0; j < params.degrees.size(); ++j) {
    const int r = params.orders[j];
    const double term = c0_norm(spectral_derivative(f, static_cast<int>(j), r)) /
                        std::pow(static_cast<double>(params.degrees[j]), r);
    if (term > worst) {
      worst = term;
      jbar = j;
    }
  }
  cert.N = 2 * params.degrees[jbar] - 1;
  cert.k = params.orders[jbar];
  cert.bound = params.A * std::pow(static_cast<double>(cert.N), -cert.k) * cr_norm(f, cert.k);
  cert.pass = cert.error <= cert.bound;
  return cert;
}

double jackson_ratio(const GridFunction& f, int m, int k) {
  const std::vector<int> degrees(static_cast<std::size_t>(f.dims()), m);
  const double err = c0_norm(f - vallee_poussin_tensor_grid(f, degrees));
  const double norm = cr_norm(f, k);
  if (norm == 0.0) return 0.0;
  return err * std::pow(2.0 * m - 1.0, k) / norm;
}

double calibrate_A(std::span<const GridFunction> family, int k, std::span<const int> degrees) {
  if (family.empty()) throw std::invalid_argument("calibrate_A: empty family");
  if (degrees.empty()) throw std::invalid_argument("calibrate_A: empty degree list");
  if (k < 1) throw std::invalid_argument("calibrate_A: k must be >= 1");
  double worst = 0.0;
  for (const auto& f : family) {
    // One forward transform and the C^k norm are shared over the degree list.
    const auto spec = detail::Spectrum::forward(f);
    const double norm = cr_norm(f, k);
    if (norm == 0.0) continue;
    for (int m : degrees) {
      const std::vector<int> degs(static_cast<std::size_t>(f.dims()), m);
      require_resolved(f, degs);
      auto work = spec;
      work.apply_axis_factors(tensor_factors(f.resolution(), degs));
      const double err = c0_norm(f - work.inverse());
      worst = std::max(worst, err * std::pow(2.0 * m - 1.0, k) / norm);
    }
  }
  return std::max(1.1 * worst, 1e-6);
}

DegreeChoice select_degree(const GridFunction& f, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("select_degree: sigma must be positive");
  const auto spec = detail::Spectrum::forward(f);
  const int mmax = f.resolution() / 4;
  auto error_at = [&](int m) {
    const std::vector<int> degs(static_cast<std::size_t>(f.dims()), m);
    auto work = spec;
    work.apply_axis_factors(tensor_factors(f.resolution(), degs));
    return c0_norm(f - work.inverse());
  };

  int hi = 1;
  double err_hi = error_at(hi);
  while (!(err_hi < sigma)) {
    if (hi == mmax)
      throw ResolutionError("select_degree: sigma=" + std::to_string(sigma) + " not reached at resolution " +
                            std::to_string(f.resolution()) + " (error " + std::to_string(err_hi) + ")");
    hi = std::min(2 * hi, mmax);
    err_hi = error_at(hi);
  }
  int lo = hi / 2;  // error(lo) >= sigma, or lo == 0
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    const double e = error_at(mid);
    if (e < sigma) {
      hi = mid;
      err_hi = e;
    } else {
      lo = mid;
    }
  }
  return {hi, 2 * hi - 1, err_hi};
}

}  // namespace lagtori
