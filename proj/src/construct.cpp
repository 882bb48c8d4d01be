#include "lagtori/construct.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lagtori/approx.hpp"
#include "fft.hpp"

namespace lagtori {

namespace {

int toy_resolution(int n, int resolution) {
  if (n < 1) throw std::invalid_argument("toy: n must be >= 1");
  if (resolution == 0) return next_power_of_two(std::max(256, 16 * n));
  return resolution;
}

}  // namespace

GridFunction toy_phi(int n, int resolution) {
  const int m = toy_resolution(n, resolution);
  return GridFunction::sample(1, m, [n](std::span<const double> x) {
    return -1.25 / n * std::cos(n * x[0]) + 0.125 / n * std::sin(2.0 * n * x[0]);
  });
}

GridFunction toy_dphi(int n, int resolution) {
  const int m = toy_resolution(n, resolution);
  return GridFunction::sample(1, m, [n](std::span<const double> x) {
    return 1.25 * std::sin(n * x[0]) + 0.25 * std::cos(2.0 * n * x[0]);
  });
}

TrigPoly toy_potential(int n) {
  if (n < 1) throw std::invalid_argument("toy: n must be >= 1");
  const double n2 = static_cast<double>(n) * n;
  TrigPoly p(1, 2 * n);
  p.set_coeff({n}, Complex(0.0, 5.0 / (8.0 * n2)));
  p.set_coeff({-n}, Complex(0.0, -5.0 / (8.0 * n2)));
  p.set_coeff({2 * n}, Complex(-1.0 / (32.0 * n2)));
  p.set_coeff({-2 * n}, Complex(-1.0 / (32.0 * n2)));
  return p;
}

GeneratingMap toy_generating(int n, int resolution) {
  return GeneratingMap(toy_potential(n), toy_resolution(n, resolution));
}

double bump_profile(double t, double sharpness) {
  t = std::abs(t);
  if (t >= 1.0) return 0.0;
  return std::exp(sharpness * (1.0 - 1.0 / (1.0 - t * t)));
}

BumpSpec BumpSpec::herman(int dims, int n) {
  if (dims < 1) throw std::invalid_argument("herman_bump: d must be >= 1");
  if (n < 2) throw std::invalid_argument("herman_bump: n must be >= 2");
  BumpSpec s;
  s.dims = dims;
  s.n = n;
  s.plus_amplitude = 1.0 / (9.0 * n);
  s.minus_amplitude = 1.0 / std::sqrt(static_cast<double>(n));
  s.minus_radius = s.plus_radius * std::pow(9.0 * std::sqrt(static_cast<double>(n)), -1.0 / dims);
  s.plus_center.assign(static_cast<std::size_t>(dims), kPi / 2);
  s.minus_center.assign(static_cast<std::size_t>(dims), -kPi / 2);
  return s;
}

BumpSpec BumpSpec::analytic(int dims, int n) {
  if (dims < 2) throw std::invalid_argument("analytic_bump: d must be >= 2");
  if (n < 2) throw std::invalid_argument("analytic_bump: n must be >= 2");
  BumpSpec s;
  s.dims = dims;
  s.n = n;
  s.plus_amplitude = 1.0;
  s.minus_amplitude = n;
  s.minus_radius = s.plus_radius * std::pow(static_cast<double>(n), -1.0 / dims);
  s.plus_center.assign(static_cast<std::size_t>(dims), kPi / 2);
  s.minus_center.assign(static_cast<std::size_t>(dims), -kPi / 2);
  return s;
}

void BumpSpec::validate() const {
  if (dims < 1 || n < 1) throw std::invalid_argument("BumpSpec: bad d or n");
  if (!(plus_amplitude > 0.0) || !(minus_amplitude > 0.0))
    throw std::invalid_argument("BumpSpec: amplitudes must be positive");
  if (!(plus_radius > 0.0) || plus_radius >= kPi / 2)
    throw std::invalid_argument("BumpSpec: plus lobe must fit in [0, pi]^d");
  if (!(minus_radius > 0.0) || minus_radius >= kPi / 2)
    throw std::invalid_argument("BumpSpec: R_n must lie in (0, pi/2)");
  if (plus_center.size() != static_cast<std::size_t>(dims) || minus_center.size() != static_cast<std::size_t>(dims))
    throw std::invalid_argument("BumpSpec: centers have wrong dimension");
  if (!(profile_sharpness > 0.0)) throw std::invalid_argument("BumpSpec: sharpness must be positive");
}

Bump make_bump(const BumpSpec& spec, int resolution) {
  spec.validate();
  if (!is_power_of_two(resolution) || resolution < 4)
    throw std::invalid_argument("make_bump: resolution must be a power of two >= 4");
  if (spec.minus_radius * resolution / kTwoPi < 8.0)
    throw ResolutionError("make_bump: minus lobe of radius " + std::to_string(spec.minus_radius) +
                          " is under-resolved at M=" + std::to_string(resolution));

  const auto plus = GridFunction::sample(spec.dims, resolution, [&spec](std::span<const double> x) {
    double r2 = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) r2 += (x[a] - spec.plus_center[a]) * (x[a] - spec.plus_center[a]);
    return bump_profile(std::sqrt(r2) / spec.plus_radius, spec.profile_sharpness);
  });
  const auto minus = GridFunction::sample(spec.dims, resolution, [&spec](std::span<const double> x) {
    double r2 = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a)
      r2 += (x[a] - spec.minus_center[a]) * (x[a] - spec.minus_center[a]);
    return bump_profile(std::sqrt(r2) / spec.minus_radius, spec.profile_sharpness);
  });

  const auto sum = [](const GridFunction& f) {
    return std::accumulate(f.values().begin(), f.values().end(), 0.0);
  };
  const double amp = spec.plus_amplitude * sum(plus) / sum(minus);
  if (std::abs(amp / spec.minus_amplitude - 1.0) > 0.01)
    throw ResolutionError("make_bump: balancing moved the minus amplitude by more than 1%");

  Bump b;
  b.spec = spec;
  b.minus_amplitude = amp;
  b.values = spec.plus_amplitude * plus - amp * minus;
  return b;
}

int default_resolution(const BumpSpec& spec) {
  if (spec.dims >= 3) return 64;
  const int want = static_cast<int>(std::ceil(384.0 / spec.minus_radius));
  return next_power_of_two(std::max(256, want));
}

GridFunction herman_bump(int dims, int n, int resolution) {
  const auto spec = BumpSpec::herman(dims, n);
  return make_bump(spec, resolution == 0 ? default_resolution(spec) : resolution).values;
}

GridFunction analytic_bump(int dims, int n, int resolution) {
  const auto spec = BumpSpec::analytic(dims, n);
  return make_bump(spec, resolution == 0 ? default_resolution(spec) : resolution).values;
}

ScalingParams ScalingParams::make(int d, int n, double eps) {
  if (d < 1) throw std::invalid_argument("ScalingParams: d must be >= 1");
  if (n < 1) throw std::invalid_argument("ScalingParams: n must be >= 1");
  if (!(eps > 0.0 && eps < 0.25)) throw std::invalid_argument("ScalingParams: eps must lie in (0, 1/4)");
  ScalingParams sp;
  sp.d = d;
  sp.n = n;
  sp.eps = eps;
  sp.k = std::max(1, static_cast<int>(std::lround(d / (2.0 * eps))));
  sp.delta = 4.0 * eps * d / (1.0 + 2.0 * eps);
  return sp;
}

int ScalingParams::max_order_p() const { return static_cast<int>(std::floor(d - 1 - delta + 1e-12)); }
int ScalingParams::max_order_psi() const { return static_cast<int>(std::floor(d + 1 - delta + 1e-12)); }

NormalizedApprox approximate_and_normalize(const GridFunction& T, const ScalingParams& sp, double sigma) {
  if (T.dims() != sp.d) throw std::invalid_argument("approximate_and_normalize: dimension mismatch");
  if (std::abs(T.mean()) > 1e-10) throw std::invalid_argument("approximate_and_normalize: T must have mean zero");
  const auto choice = select_degree(T, sigma);
  const std::vector<int> degrees(static_cast<std::size_t>(T.dims()), choice.m);
  std::vector<int> order(static_cast<std::size_t>(T.dims()));
  std::iota(order.begin(), order.end(), 0);

  NormalizedApprox out;
  out.m = choice.m;
  out.N = choice.N;
  out.error = choice.error;
  const auto p = vallee_poussin_tensor(T, degrees, order);
  const auto grid = vallee_poussin_tensor_grid(T, degrees);
  out.max_abs_p = c0_norm(grid);
  if (out.max_abs_p == 0.0) throw std::invalid_argument("approximate_and_normalize: p_N vanishes");
  const double scale = 1.0 / (std::pow(static_cast<double>(sp.n), 1.0 - sp.eps) * out.max_abs_p);
  out.p_tilde = scale * p;
  out.p_tilde_grid = scale * grid;
  return out;
}

namespace {

Complex inverse_laplacian(std::span<const int> xi) {
  double q = 0.0;
  for (int v : xi) q += static_cast<double>(v) * v;
  if (q == 0.0) return 0.0;
  return Complex(-static_cast<double>(xi.size()) / q);
}

}  // namespace

GridFunction poisson_solve(const GridFunction& T) {
  if (std::abs(T.mean()) > 1e-10) throw std::invalid_argument("poisson_solve: T must have mean zero");
  auto s = detail::Spectrum::forward(T);
  s.apply(inverse_laplacian);
  return s.inverse();
}

TrigPoly poisson_solve(const TrigPoly& T) {
  if (std::abs(T.mean()) > 1e-10) throw std::invalid_argument("poisson_solve: T must have mean zero");
  return T.multiplied(inverse_laplacian);
}

}  // namespace lagtori
