#include "lagtori/twist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fft.hpp"
#include "json.hpp"

namespace lagtori {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TrigPoly derivative_poly(const TrigPoly& p, int axis) {
  return p.multiplied([axis](std::span<const int> xi) {
    return Complex(0.0, static_cast<double>(xi[static_cast<std::size_t>(axis)]));
  });
}

void check_point(std::span<const double> x, int dims) {
  if (x.size() != static_cast<std::size_t>(dims)) throw std::invalid_argument("GeneratingMap: point has wrong dimension");
}

}  // namespace

// ---------------------------------------------------------------------------
// GeneratingMap

GeneratingMap::GeneratingMap(const GridFunction& potential)
    : potential_(potential), spectrum_(to_spectrum(potential)) {
  build_derivatives();
}

GeneratingMap::GeneratingMap(TrigPoly potential, int resolution)
    : potential_(from_spectrum(potential, resolution)), spectrum_(std::move(potential)) {
  build_derivatives();
}

GeneratingMap GeneratingMap::integrable(int dims, int resolution) {
  return GeneratingMap(GridFunction::zeros(dims, resolution));
}

void GeneratingMap::build_derivatives() {
  const double scale = std::max(1.0, c0_norm(potential_));
  if (std::abs(spectrum_.mean()) > 1e-10 * scale)
    throw std::invalid_argument("GeneratingMap: potential must have mean zero");
  const int d = spectrum_.dims();
  gradient_.clear();
  hessian_.clear();
  for (int a = 0; a < d; ++a) gradient_.push_back(derivative_poly(spectrum_, a));
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) hessian_.push_back(derivative_poly(gradient_[static_cast<std::size_t>(a)], b));
}

double GeneratingMap::potential_at(std::span<const double> x) const {
  check_point(x, dims());
  return spectrum_.evaluate(x);
}

std::vector<double> GeneratingMap::gradient(std::span<const double> x) const {
  check_point(x, dims());
  std::vector<double> g;
  g.reserve(gradient_.size());
  for (const auto& p : gradient_) g.push_back(p.evaluate(x));
  return g;
}

Eigen::MatrixXd GeneratingMap::hessian(std::span<const double> x) const {
  check_point(x, dims());
  const int d = dims();
  Eigen::MatrixXd h(d, d);
  std::size_t k = 0;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      const double v = hessian_[k++].evaluate(x);
      h(a, b) = v;
      h(b, a) = v;
    }
  return h;
}

State GeneratingMap::step_lifted(const State& s) const {
  const int d = dims();
  if (s.x.size() != static_cast<std::size_t>(d) || s.y.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("GeneratingMap::step: state has wrong dimension");
  State out;
  out.x.resize(static_cast<std::size_t>(d));
  for (std::size_t a = 0; a < out.x.size(); ++a) out.x[a] = s.x[a] + s.y[a];
  const auto g = gradient(out.x);
  out.y.resize(static_cast<std::size_t>(d));
  for (std::size_t a = 0; a < out.y.size(); ++a) out.y[a] = s.y[a] + g[a];
  return out;
}

State GeneratingMap::step(const State& s) const {
  State out = step_lifted(s);
  for (double& x : out.x) x = wrap_angle(x);
  return out;
}

Eigen::MatrixXd GeneratingMap::jacobian(const State& s) const {
  const int d = dims();
  std::vector<double> xp(static_cast<std::size_t>(d));
  for (std::size_t a = 0; a < xp.size(); ++a) xp[a] = s.x[a] + s.y[a];
  const Eigen::MatrixXd h = hessian(xp);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd j(2 * d, 2 * d);
  j << id, id, h, id + h;
  return j;
}

Eigen::MatrixXd GeneratingMap::twist_block(const State& s) const { return jacobian(s).topRightCorner(dims(), dims()); }

double GeneratingMap::generating_function(std::span<const double> x, std::span<const double> xp) const {
  check_point(x, dims());
  check_point(xp, dims());
  double q = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) q += (x[a] - xp[a]) * (x[a] - xp[a]);
  return 0.5 * q + spectrum_.evaluate(xp);
}

std::vector<State> GeneratingMap::orbit(State start, int steps) const {
  if (steps < 0) throw std::invalid_argument("GeneratingMap::orbit: steps must be >= 0");
  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(std::move(start));
  for (int i = 0; i < steps; ++i) out.push_back(step(out.back()));
  return out;
}

double lipschitz_bound(double M) {
  if (!(M > -2.0)) throw std::domain_error("lipschitz_bound: M must exceed -2");
  const double radicand = M + 0.25 * M * M;
  if (radicand < 0.0) throw std::domain_error("lipschitz_bound: negative square-root argument");
  return 1.0 + 0.5 * M + std::sqrt(radicand);
}

// ---------------------------------------------------------------------------
// Graph candidates

GraphCandidate GraphCandidate::from_components(std::vector<GridFunction> psi) {
  if (psi.empty()) throw std::invalid_argument("GraphCandidate: no components");
  const int d = psi.front().dims();
  const int m = psi.front().resolution();
  if (psi.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("GraphCandidate: need one component per dimension");
  double lip = 0.0;
  const double h = kTwoPi / m;
  for (const auto& c : psi) {
    if (c.dims() != d || c.resolution() != m) throw std::invalid_argument("GraphCandidate: component shape mismatch");
    std::vector<int> idx(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::size_t rem = i;
      for (int a = d - 1; a >= 0; --a) {
        idx[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(m));
        rem /= static_cast<std::size_t>(m);
      }
      for (int a = 0; a < d; ++a) {
        auto nb = idx;
        nb[static_cast<std::size_t>(a)] += 1;
        lip = std::max(lip, std::abs(c[c.flat_index(nb)] - c[i]) / h);
      }
    }
  }
  GraphCandidate out;
  out.psi = std::move(psi);
  out.lipschitz = lip;
  return out;
}

GraphCandidate GraphCandidate::constant(int dims, int resolution, std::span<const double> value) {
  if (value.size() != static_cast<std::size_t>(dims)) throw std::invalid_argument("GraphCandidate: value has wrong dimension");
  std::vector<GridFunction> psi;
  for (double v : value) psi.push_back(GridFunction::constant(dims, resolution, v));
  return from_components(std::move(psi));
}

namespace {

void check_candidate(const GeneratingMap& map, const GraphCandidate& cand) {
  if (cand.psi.size() != static_cast<std::size_t>(map.dims()))
    throw std::invalid_argument("graph_residual: candidate dimension does not match map");
  for (const auto& c : cand.psi)
    if (c.dims() != map.dims() || c.resolution() < 4)
      throw std::invalid_argument("graph_residual: candidate not evaluable on its grid");
}

}  // namespace

double graph_residual(const GeneratingMap& map, const GraphCandidate& cand) {
  check_candidate(map, cand);
  const int d = map.dims();
  std::vector<TrigPoly> interp;
  for (const auto& c : cand.psi) interp.push_back(to_spectrum(c));
  const auto& grid = cand.psi.front();
  double worst = 0.0;
  std::vector<double> z(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.point(i);
    for (std::size_t a = 0; a < z.size(); ++a) z[a] = x[a] + cand.psi[a][i];
    const auto g = map.gradient(z);
    for (std::size_t a = 0; a < z.size(); ++a)
      worst = std::max(worst, std::abs(interp[a].evaluate(z) - cand.psi[a][i] - g[a]));
  }
  return worst;
}

double graph_residual_gg(const GeneratingMap& map, const GraphCandidate& cand) {
  check_candidate(map, cand);
  if (map.dims() != 1) throw std::invalid_argument("graph_residual_gg: only defined for d = 1");
  const auto& psi = cand.psi.front();
  const auto p = to_spectrum(psi);
  const auto dp = derivative_poly(p, 0);

  // g = Id + psi must be strictly increasing; probe on a 4x finer grid.
  const int fine = 4 * psi.resolution();
  for (int j = 0; j < fine; ++j) {
    const double x = -kPi + kTwoPi * j / fine;
    const double xs[1] = {x};
    if (1.0 + dp.evaluate(xs) <= 0.0) throw std::domain_error("graph_residual_gg: g = Id + psi is not invertible");
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double x = psi.node(static_cast<int>(i));
    // Newton for s + psi(s) = x
    double s = x - psi[i];
    for (int it = 0; it < 60; ++it) {
      const double ss[1] = {s};
      const double f = s + p.evaluate(ss) - x;
      const double step = f / (1.0 + dp.evaluate(ss));
      s -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double xs[1] = {x};
    const double g = x + psi[i];
    const double phi = map.gradient(xs)[0];
    worst = std::max(worst, std::abs(0.5 * (g + s) - x - 0.5 * phi));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Graph search

std::string GraphSearchReport::to_json() const {
  nlohmann::ordered_json j;
  if (omega.size() == 1)
    j["omega"] = omega.front();
  else
    j["omega"] = omega;
  j["converged"] = converged;
  j["folded"] = folded;
  j["iterations"] = iterations;
  j["final_residual"] = final_residual;
  // JSON has no infinity; an unbounded estimate is written as "inf".
  if (std::isfinite(lipschitz_estimate))
    j["lipschitz_estimate"] = lipschitz_estimate;
  else
    j["lipschitz_estimate"] = "inf";
  j["mm_bound"] = mm_bound;
  j["reason"] = reason;
  return j.dump();
}

namespace {

std::vector<std::vector<Complex>> shift_factors(int resolution, std::span<const double> omega) {
  std::vector<std::vector<Complex>> f;
  for (double w : omega)
    f.push_back(detail::axis_factor(resolution, [w](int xi) { return std::exp(Complex(0.0, xi * w)); }));
  return f;
}

std::vector<std::vector<Complex>> derivative_factors(int dims, int resolution, int axis) {
  std::vector<std::vector<Complex>> f;
  for (int a = 0; a < dims; ++a)
    f.push_back(a == axis ? detail::axis_factor(resolution, [](int xi) { return Complex(0.0, xi); })
                          : std::vector<Complex>(static_cast<std::size_t>(resolution), 1.0));
  return f;
}

GridFunction transformed(const detail::Spectrum& s, const std::vector<std::vector<Complex>>& factors) {
  auto w = s;
  w.apply_axis_factors(factors);
  return w.inverse();
}

// Max of (1/d) Laplacian of Psi on the potential's own grid.
double max_trace(const GeneratingMap& map) {
  const auto& psi = map.potential();
  auto s = detail::Spectrum::forward(psi);
  const int d = psi.dims();
  s.apply([d](std::span<const int> xi) {
    double q = 0.0;
    for (int v : xi) q += static_cast<double>(v) * v;
    return Complex(-q / d);
  });
  return s.inverse().max();
}

}  // namespace

GraphSearchReport graph_transform(const GeneratingMap& map, std::span<const double> omega,
                                  const GraphSearchOptions& opts) {
  const int d = map.dims();
  const int m = opts.resolution;
  if (omega.size() != static_cast<std::size_t>(d)) throw std::invalid_argument("graph_transform: omega has wrong dimension");
  if (opts.max_iter < 1) throw std::invalid_argument("graph_transform: max_iter must be >= 1");
  if (!is_power_of_two(m) || m < 4) throw std::invalid_argument("graph_transform: resolution must be a power of two >= 4");

  GraphSearchReport rep;
  rep.omega.assign(omega.begin(), omega.end());
  rep.mm_bound = lipschitz_bound(std::max(0.0, max_trace(map)));

  std::vector<double> neg_omega(omega.begin(), omega.end());
  for (double& w : neg_omega) w = -w;
  const auto fwd = shift_factors(m, omega);
  const auto bwd = shift_factors(m, neg_omega);
  std::vector<std::vector<std::vector<Complex>>> dfac;
  for (int b = 0; b < d; ++b) dfac.push_back(derivative_factors(d, m, b));

  // Inverse of the second difference u(t+w) - 2u(t) + u(t-w) on each mode.
  auto inverse_difference = [&omega](std::span<const int> xi) {
    double phase = 0.0;
    bool zero = true;
    for (std::size_t a = 0; a < xi.size(); ++a) {
      phase += xi[a] * omega[a];
      zero = zero && xi[a] == 0;
    }
    const double div = 2.0 * std::cos(phase) - 2.0;
    if (zero || std::abs(div) < 1e-12) return Complex(0.0);
    return Complex(1.0 / div);
  };

  std::vector<GridFunction> u(static_cast<std::size_t>(d), GridFunction::zeros(d, m));
  const auto nodes = GridFunction::zeros(d, m);
  double relax = 1.0;
  double prev = kInf;
  std::vector<double> x(static_cast<std::size_t>(d));

  for (int it = 0; it < opts.max_iter; ++it) {
    rep.iterations = it + 1;
    std::vector<detail::Spectrum> spec;
    for (const auto& c : u) spec.push_back(detail::Spectrum::forward(c));

    // Force term dPsi(t + u(t)).
    std::vector<std::vector<double>> force(static_cast<std::size_t>(d), std::vector<double>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto t = nodes.point(i);
      for (std::size_t a = 0; a < x.size(); ++a) x[a] = t[a] + u[a][i];
      const auto g = map.gradient(x);
      for (std::size_t a = 0; a < x.size(); ++a) force[a][i] = g[a];
    }

    double res = 0.0;
    for (std::size_t a = 0; a < u.size(); ++a) {
      const auto ahead = transformed(spec[a], fwd);
      const auto behind = transformed(spec[a], bwd);
      for (std::size_t i = 0; i < nodes.size(); ++i)
        res = std::max(res, std::abs(ahead[i] - 2.0 * u[a][i] + behind[i] - force[a][i]));
    }
    rep.final_residual = res;
    if (!std::isfinite(res)) {
      rep.reason = "diverged";
      rep.lipschitz_estimate = kInf;
      return rep;
    }

    // Dh = I + Du at t and t + w; g = h o R_w o h^-1 so Dg = Dh(t+w) Dh(t)^-1.
    std::vector<std::vector<GridFunction>> du(static_cast<std::size_t>(d)), du_ahead(static_cast<std::size_t>(d));
    for (std::size_t a = 0; a < u.size(); ++a)
      for (int b = 0; b < d; ++b) {
        du[a].push_back(transformed(spec[a], dfac[static_cast<std::size_t>(b)]));
        auto shifted = transformed(spec[a], dfac[static_cast<std::size_t>(b)]);
        du_ahead[a].push_back(transformed(detail::Spectrum::forward(shifted), fwd));
      }
    Eigen::MatrixXd here(d, d), ahead(d, d);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          const double delta = a == b ? 1.0 : 0.0;
          here(a, b) = delta + du[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)][i];
          ahead(a, b) = delta + du_ahead[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)][i];
        }
      if (here.determinant() <= 0.0 || ahead.determinant() <= 0.0) {
        rep.folded = true;
        rep.lipschitz_estimate = kInf;
        rep.reason = "parametrisation folded: invariant set is not a graph";
        return rep;
      }
      const Eigen::MatrixXd dg = ahead * here.inverse();
      const Eigen::MatrixXd dg_inv = here * ahead.inverse();
      const double lg = d == 1 ? std::abs(dg(0, 0)) : dg.jacobiSvd().singularValues()(0);
      const double lgi = d == 1 ? std::abs(dg_inv(0, 0)) : dg_inv.jacobiSvd().singularValues()(0);
      rep.lipschitz_estimate = std::max({rep.lipschitz_estimate, lg, lgi});
    }

    if (res < opts.tol) {
      rep.converged = true;
      rep.reason = "converged";
      break;
    }
    if (res > prev) relax = 0.5;  // stall: damp from here on
    prev = res;

    for (std::size_t a = 0; a < u.size(); ++a) {
      auto fs = detail::Spectrum::forward(GridFunction(d, m, force[a]));
      fs.apply(inverse_difference);
      auto next = fs.inverse();
      u[a] = (1.0 - relax) * u[a] + relax * next;
    }
  }

  if (!rep.converged) {
    rep.reason = "no convergence within " + std::to_string(opts.max_iter) + " iterations";
    return rep;
  }

  // Resample the invariant curve as a graph over the uniform x grid.
  std::vector<TrigPoly> up;
  for (const auto& c : u) up.push_back(to_spectrum(c));
  std::vector<std::vector<TrigPoly>> dup(static_cast<std::size_t>(d));
  for (std::size_t a = 0; a < up.size(); ++a)
    for (int b = 0; b < d; ++b) dup[a].push_back(derivative_poly(up[a], b));

  std::vector<std::vector<double>> psi(static_cast<std::size_t>(d), std::vector<double>(nodes.size()));
  Eigen::VectorXd theta(d), r(d);
  Eigen::MatrixXd jac(d, d);
  std::vector<double> th(static_cast<std::size_t>(d)), ahead_pt(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto target = nodes.point(i);
    for (int a = 0; a < d; ++a) theta(a) = target[static_cast<std::size_t>(a)] - u[static_cast<std::size_t>(a)][i];
    for (int iter = 0; iter < 60; ++iter) {
      for (int a = 0; a < d; ++a) th[static_cast<std::size_t>(a)] = theta(a);
      for (int a = 0; a < d; ++a) {
        r(a) = theta(a) + up[static_cast<std::size_t>(a)].evaluate(th) - target[static_cast<std::size_t>(a)];
        for (int b = 0; b < d; ++b)
          jac(a, b) = (a == b ? 1.0 : 0.0) + dup[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].evaluate(th);
      }
      const Eigen::VectorXd delta = jac.partialPivLu().solve(r);
      theta -= delta;
      if (delta.lpNorm<Eigen::Infinity>() < 1e-15) break;
    }
    for (int a = 0; a < d; ++a) {
      th[static_cast<std::size_t>(a)] = theta(a);
      ahead_pt[static_cast<std::size_t>(a)] = theta(a) + omega[static_cast<std::size_t>(a)];
    }
    for (int a = 0; a < d; ++a)
      psi[static_cast<std::size_t>(a)][i] = omega[static_cast<std::size_t>(a)] +
                                             up[static_cast<std::size_t>(a)].evaluate(ahead_pt) -
                                             up[static_cast<std::size_t>(a)].evaluate(th);
  }
  std::vector<GridFunction> comps;
  for (auto& c : psi) comps.emplace_back(d, m, std::move(c));
  rep.candidate = GraphCandidate::from_components(std::move(comps));
  return rep;
}

}  // namespace lagtori
