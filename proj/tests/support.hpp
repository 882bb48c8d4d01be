#ifndef LAGTORI_TESTS_SUPPORT_HPP
#define LAGTORI_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include "lagtori/grid.hpp"

namespace testing {

using lagtori::Complex;
using lagtori::GridFunction;
using lagtori::TrigPoly;

/// Random real trigonometric polynomial of the given degree.
inline TrigPoly random_poly(int dims, int degree, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  TrigPoly p(dims, degree);
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    const auto xi = p.frequency(i);
    std::vector<int> neg(xi.size());
    for (std::size_t a = 0; a < xi.size(); ++a) neg[a] = -xi[a];
    if (neg < xi) continue;
    if (neg == xi) {
      p.set_coeff(xi, Complex(g(rng), 0.0));
    } else {
      const Complex c(g(rng), g(rng));
      p.set_coeff(xi, c);
      p.set_coeff(neg, std::conj(c));
    }
  }
  return p;
}

inline GridFunction random_samples(int dims, int resolution, std::mt19937_64& rng, double lo = -1.0,
                                   double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(std::pow(resolution, dims)));
  for (double& x : v) x = u(rng);
  return GridFunction(dims, resolution, std::move(v));
}

/// max |a - b| over the grid
inline double max_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_coeff_diff(const TrigPoly& a, const TrigPoly& b) {
  const int deg = std::max(a.degree(), b.degree());
  const auto aa = a.with_degree(deg);
  const auto bb = b.with_degree(deg);
  double m = 0.0;
  for (std::size_t i = 0; i < aa.coeffs().size(); ++i) m = std::max(m, std::abs(aa.coeffs()[i] - bb.coeffs()[i]));
  return m;
}

}  // namespace testing

#endif
