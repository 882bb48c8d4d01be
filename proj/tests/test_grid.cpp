#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "lagtori/construct.hpp"
#include "lagtori/fit.hpp"
#include "lagtori/grid.hpp"
#include "lagtori/grid_io.hpp"
#include "support.hpp"

using namespace lagtori;
using testing::max_coeff_diff;
using testing::max_diff;

namespace {

// Plain O(M^2d) DFT with the Nyquist value split between +-M/2.
TrigPoly direct_dft(const GridFunction& f) {
  const int d = f.dims();
  const int m = f.resolution();
  TrigPoly p(d, m / 2);
  for (std::size_t c = 0; c < p.coeffs().size(); ++c) {
    const auto xi = p.frequency(c);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto x = f.point(i);
      double phase = 0.0;
      for (int a = 0; a < d; ++a) phase += xi[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
      acc += f[i] * std::exp(Complex(0.0, -phase));
    }
    acc /= static_cast<double>(f.size());
    for (int v : xi)
      if (std::abs(v) == m / 2) acc *= 0.5;
    p.set_coeff(xi, acc);
  }
  return p;
}

}  // namespace

TEST_CASE("grid basics") {
  CHECK(is_power_of_two(64));
  CHECK_FALSE(is_power_of_two(48));
  CHECK(next_power_of_two(300) == 512);
  CHECK(wrap_angle(kPi) == doctest::Approx(-kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(-kPi));
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - kTwoPi));

  CHECK_THROWS_AS(GridFunction(1, 6, std::vector<double>(6)), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(1, 4, std::vector<double>(3)), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(1, 4, {0.0, 1.0, NAN, 0.0}), std::invalid_argument);

  const auto g = GridFunction::zeros(2, 8);
  CHECK(g.size() == 64);
  CHECK(g.node(0) == -kPi);
  CHECK(g.point(9) == std::vector<double>{g.node(1), g.node(1)});
  const int idx[] = {1, 1};
  CHECK(g.flat_index(idx) == 9);
}

TEST_CASE("to_spectrum") {
  SUBCASE("constant") {
    const auto p = to_spectrum(GridFunction::constant(2, 8, 3.0));
    CHECK(p.coeff({0, 0}).real() == doctest::Approx(3.0));
    double rest = 0.0;
    for (std::size_t i = 1; i < p.coeffs().size(); ++i)
      if (p.frequency(i) != std::vector<int>{0, 0}) rest = std::max(rest, std::abs(p.coeffs()[i]));
    CHECK(rest < 1e-15);
  }
  SUBCASE("single mode") {
    const auto f = GridFunction::sample(2, 16, [](std::span<const double> x) { return std::cos(x[0]); });
    const auto p = to_spectrum(f);
    CHECK(std::abs(p.coeff({1, 0}) - 0.5) < 1e-15);
    CHECK(std::abs(p.coeff({-1, 0}) - 0.5) < 1e-15);
    CHECK(std::abs(p.coeff({0, 1})) < 1e-15);
  }
  SUBCASE("matches direct DFT") {
    std::mt19937_64 rng(1);
    for (int d : {1, 2}) {
      const auto f = testing::random_samples(d, d == 1 ? 8 : 4, rng);
      const auto p = to_spectrum(f);
      CHECK(max_coeff_diff(p, direct_dft(f)) < 1e-14);
      CHECK(p.hermitian_defect() < 1e-15);
      CHECK(max_diff(from_spectrum(p, f.resolution()), f) < 1e-12);
    }
  }
  SUBCASE("rejects tiny grid") { CHECK_THROWS(to_spectrum(GridFunction::zeros(1, 2))); }
}

TEST_CASE("from_spectrum") {
  CHECK(c0_norm(from_spectrum(TrigPoly(2, 3), 8)) == 0.0);
  TrigPoly c(1, 1);
  c.set_coeff({1}, 0.5);
  c.set_coeff({-1}, 0.5);
  const auto g = from_spectrum(c, 16);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == doctest::Approx(std::cos(g.node(static_cast<int>(i)))));

  std::mt19937_64 rng(2);
  const auto p = testing::random_poly(2, 5, rng);
  CHECK(max_coeff_diff(to_spectrum(from_spectrum(p, 16)), p) < 1e-12);
  CHECK_THROWS_AS(from_spectrum(p, 8), ResolutionError);

  // Evaluation at nodes equals pointwise evaluation.
  const auto s = from_spectrum(p, 16);
  for (std::size_t i = 0; i < s.size(); i += 37) CHECK(s[i] == doctest::Approx(p.evaluate(s.point(i))).epsilon(1e-12));
}

TEST_CASE("spectral_derivative") {
  for (int n : {1, 3, 7}) {
    const auto f = GridFunction::sample(1, 32, [n](std::span<const double> x) { return std::sin(n * x[0]); });
    const auto df = spectral_derivative(f, 0, 1);
    const auto oracle = GridFunction::sample(1, 32, [n](std::span<const double> x) { return n * std::cos(n * x[0]); });
    CHECK(max_diff(df, oracle) < 1e-9);
  }
  CHECK(c0_norm(spectral_derivative(GridFunction::constant(2, 8, 4.0), 1, 3)) < 1e-14);

  for (int n : {1, 4}) {
    const auto d = spectral_derivative(toy_phi(n), 0, 1);
    CHECK(max_diff(d, toy_dphi(n)) < 1e-12);
  }
  CHECK_THROWS_AS(spectral_derivative(GridFunction::zeros(1, 8), 0, -1), std::invalid_argument);
  CHECK_THROWS_AS(spectral_derivative(GridFunction::zeros(1, 8), 1, 1), std::invalid_argument);
}

TEST_CASE("spectral_derivative is linear and commutes across axes") {
  std::mt19937_64 rng(3);
  const auto f = from_spectrum(testing::random_poly(2, 6, rng), 32);
  const auto g = from_spectrum(testing::random_poly(2, 6, rng), 32);
  const auto lhs = spectral_derivative(2.0 * f - 3.0 * g, 0, 2);
  const auto rhs = 2.0 * spectral_derivative(f, 0, 2) - 3.0 * spectral_derivative(g, 0, 2);
  CHECK(max_diff(lhs, rhs) < 1e-9);
  const auto xy = spectral_derivative(spectral_derivative(f, 0, 1), 1, 2);
  const auto yx = spectral_derivative(spectral_derivative(f, 1, 2), 0, 1);
  CHECK(max_diff(xy, yx) < 1e-9);
  const int beta[] = {1, 2};
  CHECK(max_diff(spectral_derivative(f, beta), xy) < 1e-9);
}

TEST_CASE("c0_norm") {
  CHECK(c0_norm(GridFunction::zeros(1, 8)) == 0.0);
  const auto c = GridFunction::sample(2, 8, [](std::span<const double> x) { return std::cos(x[0]); });
  CHECK(c0_norm(c) == 1.0);

  for (int n : {1, 2, 5}) {
    const double measured = c0_norm(toy_phi(n));
    CHECK(measured <= 11.0 / (8.0 * n));
    double dense = 0.0;
    const int samples = 1'000'000;
    for (int i = 0; i < samples; ++i) {
      const double x = -kPi + kTwoPi * i / samples;
      dense = std::max(dense, std::abs(-1.25 / n * std::cos(n * x) + 0.125 / n * std::sin(2.0 * n * x)));
    }
    CHECK(measured == doctest::Approx(dense).epsilon(0.01));
  }
}

TEST_CASE("c0_norm is a seminorm on samples") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto f = testing::random_samples(2, 8, rng);
    const auto g = testing::random_samples(2, 8, rng);
    CHECK(c0_norm(f + g) <= c0_norm(f) + c0_norm(g));
    CHECK(c0_norm(-2.5 * f) == 2.5 * c0_norm(f));
  }
}

TEST_CASE("cr_norm") {
  CHECK(cr_norm(GridFunction::constant(2, 8, -1.75), 3) == doctest::Approx(1.75));
  const auto s = GridFunction::sample(2, 32, [](std::span<const double> x) { return std::sin(5 * x[0]); });
  CHECK(std::abs(cr_norm(s, 2) - 25.0) < 1e-6);

  const auto all = cr_norms(s, 4);
  REQUIRE(all.size() == 5);
  for (int r = 0; r <= 4; ++r) CHECK(all[static_cast<std::size_t>(r)] == doctest::Approx(cr_norm(s, r)));

  for (int k = 1; k <= 6; ++k) {
    const auto f = GridFunction::sample(1, 64, [k](std::span<const double> x) { return std::sin(k * x[0]); });
    const auto v = cr_norms(f, 5);
    for (std::size_t r = 1; r < v.size(); ++r) CHECK(v[r] >= v[r - 1]);
  }
}

TEST_CASE("holder_norm") {
  CHECK(holder_norm(GridFunction::zeros(1, 8), 0, 0.5) == 0.0);
  const auto c = GridFunction::sample(1, 16, [](std::span<const double> x) { return std::cos(x[0]); });
  CHECK(holder_norm(c, 0, 0.5) <= 2.0 + 1e-12);
  CHECK_THROWS_AS(holder_norm(c, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(holder_norm(c, 0, 0.0), std::invalid_argument);

  const double delta = 0.1;
  std::vector<double> ns, hs;
  for (int n : {2, 4, 8, 16, 32, 64}) {
    const double h = holder_norm(toy_phi(n), 0, 1.0 - delta);
    CHECK(h <= 2.0 * std::pow(11.0 / (8.0 * n), delta) * std::pow(1.5 + 1e-9, 1.0 - delta));
    ns.push_back(n);
    hs.push_back(h);
  }
  CHECK(loglog_slope(ns, hs) < 0.0);

  const std::pair<int, double> orders[] = {{0, 0.5}, {1, 0.25}};
  const auto rep = measure_norms(c, 2, orders);
  CHECK(rep.c0 == 1.0);
  CHECK(rep.cr.size() == 3);
  CHECK(rep.holder.at({0, 0.5}) == doctest::Approx(holder_norm(c, 0, 0.5)));
  CHECK(rep.holder.at({1, 0.25}) == doctest::Approx(holder_norm(c, 1, 0.25)));
}

TEST_CASE("Parseval") {
  std::mt19937_64 rng(5);
  for (int d : {1, 2, 3}) {
    const auto f = testing::random_samples(d, 8, rng);
    const auto p = to_spectrum(f);
    double energy = 0.0;
    for (auto c : p.coeffs()) energy += std::norm(c);
    // Each split Nyquist half carries 1/4 of the mode energy; restore the
    // full contribution per Nyquist axis.
    double split = 0.0;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
      int nyq = 0;
      for (int v : p.frequency(i)) nyq += std::abs(v) == 4 ? 1 : 0;
      split += std::norm(p.coeffs()[i]) * (std::pow(2.0, nyq) - 1.0);
    }
    double mean_sq = 0.0;
    for (double v : f.values()) mean_sq += v * v;
    mean_sq /= static_cast<double>(f.size());
    CHECK(energy + split == doctest::Approx(mean_sq).epsilon(1e-10));
  }
}

TEST_CASE("trig poly evaluation and complex step") {
  std::mt19937_64 rng(6);
  const auto p = testing::random_poly(2, 4, rng);
  const double x[] = {0.3, -1.1};
  const double h = 1e-30;
  const Complex xc[] = {Complex(0.3, h), Complex(-1.1, 0.0)};
  const double ds = p.evaluate(xc).imag() / h;
  const auto dp = p.multiplied([](std::span<const int> xi) { return Complex(0.0, xi[0]); });
  CHECK(ds == doctest::Approx(dp.evaluate(x)).epsilon(1e-12));
  CHECK(p.mean() == doctest::Approx(p.coeff({0, 0}).real()));
}

TEST_CASE("grid io round trip") {
  std::mt19937_64 rng(7);
  const auto f = testing::random_samples(2, 8, rng);
  std::stringstream bin;
  write_binary(bin, f);
  CHECK(bin.str().size() == 16 + 8 * 64);
  const auto g = read_binary(bin);
  CHECK(g.dims() == 2);
  CHECK(max_diff(f, g) == 0.0);

  std::stringstream csv;
  write_csv(csv, f);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "x1,x2,value");
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == 64);
}

TEST_CASE("loglog_slope") {
  const double x[] = {1, 2, 4, 8};
  const double y[] = {3, 12, 48, 192};
  CHECK(loglog_slope(x, y) == doctest::Approx(2.0));
  const double one[] = {1};
  CHECK(std::isnan(loglog_slope(one, one)));
  const double bad[] = {1, -1, 1, 1};
  CHECK(std::isnan(loglog_slope(x, bad)));
}
