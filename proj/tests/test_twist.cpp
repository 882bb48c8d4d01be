#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "json.hpp"
#include "lagtori/construct.hpp"
#include "lagtori/twist.hpp"
#include "support.hpp"

using namespace lagtori;

namespace {

TrigPoly small_cos(double amp) {
  TrigPoly p(1, 1);
  p.set_coeff({1}, 0.5 * amp);
  p.set_coeff({-1}, 0.5 * amp);
  return p;
}

// A mean-zero d = 2 potential with mixed modes.
TrigPoly mixed_potential() {
  std::mt19937_64 rng(31);
  auto p = testing::random_poly(2, 3, rng, 0.1);
  p.set_coeff({0, 0}, 0.0);
  return p;
}

// h(x, x') evaluated with a complex perturbation of one coordinate.
Complex h_complex(const TrigPoly& psi, std::vector<Complex> x, std::vector<Complex> xp) {
  Complex q = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) q += (x[a] - xp[a]) * (x[a] - xp[a]);
  return 0.5 * q + psi.evaluate(xp);
}

}  // namespace

TEST_CASE("integrable map") {
  const auto map = GeneratingMap::integrable(2);
  const auto s = map.step({{0.5, -1.0}, {0.25, 0.75}});
  CHECK(s.x[0] == doctest::Approx(0.75));
  CHECK(s.x[1] == doctest::Approx(-0.25));
  CHECK(s.y == std::vector<double>{0.25, 0.75});

  const auto m1 = GeneratingMap::integrable(1);
  const double w = 0.6180339887;
  const auto orbit = m1.orbit({{0.1}, {w}}, 1000);
  CHECK(orbit.size() == 1001);
  for (const auto& st : orbit) {
    CHECK(st.y[0] == w);
    CHECK(st.x[0] >= -kPi);
    CHECK(st.x[0] < kPi);
  }
}

TEST_CASE("GeneratingMap validation") {
  CHECK_THROWS_AS(GeneratingMap(GridFunction::constant(1, 16, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(GeneratingMap(toy_potential(8), 16), ResolutionError);
  const auto map = GeneratingMap::integrable(2);
  const double x[] = {0.0};
  CHECK_THROWS_AS(map.gradient(x), std::invalid_argument);
}

TEST_CASE("symplectic and exact") {
  const auto psi = mixed_potential();
  const GeneratingMap map(psi, 32);
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const double h = 1e-30;
  for (int t = 0; t < 1000; ++t) {
    const State st{{u(rng), u(rng)}, {u(rng), u(rng)}};
    const auto j = map.jacobian(st);
    CHECK(std::abs(j.determinant() - 1.0) < 1e-10);
    CHECK(map.twist_block(st) == Eigen::MatrixXd::Identity(2, 2));
    if (t % 50 != 0) continue;

    // y = -d1 h(x, x'), y' = d2 h(x, x') by complex step.
    const auto next = map.step_lifted(st);
    for (std::size_t a = 0; a < 2; ++a) {
      std::vector<Complex> x(st.x.begin(), st.x.end()), xp(next.x.begin(), next.x.end());
      x[a] += Complex(0.0, h);
      CHECK(-h_complex(psi, x, xp).imag() / h == doctest::Approx(st.y[a]).epsilon(1e-10));
      x[a] -= Complex(0.0, h);
      xp[a] += Complex(0.0, h);
      CHECK(h_complex(psi, x, xp).imag() / h == doctest::Approx(next.y[a]).epsilon(1e-10));
    }
    CHECK(map.generating_function(st.x, next.x) == doctest::Approx(h_complex(psi, {st.x[0], st.x[1]}, {next.x[0], next.x[1]}).real()));

    // Jacobian against central differences.
    const double e = 1e-6;
    for (int c = 0; c < 4; ++c) {
      State p = st, m = st;
      auto& pv = c < 2 ? p.x : p.y;
      auto& mv = c < 2 ? m.x : m.y;
      pv[static_cast<std::size_t>(c % 2)] += e;
      mv[static_cast<std::size_t>(c % 2)] -= e;
      const auto fp = map.step_lifted(p);
      const auto fm = map.step_lifted(m);
      for (int r = 0; r < 4; ++r) {
        const double dp = r < 2 ? fp.x[static_cast<std::size_t>(r)] : fp.y[static_cast<std::size_t>(r - 2)];
        const double dm = r < 2 ? fm.x[static_cast<std::size_t>(r)] : fm.y[static_cast<std::size_t>(r - 2)];
        CHECK(std::abs((dp - dm) / (2 * e) - j(r, c)) < 1e-6);
      }
    }
  }
}

TEST_CASE("gradient and hessian") {
  const auto psi = mixed_potential();
  const GeneratingMap map(psi, 32);
  const double x[] = {0.4, -2.2};
  const double h = 1e-30;
  for (int a = 0; a < 2; ++a) {
    std::vector<Complex> xc{x[0], x[1]};
    xc[static_cast<std::size_t>(a)] += Complex(0.0, h);
    CHECK(map.gradient(x)[static_cast<std::size_t>(a)] == doctest::Approx(psi.evaluate(xc).imag() / h).epsilon(1e-12));
  }
  const auto H = map.hessian(x);
  CHECK(H(0, 1) == H(1, 0));
  CHECK(map.potential_at(x) == doctest::Approx(psi.evaluate(x)));
}

TEST_CASE("lipschitz_bound") {
  CHECK(lipschitz_bound(0.0) == 1.0);
  CHECK(lipschitz_bound(1.0) == doctest::Approx(1.5 + std::sqrt(5.0) / 2));
  CHECK(std::abs(lipschitz_bound(1.0) - 2.618034) < 1e-6);
  CHECK(std::abs(lipschitz_bound(0.01) - 1.105) < 1e-3);
  CHECK_THROWS_AS(lipschitz_bound(-2.5), std::domain_error);
  CHECK_THROWS_AS(lipschitz_bound(-1.0), std::domain_error);
}

TEST_CASE("graph residuals") {
  const double w[] = {0.7};
  const auto integrable = GeneratingMap::integrable(1, 64);
  const auto flat = GraphCandidate::constant(1, 64, w);
  CHECK(flat.lipschitz == 0.0);
  CHECK(graph_residual(integrable, flat) < 1e-12);
  CHECK(graph_residual_gg(integrable, flat) < 1e-12);

  const double zero[] = {0.0};
  for (int n : {1, 2}) {
    const auto map = toy_generating(n, 64);
    CHECK(graph_residual(map, GraphCandidate::constant(1, 64, zero)) ==
          doctest::Approx(c0_norm(toy_phi(n, 64))).epsilon(1e-12));
  }

  const auto sine = GraphCandidate::from_components(
      {GridFunction::sample(1, 256, [](std::span<const double> x) { return std::sin(x[0]); })});
  CHECK(sine.lipschitz == doctest::Approx(1.0).epsilon(1e-3));

  const auto fold = GraphCandidate::from_components(
      {GridFunction::sample(1, 64, [](std::span<const double> x) { return -2.0 * std::sin(x[0]); })});
  CHECK_THROWS_AS(graph_residual_gg(integrable, fold), std::domain_error);
  CHECK_THROWS_AS(graph_residual(GeneratingMap::integrable(2, 16), flat), std::invalid_argument);
  CHECK_THROWS_AS(GraphCandidate::from_components({}), std::invalid_argument);
}

TEST_CASE("graph_transform") {
  SUBCASE("integrable converges in one step") {
    for (int d : {1, 2}) {
      const auto map = GeneratingMap::integrable(d, 16);
      const std::vector<double> w(static_cast<std::size_t>(d), 1.234);
      GraphSearchOptions opts;
      opts.resolution = 32;
      const auto rep = graph_transform(map, w, opts);
      CHECK(rep.converged);
      CHECK(rep.iterations == 1);
      REQUIRE(rep.candidate);
      for (const auto& c : rep.candidate->psi) CHECK(c0_norm(c - GridFunction::constant(d, 32, 1.234)) < 1e-14);
      CHECK(graph_residual(map, *rep.candidate) < 1e-12);
    }
  }
  SUBCASE("small perturbation converges") {
    const GeneratingMap map(small_cos(1e-6), 256);
    const double w[] = {kTwoPi * (std::sqrt(5.0) - 1.0) / 2.0};
    const auto rep = graph_transform(map, w);
    CHECK(rep.converged);
    CHECK_FALSE(rep.folded);
    REQUIRE(rep.candidate);
    CHECK(graph_residual(map, *rep.candidate) < 1e-8);
    CHECK(graph_residual_gg(map, *rep.candidate) < 1e-8);
    CHECK(rep.lipschitz_estimate < rep.mm_bound);
  }
  SUBCASE("d = 2 small perturbation converges") {
    TrigPoly p(2, 1);
    p.set_coeff({1, 0}, 0.5e-6);
    p.set_coeff({-1, 0}, 0.5e-6);
    p.set_coeff({0, 1}, 0.25e-6);
    p.set_coeff({0, -1}, 0.25e-6);
    const GeneratingMap map(p, 32);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    const double w[] = {kTwoPi * g, kTwoPi * std::sqrt(2.0)};
    GraphSearchOptions opts;
    opts.resolution = 32;
    const auto rep = graph_transform(map, w, opts);
    CHECK(rep.converged);
    REQUIRE(rep.candidate);
    CHECK(graph_residual(map, *rep.candidate) < 1e-8);
  }
  SUBCASE("toy map fails with diagnostics") {
    const auto map = toy_generating(1);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int j = 0; j < 8; ++j) {
      const double w[] = {kTwoPi * (j + g) / 8};
      const auto rep = graph_transform(map, w);
      CHECK_FALSE(rep.converged);
      CHECK_FALSE(rep.candidate);
      CHECK(rep.mm_bound == doctest::Approx(lipschitz_bound(1.0)).epsilon(1e-9));
      CHECK(rep.lipschitz_estimate > rep.mm_bound);
      CHECK(rep.iterations >= 1);
      const auto js = nlohmann::json::parse(rep.to_json());
      for (const char* key : {"omega", "iterations", "final_residual", "lipschitz_estimate", "mm_bound"})
        CHECK(js.contains(key));
      if (rep.folded) CHECK(js["lipschitz_estimate"] == "inf");
    }
  }
  SUBCASE("argument checks") {
    const auto map = GeneratingMap::integrable(1);
    const double w2[] = {0.1, 0.2};
    CHECK_THROWS_AS(graph_transform(map, w2), std::invalid_argument);
    GraphSearchOptions bad;
    bad.resolution = 100;
    const double w[] = {0.1};
    CHECK_THROWS_AS(graph_transform(map, w, bad), std::invalid_argument);
  }
}
