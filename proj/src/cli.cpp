#include "lagtori/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "json.hpp"
#include "lagtori/construct.hpp"
#include "lagtori/fit.hpp"
#include "lagtori/grid_io.hpp"
#include "lagtori/twist.hpp"

namespace lagtori {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Writes to cfg.out when set, else to the given stream.
template <class Fn>
void emit(const RunConfig& cfg, std::ostream& out, Fn&& fn) {
  if (cfg.out.empty()) {
    fn(out);
    return;
  }
  if (cfg.out.has_parent_path()) std::filesystem::create_directories(cfg.out.parent_path());
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + cfg.out.string());
  fn(f);
}

SlopeCheck make_check(std::string quantity, std::string label, double target, double tol,
                      const std::vector<double>& x, const std::vector<double>& y) {
  SlopeCheck c;
  c.quantity = std::move(quantity);
  c.target_label = std::move(label);
  c.target = target;
  c.tolerance = tol;
  c.measured = loglog_slope(x, y);
  if (std::isnan(c.measured))
    c.pass = false;
  else if (std::isnan(target))
    c.pass = c.measured < 0.0;
  else
    c.pass = std::abs(c.measured - target) <= tol;
  return c;
}

void write_slope_footer(std::ostream& out, const std::vector<SlopeCheck>& slopes) {
  for (const auto& s : slopes)
    fmt::print(out, "# slope({}) target {} measured {} tol {} {}\n", s.quantity, s.target_label, num(s.measured),
               s.tolerance, std::isnan(s.measured) ? "nan" : (s.pass ? "pass" : "fail"));
}

Json slopes_json(const std::vector<SlopeCheck>& slopes) {
  Json arr = Json::array();
  for (const auto& s : slopes) {
    Json j;
    j["quantity"] = s.quantity;
    j["target"] = s.target_label;
    j["measured"] = s.measured;  // NaN is written as null
    j["tolerance"] = s.tolerance;
    j["pass"] = s.pass;
    arr.push_back(j);
  }
  return arr;
}

void warn_degenerate(std::size_t points, std::ostream& err) {
  if (points < 2) fmt::print(err, "warning: fewer than two n values, slopes are NaN\n");
}

}  // namespace

void RunConfig::validate() const {
  if (d < 1) throw std::invalid_argument("--d must be >= 1");
  if (n_list.empty()) throw std::invalid_argument("need --n or a nonempty --n-list");
  for (int n : n_list)
    if (n < 1) throw std::invalid_argument("n values must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("--eps must lie in (0, 1)");
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("--sigma must lie in (0, 1)");
  if (resolution != 0 && (!is_power_of_two(resolution) || resolution < 4))
    throw std::invalid_argument("--res must be a power of two >= 4");
  if (format != "csv" && format != "json") throw std::invalid_argument("--format must be csv or json");
  if (omegas < 1) throw std::invalid_argument("--omegas must be >= 1");
}

// ---------------------------------------------------------------------------
// toy

int run_toy(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const auto ns = sorted_unique(cfg.n_list);
  const double alpha = 1.0 - cfg.eps;

  struct Row {
    int n, resolution;
    CriterionReport crit;
    double c0, holder;
  };
  std::vector<Row> rows;
  std::vector<double> xs, c0s, hs;
  bool all = true;
  for (int n : ns) {
    const auto phi = toy_phi(n, cfg.resolution);
    const auto dphi = spectral_derivative(phi, 0, 1);
    Row r{n, phi.resolution(), check_1d(dphi.min(), dphi.max(), fmt::format("toy n={}", n)), c0_norm(phi),
          holder_norm(phi, 0, alpha)};
    all = all && r.crit.satisfied;
    xs.push_back(n);
    c0s.push_back(r.c0);
    hs.push_back(r.holder);
    rows.push_back(std::move(r));
  }
  warn_degenerate(xs.size(), err);
  const std::vector<SlopeCheck> slopes{make_check("c0_phi", "-1", -1.0, 0.05, xs, c0s),
                                       make_check("holder_phi", "<0", kNaN, 0.0, xs, hs)};

  emit(cfg, out, [&](std::ostream& o) {
    if (cfg.format == "json") {
      Json j;
      j["command"] = "toy";
      j["delta"] = cfg.eps;
      Json arr = Json::array();
      for (const auto& r : rows) {
        Json row;
        row["n"] = r.n;
        row["resolution"] = r.resolution;
        row["min_dphi"] = r.crit.minT;
        row["max_dphi"] = r.crit.maxT;
        row["lhs"] = r.crit.lhs;
        row["rhs"] = r.crit.rhs;
        row["satisfied"] = r.crit.satisfied;
        row["c0_phi"] = r.c0;
        row["holder_phi"] = r.holder;
        arr.push_back(row);
      }
      j["rows"] = arr;
      j["slopes"] = slopes_json(slopes);
      o << j.dump(2) << '\n';
      return;
    }
    o << "n,resolution,min_dphi,max_dphi,lhs,rhs,satisfied,c0_phi,holder_phi\n";
    for (const auto& r : rows)
      fmt::print(o, "{},{},{},{},{},{},{},{},{}\n", r.n, r.resolution, num(r.crit.minT), num(r.crit.maxT),
                 num(r.crit.lhs), num(r.crit.rhs), r.crit.satisfied ? 1 : 0, num(r.c0), num(r.holder));
    write_slope_footer(o, slopes);
  });
  return all ? kExitOk : kExitUnsatisfied;
}

// ---------------------------------------------------------------------------
// sweep

std::vector<SweepRow> sweep_family(int d, std::vector<int> n_list, double eps, double sigma, int resolution) {
  std::vector<SweepRow> rows;
  for (int n : sorted_unique(std::move(n_list))) {
    const auto spec = BumpSpec::analytic(d, n);
    const int m = resolution != 0 ? resolution : default_resolution(spec);
    const auto bump = make_bump(spec, m);
    const auto sp = ScalingParams::make(d, n, eps);
    const auto ap = approximate_and_normalize(bump.values, sp, sigma);
    const auto psi = from_spectrum(poisson_solve(ap.p_tilde), m);

    SweepRow r;
    r.n = n;
    r.m = ap.m;
    r.N = ap.N;
    r.resolution = m;
    r.R_n = spec.minus_radius;
    r.minus_amplitude = bump.minus_amplitude;
    r.cr_T = cr_norms(bump.values, sp.k);
    r.max_p = ap.p_tilde_grid.max();
    r.min_p = ap.p_tilde_grid.min();
    r.cr_p = cr_norms(ap.p_tilde_grid, d + 1);
    r.cr_psi = cr_norms(psi, d + 1);
    r.criterion = verdict_pipeline(psi, fmt::format("analytic d={} n={}", d, n));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SlopeCheck> sweep_slopes(const std::vector<SweepRow>& rows, int d, double eps) {
  const auto sp = ScalingParams::make(d, rows.empty() ? 2 : rows.front().n, eps);
  std::vector<double> x, crt, nn, mx, mn;
  for (const auto& r : rows) {
    x.push_back(r.n);
    crt.push_back(r.cr_T.back());
    nn.push_back(r.N);
    mx.push_back(r.max_p);
    mn.push_back(-r.min_p);
  }
  std::vector<SlopeCheck> out;
  out.push_back(make_check(fmt::format("cr_T_{}", sp.k), fmt::format("k/d+1={}", num(1.0 * sp.k / d + 1.0)),
                           1.0 * sp.k / d + 1.0, 0.15, x, crt));
  out.push_back(make_check("N", fmt::format("1/d+1/k={}", num(1.0 / d + 1.0 / sp.k)), 1.0 / d + 1.0 / sp.k, 0.15, x,
                           nn));
  out.push_back(make_check("max_p", fmt::format("-(2-eps)={}", num(-(2.0 - eps))), -(2.0 - eps), 0.15, x, mx));
  out.push_back(make_check("neg_min_p", fmt::format("-(1-eps)={}", num(-(1.0 - eps))), -(1.0 - eps), 0.15, x, mn));
  for (int r = 0; r <= sp.max_order_p(); ++r) {
    std::vector<double> y;
    for (const auto& row : rows) y.push_back(row.cr_p[static_cast<std::size_t>(r)]);
    out.push_back(make_check(fmt::format("cr_p_{}", r), "<0", kNaN, 0.0, x, y));
  }
  for (int r = 0; r <= sp.max_order_psi(); ++r) {
    std::vector<double> y;
    for (const auto& row : rows) y.push_back(row.cr_psi[static_cast<std::size_t>(r)]);
    out.push_back(make_check(fmt::format("cr_psi_{}", r), "<0", kNaN, 0.0, x, y));
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, const std::vector<SlopeCheck>& slopes,
                     int d, double eps) {
  const auto sp = ScalingParams::make(d, 2, eps);
  out << "n,m,N,resolution,R_n,minus_amplitude," << fmt::format("cr_T_{}", sp.k) << ",max_p,min_p";
  for (int r = 0; r <= d + 1; ++r) out << ",cr_p_" << r;
  for (int r = 0; r <= d + 1; ++r) out << ",cr_psi_" << r;
  out << ",lhs,rhs,satisfied,asymptotic_satisfied\n";
  for (const auto& row : rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{}", row.n, row.m, row.N, row.resolution, num(row.R_n),
               num(row.minus_amplitude), num(row.cr_T.back()), num(row.max_p), num(row.min_p));
    for (double v : row.cr_p) out << ',' << num(v);
    for (double v : row.cr_psi) out << ',' << num(v);
    fmt::print(out, ",{},{},{},{}\n", num(row.criterion.lhs), num(row.criterion.rhs), row.criterion.satisfied ? 1 : 0,
               row.criterion.asymptotic_satisfied ? 1 : 0);
  }
  write_slope_footer(out, slopes);
}

int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const auto rows = sweep_family(cfg.d, cfg.n_list, cfg.eps, cfg.sigma, cfg.resolution);
  warn_degenerate(rows.size(), err);
  const auto slopes = sweep_slopes(rows, cfg.d, cfg.eps);
  emit(cfg, out, [&](std::ostream& o) {
    if (cfg.format == "csv") {
      write_sweep_csv(o, rows, slopes, cfg.d, cfg.eps);
      return;
    }
    const auto sp = ScalingParams::make(cfg.d, 2, cfg.eps);
    Json j;
    j["command"] = "sweep";
    j["d"] = cfg.d;
    j["eps"] = cfg.eps;
    j["sigma"] = cfg.sigma;
    j["k"] = sp.k;
    j["delta"] = sp.delta;
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json row;
      row["n"] = r.n;
      row["m"] = r.m;
      row["N"] = r.N;
      row["resolution"] = r.resolution;
      row["R_n"] = r.R_n;
      row["minus_amplitude"] = r.minus_amplitude;
      row["cr_T"] = r.cr_T;
      row["max_p"] = r.max_p;
      row["min_p"] = r.min_p;
      row["cr_p"] = r.cr_p;
      row["cr_psi"] = r.cr_psi;
      row["criterion"] = Json::parse(r.criterion.to_json());
      arr.push_back(row);
    }
    j["rows"] = arr;
    j["slopes"] = slopes_json(slopes);
    o << j.dump(2) << '\n';
  });
  return kExitOk;
}

// ---------------------------------------------------------------------------
// construct

int run_construct(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  cfg.validate();
  if (cfg.n_list.size() != 1) throw std::invalid_argument("construct takes a single --n");
  const int n = cfg.n_list.front();
  const auto spec = BumpSpec::analytic(cfg.d, n);
  const int m = cfg.resolution != 0 ? cfg.resolution : default_resolution(spec);
  const auto bump = make_bump(spec, m);
  const auto sp = ScalingParams::make(cfg.d, n, cfg.eps);
  const auto ap = approximate_and_normalize(bump.values, sp, cfg.sigma);
  const auto psi = from_spectrum(poisson_solve(ap.p_tilde), m);
  const auto report = verdict_pipeline(psi, fmt::format("analytic d={} n={}", cfg.d, n));

  const auto dir = cfg.out.empty() ? std::filesystem::path("construct_out") : cfg.out;
  std::filesystem::create_directories(dir);
  const std::pair<const char*, const GridFunction*> fields[] = {
      {"t_tilde", &bump.values}, {"p_tilde", &ap.p_tilde_grid}, {"psi_tilde", &psi}};
  for (const auto& [name, f] : fields) {
    save_binary(dir / (std::string(name) + ".bin"), *f);
    save_csv(dir / (std::string(name) + ".csv"), *f);
  }

  Json j = Json::parse(report.to_json());
  Json c;
  c["n"] = n;
  c["eps"] = cfg.eps;
  c["sigma"] = cfg.sigma;
  c["k"] = sp.k;
  c["delta"] = sp.delta;
  c["resolution"] = m;
  c["m"] = ap.m;
  c["N"] = ap.N;
  c["approx_error"] = ap.error;
  c["seed"] = cfg.seed;
  j["construction"] = c;
  {
    std::ofstream f(dir / "criterion.json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write criterion.json");
    f << j.dump(2) << '\n';
  }
  if (cfg.format == "json")
    out << j.dump(2) << '\n';
  else
    out << CriterionReport::csv_header() << '\n' << report.csv_row() << '\n';
  return report.satisfied ? kExitOk : kExitUnsatisfied;
}

// ---------------------------------------------------------------------------
// graphsearch

int run_graphsearch(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  cfg.validate();
  if (cfg.d != 1) throw std::invalid_argument("graphsearch is defined for d = 1 only");
  if (cfg.n_list.size() != 1) throw std::invalid_argument("graphsearch takes a single --n");
  const int n = cfg.n_list.front();
  GraphSearchOptions opts;
  if (cfg.resolution != 0) opts.resolution = cfg.resolution;
  const auto map = toy_generating(n);
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;

  std::vector<GraphSearchReport> reports;
  for (int j = 0; j < cfg.omegas; ++j) {
    const double w = kTwoPi * (j + golden) / cfg.omegas;
    reports.push_back(graph_transform(map, std::span<const double>(&w, 1), opts));
  }
  TrigPoly small(1, 1);
  small.set_coeff({1}, 0.5e-6);
  small.set_coeff({-1}, 0.5e-6);
  const GeneratingMap control_map(small, opts.resolution);
  const double wc = kTwoPi * golden;
  const auto control = graph_transform(control_map, std::span<const double>(&wc, 1), opts);

  int converged = 0, exceeding = 0;
  for (const auto& r : reports) {
    converged += r.converged ? 1 : 0;
    exceeding += r.lipschitz_estimate > r.mm_bound ? 1 : 0;
  }

  emit(cfg, out, [&](std::ostream& o) {
    if (cfg.format == "json") {
      Json j;
      j["command"] = "graphsearch";
      j["n"] = n;
      j["resolution"] = opts.resolution;
      Json arr = Json::array();
      for (const auto& r : reports) arr.push_back(Json::parse(r.to_json()));
      j["reports"] = arr;
      j["control"] = Json::parse(control.to_json());
      j["summary"] = {{"attempted", reports.size()}, {"converged", converged}, {"exceeding_mm", exceeding}};
      o << j.dump(2) << '\n';
      return;
    }
    auto row = [&o](const GraphSearchReport& r) {
      fmt::print(o, "{},{},{},{},{},{},{},{}\n", num(r.omega.front()), r.converged ? 1 : 0, r.folded ? 1 : 0,
                 r.iterations, num(r.final_residual), num(r.lipschitz_estimate), num(r.mm_bound), r.reason);
    };
    o << "omega,converged,folded,iterations,final_residual,lipschitz_estimate,mm_bound,reason\n";
    for (const auto& r : reports) row(r);
    o << "# control ";
    row(control);
    fmt::print(o, "# summary attempted {} converged {} exceeding_mm {}\n", reports.size(), converged, exceeding);
  });
  return kExitOk;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "toy") return run_toy(cfg, out, err);
    if (cfg.command == "construct") return run_construct(cfg, out, err);
    if (cfg.command == "sweep") return run_sweep(cfg, out, err);
    if (cfg.command == "graphsearch") return run_graphsearch(cfg, out, err);
    fmt::print(err, "error: unknown command '{}'\n", cfg.command);
    return kExitUsage;
  } catch (const ResolutionError& e) {
    fmt::print(err, "numerical failure: {}\n", e.what());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "usage error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    fmt::print(err, "usage error: {}\n", e.what());
    return kExitUsage;
  }
}

}  // namespace lagtori
