#include "lagtori/criterion.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "fft.hpp"
#include "json.hpp"

namespace lagtori {

namespace {

CriterionReport evaluate(int d, double lo, double hi, const std::string& source) {
  if (!(lo > -2.0)) throw std::domain_error("criterion: min must exceed -2");
  if (!(hi >= 0.0)) throw std::domain_error("criterion: max must be >= 0");
  CriterionReport r;
  r.d = d;
  r.source = source;
  r.minT = lo;
  r.maxT = hi;
  r.lhs = 1.0 / (1.0 + 0.5 * lo);
  r.rhs = 1.0 + 0.5 * hi + std::sqrt(hi + 0.25 * hi * hi);
  r.satisfied = r.lhs > r.rhs;
  r.asymptotic_satisfied = -0.5 * lo > std::sqrt(hi) + hi;
  return r;
}

}  // namespace

std::string CriterionReport::verdict() const {
  if (satisfied) return "criterion satisfied: no invariant Lagrangian graph exists";
  return "criterion not satisfied: inconclusive (the criterion is only sufficient)";
}

std::string CriterionReport::to_json() const {
  nlohmann::ordered_json j;
  j["d"] = d;
  j["source"] = source;
  j["minT"] = minT;
  j["maxT"] = maxT;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["satisfied"] = satisfied;
  j["asymptotic_satisfied"] = asymptotic_satisfied;
  j["verdict"] = verdict();
  return j.dump(2);
}

std::string CriterionReport::csv_header() { return "d,source,minT,maxT,lhs,rhs,satisfied,asymptotic_satisfied"; }

std::string CriterionReport::csv_row() const {
  return fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g},{},{}", d, source, minT, maxT, lhs, rhs,
                     satisfied ? 1 : 0, asymptotic_satisfied ? 1 : 0);
}

CriterionReport check_1d(double minD, double maxD, const std::string& source) {
  return evaluate(1, minD, maxD, source);
}

CriterionReport check_multi(const GridFunction& T, const std::string& source) {
  return evaluate(T.dims(), T.min(), T.max(), source);
}

GridFunction trace_field(const GridFunction& psi) {
  auto s = detail::Spectrum::forward(psi);
  const int d = psi.dims();
  s.apply([d](std::span<const int> xi) {
    double q = 0.0;
    for (int v : xi) q += static_cast<double>(v) * v;
    return Complex(-q / d);
  });
  return s.inverse();
}

CriterionReport verdict_pipeline(const GridFunction& psi, const std::string& source) {
  return check_multi(trace_field(psi), source);
}

}  // namespace lagtori
