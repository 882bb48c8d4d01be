// Herman's sufficient conditions for the absence of invariant Lagrangian
// graphs:
//
//   1 / (1 + min/2)  >  1 + max/2 + (max + max^2/4)^(1/2)
//
// with (min, max) the extrema of Dphi (d = 1) or of the trace field
// T = (1/d) Laplace(Psi) (d >= 1).

#ifndef LAGTORI_CRITERION_HPP
#define LAGTORI_CRITERION_HPP

#include <string>

#include "lagtori/grid.hpp"

namespace lagtori {

struct CriterionReport {
  int d = 1;
  std::string source;
  double minT = 0.0;
  double maxT = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;             ///< lhs > rhs
  bool asymptotic_satisfied = false;  ///< -min/2 > sqrt(max) + max

  /// Human-readable verdict. An unsatisfied criterion is inconclusive.
  std::string verdict() const;
  std::string to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

/// Throws std::domain_error unless minD > -2 and maxD >= 0.
CriterionReport check_1d(double minD, double maxD, const std::string& source = "");
/// Extrema are grid extrema of T.
CriterionReport check_multi(const GridFunction& T, const std::string& source = "");

/// (1/d) Laplace(Psi), spectrally.
GridFunction trace_field(const GridFunction& psi);

/// check_multi(trace_field(psi)).
CriterionReport verdict_pipeline(const GridFunction& psi, const std::string& source = "");

}  // namespace lagtori

#endif  // LAGTORI_CRITERION_HPP
