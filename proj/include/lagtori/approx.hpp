// Fejer and de la Vallee Poussin operators on periodic grid functions, their
// tensor product, and empirical certification of the Jackson-type bound
//
//   |f - P(f)|_{C^0} <= A_dk * N^(-k) * |f|_{C^k},   N = 2m - 1.
//
// All operators act spectrally: F_m multiplies the xi_j coefficient by
// max(0, 1 - |xi_j|/m), and P_m = 2 F_{2m} - F_m. The kernel-integral form is
// kept only as a test oracle.

#ifndef LAGTORI_APPROX_HPP
#define LAGTORI_APPROX_HPP

#include <span>
#include <string>
#include <vector>

#include "lagtori/grid.hpp"

namespace lagtori {

struct ApproxParams {
  std::vector<int> degrees;  ///< m_j per axis
  std::vector<int> orders;   ///< r_j per axis
  double sigma = 0.01;
  double A = 1.0;            ///< calibrated A_dk

  /// Same m and r on every axis.
  static ApproxParams uniform(int dims, int m, int r, double A = 1.0, double sigma = 0.01);
  void validate(int dims) const;
};

double fejer_weight(int xi, int m);
/// 2*fejer_weight(xi, 2m) - fejer_weight(xi, m): 1 on |xi| <= m, 0 from 2m on.
double vallee_poussin_weight(int xi, int m);

GridFunction fejer(const GridFunction& f, int axis, int m);
GridFunction vallee_poussin(const GridFunction& f, int axis, int m);

/// P_{m_1..m_d} applied axis by axis in the given order (default 0..d-1).
/// The result has degree 2*max(m)-1. Throws ResolutionError unless the grid
/// resolves degree 2m_l - 1 on every axis (M >= 4 m_l).
TrigPoly vallee_poussin_tensor(const GridFunction& f, const ApproxParams& params);
TrigPoly vallee_poussin_tensor(const GridFunction& f, std::span<const int> degrees,
                               std::span<const int> axis_order);

/// Same operator evaluated back on the grid of f.
GridFunction vallee_poussin_tensor_grid(const GridFunction& f, std::span<const int> degrees);

struct JacksonCertificate {
  int N = 0;           ///< 2 m_jbar - 1
  int k = 0;           ///< r_jbar
  double error = 0.0;  ///< |f - P f|_{C^0}
  double bound = 0.0;  ///< A N^-k |f|_{C^k}
  bool pass = false;

  std::string to_json() const;
};

/// Measures the approximation error and the bound value. jbar is the axis
/// maximising |d^{r_j} f / dx_j^{r_j}|_{C^0} / m_j^{r_j}.
JacksonCertificate jackson_error(const GridFunction& f, const ApproxParams& params);

/// Ratio error * N^k / |f|_{C^k} for a uniform degree m.
double jackson_ratio(const GridFunction& f, int m, int k);

/// 1.1 * max ratio over the family and degree list, floored at 1e-6.
double calibrate_A(std::span<const GridFunction> family, int k, std::span<const int> degrees);

struct DegreeChoice {
  int m = 0;
  int N = 0;
  double error = 0.0;
};

/// Smallest uniform m with |f - P_m f|_{C^0} < sigma, found by doubling and
/// then bisection. Throws ResolutionError when sigma is not reachable on the
/// grid of f.
DegreeChoice select_degree(const GridFunction& f, double sigma);

}  // namespace lagtori

#endif  // LAGTORI_APPROX_HPP
