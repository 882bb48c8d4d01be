// Perturbations: the one-dimensional toy phi_n, the two-lobe zero-mean bumps
// T_n (Herman) and T~_n (analytic path), their trigonometric approximation
// p~_N, and the spectral Poisson solve (1/d) Laplace(Psi) = T.

#ifndef LAGTORI_CONSTRUCT_HPP
#define LAGTORI_CONSTRUCT_HPP

#include <vector>

#include "lagtori/grid.hpp"
#include "lagtori/twist.hpp"

namespace lagtori {

/// phi_n(x) = -(5/4n) cos(nx) + (1/8n) sin(2nx). resolution 0 picks
/// max(256, 16n).
GridFunction toy_phi(int n, int resolution = 0);
/// Dphi_n(x) = (5/4) sin(nx) + (1/4) cos(2nx), sampled.
GridFunction toy_dphi(int n, int resolution = 0);
/// Psi_n = -(5/4n^2) sin(nx) - (1/16n^2) cos(2nx) as exact coefficients.
TrigPoly toy_potential(int n);
GeneratingMap toy_generating(int n, int resolution = 0);

/// Profile exp(s (1 - 1/(1 - t^2))) on t < 1, zero on t >= 1; equals 1 at t = 0.
double bump_profile(double t, double sharpness);

struct BumpSpec {
  int dims = 0;
  int n = 0;
  double plus_amplitude = 0.0;
  double minus_amplitude = 0.0;  ///< target before balancing
  double plus_radius = 1.5;
  double minus_radius = 0.0;     ///< R_n
  std::vector<double> plus_center;   ///< (pi/2, ..., pi/2)
  std::vector<double> minus_center;  ///< x0 = (-pi/2, ..., -pi/2)
  double profile_sharpness = 8.0;

  /// Max T_n^+ = 1/(9n), max T_n^- = 1/sqrt(n).
  static BumpSpec herman(int dims, int n);
  /// Max T~_n^+ = 1, max T~_n^- = n.
  static BumpSpec analytic(int dims, int n);

  void validate() const;
};

struct Bump {
  BumpSpec spec;
  double minus_amplitude = 0.0;  ///< after balancing, within 1% of the target
  GridFunction values;
};

/// plus lobe minus balanced minus lobe; the minus amplitude is fixed by the
/// discrete sums so the grid mean vanishes. Throws ResolutionError when the
/// minus lobe is under-resolved or balancing moves the amplitude by more than 1%.
Bump make_bump(const BumpSpec& spec, int resolution);

/// Per-axis resolution: next power of two >= max(256, 384/R_n); capped at 64
/// for d = 3 and beyond.
int default_resolution(const BumpSpec& spec);

GridFunction herman_bump(int dims, int n, int resolution = 0);
GridFunction analytic_bump(int dims, int n, int resolution = 0);

struct ScalingParams {
  int d = 0;
  int n = 0;
  double eps = 0.1;
  int k = 0;          ///< round(d / (2 eps))
  double delta = 0.0; ///< 4 eps d / (1 + 2 eps)

  static ScalingParams make(int d, int n, double eps);
  /// Largest integer r <= d - 1 - delta (-1 if none).
  int max_order_p() const;
  /// Largest integer r <= d + 1 - delta.
  int max_order_psi() const;
};

struct NormalizedApprox {
  TrigPoly p_tilde;
  GridFunction p_tilde_grid;
  int m = 0;
  int N = 0;
  double error = 0.0;      ///< |T - p_N|_{C^0}
  double max_abs_p = 0.0;  ///< max |p_N| on the grid
};

/// p~_N = p_N / (n^(1-eps) max|p_N|) with p_N the tensor de la Vallee Poussin
/// polynomial of smallest uniform degree meeting sigma.
NormalizedApprox approximate_and_normalize(const GridFunction& T, const ScalingParams& sp, double sigma);

/// Mean-zero Psi with (1/d) Laplace(Psi) = T. Throws std::invalid_argument
/// when |mean(T)| > 1e-10.
GridFunction poisson_solve(const GridFunction& T);
TrigPoly poisson_solve(const TrigPoly& T);

}  // namespace lagtori

#endif  // LAGTORI_CONSTRUCT_HPP
