// Exact symplectic twist maps of T^d x R^d generated by
//
//   h(x, x') = 1/2 |x - x'|^2 + Psi(x'),
//
// i.e. f(x, y) = (x + y, y + dPsi(x + y)), together with the invariant-graph
// functional equation and a numerical search for invariant graphs.

#ifndef LAGTORI_TWIST_HPP
#define LAGTORI_TWIST_HPP

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lagtori/grid.hpp"

namespace lagtori {

struct State {
  std::vector<double> x;
  std::vector<double> y;
};

class GeneratingMap {
 public:
  /// Psi must have mean zero (relative 1e-10).
  explicit GeneratingMap(const GridFunction& potential);
  /// Band-limited potential given by its coefficients; `resolution` is the
  /// grid used for the sampled copy of Psi.
  GeneratingMap(TrigPoly potential, int resolution);

  /// Psi = 0, the integrable shear (x, y) -> (x + y, y).
  static GeneratingMap integrable(int dims, int resolution = 16);

  int dims() const { return spectrum_.dims(); }
  const GridFunction& potential() const { return potential_; }
  const TrigPoly& potential_spectrum() const { return spectrum_; }

  double potential_at(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;
  Eigen::MatrixXd hessian(std::span<const double> x) const;

  /// One iteration with x reduced to [-pi, pi).
  State step(const State& s) const;
  /// One iteration on the universal cover (x not reduced).
  State step_lifted(const State& s) const;
  /// Derivative of step, a 2d x 2d matrix [[I, I], [H, I + H]], H = D^2 Psi(x + y).
  Eigen::MatrixXd jacobian(const State& s) const;
  /// dx'/dy; the identity for this family.
  Eigen::MatrixXd twist_block(const State& s) const;

  double generating_function(std::span<const double> x, std::span<const double> xp) const;

  /// States s_0 .. s_steps.
  std::vector<State> orbit(State start, int steps) const;

 private:
  void build_derivatives();

  GridFunction potential_;
  TrigPoly spectrum_;
  std::vector<TrigPoly> gradient_;
  std::vector<TrigPoly> hessian_;  // upper triangle, row-major
};

/// (M + M^2/4)^(1/2) + 1 + M/2, the bound on |Dg| of an invariant graph
/// when max Dphi = M. Requires M > -2 and a nonnegative radicand.
double lipschitz_bound(double M);

/// Graph y = psi(x) over T^d, one grid function per momentum component.
struct GraphCandidate {
  std::vector<GridFunction> psi;
  double lipschitz = 0.0;  ///< max finite-difference slope of psi on the grid

  static GraphCandidate from_components(std::vector<GridFunction> psi);
  static GraphCandidate constant(int dims, int resolution, std::span<const double> value);
};

/// C^0 norm of psi(x + psi(x)) - psi(x) - dPsi(x + psi(x)) on the grid; zero
/// iff the graph is invariant.
double graph_residual(const GeneratingMap& map, const GraphCandidate& cand);

/// d = 1 only: C^0 norm of 1/2 (g + g^-1) - Id - 1/2 phi with g = Id + psi,
/// phi = dPsi. Throws std::domain_error when g is not invertible.
double graph_residual_gg(const GeneratingMap& map, const GraphCandidate& cand);

struct GraphSearchReport {
  std::vector<double> omega;
  bool converged = false;
  bool folded = false;
  int iterations = 0;
  double final_residual = 0.0;
  /// Running max over iterates of the bi-Lipschitz constant of the circle
  /// map g; +inf once the parametrisation folds.
  double lipschitz_estimate = 1.0;
  double mm_bound = 1.0;
  std::string reason;
  std::optional<GraphCandidate> candidate;

  std::string to_json() const;
};

struct GraphSearchOptions {
  int resolution = 256;
  int max_iter = 500;
  double tol = 1e-10;
};

/// Fixed-point iteration on the conjugacy equation
///   u(t + w) - 2u(t) + u(t - w) = dPsi(t + u(t))
/// for an invariant graph with frequency w; on success the graph is
/// psi(t + u(t)) = w + u(t + w) - u(t). Failure is reported, not thrown.
GraphSearchReport graph_transform(const GeneratingMap& map, std::span<const double> omega,
                                  const GraphSearchOptions& opts = {});

}  // namespace lagtori

#endif  // LAGTORI_TWIST_HPP
