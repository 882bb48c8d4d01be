// Periodic grid functions on the torus [-pi, pi)^d, their trigonometric
// interpolants, spectral differentiation and norm estimation.
//
// Sampling convention: x_j = -pi + 2*pi*j/M on every axis, no duplicated
// endpoint, values stored row-major with the last axis fastest.

#ifndef LAGTORI_GRID_HPP
#define LAGTORI_GRID_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lagtori {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised when a grid cannot represent the requested object without
/// aliasing, or a target accuracy is out of reach at the given resolution.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_power_of_two(int m);
int next_power_of_two(int m);

/// Reduce an angle to its representative in [-pi, pi).
double wrap_angle(double x);

class GridFunction {
 public:
  GridFunction() = default;
  /// Throws std::invalid_argument on bad shape or non-finite values.
  GridFunction(int dims, int resolution, std::vector<double> values);

  static GridFunction zeros(int dims, int resolution);
  static GridFunction constant(int dims, int resolution, double c);

  /// Samples f at every node; f receives the node coordinates.
  static GridFunction sample(int dims, int resolution,
                             const std::function<double(std::span<const double>)>& f);

  int dims() const { return dims_; }
  int resolution() const { return resolution_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Coordinate of node index j along any axis.
  double node(int j) const;
  /// Node coordinates of flat index i.
  std::vector<double> point(std::size_t i) const;
  /// Flat index of a multi-index.
  std::size_t flat_index(std::span<const int> idx) const;

  double mean() const;
  double min() const;
  double max() const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double a);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(double s, GridFunction a) { return a *= s; }
  friend GridFunction operator*(GridFunction a, double s) { return a *= s; }

 private:
  void require_same_shape(const GridFunction& other) const;

  int dims_ = 0;
  int resolution_ = 0;
  std::vector<double> values_;
};

/// Real trigonometric polynomial sum_xi c_xi exp(i xi.x) with coefficients on
/// the lattice {-degree..degree}^d.
class TrigPoly {
 public:
  TrigPoly() = default;
  TrigPoly(int dims, int degree);
  TrigPoly(int dims, int degree, std::vector<Complex> coeffs);

  int dims() const { return dims_; }
  int degree() const { return degree_; }
  std::span<const Complex> coeffs() const { return coeffs_; }

  Complex coeff(std::span<const int> freq) const;
  Complex coeff(std::initializer_list<int> freq) const {
    return coeff(std::span<const int>(freq.begin(), freq.size()));
  }
  void set_coeff(std::span<const int> freq, Complex c);
  void set_coeff(std::initializer_list<int> freq, Complex c) {
    set_coeff(std::span<const int>(freq.begin(), freq.size()), c);
  }

  /// Lattice frequency of flat coefficient index i.
  std::vector<int> frequency(std::size_t i) const;

  /// The zero coefficient, i.e. the mean over the torus.
  double mean() const;

  /// Pointwise value at an arbitrary point. Complex arguments are accepted so
  /// that complex-step differentiation can be used as an oracle.
  double evaluate(std::span<const double> x) const;
  Complex evaluate(std::span<const Complex> x) const;

  /// max |c_xi - conj(c_-xi)|
  double hermitian_defect() const;

  /// Same polynomial with every coefficient multiplied by m(xi).
  TrigPoly multiplied(const std::function<Complex(std::span<const int>)>& m) const;

  /// Re-embed in a lattice of another degree; coefficients outside are
  /// dropped, new ones are zero.
  TrigPoly with_degree(int degree) const;

  TrigPoly& operator+=(const TrigPoly& other);
  TrigPoly& operator*=(double a);
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator*(double s, TrigPoly a) { return a *= s; }

 private:
  std::size_t index(std::span<const int> freq) const;

  int dims_ = 0;
  int degree_ = 0;
  std::vector<Complex> coeffs_;
};

/// Discrete Fourier coefficients normalised so coefficient 0 is the sample
/// mean. The result has degree M/2; a Nyquist mode is split evenly between
/// +M/2 and -M/2 so the returned polynomial is real and interpolates.
TrigPoly to_spectrum(const GridFunction& f);

/// Evaluates p at the nodes of a resolution-M grid. Requires M >= 2*degree;
/// at M == 2*degree only the +-M/2 pair shares nodes, which loses nothing for
/// spectra produced by to_spectrum.
GridFunction from_spectrum(const TrigPoly& p, int resolution);

/// r-th partial derivative along axis via multiplication by (i xi)^r.
GridFunction spectral_derivative(const GridFunction& f, int axis, int order);

/// Mixed partial derivative with multi-index beta (one order per axis).
GridFunction spectral_derivative(const GridFunction& f, std::span<const int> beta);

/// Grid maximum of |f|; a lower bound of the true sup norm.
double c0_norm(const GridFunction& f);

/// max over |beta| <= r of c0_norm of the mixed partial d^beta f.
double cr_norm(const GridFunction& f, int r);

/// cr_norm for every order 0..rmax in one pass over the spectrum.
std::vector<double> cr_norms(const GridFunction& f, int rmax);

/// Interpolation upper bound 2 * |f|_{C^r}^(1-alpha) * |f|_{C^(r+1)}^alpha
/// for the C^(r+alpha) norm. Not the exact Hoelder norm.
double holder_norm(const GridFunction& f, int r, double alpha);

struct NormReport {
  double c0 = 0.0;
  std::map<int, double> cr;
  std::map<std::pair<int, double>, double> holder;
};

/// Norms up to order rmax, plus the interpolation bound for every
/// (r, alpha) pair requested (r + 1 <= rmax).
NormReport measure_norms(const GridFunction& f, int rmax,
                         std::span<const std::pair<int, double>> holder_orders = {});

}  // namespace lagtori

#endif  // LAGTORI_GRID_HPP
