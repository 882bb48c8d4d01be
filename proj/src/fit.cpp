#include "lagtori/fit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lagtori {

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("loglog_slope: size mismatch");
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (x.size() < 2) return nan;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return nan;
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double n = static_cast<double>(x.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) return nan;
  return sxy / sxx;
}

}  // namespace lagtori
