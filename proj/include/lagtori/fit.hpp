#ifndef LAGTORI_FIT_HPP
#define LAGTORI_FIT_HPP

#include <span>

namespace lagtori {

/// Least-squares slope of log(y) against log(x). NaN when fewer than two
/// distinct abscissae or any value is non-positive.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace lagtori

#endif  // LAGTORI_FIT_HPP
