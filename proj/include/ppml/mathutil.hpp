#ifndef PPML_MATHUTIL_HPP_
#define PPML_MATHUTIL_HPP_

#include <cmath>
#include <cstdint>
#include <limits>

namespace ppml {

/// ln(m!) — exact products for small m, lgamma beyond.
inline double log_factorial(std::uint64_t m) {
  if (m < 2) return 0.0;
  if (m <= 20) {
    double f = 1.0;
    for (std::uint64_t i = 2; i <= m; ++i) f *= static_cast<double>(i);
    return std::log(f);
  }
  return std::lgamma(static_cast<double>(m) + 1.0);
}

/// ln of the falling power m (m-1) ... (m-r+1); -inf when r > m.
inline double log_falling(std::uint64_t m, std::uint64_t r) {
  if (r > m) return -std::numeric_limits<double>::infinity();
  if (r <= 24) {
    double acc = 0.0;
    for (std::uint64_t i = 0; i < r; ++i) acc += std::log(static_cast<double>(m - i));
    return acc;
  }
  return std::lgamma(static_cast<double>(m) + 1.0) -
         std::lgamma(static_cast<double>(m - r) + 1.0);
}

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace ppml

#endif  // PPML_MATHUTIL_HPP_
