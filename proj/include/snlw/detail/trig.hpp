#pragma once

#include <cmath>

namespace snlw::detail {

// x - sin(x) without cancellation for small |x|.
inline double x_minus_sin(double x) {
  if (std::abs(x) < 0.1) {
    const double x2 = x * x;
    return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0))));
  }
  return x - std::sin(x);
}

inline double one_minus_cos(double x) {
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s;
}

}  // namespace snlw::detail
