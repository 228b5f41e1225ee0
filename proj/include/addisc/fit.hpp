#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace addisc::harness {

struct LogLogPoint {
  double n = 0.0;
  double value = 0.0;
};

// Ordinary least squares of ln(value) on ln(n).
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  // 1 when the residual vanishes, including the constant-value case.
  double r_squared = 0.0;
  double n_min = 0.0;
  double n_max = 0.0;
  std::size_t points = 0;
};

// Needs >= 3 points, positive n and value, and at least two distinct n.
ExponentFit fit_loglog(std::span<const LogLogPoint> points);

}  // namespace addisc::harness
