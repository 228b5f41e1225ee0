#include "addisc/fit.hpp"

#include <algorithm>
#include <cmath>

#include "addisc/common.hpp"

namespace addisc::harness {

ExponentFit fit_loglog(std::span<const LogLogPoint> points) {
  if (points.size() < 3) throw InvalidArgument("log-log fit needs at least 3 points");
  double sx = 0, sy = 0;
  ExponentFit fit;
  fit.points = points.size();
  fit.n_min = points.front().n;
  fit.n_max = points.front().n;
  for (const auto& p : points) {
    if (!(p.n > 0) || !(p.value > 0)) throw InvalidArgument("log-log fit needs positive coordinates");
    sx += std::log(p.n);
    sy += std::log(p.value);
    fit.n_min = std::min(fit.n_min, p.n);
    fit.n_max = std::max(fit.n_max, p.n);
  }
  const double count = static_cast<double>(points.size());
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : points) {
    const double dx = std::log(p.n) - mx;
    const double dy = std::log(p.value) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0) throw InvalidArgument("log-log fit needs at least two distinct n");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_res = std::max(0.0, syy - fit.slope * sxy);
  fit.r_squared = syy == 0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

}  // namespace addisc::harness
