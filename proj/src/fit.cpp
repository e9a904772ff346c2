#include "qpwave/fit.hpp"

#include <cmath>
#include <string>

#include "qpwave/errors.hpp"

namespace qpwave {

ExponentFit fit_exponent(std::span<const std::pair<double, double>> points,
                         std::size_t min_points) {
  if (points.size() < min_points || points.size() < 2) {
    throw ValidationError("exponent fit needs at least " + std::to_string(min_points) +
                          " points, got " + std::to_string(points.size()));
  }
  double sx = 0, sy = 0;
  for (const auto& [p, v] : points) {
    if (!(p > 0) || !(v > 0) || !std::isfinite(p) || !std::isfinite(v)) {
      throw ValidationError("exponent fit needs strictly positive finite data");
    }
    sx += std::log(p);
    sy += std::log(v);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [p, v] : points) {
    const double dx = std::log(p) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  if (sxx == 0) throw ValidationError("exponent fit needs at least two distinct parameters");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (const auto& [p, v] : points) {
    const double r = std::log(v) - (fit.intercept + fit.slope * std::log(p));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace qpwave
