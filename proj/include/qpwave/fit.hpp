#pragma once

#include <span>
#include <utility>
#include <vector>

namespace qpwave {

/// Ordinary least squares on (log parameter, log value).
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square of the log-space residuals.
  double residual = 0.0;
};

/// Fits value ≈ e^intercept · param^slope. Needs at least `min_points`
/// points, all strictly positive; throws ValidationError otherwise.
ExponentFit fit_exponent(std::span<const std::pair<double, double>> points,
                         std::size_t min_points = 3);

inline ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points,
                                std::size_t min_points = 3) {
  return fit_exponent(std::span<const std::pair<double, double>>(points), min_points);
}

}  // namespace qpwave
