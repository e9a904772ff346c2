#pragma once

#include <complex>
#include <cstdint>

#include "qpwave/budget.hpp"
#include "qpwave/dispersion.hpp"
#include "qpwave/fit.hpp"
#include "qpwave/rational.hpp"
#include "qpwave/trigpoly.hpp"

namespace qpwave {

/// Default limit for tuple tables (pair/triple sums): 10^8 entries.
Budget tuple_budget();

/// (e^z − 1)/z, with a four-term Taylor series for |z| < 1e−4.
Complex phi1(Complex z);

/// 𝓜(f): the coefficient at n = 0.
Complex mean_value(const TrigPoly& f);
/// (1/2L)∫_{−L}^{L} f by the trapezoid rule (d = 1). step = 0 picks a default.
Complex mean_value_numeric(const TrigPoly& f, double window, double step = 0.0);

/// ‖f‖_{𝓛^p}^p for p ∈ {2, 4, 6} via additive tuple counting.
double lp_power_exact(const TrigPoly& f, int p, const Budget& budget = tuple_budget());
double lp_norm_exact(const TrigPoly& f, int p, const Budget& budget = tuple_budget());

/// ((1/2L)∫_{−L}^{L} |f|^p)^{1/p} by the trapezoid rule (d = 1).
/// The step must give at least 8 points per shortest period; 0 picks 16.
double lp_norm_numeric(const TrigPoly& f, double p, double window, double step = 0.0);
/// 10^4 / (smallest gap between distinct support frequencies), d = 1.
double default_window(const TrigPoly& f);

enum class TimeMode { windowed, global_mean };

struct MixedNormSpec {
  int p = 4;
  TimeMode mode = TimeMode::windowed;
  double T = 1.0;
  void validate() const;
};

/// ‖e^{−itω(D)}f‖^p in L^p_t([0,T], 𝓛^p_x), or in the global time mean.
double mixed_norm_power(const TrigPoly& f, const DispersionSymbol& symbol, const MixedNormSpec& spec,
                        const Budget& budget = tuple_budget());
double mixed_norm_free(const TrigPoly& f, const DispersionSymbol& symbol, const MixedNormSpec& spec,
                       const Budget& budget = tuple_budget());

/// ‖(e^{−itω}f₁)(e^{−itω}f₂)‖² in L²_t([0,T], 𝓛²_x) (or its time mean).
double bilinear_norm_power(const TrigPoly& f1, const TrigPoly& f2, const DispersionSymbol& symbol,
                           TimeMode mode, double T, const Budget& budget = tuple_budget());

/// p_d = 2(d + 2)/d.
Rational critical_exponent(int d);
/// Decoupling loss α(p): 0 for 2 < p < p_d, d/2 − (d+2)/p for p ≥ p_d.
Rational decoupling_alpha(const Rational& p, int d);
/// s*(p, d, b) = b(1/2 − 1/p) + max(d/2 − (d+2)/p, 0), p > 2.
Rational predicted_exponent(const Rational& p, int d, int b);
/// Same formula in doubles; accepts p = +infinity.
double predicted_exponent_value(double p, int d, int b);

}  // namespace qpwave
