#include "qpwave/meannorms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "detail/parallel.hpp"
#include "detail/sum.hpp"
#include "detail/tuples.hpp"

namespace qpwave {
namespace {

constexpr std::size_t kChunks = 64;

std::uint64_t ipow(std::uint64_t m, int r) {
  std::uint64_t out = 1;
  for (int i = 0; i < r; ++i) {
    if (m != 0 && out > std::numeric_limits<std::uint64_t>::max() / m) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    out *= m;
  }
  return out;
}

double max_abs_frequency(const TrigPoly& f) {
  double m = 0;
  for (const auto& t : f.terms()) m = std::max(m, std::abs(f.spec().freq1_value(t.n)));
  return m;
}

double resolve_step(const TrigPoly& f, double window, double step) {
  if (!(window > 0) || !std::isfinite(window)) throw ValidationError("averaging window L must be > 0");
  const double lmax = max_abs_frequency(f);
  if (lmax == 0) return step > 0 ? step : window / 8.0;
  const double shortest = 2.0 * std::numbers::pi / lmax;
  if (step == 0) return shortest / 16.0;
  if (!(step > 0)) throw ValidationError("quadrature step must be > 0");
  if (step > shortest / 8.0) {
    throw ValidationError("quadrature step " + std::to_string(step) +
                          " gives fewer than 8 points per shortest period " + std::to_string(shortest));
  }
  return step;
}

/// Trapezoid rule for (1/2L)∫_{−L}^{L} g(f(x)); rotations are re-synchronized
/// every 512 points to keep phase drift at rounding level.
template <class G>
double trapezoid_mean(const TrigPoly& f, double window, double step, G&& g) {
  if (f.spec().dim() != 1) throw DimensionError("numeric mean values are implemented for d = 1");
  const double h0 = resolve_step(f, window, step);
  const auto n_points = static_cast<std::uint64_t>(std::ceil(2.0 * window / h0));
  const double h = 2.0 * window / static_cast<double>(n_points);
  const std::size_t m = f.size();
  std::vector<double> lambda(m);
  std::vector<Complex> coef(m);
  for (std::size_t i = 0; i < m; ++i) {
    lambda[i] = f.spec().freq1_value(f.terms()[i].n);
    coef[i] = f.terms()[i].c;
  }
  std::vector<double> partial(kChunks, 0.0);
  detail::parallel_for(kChunks, [&](std::size_t chunk) {
    const std::uint64_t lo = n_points * chunk / kChunks;
    const std::uint64_t hi = n_points * (chunk + 1) / kChunks + (chunk + 1 == kChunks ? 1 : 0);
    std::vector<Complex> rot(m), cur(m);
    for (std::size_t i = 0; i < m; ++i) rot[i] = std::polar(1.0, lambda[i] * h);
    detail::CompensatedSum acc;
    for (std::uint64_t j = lo; j < hi; ++j) {
      if ((j - lo) % 512 == 0) {
        const double x = -window + static_cast<double>(j) * h;
        for (std::size_t i = 0; i < m; ++i) cur[i] = coef[i] * std::polar(1.0, lambda[i] * x);
      }
      Complex v = 0;
      for (std::size_t i = 0; i < m; ++i) {
        v += cur[i];
        cur[i] *= rot[i];
      }
      const double w = (j == 0 || j == n_points) ? 0.5 : 1.0;
      acc.add(w * g(v));
    }
    partial[chunk] = acc.value();
  });
  detail::CompensatedSum total;
  for (double p : partial) total.add(p);
  return total.value() * h / (2.0 * window);
}

}  // namespace

Budget tuple_budget() {
  if (std::getenv("QPWAVE_BUDGET") != nullptr) return default_budget();
  return Budget{100'000'000};
}

Complex phi1(Complex z) {
  if (std::abs(z) < 1e-4) return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
  // e^z − 1 written to avoid cancellation for purely imaginary z.
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  const Complex em1(std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y));
  return em1 / z;
}

Complex mean_value(const TrigPoly& f) { return f.coeff(f.spec().zero_index()); }

Complex mean_value_numeric(const TrigPoly& f, double window, double step) {
  const double re = trapezoid_mean(f, window, step, [](Complex v) { return v.real(); });
  const double im = trapezoid_mean(f, window, step, [](Complex v) { return v.imag(); });
  return {re, im};
}

double lp_power_exact(const TrigPoly& f, int p, const Budget& budget) {
  if (p != 2 && p != 4 && p != 6) throw ValidationError("exact mean-value norms need p in {2, 4, 6}");
  if (p == 2) return f.l2_norm2();
  const int r = p / 2;
  budget.require(ipow(f.size(), r), "tuple-sum table for the L" + std::to_string(p) + " norm");
  std::unordered_map<LatticeIndex, Complex, LatticeIndexHash> sums;
  const auto terms = f.terms();
  if (r == 2) {
    for (const auto& a : terms) {
      for (const auto& b : terms) sums[a.n + b.n] += a.c * b.c;
    }
  } else {
    // Triple sums: the sextuple count is Σ_k |Σ_{n1+n2+n3=k} a a a|².
    for (const auto& a : terms) {
      for (const auto& b : terms) {
        const LatticeIndex ab = a.n + b.n;
        const Complex cab = a.c * b.c;
        for (const auto& c : terms) sums[ab + c.n] += cab * c.c;
      }
    }
  }
  std::vector<std::pair<LatticeIndex, Complex>> ordered(sums.begin(), sums.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  detail::CompensatedSum total;
  for (const auto& [k, v] : ordered) total.add(std::norm(v));
  return total.value();
}

double lp_norm_exact(const TrigPoly& f, int p, const Budget& budget) {
  return std::pow(lp_power_exact(f, p, budget), 1.0 / p);
}

double lp_norm_numeric(const TrigPoly& f, double p, double window, double step) {
  if (!(p > 0)) throw ValidationError("p must be > 0");
  if (f.empty()) return 0.0;
  const double mean = trapezoid_mean(f, window, step, [p](Complex v) { return std::pow(std::abs(v), p); });
  return std::pow(std::max(mean, 0.0), 1.0 / p);
}

double default_window(const TrigPoly& f) {
  if (f.spec().dim() != 1) throw DimensionError("default_window needs d = 1");
  std::vector<double> lam;
  for (const auto& t : f.terms()) lam.push_back(f.spec().freq1_value(t.n));
  std::sort(lam.begin(), lam.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < lam.size(); ++i) {
    const double g = lam[i] - lam[i - 1];
    if (g > kFloatZeroTolerance) gap = std::min(gap, g);
  }
  if (!std::isfinite(gap)) return 100.0;
  return 1e4 / gap;
}

void MixedNormSpec::validate() const {
  if (p != 2 && p != 4 && p != 6) throw ValidationError("mixed norms need p in {2, 4, 6}");
  if (mode == TimeMode::windowed && !(T > 0 && std::isfinite(T))) {
    throw ValidationError("time window T must be > 0");
  }
}

double mixed_norm_power(const TrigPoly& f, const DispersionSymbol& symbol, const MixedNormSpec& spec,
                        const Budget& budget) {
  spec.validate();
  const int r = spec.p / 2;
  budget.require(ipow(f.size(), r), "tuple table for the mixed L" + std::to_string(spec.p) + " norm");
  const detail::ModeTable modes = detail::mode_table(f, symbol);
  std::vector<const detail::ModeTable*> factors(static_cast<std::size_t>(r), &modes);
  auto entries = detail::tuple_entries(factors, f.spec().exact());
  return detail::resonant_form(std::move(entries), spec.mode, spec.T, f.spec().exact());
}

double mixed_norm_free(const TrigPoly& f, const DispersionSymbol& symbol, const MixedNormSpec& spec,
                       const Budget& budget) {
  return std::pow(mixed_norm_power(f, symbol, spec, budget), 1.0 / spec.p);
}

double bilinear_norm_power(const TrigPoly& f1, const TrigPoly& f2, const DispersionSymbol& symbol,
                           TimeMode mode, double T, const Budget& budget) {
  require_same_lattice(f1, f2);
  MixedNormSpec{2, mode, T}.validate();
  budget.require(static_cast<std::uint64_t>(f1.size()) * f2.size(), "bilinear tuple table");
  const detail::ModeTable m1 = detail::mode_table(f1, symbol);
  const detail::ModeTable m2 = detail::mode_table(f2, symbol);
  auto entries = detail::tuple_entries({&m1, &m2}, f1.spec().exact());
  return detail::resonant_form(std::move(entries), mode, T, f1.spec().exact());
}

Rational critical_exponent(int d) {
  if (d < 1) throw ValidationError("dimension d must be >= 1");
  return Rational(2 * (d + 2), d);
}

Rational decoupling_alpha(const Rational& p, int d) {
  if (!(p > Rational(2))) throw ValidationError("p must be > 2");
  if (p < critical_exponent(d)) return Rational(0);
  return Rational(d, 2) - Rational(d + 2) / p;
}

Rational predicted_exponent(const Rational& p, int d, int b) {
  if (b < 0) throw ValidationError("density parameter b must be >= 0");
  const Rational alpha = decoupling_alpha(p, d);
  return Rational(b) * (Rational(1, 2) - Rational(1) / p) + alpha;
}

double predicted_exponent_value(double p, int d, int b) {
  if (!(p > 2)) throw ValidationError("p must be > 2");
  if (b < 0 || d < 1) throw ValidationError("need d >= 1 and b >= 0");
  const double inv = std::isinf(p) ? 0.0 : 1.0 / p;
  return b * (0.5 - inv) + std::max(0.5 * d - (d + 2) * inv, 0.0);
}

}  // namespace qpwave
