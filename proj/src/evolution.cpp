#include "qpwave/evolution.hpp"

#include <cmath>

#include "qpwave/meannorms.hpp"

namespace qpwave {

TrigPoly propagate(const TrigPoly& f, const DispersionSymbol& symbol, double t) {
  if (t == 0.0) return f;
  const auto& spec = f.spec();
  return f.mapped([&](const LatticeIndex& n, Complex c) {
    const auto xi = spec.freq_values(n);
    return c * std::polar(1.0, -t * symbol.rate_value(xi));
  });
}

TrigPoly galilean_boost(const TrigPoly& f, const LatticeIndex& a) { return f.shifted(a); }

Complex boost_phase(const LatticeSpec& spec, const LatticeIndex& a, const LatticeIndex& n, double t) {
  const auto la = spec.freq(a);
  const auto ln = spec.freq(n);
  QScalar s;
  for (std::size_t i = 0; i < la.size(); ++i) s += la[i] * la[i] + QScalar(2) * la[i] * ln[i];
  return std::polar(1.0, -t * s.value());
}

TrigPoly boost_solution(const TrigPoly& u, const LatticeIndex& a, double t) {
  const auto& spec = u.spec();
  return u.mapped([&](const LatticeIndex& n, Complex c) { return c * boost_phase(spec, a, n, t); })
      .shifted(a);
}

BoostNormCheck boost_mixed_norm_check(const TrigPoly& f, const LatticeIndex& a, double T) {
  if (f.spec().dim() != 1) throw DimensionError("boost check is implemented for d = 1");
  const MixedNormSpec spec{4, TimeMode::windowed, T};
  const auto symbol = DispersionSymbol::schrodinger();
  return {mixed_norm_free(f, symbol, spec), mixed_norm_free(galilean_boost(f, a), symbol, spec)};
}

}  // namespace qpwave
