#pragma once

#include <span>
#include <string>
#include <vector>

#include "qpwave/qscalar.hpp"

namespace qpwave {

/// Phase law of a linear dispersive equation.
///
/// The free flow multiplies the coefficient at frequency λ by e^{−itω(λ)},
/// where ω = rate(λ). For Schrödinger ω(λ) = |λ|², matching û(t) = e^{−itλ²}û₀.
/// The Airy flow of u_t + u_xxx = 0 gives û(t) = e^{itλ³}û₀, so ω(λ) = −λ³.
/// A custom polynomial φ(λ) = Σ c_k λ^k (d = 1, degree ≤ 4) uses ω = φ.
class DispersionSymbol {
 public:
  enum class Kind { schrodinger, airy, custom };

  DispersionSymbol() = default;
  static DispersionSymbol schrodinger() { return DispersionSymbol(Kind::schrodinger, {}); }
  static DispersionSymbol airy() { return DispersionSymbol(Kind::airy, {}); }
  /// Coefficients c_0, c_1, ... of φ; at most five.
  static DispersionSymbol custom(std::vector<QScalar> coefficients);
  /// φ ≡ 0 (no time dependence).
  static DispersionSymbol none() { return custom({}); }
  /// "schrodinger", "airy" or "none".
  static DispersionSymbol parse(const std::string& name);

  Kind kind() const noexcept { return kind_; }
  const std::vector<QScalar>& coefficients() const noexcept { return coeffs_; }
  std::string name() const;

  /// ω(λ) for a frequency vector λ ∈ R^d; exact whenever λ is.
  QScalar rate(std::span<const QScalar> xi) const;
  double rate_value(std::span<const double> xi) const;

 private:
  DispersionSymbol(Kind kind, std::vector<QScalar> coeffs) : kind_(kind), coeffs_(std::move(coeffs)) {}
  Kind kind_ = Kind::schrodinger;
  std::vector<QScalar> coeffs_;
};

}  // namespace qpwave
