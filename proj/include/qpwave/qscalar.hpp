#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

#include "qpwave/rational.hpp"

namespace qpwave {

/// Element a + b·√d of a real quadratic field Q(√d), or a plain double.
///
/// Exact values stay exact under +, −, × as long as both operands live in
/// the same field (or one of them is rational); otherwise the result falls
/// back to float mode. Comparisons and sign tests on exact values are exact.
class QScalar {
 public:
  QScalar() = default;
  QScalar(std::int64_t v) : a_(v) {}         // NOLINT(implicit)
  QScalar(const Rational& r) : a_(r) {}      // NOLINT(implicit)

  /// a + b√d; d must be a positive square-free integer (d = 1 folds into a).
  static QScalar exact(const Rational& a, const Rational& b, std::int64_t d);
  /// √n for a positive integer n, with square factors pulled out (√8 = 2√2).
  static QScalar sqrt_of(std::int64_t n);
  static QScalar approx(double v);

  bool is_exact() const noexcept { return exact_; }
  bool is_rational() const noexcept { return exact_ && b_.is_zero(); }
  const Rational& rational_part() const noexcept { return a_; }
  const Rational& surd_part() const noexcept { return b_; }
  /// Radicand d, or 0 when the value is rational or in float mode.
  std::int64_t radicand() const noexcept { return d_; }

  /// Nearest double; cancellation in a + b√d is avoided via the conjugate.
  double value() const;
  long double long_value() const;

  /// Exact sign in exact mode, sign of the double otherwise.
  int sign() const;
  /// Exact zero test, or |value| <= tol in float mode.
  bool is_zero(double tol = 0.0) const;

  QScalar abs() const { return sign() < 0 ? -*this : *this; }
  /// Galois conjugate a − b√d (identity on rationals and floats).
  QScalar conjugate() const;

  QScalar operator-() const;
  QScalar& operator+=(const QScalar& o);
  QScalar& operator-=(const QScalar& o);
  QScalar& operator*=(const QScalar& o);
  friend QScalar operator+(QScalar x, const QScalar& y) { return x += y; }
  friend QScalar operator-(QScalar x, const QScalar& y) { return x -= y; }
  friend QScalar operator*(QScalar x, const QScalar& y) { return x *= y; }

  /// Structural equality: exact values compare exactly, floats by value.
  friend bool operator==(const QScalar& x, const QScalar& y);

  std::string str() const;
  friend std::ostream& operator<<(std::ostream& os, const QScalar& q) { return os << q.str(); }

 private:
  bool exact_ = true;
  Rational a_{};
  Rational b_{};
  std::int64_t d_ = 0;
  double f_ = 0.0;  // used only in float mode
};

/// Three-way comparison: exact when both sides are exact in a common field.
int compare(const QScalar& x, const QScalar& y);

bool is_square_free(std::int64_t d);

}  // namespace qpwave

template <>
struct std::hash<qpwave::QScalar> {
  std::size_t operator()(const qpwave::QScalar& q) const noexcept;
};
