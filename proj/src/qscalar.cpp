#include "qpwave/qscalar.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <sstream>

#include "qpwave/errors.hpp"

namespace qpwave {
namespace {

using boost::multiprecision::cpp_int;

cpp_int big(std::int64_t v) { return cpp_int(v); }

// Sign of x + y√d for rationals x, y and square-free d > 1.
int surd_sign(const Rational& x, const Rational& y, std::int64_t d) {
  const int sx = x.sign();
  const int sy = y.sign();
  if (sy == 0) return sx;
  if (sx == 0 || sx == sy) return sx == 0 ? sy : sx;
  // Opposite signs: compare x² with y²d, i.e. px² qy² against py² d qx².
  constexpr std::int64_t kSmall = std::int64_t{1} << 20;
  auto small = [&](std::int64_t v) { return v > -kSmall && v < kSmall; };
  if (small(x.num()) && small(x.den()) && small(y.num()) && small(y.den()) &&
      d < (std::int64_t{1} << 31)) {
    using i128 = __int128;
    const i128 l = static_cast<i128>(x.num()) * x.num() * y.den() * y.den();
    const i128 r = static_cast<i128>(y.num()) * y.num() * d * x.den() * x.den();
    if (l > r) return sx;
    if (l < r) return sy;
    return 0;
  }
  const cpp_int lhs = big(x.num()) * big(x.num()) * big(y.den()) * big(y.den());
  const cpp_int rhs = big(y.num()) * big(y.num()) * big(d) * big(x.den()) * big(x.den());
  if (lhs > rhs) return sx;
  if (lhs < rhs) return sy;
  return 0;  // unreachable for square-free d > 1 unless both vanish
}

}  // namespace

bool is_square_free(std::int64_t d) {
  if (d <= 0) return false;
  for (std::int64_t p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

QScalar QScalar::exact(const Rational& a, const Rational& b, std::int64_t d) {
  if (!is_square_free(d)) {
    throw ValidationError("radicand must be a positive square-free integer, got " +
                          std::to_string(d));
  }
  QScalar q;
  if (d == 1) {
    q.a_ = a + b;
    return q;
  }
  q.a_ = a;
  q.b_ = b;
  q.d_ = b.is_zero() ? 0 : d;
  return q;
}

QScalar QScalar::sqrt_of(std::int64_t n) {
  if (n <= 0) throw ValidationError("sqrt_of needs a positive integer");
  std::int64_t outside = 1;
  std::int64_t inside = n;
  for (std::int64_t p = 2; p * p <= inside; ++p) {
    while (inside % (p * p) == 0) {
      inside /= p * p;
      outside *= p;
    }
  }
  if (inside == 1) return QScalar(outside);
  return exact(Rational{}, Rational{outside}, inside);
}

QScalar QScalar::approx(double v) {
  QScalar q;
  q.exact_ = false;
  q.f_ = v;
  return q;
}

long double QScalar::long_value() const {
  if (!exact_) return f_;
  if (b_.is_zero()) return a_.to_long_double();
  const long double root = std::sqrt(static_cast<long double>(d_));
  const long double a = a_.to_long_double();
  const long double b = b_.to_long_double();
  if (a_.sign() * b_.sign() >= 0) return a + b * root;
  // Opposite signs: (a² − b²d) / (a − b√d) keeps full relative accuracy.
  try {
    const Rational norm = a_ * a_ - b_ * b_ * Rational{d_};
    return norm.to_long_double() / (a - b * root);
  } catch (const OverflowError&) {
    return a + b * root;
  }
}

double QScalar::value() const {
  if (!exact_) return f_;
  if (b_.is_zero()) return a_.to_double();
  return static_cast<double>(long_value());
}

int QScalar::sign() const {
  if (!exact_) return (f_ > 0) - (f_ < 0);
  if (b_.is_zero()) return a_.sign();
  return surd_sign(a_, b_, d_);
}

bool QScalar::is_zero(double tol) const {
  if (exact_) return a_.is_zero() && b_.is_zero();
  return std::abs(f_) <= tol;
}

QScalar QScalar::conjugate() const {
  if (!exact_ || b_.is_zero()) return *this;
  QScalar q = *this;
  q.b_ = -b_;
  return q;
}

QScalar QScalar::operator-() const {
  QScalar q = *this;
  if (exact_) {
    q.a_ = -a_;
    q.b_ = -b_;
  } else {
    q.f_ = -f_;
  }
  return q;
}

QScalar& QScalar::operator+=(const QScalar& o) {
  if (exact_ && o.exact_ && (d_ == 0 || o.d_ == 0 || d_ == o.d_)) {
    a_ += o.a_;
    b_ += o.b_;
    d_ = b_.is_zero() ? 0 : (d_ != 0 ? d_ : o.d_);
    return *this;
  }
  *this = approx(value() + o.value());
  return *this;
}

QScalar& QScalar::operator-=(const QScalar& o) { return *this += -o; }

QScalar& QScalar::operator*=(const QScalar& o) {
  if (exact_ && o.exact_ && (d_ == 0 || o.d_ == 0 || d_ == o.d_)) {
    const std::int64_t d = d_ != 0 ? d_ : o.d_;
    Rational a = a_ * o.a_;
    if (d != 0 && !b_.is_zero() && !o.b_.is_zero()) a += b_ * o.b_ * Rational{d};
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = a;
    b_ = b;
    d_ = b_.is_zero() ? 0 : d;
    return *this;
  }
  *this = approx(value() * o.value());
  return *this;
}

bool operator==(const QScalar& x, const QScalar& y) {
  if (x.exact_ && y.exact_) return x.a_ == y.a_ && x.b_ == y.b_ && x.d_ == y.d_;
  return x.value() == y.value();
}

int compare(const QScalar& x, const QScalar& y) {
  return (x - y).sign();
}

std::string QScalar::str() const {
  std::ostringstream os;
  if (!exact_) {
    os.precision(17);
    os << f_;
    return os.str();
  }
  if (b_.is_zero()) return a_.str();
  if (!a_.is_zero()) os << a_.str() << (b_.sign() > 0 ? "+" : "");
  os << b_.str() << "*sqrt(" << d_ << ")";
  return os.str();
}

}  // namespace qpwave

std::size_t std::hash<qpwave::QScalar>::operator()(const qpwave::QScalar& q) const noexcept {
  if (!q.is_exact()) return std::hash<double>{}(q.value());
  std::size_t h = std::hash<qpwave::Rational>{}(q.rational_part());
  h ^= std::hash<qpwave::Rational>{}(q.surd_part()) * 31 + static_cast<std::size_t>(q.radicand());
  return h;
}
