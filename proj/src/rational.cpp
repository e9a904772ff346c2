#include "qpwave/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include "qpwave/errors.hpp"

namespace qpwave {
namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(i128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = from_wide(num, den);
}

Rational Rational::from_wide(i128 num, i128 den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (den != 1) {
    i128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  if (!fits64(num) || !fits64(den)) {
    throw OverflowError("rational arithmetic overflowed 64-bit range");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw ValidationError("empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational n = parse(text.substr(0, slash));
    Rational d = parse(text.substr(slash + 1));
    if (d.is_zero()) throw ValidationError("rational literal with zero denominator");
    return n / d;
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  i128 mantissa = 0;
  int frac_digits = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (!fits64(mantissa)) throw OverflowError("rational literal too long: " + std::string(text));
      if (seen_point) ++frac_digits;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw ValidationError("malformed rational literal: " + std::string(text));
  int exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') {
      throw ValidationError("malformed rational literal: " + std::string(text));
    }
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    if (i >= text.size()) throw ValidationError("malformed exponent: " + std::string(text));
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
        throw ValidationError("malformed exponent: " + std::string(text));
      }
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 36) throw OverflowError("rational exponent too large: " + std::string(text));
    }
    if (exp_negative) exponent = -exponent;
  }
  exponent -= frac_digits;
  i128 num = negative ? -mantissa : mantissa;
  i128 den = 1;
  for (; exponent > 0; --exponent) {
    num *= 10;
    if (!fits64(num)) throw OverflowError("rational literal too large: " + std::string(text));
  }
  for (; exponent < 0; ++exponent) {
    den *= 10;
    if (!fits64(den)) throw OverflowError("rational literal too precise: " + std::string(text));
  }
  return from_wide(num, den);
}

Rational Rational::from_double(double v) {
  if (!std::isfinite(v)) throw ValidationError("cannot convert non-finite double to rational");
  if (v == 0.0) return Rational{};
  int exp = 0;
  double m = std::frexp(v, &exp);  // v = m * 2^exp, 0.5 <= |m| < 1
  // 53 mantissa bits as an integer.
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  exp -= 53;
  while (exp < 0 && (mant % 2) == 0) {
    mant /= 2;
    ++exp;
  }
  if (exp >= 0) {
    if (exp > 62) throw OverflowError("double too large for exact rational");
    i128 n = static_cast<i128>(mant) << exp;
    return from_wide(n, 1);
  }
  if (-exp > 62) throw OverflowError("double too small for exact rational");
  return from_wide(mant, static_cast<i128>(1) << (-exp));
}

double Rational::to_double() const noexcept {
  if (den_ == 1) return static_cast<double>(num_);
  return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

long double Rational::to_long_double() const noexcept {
  return static_cast<long double>(num_) / static_cast<long double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
  return from_wide(-static_cast<i128>(num_), den_);
}

Rational& Rational::operator+=(const Rational& o) {
  if (den_ == 1 && o.den_ == 1) {
    i128 s = static_cast<i128>(num_) + o.num_;
    if (!fits64(s)) throw OverflowError("rational arithmetic overflowed 64-bit range");
    num_ = static_cast<std::int64_t>(s);
    return *this;
  }
  *this = from_wide(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                    static_cast<i128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  if (den_ == 1 && o.den_ == 1) {
    i128 p = static_cast<i128>(num_) * o.num_;
    if (!fits64(p)) throw OverflowError("rational arithmetic overflowed 64-bit range");
    num_ = static_cast<std::int64_t>(p);
    return *this;
  }
  // Cross-reduce first to keep intermediates small.
  std::int64_t g1 = std::gcd(num_, o.den_);
  std::int64_t g2 = std::gcd(o.num_, den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  *this = from_wide(static_cast<i128>(num_ / g1) * (o.num_ / g2),
                    static_cast<i128>(den_ / g2) * (o.den_ / g1));
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw ValidationError("rational division by zero");
  *this *= from_wide(o.den_, o.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  i128 l = static_cast<i128>(a.num_) * b.den_;
  i128 r = static_cast<i128>(b.num_) * a.den_;
  return l <=> r;
}

}  // namespace qpwave
