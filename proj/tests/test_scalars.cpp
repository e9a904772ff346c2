#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>

#include "doctest.h"
#include "qpwave/errors.hpp"
#include "qpwave/qscalar.hpp"

using qpwave::QScalar;
using qpwave::Rational;

namespace {

QScalar random_q2(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-40, 40), den(1, 12);
  return QScalar::exact(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), 2);
}

double ulp_distance(double a, double b) {
  if (a == b) return 0;
  return std::abs(a - b) / std::abs(std::nextafter(a, b) - a);
}

}  // namespace

TEST_CASE("rational normalization and arithmetic") {
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 2) / Rational(-1, 4) == Rational(-2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS_AS(Rational(1, 0), qpwave::ValidationError);
  CHECK_THROWS_AS(Rational(1) / Rational(0), qpwave::ValidationError);
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("-3/9") == Rational(-1, 3));
  CHECK(Rational::parse("1.25") == Rational(5, 4));
  CHECK(Rational::parse("3e-2") == Rational(3, 100));
  CHECK(Rational::parse("2.5E1") == Rational(25));
  CHECK_THROWS_AS(Rational::parse("abc"), qpwave::ValidationError);
  CHECK_THROWS_AS(Rational::parse("1/0"), qpwave::ValidationError);
}

TEST_CASE("rational from_double is exact") {
  CHECK(Rational::from_double(0.75) == Rational(3, 4));
  const Rational tenth = Rational::from_double(0.1);
  CHECK(tenth.to_double() == 0.1);
  CHECK(tenth != Rational(1, 10));
}

TEST_CASE("rational overflow is reported") {
  const Rational big(std::int64_t{1} << 62);
  CHECK_THROWS_AS(big * big, qpwave::OverflowError);
}

TEST_CASE("square-free radicands") {
  CHECK(qpwave::is_square_free(2));
  CHECK(qpwave::is_square_free(30));
  CHECK_FALSE(qpwave::is_square_free(12));
  CHECK_THROWS_AS(QScalar::exact(1, 1, 4), qpwave::ValidationError);
  CHECK_THROWS_AS(QScalar::exact(1, 1, -2), qpwave::ValidationError);
  CHECK(QScalar::sqrt_of(8) == QScalar::exact(0, 2, 2));
  CHECK(QScalar::sqrt_of(9) == QScalar(3));
  CHECK(QScalar::exact(1, 2, 1) == QScalar(3));
}

TEST_CASE("exact ring laws in Q(sqrt 2)") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const QScalar x = random_q2(rng), y = random_q2(rng), z = random_q2(rng);
    CHECK((x + y) + z == x + (y + z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x * y == y * x);
    CHECK((x - x).is_zero());
    CHECK(x.is_exact());
  }
}

TEST_CASE("exact sign and comparison") {
  // 577 − 408√2 ≈ 8.7e−4 > 0 and 99 − 70√2 ≈ 7.1e−3 > 0.
  CHECK(QScalar::exact(577, -408, 2).sign() == 1);
  CHECK(QScalar::exact(-577, 408, 2).sign() == -1);
  CHECK(qpwave::compare(QScalar::exact(577, -408, 2), QScalar::exact(99, -70, 2)) < 0);
  // Large parts take the multiprecision path.
  const QScalar pell = QScalar::exact(Rational(665857), Rational(-470832), 2);
  CHECK(pell.sign() == 1);
  CHECK(pell.value() > 0);
  CHECK(pell.value() < 1e-5);
  CHECK(QScalar::exact(0, 0, 2).is_zero());
  CHECK_FALSE(QScalar::exact(0, 1, 2).is_zero());
}

TEST_CASE("float value within 4 ulps of the correctly rounded value") {
  using big = boost::multiprecision::cpp_bin_float_50;
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> num(-100000, 100000), den(1, 999);
  for (int i = 0; i < 2000; ++i) {
    const Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    const QScalar q = QScalar::exact(a, b, 3);
    const big ref = big(a.num()) / big(a.den()) + big(b.num()) / big(b.den()) * sqrt(big(3));
    const double want = static_cast<double>(ref);
    if (want == 0) continue;
    CHECK(ulp_distance(q.value(), want) <= 4.0);
  }
  // Heavy cancellation: the Pell-type unit 665857 − 470832√2 ≈ 7.5e−7.
  const QScalar cancel = QScalar::exact(665857, -470832, 2);
  const big ref = big(665857) - big(470832) * sqrt(big(2));
  CHECK(ulp_distance(cancel.value(), static_cast<double>(ref)) <= 4.0);
}

TEST_CASE("mixed fields fall back to float mode") {
  const QScalar s2 = QScalar::sqrt_of(2), s3 = QScalar::sqrt_of(3);
  const QScalar sum = s2 + s3;
  CHECK_FALSE(sum.is_exact());
  CHECK(sum.value() == doctest::Approx(std::sqrt(2.0) + std::sqrt(3.0)).epsilon(1e-15));
  CHECK((s2 * s2) == QScalar(2));
  CHECK((s2 + QScalar(Rational(1, 2))).is_exact());
  const QScalar f = QScalar::approx(0.5);
  CHECK_FALSE((s2 * f).is_exact());
  CHECK(f.is_zero(0.6));
  CHECK_FALSE(f.is_zero());
}

TEST_CASE("conjugate and abs") {
  const QScalar x = QScalar::exact(1, -1, 2);
  CHECK(x.conjugate() == QScalar::exact(1, 1, 2));
  CHECK((x * x.conjugate()) == QScalar(-1));
  CHECK(x.abs() == QScalar::exact(-1, 1, 2));
  CHECK(x.str() == "1-1*sqrt(2)");
}
