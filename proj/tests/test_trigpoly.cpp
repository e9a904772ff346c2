#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qpwave/trigpoly.hpp"

using namespace qpwave;

namespace {

LatticeSpec integers() { return LatticeSpec::one_dim({QScalar(1)}); }

TrigPoly from(const LatticeSpec& spec, std::vector<Term> terms) { return TrigPoly::from_terms(spec, std::move(terms)); }

}  // namespace

TEST_CASE("canonical form merges duplicates and drops zeros") {
  const auto s = LatticeSpec::sqrt2();
  const auto f = from(s, {{{1, 0}, 1.0}, {{0, 1}, 2.0}, {{1, 0}, -1.0}, {{2, 2}, 0.0}});
  REQUIRE(f.size() == 1);
  CHECK(f.coeff({0, 1}) == Complex(2.0));
  CHECK(f.coeff({1, 0}) == Complex(0.0));
  CHECK_THROWS_AS(from(s, {{{1, 0, 0}, 1.0}}), DimensionError);
  CHECK_THROWS_AS(from(s, {{{1, 0}, Complex(NAN, 0)}}), ValidationError);
  const auto g = from(s, {{{3, 0}, 1.0}, {{-1, 2}, 1.0}, {{0, 0}, 1.0}});
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.terms()[i - 1].n < g.terms()[i].n);
}

TEST_CASE("project_height examples") {
  const auto s = LatticeSpec::sqrt2();
  const auto f = from(s, {{{1, 0}, 1.0}, {{3, 3}, 1.0}});
  CHECK(project_height(f, 4).empty());
  CHECK(project_height(f, 1) == from(s, {{{1, 0}, 1.0}}));
  CHECK(project_height(f, 8) == from(s, {{{3, 3}, 1.0}}));
  CHECK_THROWS_AS(project_height(f, 3), ValidationError);

  std::mt19937_64 rng(7);
  const auto g = oracle::random_poly(s, 40, 8, rng);
  TrigPoly sum(s);
  double mass = 0;
  for (std::int64_t c : {1, 2, 4, 8}) {
    const auto r = project_height(g, c);
    CHECK(project_height(r, c) == r);
    sum = sum + r;
    mass += r.l2_norm2();
  }
  CHECK(sum == g);
  CHECK(mass == doctest::Approx(g.l2_norm2()).epsilon(1e-14));
}

TEST_CASE("project_freq examples") {
  const auto s = LatticeSpec::sqrt2();
  const auto f = TrigPoly::mode(s, {1, 1});
  CHECK(project_freq(f, 4) == f);
  CHECK(project_freq(f, 2).empty());
  // |λ| = 2 exactly sits in (1, 2], and λ = 1 in the N = 1 ball.
  CHECK(project_freq(TrigPoly::mode(s, {2, 0}), 2).size() == 1);
  CHECK(project_freq(TrigPoly::mode(s, {-1, 0}), 1).size() == 1);
  CHECK(project_freq(TrigPoly::mode(s, {-1, 0}), 2).empty());

  std::mt19937_64 rng(11);
  auto g = oracle::random_poly(s, 30, 6, rng);
  g = g + g.conjugate();
  REQUIRE(g.is_real_valued(1e-15));
  TrigPoly sum(s);
  for (std::int64_t n = 1; n <= 16; n *= 2) {
    const auto p = project_freq(g, n);
    CHECK(project_freq(p, n) == p);
    for (const auto& t : p.terms()) CHECK(p.coeff(-t.n) == std::conj(t.c));
    sum = sum + p;
  }
  CHECK(sum == g);
}

TEST_CASE("project_cube examples") {
  const auto s = LatticeSpec::sqrt2();
  std::mt19937_64 rng(3);
  const auto f = oracle::random_poly(s, 30, 6, rng);
  const LatticeIndex zero{0, 0};
  const auto ball = project_cube(f, zero, 4);
  for (const auto& t : f.terms()) CHECK((ball.coeff(t.n) != Complex(0)) == (t.n.norm2() <= 16));
  const auto& pivot = f.terms()[5].n;
  const auto one = project_cube(f, pivot, 0);
  REQUIRE(one.size() == 1);
  CHECK(one.coeff(pivot) == f.terms()[5].c);
  const LatticeIndex a{3, -2};
  CHECK(project_cube(f.shifted(a), a, 3) == project_cube(f, zero, 3).shifted(a));
}

TEST_CASE("multiply examples") {
  const auto z = integers();
  const auto f = from(z, {{{0}, 1.0}, {{1}, 1.0}});
  CHECK(multiply(f, f) == from(z, {{{0}, 1.0}, {{1}, 2.0}, {{2}, 1.0}}));

  const auto s = LatticeSpec::sqrt2();
  std::mt19937_64 rng(5);
  const auto g = oracle::random_poly(s, 12, 4, rng);
  CHECK(multiply(g, g.conjugate()).coeff({0, 0}).real() == doctest::Approx(g.l2_norm2()).epsilon(1e-14));
  const LatticeIndex m{2, -1};
  CHECK(multiply(g, TrigPoly::mode(s, m)) == g.shifted(m));
  CHECK_THROWS_AS(multiply(g, g, Budget{10}), BudgetError);
  CHECK_THROWS_AS(multiply(g, TrigPoly::mode(z, {0})), ValidationError);
}

TEST_CASE("multiply is commutative and associative on Gaussian-integer data") {
  const auto s = LatticeSpec::sqrt2();
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = oracle::random_poly(s, 6, 3, rng, true);
    const auto b = oracle::random_poly(s, 6, 3, rng, true);
    const auto c = oracle::random_poly(s, 6, 3, rng, true);
    CHECK(multiply(a, b) == multiply(b, a));
    CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
  }
}

TEST_CASE("conjugate is an involution that fixes real data") {
  const auto s = LatticeSpec::sqrt2();
  std::mt19937_64 rng(19);
  const auto f = oracle::random_poly(s, 15, 5, rng);
  CHECK(f.conjugate().conjugate() == f);
  for (const auto& t : f.terms()) CHECK(f.conjugate().coeff(-t.n) == std::conj(t.c));
  const auto r = f + f.conjugate();
  CHECK(r.conjugate() == r);
  CHECK(r.is_real_valued());
  CHECK_FALSE(TrigPoly::mode(s, {1, 0}).is_real_valued());
}

TEST_CASE("sobolev_norm examples") {
  const auto s = LatticeSpec::sqrt2();
  const auto f = TrigPoly::mode(s, {1, 1});
  CHECK(sobolev_norm(f, {2.5, 0}) == doctest::Approx(std::pow(1 + std::sqrt(2.0), 2.5)).epsilon(1e-14));
  CHECK(sobolev_norm(f, {0, 0.3}) == doctest::Approx(std::exp(0.3 * std::sqrt(2.0))).epsilon(1e-14));
  std::mt19937_64 rng(23);
  const auto g = oracle::random_poly(s, 20, 6, rng);
  CHECK(sobolev_norm(g, {0, 0}) == doctest::Approx(g.l2_norm()).epsilon(1e-14));
  CHECK_THROWS_AS(sobolev_norm(g, {1, -0.1}), ValidationError);
}

TEST_CASE("extremizer support matches enumeration") {
  const auto s = LatticeSpec::sqrt2();
  const std::vector<long double> w = {1.0L, std::sqrt(2.0L)};
  for (std::int64_t c : {4, 8, 16, 32}) {
    const auto f = extremizer(s, c);
    std::size_t want = 0;
    for (const auto& n : oracle::cube(2, static_cast<int>(c))) {
      if (oracle::in_shell(n, c) && std::abs(oracle::freq(w, n)) <= 1.0L) {
        ++want;
        CHECK(f.coeff(n) == Complex(1.0));
      }
    }
    CHECK(f.size() == want);
    CHECK(f.is_real_valued());
    CHECK(sobolev_norm(f, {0, 0}) == doctest::Approx(std::sqrt(static_cast<double>(want))));
  }
  CHECK(extremizer(s, 8).size() == 8);
  // Rank one: only the shell point with |n| ≤ 1 survives.
  CHECK(extremizer(integers(), 1).size() == 3);
  CHECK_THROWS_AS(extremizer(integers(), 4), DegenerateError);
}
