#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qpwave/nls.hpp"

using namespace qpwave;

namespace {

double max_coeff_diff(const TrigPoly& f, const TrigPoly& g) {
  double m = 0;
  for (const auto& t : f.terms()) m = std::max(m, std::abs(t.c - g.coeff(t.n)));
  for (const auto& t : g.terms()) m = std::max(m, std::abs(t.c - f.coeff(t.n)));
  return m;
}

/// Random data on the ball |n| ≤ r, scaled to the given 𝓛² norm.
TrigPoly scaled_data(const LatticeSpec& s, std::size_t modes, int r, double norm, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto f = oracle::random_poly(s, modes, r, rng);
  return f.scaled(norm / f.l2_norm());
}

SolverConfig small_config(double T = 0.02) {
  SolverConfig cfg;
  cfg.trunc_height = 4;
  cfg.dt = 1e-3;
  cfg.T = T;
  return cfg;
}

}  // namespace

TEST_CASE("cubic nonlinearity examples") {
  const auto s = LatticeSpec::sqrt2();
  const Complex a(0.6, -0.8);
  const auto u = TrigPoly::mode(s, {2, -1}, a * 2.0);
  const auto n = cubic_nonlinearity(u, 1, 8);
  REQUIRE(n.value.size() == 1);
  CHECK(std::abs(n.value.coeff({2, -1}) - std::norm(2.0 * a) * 2.0 * a) < 1e-14);
  CHECK(n.discarded == 0.0);
  const auto c = TrigPoly::mode(s, {0, 0}, 1.5);
  CHECK(cubic_nonlinearity(c, -1, 8).value.coeff({0, 0}) == Complex(-1.5 * 1.5 * 1.5));
  // The only mode sits outside a ball of radius 1: everything is discarded.
  const auto gone = cubic_nonlinearity(u, 1, 1);
  CHECK(gone.value.empty());
  CHECK(gone.discarded == doctest::Approx(std::pow(2.0, 6)));
}

TEST_CASE("cubic nonlinearity of the extremizer counts representations") {
  const auto s = LatticeSpec::sqrt2();
  const auto f = extremizer(s, 16);
  std::map<LatticeIndex, int> reps;
  for (const auto& a : f.terms())
    for (const auto& b : f.terms())
      for (const auto& c : f.terms()) ++reps[a.n - b.n + c.n];
  const auto n = cubic_nonlinearity(f, 1, INFINITY).value;
  CHECK(n.size() == reps.size());
  for (const auto& [k, count] : reps) CHECK(n.coeff(k) == Complex(count));
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  auto bad = cfg;
  bad.dt = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.power = 1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.sign = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.max_picard = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  const auto s = LatticeSpec::sqrt2();
  bad = cfg;
  bad.trunc_height = 2;
  CHECK_THROWS_AS(solve(TrigPoly::mode(s, {3, 0}), bad), ValidationError);
}

TEST_CASE("zero data stays zero") {
  const auto s = LatticeSpec::sqrt2();
  const auto r = solve(TrigPoly(s), small_config());
  CHECK(r.state.empty());
  CHECK(r.trace.mass_drift() == 0.0);
  CHECK(r.trace.rows.size() == 21);
}

TEST_CASE("single-mode closed form") {
  const auto s = LatticeSpec::sqrt2();
  const LatticeIndex n{1, 1};
  const double lam = s.freq1_value(n);
  const Complex a(0.9, 0.4);
  for (int sign : {1, -1}) {
    for (int power : {2, 3}) {
      auto cfg = small_config(0.1);
      cfg.sign = sign;
      cfg.power = power;
      const auto r = solve(TrigPoly::mode(s, n, a), cfg);
      const double nl = sign * std::pow(std::norm(a), power - 1);
      const Complex want = a * std::polar(1.0, -cfg.T * (lam * lam + nl));
      CHECK(std::abs(r.state.coeff(n) - want) < 1e-8);
      CHECK(r.state.size() == 1);
    }
  }
}

TEST_CASE("mass is conserved and the trace is complete") {
  const auto s = LatticeSpec::sqrt2();
  const auto u0 = scaled_data(s, 30, 4, 1.0, 79);
  auto cfg = small_config(0.05);
  cfg.trunc_height = 8;
  const auto r = solve(u0, cfg);
  REQUIRE(r.trace.rows.size() == 51);
  CHECK(r.trace.mass_drift() < 1e-10);
  for (const auto& row : r.trace.rows) {
    CHECK(row.mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(row.hs_norm >= std::sqrt(row.mass));
  }
  CHECK(r.trace.rows.back().t == doctest::Approx(0.05));
  CHECK(r.trace.rows[1].picard_iters >= 2);
  CHECK(r.trace.rows[1].contraction < 1.0);
}

TEST_CASE("gauge covariance") {
  const auto s = LatticeSpec::sqrt2();
  const auto u0 = scaled_data(s, 12, 3, 1.2, 83);
  const Complex g = std::polar(1.0, 0.9);
  const auto cfg = small_config();
  const auto a = solve(u0, cfg).state;
  const auto b = solve(u0.scaled(g), cfg).state;
  CHECK(max_coeff_diff(a.scaled(g), b) < 1e-10);
}

TEST_CASE("Galilean covariance with a shifted truncation ball") {
  const auto s = LatticeSpec::sqrt2();
  const auto u0 = scaled_data(s, 10, 3, 1.0, 89);
  const LatticeIndex a{2, -1};
  auto cfg = small_config();
  const auto u = solve(u0, cfg).state;
  cfg.trunc_center = a;
  const auto ua = solve(galilean_boost(u0, a), cfg).state;
  CHECK(max_coeff_diff(boost_solution(u, a, cfg.T), ua) < 1e-8);
}

TEST_CASE("non-contraction is reported") {
  const auto s = LatticeSpec::sqrt2();
  const auto u0 = scaled_data(s, 12, 3, 30.0, 97);
  auto cfg = small_config();
  cfg.dt = 0.02;
  cfg.max_picard = 5;
  CHECK_THROWS_AS(solve(u0, cfg), NonContractionError);
}

TEST_CASE("truncation warning") {
  const auto s = LatticeSpec::sqrt2();
  // Data filling the ball pushes cubic output past the edge.
  const auto u0 = scaled_data(s, 12, 4, 3.0, 101);
  auto cfg = small_config(0.005);
  const auto r = solve(u0, cfg);
  CHECK(r.trace.truncation_warning);
  CHECK(r.trace.max_trunc_loss > cfg.trunc_warn);
  cfg.trunc_height = 16;
  CHECK(solve(TrigPoly::mode(s, {1, 0}), cfg).trace.max_trunc_loss == 0.0);
}

TEST_CASE("first Picard iterate") {
  const auto s = LatticeSpec::sqrt2();
  const Complex a(0.3, 1.1);
  const auto one = picard_coefficients(TrigPoly::mode(s, {1, 2}, a), 0.25);
  CHECK(std::abs(one.coeff({1, 2}) - std::norm(a) * a * 0.25) < 1e-15);
  const auto f = scaled_data(s, 6, 3, 1.0, 103);
  CHECK(first_picard_iterate(f, 0.0).empty());
  for (double t : {0.01, 0.5}) {
    const auto exact = first_picard_iterate(f, t);
    const auto quad = oracle::duhamel_quadrature(f, t);
    CHECK(max_coeff_diff(exact, quad) < 1e-8);
  }
  const double n1 = first_picard_iterate(f, 1e-4).l2_norm();
  const double n2 = first_picard_iterate(f, 2e-4).l2_norm();
  CHECK(n2 / n1 == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("Picard scan rejects rank-one lattices and non-positive t") {
  const auto z = LatticeSpec::one_dim({QScalar(1)});
  CHECK_THROWS_AS(picard_blowup_scan(z, {2, 4, 8}, 0.01), DegenerateError);
  CHECK_THROWS_AS(picard_blowup_scan(LatticeSpec::sqrt2(), {8, 16}, 0.0), ValidationError);
  const auto r = picard_blowup_scan(LatticeSpec::sqrt2(), {4, 8, 16}, 0.01);
  CHECK(r.rows.size() == 3);
  CHECK(r.fit_valid);
  CHECK(r.fit.slope > 1.5);
}
