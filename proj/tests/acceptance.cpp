// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qpwave/evolution.hpp"
#include "qpwave/kdv.hpp"
#include "qpwave/meannorms.hpp"
#include "qpwave/nls.hpp"
#include "qpwave/verify.hpp"

using namespace qpwave;

namespace {

const std::vector<std::int64_t> kHeights = {8, 16, 32, 64};

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double max_coeff_diff(const TrigPoly& f, const TrigPoly& g) {
  double m = 0;
  for (const auto& t : f.terms()) m = std::max(m, std::abs(t.c - g.coeff(t.n)));
  for (const auto& t : g.terms()) m = std::max(m, std::abs(t.c - f.coeff(t.n)));
  return m;
}

TrigPoly unit_random(const LatticeSpec& s, std::size_t modes, int r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto f = oracle::random_poly(s, modes, r, rng);
  return f.scaled(1.0 / f.l2_norm());
}

RealField unit_field(const LatticeSpec& s, std::size_t half, int r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<LatticeIndex> pool;
  for (const auto& n : oracle::cube(s.rank(), r))
    if (n.is_canonical_half() && n.norm2() <= static_cast<std::int64_t>(r) * r) pool.push_back(n);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(half, pool.size()));
  std::normal_distribution<double> g;
  std::vector<Term> terms;
  for (const auto& n : pool) terms.push_back({n, Complex(g(rng), g(rng))});
  double norm2 = 0;
  for (const auto& t : terms) norm2 += 2 * std::norm(t.c);
  for (auto& t : terms) t.c /= std::sqrt(norm2);
  return RealField::from_half(s, terms);
}

Outcome slope_in(const ScanReport& r, double lo, double hi) {
  if (!r.fit_valid) return {false, "no fit"};
  const double s = r.fit.slope;
  return {s >= lo && s <= hi, fmt("slope %.4f", s) + fmt(" band [%.2f, %.2f]", lo, hi)};
}

Outcome extremizer_l4() { return slope_in(extremizer_lp_scan(LatticeSpec::sqrt2(), 4, kHeights), 2.7, 3.3); }

Outcome extremizer_l6() { return slope_in(extremizer_lp_scan(LatticeSpec::sqrt2(), 6, kHeights), 4.5, 5.5); }

Outcome strichartz() {
  const auto r = strichartz_scan(LatticeSpec::sqrt2(), DispersionSymbol::schrodinger(), 4, 0.1, kHeights);
  if (!r.max_ratio.fit_valid || !r.extremizer.fit_valid) return {false, "no fit"};
  const double a = r.max_ratio.fit.slope, b = r.extremizer.fit.slope;
  return {a <= 0.40 && b >= 0.10, fmt("max-ratio slope %.4f (<= 0.40), ", a) + fmt("extremizer slope %.4f (>= 0.10)", b)};
}

Outcome counting() {
  const auto two = counting_scan(LatticeSpec::sqrt2(), kHeights);
  const auto three = counting_scan(LatticeSpec::one_dim({QScalar(1), QScalar::sqrt_of(2), QScalar::sqrt_of(3)}), kHeights);
  if (!two.fit_valid || !three.fit_valid) return {false, "no fit"};
  const double a = two.fit.slope, b = three.fit.slope;
  return {std::abs(a - 1) <= 0.2 && std::abs(b - 2) <= 0.2,
          fmt("nu=2 slope %.4f (1 +- 0.2), ", a) + fmt("nu=3 slope %.4f (2 +- 0.2)", b)};
}

Outcome averaged() {
  const auto r = averaged_norm_check(LatticeSpec::sqrt2(), DispersionSymbol::schrodinger(), kHeights, 2.0);
  if (!r.extremizer.fit_valid) return {false, "no fit"};
  const double s = r.extremizer.fit.slope;
  return {std::abs(s) <= 0.1 && r.holds, fmt("extremizer slope %.4f (0 +- 0.1), ", s) +
                                             fmt("max ratio %.4f (bound %.1f)", r.max_observed, r.bound)};
}

Outcome picard() {
  return slope_in(picard_blowup_scan(LatticeSpec::sqrt2(), kHeights, 0.01), 2.2, 2.8);
}

Outcome oracles() {
  const auto s = LatticeSpec::sqrt2();
  double worst = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    std::mt19937_64 rng(1000 + k);
    const auto f = oracle::random_poly(s, 10, 3, rng);
    const double L = default_window(f);
    for (int p : {4, 6}) {
      const double exact = lp_norm_exact(f, p);
      worst = std::max(worst, std::abs(lp_norm_numeric(f, p, L) - exact) / exact);
    }
  }
  double picard_err = 0;
  for (std::uint64_t k = 0; k < 5; ++k) {
    const auto f = unit_random(s, 6, 3, 2000 + k);
    for (double t : {0.01, 0.3}) {
      picard_err = std::max(picard_err, max_coeff_diff(first_picard_iterate(f, t), oracle::duhamel_quadrature(f, t)));
    }
  }
  return {worst <= 0.05 && picard_err <= 1e-8,
          fmt("lp exact vs numeric max rel %.2e (<= 5e-2), ", worst) + fmt("picard vs quadrature %.2e (<= 1e-8)", picard_err)};
}

Outcome conservation() {
  const auto s = LatticeSpec::sqrt2();
  SolverConfig cfg;
  cfg.trunc_height = 10;
  cfg.dt = 1e-3;
  cfg.T = 0.1;
  const auto u0 = unit_random(s, 50, 5, 3001);
  const double nls_drift = solve(u0, cfg).trace.mass_drift();

  SolverConfig kcfg = cfg;
  kcfg.T = 0.05;
  const auto v0 = unit_field(s, 20, 5, 3002);
  const double kdv_drift = kdv_solve(v0, kcfg).trace.mass_drift();

  double boost = 0;
  for (std::uint64_t k = 0; k < 5; ++k) {
    const auto f = unit_random(s, 8, 4, 3100 + k);
    const auto r = boost_mixed_norm_check(f, {3, -2}, 0.5);
    boost = std::max(boost, std::abs(r.norm - r.norm_boosted) / r.norm);
  }

  SolverConfig gcfg = cfg;
  gcfg.trunc_height = 5;
  gcfg.T = 0.05;
  const auto w0 = unit_random(s, 12, 3, 3200);
  const Complex phase = std::polar(1.0, 1.3);
  const double gauge = max_coeff_diff(solve(w0, gcfg).state.scaled(phase), solve(w0.scaled(phase), gcfg).state);

  double unitary = 0;
  for (const auto& sym : {DispersionSymbol::schrodinger(), DispersionSymbol::airy()}) {
    for (double t : {0.1, 3.0, -17.0}) {
      unitary = std::max(unitary, std::abs(propagate(u0, sym, t).l2_norm() - u0.l2_norm()));
    }
  }
  const bool ok = nls_drift < 1e-8 && kdv_drift < 1e-8 && boost <= 1e-10 && gauge <= 1e-10 && unitary <= 1e-12;
  return {ok, fmt("nls drift %.1e, ", nls_drift) + fmt("kdv drift %.1e, ", kdv_drift) + fmt("boost %.1e, ", boost) +
                  fmt("gauge %.1e, ", gauge) + fmt("unitarity %.1e", unitary)};
}

Outcome biorthogonality() {
  bool ok = true;
  std::string detail;
  for (double delta : {1e-3, 1e-4}) {
    const auto r = biorthogonality_check(delta, 1e-3, 10.0);
    const double brute = oracle::biorthogonality_brute(delta, 1000);
    const bool agree = std::abs(brute - r.max_normalized_distance) <= 1e-9 * std::max(1.0, brute);
    ok = ok && r.holds && agree && r.max_normalized_distance <= 10.0;
    detail += fmt("delta %.0e: ", delta) + fmt("K %.4f (brute %.4f); ", r.max_normalized_distance, brute);
  }
  return {ok, detail + "bound 10"};
}

Outcome resonance_identity() {
  std::mt19937_64 rng(4001);
  std::uniform_int_distribution<int> num(-60, 60), den(1, 16);
  std::size_t exact_bad = 0;
  for (int k = 0; k < 10000; ++k) {
    const QScalar a = QScalar::exact(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), 2);
    const QScalar b = QScalar::exact(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), 2);
    const auto r = resonance(a, b);
    if (!(r.expanded.is_exact() && r.expanded == r.factored && r.agree)) ++exact_bad;
  }
  std::uniform_real_distribution<double> u(-100, 100);
  double worst = 0;
  for (int k = 0; k < 10000; ++k) {
    const double x = u(rng), y = u(rng);
    const auto r = resonance(QScalar::approx(x), QScalar::approx(y));
    const long double lx = x, ly = y;
    const long double want = 3 * std::abs((lx + ly) * lx * ly);
    const double scale = std::pow(std::max({std::abs(x), std::abs(y), std::abs(x + y)}), 3);
    worst = std::max(worst, static_cast<double>(std::abs(std::abs(r.factored.value()) - want)) / scale);
    if (!r.agree) worst = std::max(worst, 1.0);
  }
  return {exact_bad == 0 && worst <= 1e-12,
          fmt("exact mismatches %.0f of 10000, ", static_cast<double>(exact_bad)) + fmt("float max rel %.1e (<= 1e-12)", worst)};
}

Outcome predictor() {
  const Rational s4 = predicted_exponent(Rational(4), 1, 1);
  const Rational s6 = predicted_exponent(Rational(6), 1, 1);
  bool alpha_ok = true;
  for (int d = 1; d <= 6; ++d) alpha_ok = alpha_ok && decoupling_alpha(critical_exponent(d), d) == Rational(0);
  return {s4 == Rational(1, 4) && s6 == Rational(1, 3) && alpha_ok,
          "s*(4,1,1) = " + s4.str() + ", s*(6,1,1) = " + s6.str() + ", alpha(p_d) = 0 for d = 1..6: " +
              (alpha_ok ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "extremizer L4 slope", 60, extremizer_l4},
      {2, "extremizer L6 slope", 300, extremizer_l6},
      {3, "fixed-time Strichartz scan", 300, strichartz},
      {4, "counting exponent", 60, counting},
      {5, "averaged estimate loss-free", 60, averaged},
      {6, "Picard blow-up slope", 120, picard},
      {7, "oracle equivalence", 120, oracles},
      {8, "conservation and covariance", 120, conservation},
      {9, "biorthogonality", 120, biorthogonality},
      {10, "resonance identity", 60, resonance_identity},
      {11, "exponent predictor", 60, predictor},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.time_limit;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s [%2d] %s: %s; %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.time_limit);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
