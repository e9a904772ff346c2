#include "qpwave/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "detail/parallel.hpp"
#include "qpwave/io.hpp"

namespace qpwave {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

TrigPoly gaussian_on(const LatticeSpec& spec, const std::vector<LatticeIndex>& support, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Term> terms;
  terms.reserve(support.size());
  for (const auto& n : support) {
    const double re = normal(rng);
    const double im = normal(rng);
    terms.push_back({n, Complex(re, im)});
  }
  TrigPoly f = TrigPoly::from_terms(spec, std::move(terms));
  const double norm = f.l2_norm();
  return norm > 0 ? f.scaled(1.0 / norm) : f;
}

std::vector<LatticeIndex> random_subset(const std::vector<LatticeIndex>& pool, std::size_t k, std::mt19937_64& rng) {
  if (pool.size() <= k) return pool;
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  std::vector<LatticeIndex> out;
  out.reserve(k);
  for (auto i : idx) out.push_back(pool[i]);
  return out;
}

std::optional<TrigPoly> try_extremizer(const LatticeSpec& spec, std::int64_t c, const Budget& budget) {
  try {
    return extremizer(spec, c, budget);
  } catch (const DegenerateError&) {
    return std::nullopt;
  }
}

json base_config(const std::string& name, const LatticeSpec& spec, const std::vector<std::int64_t>& heights) {
  return {{"scan", name}, {"omega", to_json(spec)}, {"heights", heights}};
}

ScanRow min_max_row(double param, double value, const std::vector<double>& values) {
  ScanRow row{param, value, value, value};
  if (!values.empty()) {
    row.lo_ci = *std::min_element(values.begin(), values.end());
    row.hi_ci = *std::max_element(values.begin(), values.end());
  }
  return row;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t param, std::uint64_t trial) {
  return splitmix64(splitmix64(splitmix64(seed) ^ param) ^ trial);
}

std::vector<TrigPoly> shell_trials(const LatticeSpec& spec, std::int64_t c, const TrialOptions& opt) {
  if (spec.dim() != 1) throw DimensionError("shell trials need d = 1");
  std::vector<TrigPoly> trials;
  const auto ext = try_extremizer(spec, c, opt.budget);
  if (ext) trials.push_back(ext->scaled(1.0 / ext->l2_norm()));
  const auto shell = height_shell(spec.rank(), c, opt.budget);
  if (shell.empty()) return trials;
  trials.push_back(TrigPoly::mode(spec, shell.front()));
  for (std::size_t k = 0; k < opt.trials; ++k) {
    std::mt19937_64 rng(trial_seed(opt.seed, static_cast<std::uint64_t>(c), k));
    if (ext && k % 2 == 1) {
      std::vector<LatticeIndex> support;
      for (const auto& t : ext->terms()) support.push_back(t.n);
      trials.push_back(gaussian_on(spec, support, rng));
    } else {
      trials.push_back(gaussian_on(spec, random_subset(shell, opt.support_cap, rng), rng));
    }
  }
  return trials;
}

StrichartzScan strichartz_scan(const LatticeSpec& spec, const DispersionSymbol& symbol, int p, double T,
                               const std::vector<std::int64_t>& heights, const TrialOptions& opt) {
  if (p != 4) throw ValidationError("the Strichartz scan is implemented for p = 4");
  if (!(T > 0)) throw ValidationError("T must be > 0");
  StrichartzScan out;
  json config = base_config("strichartz", spec, heights);
  config["symbol"] = symbol.name();
  config["p"] = p;
  config["T"] = T;
  config["trials"] = opt.trials;
  config["support_cap"] = opt.support_cap;
  for (auto* r : {&out.max_ratio, &out.extremizer}) {
    r->config = config;
    r->seed = opt.seed;
    r->budget = opt.budget.max_items;
  }
  out.max_ratio.name = "strichartz-max";
  out.extremizer.name = "strichartz-extremizer";
  const MixedNormSpec mspec{4, TimeMode::windowed, T};
  const double scale = std::pow(T, 1.0 / 8.0);
  for (auto c : heights) {
    const auto trials = shell_trials(spec, c, opt);
    const bool has_ext = try_extremizer(spec, c, opt.budget).has_value();
    std::vector<double> ratios(trials.size());
    detail::parallel_for(trials.size(), [&](std::size_t i) {
      ratios[i] = mixed_norm_free(trials[i], symbol, mspec, opt.budget) / (scale * trials[i].l2_norm());
    });
    const double mx = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
    out.max_ratio.rows.push_back(min_max_row(static_cast<double>(c), mx, ratios));
    if (has_ext) out.extremizer.rows.push_back({static_cast<double>(c), ratios[0], ratios[0], ratios[0]});
  }
  out.max_ratio.refit();
  out.extremizer.refit();
  return out;
}

ScanReport bilinear_scan(const LatticeSpec& spec, const DispersionSymbol& symbol,
                         const std::vector<std::int64_t>& c1_heights, std::int64_t c2, double T,
                         const TrialOptions& opt) {
  if (!(T > 0)) throw ValidationError("T must be > 0");
  ScanReport report;
  report.name = "bilinear";
  report.config = base_config("bilinear", spec, c1_heights);
  report.config["C2"] = c2;
  report.config["T"] = T;
  report.config["symbol"] = symbol.name();
  report.config["trials"] = opt.trials;
  report.config["support_cap"] = opt.support_cap;
  report.seed = opt.seed;
  report.budget = opt.budget.max_items;
  TrialOptions opt2 = opt;
  opt2.seed = trial_seed(opt.seed, 0xB1, static_cast<std::uint64_t>(c2));
  const auto second = shell_trials(spec, c2, opt2);
  const double scale = std::pow(T, 0.25);
  for (auto c1 : c1_heights) {
    if (c1 > c2) throw ValidationError("bilinear scan needs C1 <= C2");
    const auto first = shell_trials(spec, c1, opt);
    const std::size_t pairs = std::min(first.size(), second.size());
    std::vector<double> ratios(pairs);
    detail::parallel_for(pairs, [&](std::size_t i) {
      const double v = bilinear_norm_power(first[i], second[i], symbol, TimeMode::windowed, T, opt.budget);
      ratios[i] = std::sqrt(std::max(v, 0.0)) / (scale * first[i].l2_norm() * second[i].l2_norm());
    });
    const double mx = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
    report.rows.push_back(min_max_row(static_cast<double>(c1), mx, ratios));
  }
  report.refit();
  return report;
}

BiorthogonalityReport biorthogonality_check(double delta, double grid_step, double bound) {
  if (!(delta > 0 && delta < 1)) throw ValidationError("delta must lie in (0, 1)");
  if (!(grid_step > 0 && grid_step <= 0.5)) throw ValidationError("grid_step must lie in (0, 1/2]");
  const double inv = 1.0 / grid_step;
  const auto k = static_cast<std::int64_t>(std::llround(inv));
  if (std::abs(inv - static_cast<double>(k)) > 1e-9 * inv) {
    throw ValidationError("grid_step must be 1/K for an integer K");
  }
  BiorthogonalityReport rep;
  rep.delta = delta;
  rep.grid_step = grid_step;
  rep.bound = bound;
  const double cube_root = std::cbrt(delta);
  // In grid units ξ = j/K. With s = j₁+j₂ and D = j₁−j₂ the cubic sum is
  // (s³ + 3sD²)/4, so the cubic condition reads 3s|D₁² − D₃²| ≤ 4δK³.
  const long double budget = 4.0L * delta * static_cast<long double>(k) * k * k;
  for (std::int64_t s = 0; s <= 2 * k; ++s) {
    const std::int64_t dmax = std::min(s, 2 * k - s);
    const std::int64_t parity = s % 2;
    const std::int64_t count_d = (dmax - parity) / 2 + 1;
    if (static_cast<double>(s) / static_cast<double>(k) < cube_root) {
      rep.excluded_near_origin += static_cast<std::uint64_t>(count_d) * (count_d + 1) / 2;
      continue;
    }
    if (s == 0) continue;
    const long double limit = budget / (3.0L * s);
    std::int64_t hi = parity;
    for (std::int64_t d1 = parity; d1 <= dmax; d1 += 2) {
      if (hi < d1) hi = d1;
      while (hi + 2 <= dmax &&
             static_cast<long double>(hi + 2) * (hi + 2) - static_cast<long double>(d1) * d1 <= limit) {
        hi += 2;
      }
      rep.quadruples += static_cast<std::uint64_t>((hi - d1) / 2 + 1);
      const double dist = 0.5 * static_cast<double>(hi - d1) / static_cast<double>(k) / cube_root;
      if (dist > rep.max_normalized_distance) {
        rep.max_normalized_distance = dist;
        const double sd = static_cast<double>(s);
        rep.worst = {0.5 * (sd - d1) / k, 0.5 * (sd + d1) / k, 0.5 * (sd - hi) / k, 0.5 * (sd + hi) / k};
      }
    }
  }
  rep.holds = rep.max_normalized_distance <= bound;
  return rep;
}

AveragedCheck averaged_norm_check(const LatticeSpec& spec, const DispersionSymbol& symbol,
                                  const std::vector<std::int64_t>& heights, double bound,
                                  const TrialOptions& opt) {
  AveragedCheck out;
  out.bound = bound;
  json config = base_config("averaged", spec, heights);
  config["symbol"] = symbol.name();
  config["bound"] = bound;
  config["trials"] = opt.trials;
  config["support_cap"] = opt.support_cap;
  for (auto* r : {&out.extremizer, &out.max_ratio}) {
    r->config = config;
    r->seed = opt.seed;
    r->budget = opt.budget.max_items;
  }
  out.extremizer.name = "averaged-extremizer";
  out.max_ratio.name = "averaged-max";
  const MixedNormSpec mspec{4, TimeMode::global_mean, 1.0};
  for (auto c : heights) {
    const auto trials = shell_trials(spec, c, opt);
    const bool has_ext = try_extremizer(spec, c, opt.budget).has_value();
    std::vector<double> ratios(trials.size());
    detail::parallel_for(trials.size(), [&](std::size_t i) {
      ratios[i] = mixed_norm_free(trials[i], symbol, mspec, opt.budget) / trials[i].l2_norm();
    });
    const double mx = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
    out.max_observed = std::max(out.max_observed, mx);
    out.max_ratio.rows.push_back(min_max_row(static_cast<double>(c), mx, ratios));
    if (has_ext) out.extremizer.rows.push_back({static_cast<double>(c), ratios[0], ratios[0], ratios[0]});
  }
  out.extremizer.refit();
  out.max_ratio.refit();
  out.holds = out.max_observed <= bound;
  return out;
}

ScanReport counting_scan(const LatticeSpec& spec, const std::vector<std::int64_t>& heights, const Budget& budget) {
  ScanReport report;
  report.name = "count";
  report.config = base_config("count", spec, heights);
  report.budget = budget.max_items;
  for (auto c : heights) {
    const double v = static_cast<double>(max_unit_interval_count(spec, c, budget).count);
    report.rows.push_back({static_cast<double>(c), v, v, v});
  }
  report.refit();
  return report;
}

ScanReport extremizer_lp_scan(const LatticeSpec& spec, int p, const std::vector<std::int64_t>& heights,
                              const Budget& budget) {
  ScanReport report;
  report.name = "extremizer-lp";
  report.config = base_config("extremizer-lp", spec, heights);
  report.config["p"] = p;
  report.budget = budget.max_items;
  for (auto c : heights) {
    const double v = lp_power_exact(extremizer(spec, c, budget), p, budget);
    report.rows.push_back({static_cast<double>(c), v, v, v});
  }
  report.refit();
  return report;
}

}  // namespace qpwave
