#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qpwave/dispersion.hpp"
#include "qpwave/lattice.hpp"
#include "qpwave/meannorms.hpp"
#include "qpwave/scan.hpp"

namespace qpwave {

struct TrialOptions {
  /// Random trials per height, in addition to the extremizer and a single mode.
  std::size_t trials = 16;
  /// Random trials draw their support from at most this many shell indices.
  std::size_t support_cap = 96;
  std::uint64_t seed = 1;
  Budget budget = tuple_budget();
};

/// Deterministic 64-bit stream seed for (seed, param, trial).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t param, std::uint64_t trial);

/// Unit-𝓛² trial family at height C: extremizer, single mode, Gaussian
/// coefficients on random shell subsets and on the extremizer support.
std::vector<TrigPoly> shell_trials(const LatticeSpec& spec, std::int64_t c, const TrialOptions& opt);

struct StrichartzScan {
  /// Max over trials of ‖e^{−itω}f‖_{L⁴([0,T],𝓛⁴)} / (T^{1/8}‖f‖_{𝓛²}).
  ScanReport max_ratio;
  /// The same ratio for the extremizer alone.
  ScanReport extremizer;
};

StrichartzScan strichartz_scan(const LatticeSpec& spec, const DispersionSymbol& symbol, int p, double T,
                               const std::vector<std::int64_t>& heights, const TrialOptions& opt = {});

/// Max over trials of ‖(e^{−itω}f₁)(e^{−itω}f₂)‖_{L²([0,T],𝓛²)} / (T^{1/4}‖f₁‖‖f₂‖)
/// with f₁ on shell C₁ (the scanned parameter) and f₂ on shell C₂ ≥ C₁.
ScanReport bilinear_scan(const LatticeSpec& spec, const DispersionSymbol& symbol,
                         const std::vector<std::int64_t>& c1_heights, std::int64_t c2, double T,
                         const TrialOptions& opt = {});

struct BiorthogonalityReport {
  double delta = 0.0;
  double grid_step = 0.0;
  /// Admissible unordered pairs of pairs {ξ₁,ξ₂}, {ξ₃,ξ₄}.
  std::uint64_t quadruples = 0;
  /// Pairs-of-pairs dropped because ξ₁+ξ₂ < δ^{1/3}.
  std::uint64_t excluded_near_origin = 0;
  /// max min(|ξ₁−ξ₃|, |ξ₁−ξ₄|) / δ^{1/3}.
  double max_normalized_distance = 0.0;
  std::array<double, 4> worst{};
  double bound = 10.0;
  bool holds = true;
};

/// Exhaustive search on {0, h, 2h, …, 1} for ξ₁+ξ₂ = ξ₃+ξ₄ with
/// |ξ₁³+ξ₂³−ξ₃³−ξ₄³| ≤ δ and ξ₁+ξ₂ ≥ δ^{1/3}.
BiorthogonalityReport biorthogonality_check(double delta, double grid_step, double bound = 10.0);

struct AveragedCheck {
  /// Global-mean 𝓛⁴_{t,x} norm of the extremizer over its 𝓛² norm.
  ScanReport extremizer;
  /// Same ratio, max over all trials per height.
  ScanReport max_ratio;
  double max_observed = 0.0;
  double bound = 0.0;
  bool holds = true;
};

AveragedCheck averaged_norm_check(const LatticeSpec& spec, const DispersionSymbol& symbol,
                                  const std::vector<std::int64_t>& heights, double bound,
                                  const TrialOptions& opt = {});

/// Max unit-interval count at each height.
ScanReport counting_scan(const LatticeSpec& spec, const std::vector<std::int64_t>& heights,
                         const Budget& budget = default_budget());

/// ‖extremizer(C)‖^p_{𝓛^p} at each height (p ∈ {2, 4, 6}).
ScanReport extremizer_lp_scan(const LatticeSpec& spec, int p, const std::vector<std::int64_t>& heights,
                              const Budget& budget = tuple_budget());

}  // namespace qpwave
