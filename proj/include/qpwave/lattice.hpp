#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qpwave/budget.hpp"
#include "qpwave/errors.hpp"
#include "qpwave/fit.hpp"
#include "qpwave/qscalar.hpp"

namespace qpwave {

/// Zero tolerance for frequency coincidence tests in float mode.
inline constexpr double kFloatZeroTolerance = 1e-12;

/// Integer vector n ∈ Z^ν, the concatenation of the per-dimension blocks.
class LatticeIndex {
 public:
  static constexpr std::size_t kMaxRank = 8;

  LatticeIndex() = default;
  explicit LatticeIndex(std::size_t rank);
  LatticeIndex(std::initializer_list<std::int32_t> values);
  static LatticeIndex from(std::span<const std::int64_t> values);

  std::size_t size() const noexcept { return size_; }
  std::int32_t operator[](std::size_t i) const noexcept { return c_[i]; }
  std::int32_t& operator[](std::size_t i) noexcept { return c_[i]; }
  std::span<const std::int32_t> values() const noexcept { return {c_.data(), size_}; }

  /// Squared Euclidean height |n|².
  std::int64_t norm2() const noexcept;
  double height() const noexcept { return std::sqrt(static_cast<double>(norm2())); }
  bool is_zero() const noexcept { return norm2() == 0; }
  /// First nonzero entry is positive.
  bool is_canonical_half() const noexcept;

  LatticeIndex operator-() const noexcept;
  LatticeIndex& operator+=(const LatticeIndex& o);
  LatticeIndex& operator-=(const LatticeIndex& o);
  friend LatticeIndex operator+(LatticeIndex a, const LatticeIndex& b) { return a += b; }
  friend LatticeIndex operator-(LatticeIndex a, const LatticeIndex& b) { return a -= b; }

  friend bool operator==(const LatticeIndex& a, const LatticeIndex& b) noexcept;
  friend std::strong_ordering operator<=>(const LatticeIndex& a, const LatticeIndex& b) noexcept;

  std::size_t hash() const noexcept;

 private:
  std::array<std::int32_t, kMaxRank> c_{};
  std::uint8_t size_ = 0;
};

struct LatticeIndexHash {
  std::size_t operator()(const LatticeIndex& n) const noexcept { return n.hash(); }
};

/// True for C ∈ {1, 2, 4, ...}.
bool is_dyadic(std::int64_t c) noexcept;
inline void require_dyadic(std::int64_t c, const char* what) {
  if (!is_dyadic(c)) throw ValidationError(std::string(what) + " must be a power of two >= 1");
}

/// Membership in the height shell R_C: |n| ∈ (C/2, C], and |n| ≤ 1 for C = 1.
inline bool in_height_shell(std::int64_t norm2, std::int64_t c) noexcept {
  if (c == 1) return norm2 <= 1;
  return 4 * norm2 > c * c && norm2 <= c * c;
}

/// Frequency lattice Λ = ω^{(1)}·Z^{ν₁} × … × ω^{(d)}·Z^{ν_d}.
class LatticeSpec {
 public:
  LatticeSpec() = default;
  /// One generator block per spatial dimension; entries must be > 0.
  explicit LatticeSpec(std::vector<std::vector<QScalar>> omega);

  static LatticeSpec one_dim(std::vector<QScalar> omega) {
    return LatticeSpec(std::vector<std::vector<QScalar>>{std::move(omega)});
  }
  /// ω = (1, √2), exact.
  static LatticeSpec sqrt2();

  std::size_t dim() const noexcept { return omega_.size(); }
  std::size_t rank() const noexcept { return rank_; }
  std::vector<std::size_t> ranks() const;
  /// Density parameter b = Σ (ν_i − 1).
  int density() const noexcept { return static_cast<int>(rank_) - static_cast<int>(dim()); }
  /// All generators exact and within a single quadratic field.
  bool exact() const noexcept { return exact_; }
  const std::vector<std::vector<QScalar>>& omega() const noexcept { return omega_; }

  void check_shape(const LatticeIndex& n) const;
  /// ⟨n⟩_ω as a vector in R^d.
  std::vector<QScalar> freq(const LatticeIndex& n) const;
  /// ⟨n⟩_ω for d = 1.
  QScalar freq1(const LatticeIndex& n) const;
  std::vector<double> freq_values(const LatticeIndex& n) const;
  double freq1_value(const LatticeIndex& n) const { return freq1(n).value(); }
  LatticeIndex zero_index() const { return LatticeIndex(rank_); }

  friend bool operator==(const LatticeSpec& a, const LatticeSpec& b);

 private:
  std::vector<std::vector<QScalar>> omega_;
  std::size_t rank_ = 0;
  bool exact_ = true;
};

/// Rough count of lattice points with |n| ≤ r, used for budget checks.
double ball_point_estimate(std::size_t rank, double radius);

/// Calls fn(n) for every n ∈ Z^rank with |n|² ≤ radius2, in lexicographic order.
template <class Fn>
void for_each_in_ball(std::size_t rank, std::int64_t radius2, const Budget& budget, Fn&& fn) {
  if (rank == 0 || rank > LatticeIndex::kMaxRank) {
    throw DimensionError("lattice rank must be in 1..8");
  }
  if (radius2 < 0) return;
  const double r = std::sqrt(static_cast<double>(radius2));
  const double estimate = ball_point_estimate(rank, r);
  if (estimate > static_cast<double>(budget.max_items)) {
    throw BudgetError("enumeration of the height ball of radius " + std::to_string(r) +
                      " needs ~" + std::to_string(static_cast<std::uint64_t>(estimate)) +
                      " points, budget is " + std::to_string(budget.max_items));
  }
  LatticeIndex n(rank);
  // partial[k] = Σ_{j<k} n_j²
  std::array<std::int64_t, LatticeIndex::kMaxRank + 1> partial{};
  auto isqrt = [](std::int64_t v) {
    auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (s * s > v) --s;
    while ((s + 1) * (s + 1) <= v) ++s;
    return s;
  };
  auto recurse = [&](auto&& self, std::size_t k) -> void {
    const std::int64_t left = radius2 - partial[k];
    const std::int64_t m = isqrt(left);
    for (std::int64_t v = -m; v <= m; ++v) {
      n[k] = static_cast<std::int32_t>(v);
      partial[k + 1] = partial[k] + v * v;
      if (k + 1 == rank) {
        fn(static_cast<const LatticeIndex&>(n));
      } else {
        self(self, k + 1);
      }
    }
  };
  recurse(recurse, 0);
}

/// All indices in the height shell R_C, lexicographic order.
std::vector<LatticeIndex> height_shell(std::size_t rank, std::int64_t c,
                                       const Budget& budget = default_budget());

/// Real interval with independently open or closed ends.
struct Interval {
  QScalar lo;
  QScalar hi;
  bool lo_closed = true;
  bool hi_closed = false;

  static Interval closed(QScalar lo, QScalar hi) { return {std::move(lo), std::move(hi), true, true}; }
  static Interval half_open(QScalar lo, QScalar hi) { return {std::move(lo), std::move(hi), true, false}; }

  bool contains(const QScalar& x) const;
};

/// #{ n : |n| ∈ R_C, ⟨n⟩_ω ∈ I } by exhaustive enumeration (d = 1).
std::uint64_t count_in_interval(const LatticeSpec& spec, std::int64_t c, const Interval& interval,
                                const Budget& budget = default_budget());

struct UnitIntervalCount {
  std::uint64_t count = 0;
  QScalar start;  // the maximizing window is [start, start + 1)
};

/// Max over half-open unit windows I ⊂ [−C, C] of count_in_interval(C, I).
UnitIntervalCount max_unit_interval_count(const LatticeSpec& spec, std::int64_t c,
                                          const Budget& budget = default_budget());

struct MinGapReport {
  QScalar gap;
  double gap_value = 0.0;
  LatticeIndex first;
  LatticeIndex second;
  /// Diophantine fit gap(h) ≈ alpha · h^(−beta) over h = 2, 4, …, H.
  double alpha = 0.0;
  double beta = 0.0;
  bool fit_valid = false;
  std::vector<std::pair<std::int64_t, double>> series;
};

/// Smallest distance between distinct frequencies with |n|, |n'| ≤ H (d = 1).
MinGapReport min_gap(const LatticeSpec& spec, std::int64_t height,
                     const Budget& budget = default_budget());

struct NonResonanceReport {
  QScalar min_abs;
  double min_value = 0.0;
  LatticeIndex witness;
  std::size_t block = 0;
  /// Float mode only: the minimum is at or below the tolerance.
  bool flagged = false;
};

/// min over blocks i and 0 < |n_i| ≤ H of |⟨n_i⟩_{ω^{(i)}}|.
/// Exact mode throws ResonantLatticeError on an exact integer relation.
NonResonanceReport nonresonance_check(const LatticeSpec& spec, std::int64_t height,
                                      double tolerance = kFloatZeroTolerance,
                                      const Budget& budget = default_budget());

}  // namespace qpwave
