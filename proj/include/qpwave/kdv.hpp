#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "qpwave/budget.hpp"
#include "qpwave/nls.hpp"
#include "qpwave/trigpoly.hpp"

namespace qpwave {

/// Real-valued, mean-zero field: f̂(−n) = conj f̂(n) exactly and f̂(0) = 0.
class RealField {
 public:
  RealField() = default;
  /// Throws ValidationError unless the symmetry and the zero mean are exact.
  explicit RealField(TrigPoly f);
  /// Builds the field from coefficients on the canonical half (first nonzero
  /// entry of n positive); the other half is filled in by conjugation.
  static RealField from_half(std::shared_ptr<const LatticeSpec> spec, const std::vector<Term>& half);
  static RealField from_half(LatticeSpec spec, const std::vector<Term>& half);

  const TrigPoly& poly() const noexcept { return f_; }
  const LatticeSpec& spec() const { return f_.spec(); }
  std::vector<Term> canonical_half() const;

 private:
  TrigPoly f_;
};

struct ResonanceValue {
  QScalar expanded;  // (ξ₁+ξ₂)³ − ξ₁³ − ξ₂³
  QScalar factored;  // 3(ξ₁+ξ₂)ξ₁ξ₂
  bool agree = false;
};

/// Both forms of the quadratic KdV resonance function. Exact inputs are
/// compared exactly; float inputs to 1e−12 relative to max(|ξ₁|,|ξ₂|,|ξ₁+ξ₂|)³.
ResonanceValue resonance(const QScalar& xi1, const QScalar& xi2);

struct ResonanceBoundReport {
  std::int64_t n = 0, n1 = 0, n2 = 0;
  std::uint64_t requested = 0;
  std::uint64_t accepted = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  /// Some sample met all three shell constraints.
  bool feasible = false;
  /// min and max of |Ω|/(N_max²·N_min) lie in [3/16, 48].
  bool within_band = false;
};

/// Rejection sampling of |ξᵢ| ∈ (Nᵢ/2, Nᵢ], |ξ₁+ξ₂| ∈ (N/2, N] (for N = 1 as well).
ResonanceBoundReport resonance_bound_check(std::int64_t n, std::int64_t n1, std::int64_t n2, std::uint64_t samples,
                                           std::uint64_t seed = 1);

/// u·∂ₓu = ∂ₓ(u²/2): coefficient (iλ_n/2)(u∗u)_n, optionally projected to
/// |n| ≤ trunc_height.
RealField kdv_rhs(const RealField& u, double trunc_height = std::numeric_limits<double>::infinity(),
                  const Budget& budget = default_budget());

/// Galerkin-truncated u_t + u_xxx = u u_x on the ball |n| ≤ trunc_height
/// (center fixed at 0 so the ball is symmetric).
SolveResult kdv_solve(const RealField& u0, const SolverConfig& cfg);

/// (Σ_{λ≠0} |λ|^{2s₁} ⟨n⟩^{2s₂} |f̂|²)^{1/2}, d = 1.
double low_frequency_norm(const TrigPoly& f, double s1, double s2);

}  // namespace qpwave
