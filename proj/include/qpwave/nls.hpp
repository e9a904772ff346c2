#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpwave/budget.hpp"
#include "qpwave/scan.hpp"
#include "qpwave/trigpoly.hpp"

namespace qpwave {

struct SolverConfig {
  /// Galerkin ball |n − center| ≤ trunc_height.
  double trunc_height = 8.0;
  /// Ball center; defaults to the origin.
  std::optional<LatticeIndex> trunc_center;
  double dt = 1e-3;
  double T = 0.1;
  /// Stage fixed-point tolerance in 𝓛², scaled by max(1, ‖u‖).
  double picard_tol = 1e-12;
  int max_picard = 50;
  /// +1 defocusing (i u_t + Δu = |u|^{2(m−1)}u), −1 focusing.
  int sign = 1;
  /// Power m of |u|^{2(m−1)}u; m = 2 is cubic.
  int power = 2;
  /// Regularity of the 𝓗^s column of the trace.
  double hs_s = 1.0;
  /// Relative truncation loss above which the trace raises a warning.
  double trunc_warn = 1e-6;

  void validate() const;
};

struct TraceRow {
  double t = 0.0;
  double mass = 0.0;  // ‖u‖²_{𝓛²}
  double hs_norm = 0.0;
  /// dt²·‖(1 − P)N(u)‖² / ‖u‖²: mass an explicit step would move outside the ball.
  double trunc_loss = 0.0;
  int picard_iters = 0;
  double contraction = 0.0;
};

struct SolveTrace {
  std::vector<TraceRow> rows;
  bool truncation_warning = false;
  double max_trunc_loss = 0.0;
  /// |‖u(T)‖ − ‖u(0)‖| / ‖u(0)‖ (0 for zero data).
  double mass_drift() const;
};

struct SolveResult {
  SolveTrace trace;
  TrigPoly state;
};

struct NonlinearTerm {
  TrigPoly value;
  /// 𝓛²-mass removed by the projection.
  double discarded = 0.0;
};

/// sign·|u|²u by two lattice convolutions, projected to |n| ≤ trunc_height
/// (no projection when trunc_height is infinite).
NonlinearTerm cubic_nonlinearity(const TrigPoly& u, int sign, double trunc_height,
                                 const Budget& budget = default_budget());

/// Galerkin-truncated NLS u_t = −iΔ-flow − i·sign·|u|^{2(m−1)}u on the ball.
SolveResult solve(const TrigPoly& u0, const SolverConfig& cfg);

/// c(t, n) = Σ_{n₁−n₂+n₃=n} a₁ā₂a₃ ∫₀ᵗ e^{−isΩ} ds with
/// Ω = λ₁² − λ₂² + λ₃² − λ_n² (the integral is t at Ω = 0).
TrigPoly picard_coefficients(const TrigPoly& f, double t, const Budget& budget = default_budget());

/// ∫₀ᵗ e^{−i(t−s)Δ-flow}(|u_s|²u_s) ds with u_s the free evolution of f:
/// the free propagation of picard_coefficients to time t.
TrigPoly first_picard_iterate(const TrigPoly& f, double t, const Budget& budget = default_budget());

/// ‖first_picard_iterate(extremizer(C), t)‖_{𝓛²} against C.
ScanReport picard_blowup_scan(const LatticeSpec& spec, const std::vector<std::int64_t>& heights, double t,
                              const Budget& budget = default_budget());

}  // namespace qpwave
