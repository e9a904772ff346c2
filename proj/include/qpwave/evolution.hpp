#pragma once

#include <utility>

#include "qpwave/dispersion.hpp"
#include "qpwave/trigpoly.hpp"

namespace qpwave {

/// Free flow: coefficient at n multiplied by e^{−itω(λ(n))}.
TrigPoly propagate(const TrigPoly& f, const DispersionSymbol& symbol, double t);

/// Frequency boost e^{i⟨a⟩x}f: index shift n → n + a.
TrigPoly galilean_boost(const TrigPoly& f, const LatticeIndex& a);

/// Phase relating Schrödinger solutions with boosted and unboosted data:
/// û_a(t, n + a) = e^{−it(λ_a² + 2 λ_a·λ_n)} û(t, n).
Complex boost_phase(const LatticeSpec& spec, const LatticeIndex& a, const LatticeIndex& n, double t);

/// Applies the boost to a solution at time t (shift plus boost_phase).
TrigPoly boost_solution(const TrigPoly& u, const LatticeIndex& a, double t);

struct BoostNormCheck {
  double norm = 0.0;
  double norm_boosted = 0.0;
};

/// Windowed L⁴_t([0,T], 𝓛⁴_x) norms of the free Schrödinger evolutions of f
/// and of its boost (d = 1).
BoostNormCheck boost_mixed_norm_check(const TrigPoly& f, const LatticeIndex& a, double T);

}  // namespace qpwave
