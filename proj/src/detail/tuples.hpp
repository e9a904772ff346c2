#pragma once

#include <vector>

#include "qpwave/dispersion.hpp"
#include "qpwave/meannorms.hpp"
#include "qpwave/trigpoly.hpp"

namespace qpwave::detail {

struct Mode {
  LatticeIndex n;
  Complex a;
  QScalar rate;
  double rate_value = 0.0;
};
using ModeTable = std::vector<Mode>;

ModeTable mode_table(const TrigPoly& f, const DispersionSymbol& symbol);

/// One r-tuple (n₁, …, n_r): index sum k, coefficient product w, phase sum θ.
struct TupleEntry {
  LatticeIndex k;
  Complex w;
  QScalar theta;
  double theta_value = 0.0;
};

/// Cartesian product of the factor tables.
std::vector<TupleEntry> tuple_entries(const std::vector<const ModeTable*>& factors, bool exact);

/// Σ_k ∫ |Σ_{tuples at k} w e^{−itθ}|² dt over [0, T] (windowed), or the time
/// mean Σ_k Σ_θ |Σ_{θ_j = θ} w_j|² (global_mean). Tuples sharing k and an
/// identical phase are merged first; exact phases are compared exactly.
double resonant_form(std::vector<TupleEntry> entries, TimeMode mode, double T, bool exact);

}  // namespace qpwave::detail
