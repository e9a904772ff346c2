#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "qpwave/dispersion.hpp"
#include "qpwave/lattice.hpp"
#include "qpwave/nls.hpp"

namespace qpwave::detail {

using cvec = std::vector<std::complex<double>>;

/// Axis-aligned box of lattice indices with row-major linear offsets.
struct Box {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> extent;
  std::vector<std::int64_t> stride;
  std::int64_t volume = 0;

  static Box around(const LatticeIndex& center, std::int64_t radius);
  bool contains(const LatticeIndex& n) const;
  std::int64_t offset(const LatticeIndex& n) const;
};

/// The Galerkin ball and its interaction tables.
struct ModeSpace {
  std::shared_ptr<const LatticeSpec> spec;
  LatticeIndex center;
  std::int64_t radius2 = 0;
  std::vector<LatticeIndex> modes;
  std::vector<double> rates;

  static ModeSpace ball(std::shared_ptr<const LatticeSpec> spec, const LatticeIndex& center, double radius,
                        const DispersionSymbol& symbol);
  /// Per-coordinate half-width of the bounding box of the ball.
  std::int64_t box_radius() const;
  std::ptrdiff_t find(const LatticeIndex& n) const;
  cvec gather(const TrigPoly& u) const;
  TrigPoly scatter(const cvec& v) const;
};

/// Right-hand side N(u) of u_t = −iωu + N(u), restricted to the ball.
class Nonlinearity {
 public:
  virtual ~Nonlinearity() = default;
  virtual void apply(const cvec& u, cvec& out) const = 0;
  /// ‖N(u)‖² before projection onto the ball.
  virtual double untruncated_norm2(const cvec& u) const = 0;
  /// Re-imposes exact structural symmetries on a state (default: none).
  virtual void symmetrize(cvec&) const {}
};

/// Fourth-order Gauss–Legendre collocation in the per-step interaction
/// picture, solved by stage fixed-point iteration.
SolveResult integrate(const ModeSpace& space, const Nonlinearity& nonlinearity, cvec u, const SolverConfig& cfg);

}  // namespace qpwave::detail
