#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "qpwave/budget.hpp"
#include "qpwave/lattice.hpp"

namespace qpwave {

using Complex = std::complex<double>;

struct Term {
  LatticeIndex n;
  Complex c;
};

/// Relative threshold below which float-mode arithmetic drops coefficients.
inline constexpr double kPruneRelative = 1e-15;

/// Finitely supported coefficient map n ↦ f̂(⟨n⟩_ω) on a frequency lattice.
///
/// Terms are kept sorted by index with no stored zeros, so iteration order
/// (and every reduction over it) is deterministic.
class TrigPoly {
 public:
  TrigPoly() = default;
  explicit TrigPoly(LatticeSpec spec);
  explicit TrigPoly(std::shared_ptr<const LatticeSpec> spec);

  /// Sums duplicate indices, drops exact zeros, sorts.
  static TrigPoly from_terms(std::shared_ptr<const LatticeSpec> spec, std::vector<Term> terms);
  static TrigPoly from_terms(LatticeSpec spec, std::vector<Term> terms);
  static TrigPoly mode(LatticeSpec spec, LatticeIndex n, Complex c = 1.0);

  const LatticeSpec& spec() const { return *spec_; }
  const std::shared_ptr<const LatticeSpec>& spec_ptr() const { return spec_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  Complex coeff(const LatticeIndex& n) const;

  /// Parseval: Σ |f̂|².
  double l2_norm2() const;
  double l2_norm() const;
  double max_abs() const;

  /// The polynomial of conj(f): coefficients conj(f̂(−n)) at n.
  TrigPoly conjugate() const;
  TrigPoly scaled(Complex s) const;
  /// Index shift n → n + m.
  TrigPoly shifted(const LatticeIndex& m) const;
  TrigPoly filtered(const std::function<bool(const LatticeIndex&)>& keep) const;
  TrigPoly mapped(const std::function<Complex(const LatticeIndex&, Complex)>& fn) const;
  /// Drops |c| < rel · max|c|.
  TrigPoly pruned(double rel = kPruneRelative) const;

  /// Hermitian symmetry f̂(−n) = conj f̂(n) up to `tol` (0 = exact).
  bool is_real_valued(double tol = 0.0) const;

  friend TrigPoly operator+(const TrigPoly& f, const TrigPoly& g);
  friend TrigPoly operator-(const TrigPoly& f, const TrigPoly& g);
  /// Exact coefficient equality (same lattice, same support, same values).
  friend bool operator==(const TrigPoly& f, const TrigPoly& g);

 private:
  std::shared_ptr<const LatticeSpec> spec_;
  std::vector<Term> terms_;
};

void require_same_lattice(const TrigPoly& f, const TrigPoly& g);

/// R_C: keep |n| in the height shell of C.
TrigPoly project_height(const TrigPoly& f, std::int64_t c);
/// P_N: keep |⟨n⟩_ω| ∈ (N/2, N] (|⟨n⟩_ω| ≤ 1 for N = 1), sharp cutoff.
TrigPoly project_freq(const TrigPoly& f, std::int64_t n);
/// Q^a_C: keep |n − a| ≤ C.
TrigPoly project_cube(const TrigPoly& f, const LatticeIndex& a, double c);

/// Lattice convolution of coefficients (pointwise product of functions).
TrigPoly multiply(const TrigPoly& f, const TrigPoly& g, const Budget& budget = default_budget());

struct SobolevSpec {
  double s = 0.0;
  double kappa = 0.0;  // exponential weight e^{2κ|n|}, κ ≥ 0
};

/// (Σ ⟨n⟩^{2s} e^{2κ|n|} |f̂|²)^{1/2} with ⟨n⟩ = 1 + |n|.
double sobolev_norm(const TrigPoly& f, const SobolevSpec& spec);

/// Unit coefficients on every n ∈ R_C with |⟨n⟩_ω| ≤ 1 (d = 1).
/// Throws DegenerateError when no index qualifies.
TrigPoly extremizer(const LatticeSpec& spec, std::int64_t c, const Budget& budget = default_budget());

}  // namespace qpwave
