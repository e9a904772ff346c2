#include "qpwave/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace qpwave {
namespace {

std::vector<Term> canonicalize(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.n < b.n; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().n == t.n) {
      out.back().c += t.c;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const Term& t) { return t.c == Complex(0.0, 0.0); });
  return out;
}

}  // namespace

TrigPoly::TrigPoly(LatticeSpec spec) : spec_(std::make_shared<const LatticeSpec>(std::move(spec))) {}

TrigPoly::TrigPoly(std::shared_ptr<const LatticeSpec> spec) : spec_(std::move(spec)) {
  if (!spec_) throw ValidationError("TrigPoly needs a lattice");
}

TrigPoly TrigPoly::from_terms(std::shared_ptr<const LatticeSpec> spec, std::vector<Term> terms) {
  TrigPoly f(std::move(spec));
  for (const auto& t : terms) {
    f.spec_->check_shape(t.n);
    if (!std::isfinite(t.c.real()) || !std::isfinite(t.c.imag())) {
      throw ValidationError("non-finite coefficient");
    }
  }
  f.terms_ = canonicalize(std::move(terms));
  return f;
}

TrigPoly TrigPoly::from_terms(LatticeSpec spec, std::vector<Term> terms) {
  return from_terms(std::make_shared<const LatticeSpec>(std::move(spec)), std::move(terms));
}

TrigPoly TrigPoly::mode(LatticeSpec spec, LatticeIndex n, Complex c) {
  return from_terms(std::move(spec), {Term{n, c}});
}

Complex TrigPoly::coeff(const LatticeIndex& n) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), n,
                             [](const Term& t, const LatticeIndex& k) { return t.n < k; });
  if (it != terms_.end() && it->n == n) return it->c;
  return {};
}

double TrigPoly::l2_norm2() const {
  double s = 0;
  for (const auto& t : terms_) s += std::norm(t.c);
  return s;
}

double TrigPoly::l2_norm() const { return std::sqrt(l2_norm2()); }

double TrigPoly::max_abs() const {
  double m = 0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.c));
  return m;
}

TrigPoly TrigPoly::conjugate() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({-t.n, std::conj(t.c)});
  return from_terms(spec_, std::move(out));
}

TrigPoly TrigPoly::scaled(Complex s) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.n, t.c * s});
  return from_terms(spec_, std::move(out));
}

TrigPoly TrigPoly::shifted(const LatticeIndex& m) const {
  spec_->check_shape(m);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.n + m, t.c});
  return from_terms(spec_, std::move(out));
}

TrigPoly TrigPoly::filtered(const std::function<bool(const LatticeIndex&)>& keep) const {
  TrigPoly f(spec_);
  for (const auto& t : terms_) {
    if (keep(t.n)) f.terms_.push_back(t);
  }
  return f;
}

TrigPoly TrigPoly::mapped(const std::function<Complex(const LatticeIndex&, Complex)>& fn) const {
  TrigPoly f(spec_);
  f.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    const Complex c = fn(t.n, t.c);
    if (c != Complex(0.0, 0.0)) f.terms_.push_back({t.n, c});
  }
  return f;
}

TrigPoly TrigPoly::pruned(double rel) const {
  const double cut = rel * max_abs();
  return filtered([&](const LatticeIndex& n) { return std::abs(coeff(n)) >= cut; });
}

bool TrigPoly::is_real_valued(double tol) const {
  for (const auto& t : terms_) {
    const Complex mirror = coeff(-t.n);
    if (std::abs(mirror - std::conj(t.c)) > tol) return false;
  }
  return true;
}

void require_same_lattice(const TrigPoly& f, const TrigPoly& g) {
  if (f.spec_ptr() != g.spec_ptr() && !(f.spec() == g.spec())) {
    throw DimensionError("operands live on different lattices");
  }
}

TrigPoly operator+(const TrigPoly& f, const TrigPoly& g) {
  require_same_lattice(f, g);
  std::vector<Term> all(f.terms_.begin(), f.terms_.end());
  all.insert(all.end(), g.terms_.begin(), g.terms_.end());
  return TrigPoly::from_terms(f.spec_, std::move(all));
}

TrigPoly operator-(const TrigPoly& f, const TrigPoly& g) { return f + g.scaled(-1.0); }

bool operator==(const TrigPoly& f, const TrigPoly& g) {
  if (!(f.spec() == g.spec()) || f.terms_.size() != g.terms_.size()) return false;
  for (std::size_t i = 0; i < f.terms_.size(); ++i) {
    if (!(f.terms_[i].n == g.terms_[i].n) || f.terms_[i].c != g.terms_[i].c) return false;
  }
  return true;
}

TrigPoly project_height(const TrigPoly& f, std::int64_t c) {
  require_dyadic(c, "height C");
  return f.filtered([c](const LatticeIndex& n) { return in_height_shell(n.norm2(), c); });
}

TrigPoly project_freq(const TrigPoly& f, std::int64_t n_dyadic) {
  require_dyadic(n_dyadic, "frequency size N");
  const QScalar upper(n_dyadic * n_dyadic);
  const QScalar lower = n_dyadic == 1 ? QScalar(-1) : QScalar(Rational(n_dyadic * n_dyadic, 4));
  const auto& spec = f.spec();
  return f.filtered([&](const LatticeIndex& n) {
    QScalar r2;
    for (const auto& l : spec.freq(n)) r2 += l * l;
    if (!r2.is_exact()) {
      const double v = r2.value();
      return v > lower.value() + kFloatZeroTolerance && v <= upper.value() + kFloatZeroTolerance;
    }
    return compare(r2, lower) > 0 && compare(r2, upper) <= 0;
  });
}

TrigPoly project_cube(const TrigPoly& f, const LatticeIndex& a, double c) {
  f.spec().check_shape(a);
  if (c < 0) throw ValidationError("cube radius must be non-negative");
  const auto limit = static_cast<std::int64_t>(std::floor(c * c + 1e-9));
  return f.filtered([&](const LatticeIndex& n) { return (n - a).norm2() <= limit; });
}

TrigPoly multiply(const TrigPoly& f, const TrigPoly& g, const Budget& budget) {
  require_same_lattice(f, g);
  const std::uint64_t pairs = static_cast<std::uint64_t>(f.size()) * g.size();
  budget.require(pairs, "lattice convolution");
  std::unordered_map<LatticeIndex, Complex, LatticeIndexHash> acc;
  acc.reserve(std::min<std::uint64_t>(pairs, 1u << 22));
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) acc[a.n + b.n] += a.c * b.c;
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [n, c] : acc) out.push_back({n, c});
  return TrigPoly::from_terms(f.spec_ptr(), std::move(out)).pruned();
}

double sobolev_norm(const TrigPoly& f, const SobolevSpec& spec) {
  if (spec.kappa < 0) throw ValidationError("exponential weight kappa must be >= 0");
  double s = 0;
  for (const auto& t : f.terms()) {
    const double h = t.n.height();
    double w = std::pow(1.0 + h, 2.0 * spec.s);
    if (spec.kappa > 0) w *= std::exp(2.0 * spec.kappa * h);
    s += w * std::norm(t.c);
  }
  return std::sqrt(s);
}

TrigPoly extremizer(const LatticeSpec& spec, std::int64_t c, const Budget& budget) {
  if (spec.dim() != 1) throw DimensionError("extremizer needs a one-dimensional lattice");
  require_dyadic(c, "height C");
  const Interval unit = Interval::closed(QScalar(-1), QScalar(1));
  std::vector<Term> terms;
  for_each_in_ball(spec.rank(), c * c, budget, [&](const LatticeIndex& n) {
    if (in_height_shell(n.norm2(), c) && unit.contains(spec.freq1(n))) terms.push_back({n, 1.0});
  });
  if (terms.empty()) {
    throw DegenerateError("extremizer is empty at height " + std::to_string(c) +
                          " (no shell frequency with |<n>| <= 1)");
  }
  return TrigPoly::from_terms(spec, std::move(terms));
}

}  // namespace qpwave
