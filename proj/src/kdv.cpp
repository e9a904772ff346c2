#include "qpwave/kdv.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "detail/galerkin.hpp"
#include "qpwave/dispersion.hpp"

namespace qpwave {
namespace {

using detail::cvec;
using detail::ModeSpace;

void require_real(const TrigPoly& f) {
  if (f.spec().dim() != 1) throw DimensionError("KdV fields need d = 1");
  if (f.coeff(f.spec().zero_index()) != Complex(0.0, 0.0)) {
    throw ValidationError("KdV field must have zero mean (coefficient at n = 0)");
  }
  if (!f.is_real_valued(0.0)) throw ValidationError("KdV field must satisfy f(-n) = conj f(n) exactly");
}

TrigPoly mirror_half(const TrigPoly& f) {
  std::vector<Term> terms;
  for (const auto& t : f.terms()) {
    if (!t.n.is_canonical_half()) continue;
    terms.push_back(t);
    terms.push_back({-t.n, std::conj(t.c)});
  }
  return TrigPoly::from_terms(f.spec_ptr(), std::move(terms));
}

class KdvNonlinearity final : public detail::Nonlinearity {
 public:
  explicit KdvNonlinearity(const ModeSpace& space) {
    const std::size_t m = space.modes.size();
    mirror_.assign(m, -1);
    zero_ = space.find(space.spec->zero_index());
    half_lambda_.resize(m);
    for (std::size_t s = 0; s < m; ++s) {
      half_lambda_[s] = 0.5 * space.spec->freq1_value(space.modes[s]);
      mirror_[s] = space.find(-space.modes[s]);
      if (!space.modes[s].is_canonical_half()) continue;
      canonical_.push_back(s);
      Target target{s, {}};
      for (std::size_t j = 0; j < m; ++j) {
        const auto i = space.find(space.modes[s] - space.modes[j]);
        if (i >= 0) target.pairs.emplace_back(static_cast<std::size_t>(i), j);
      }
      targets_.push_back(std::move(target));
    }
    const std::int64_t r = space.box_radius();
    box_ = detail::Box::around(space.spec->zero_index(), 2 * r);
    default_budget().require(static_cast<std::uint64_t>(box_.volume), "dense KdV grid");
    mode_offset_.resize(m);
    for (std::size_t j = 0; j < m; ++j) mode_offset_[j] = signed_position(space.modes[j]);
    base_ = -signed_position(LatticeIndex::from(std::vector<std::int64_t>(box_.lo.begin(), box_.lo.end())));
    box_half_lambda_.resize(static_cast<std::size_t>(box_.volume));
    for (std::int64_t q = 0; q < box_.volume; ++q) {
      LatticeIndex n(box_.lo.size());
      for (std::size_t i = 0; i < box_.lo.size(); ++i) {
        n[i] = static_cast<std::int32_t>(box_.lo[i] + (q / box_.stride[i]) % box_.extent[i]);
      }
      box_half_lambda_[static_cast<std::size_t>(q)] = 0.5 * space.spec->freq1_value(n);
    }
  }

  void apply(const cvec& u, cvec& out) const override {
    out.assign(u.size(), 0.0);
    for (const auto& target : targets_) {
      std::complex<double> acc = 0.0;
      for (const auto& [i, j] : target.pairs) acc += u[i] * u[j];
      const std::complex<double> v = std::complex<double>(0.0, half_lambda_[target.s]) * acc;
      out[target.s] = v;
      out[static_cast<std::size_t>(mirror_[target.s])] = std::conj(v);
    }
    if (zero_ >= 0) out[static_cast<std::size_t>(zero_)] = 0.0;
  }

  double untruncated_norm2(const cvec& u) const override {
    cvec sq(static_cast<std::size_t>(box_.volume), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i] == std::complex<double>(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < u.size(); ++j) {
        sq[static_cast<std::size_t>(base_ + mode_offset_[i] + mode_offset_[j])] += u[i] * u[j];
      }
    }
    double s = 0;
    for (std::size_t q = 0; q < sq.size(); ++q) s += box_half_lambda_[q] * box_half_lambda_[q] * std::norm(sq[q]);
    return s;
  }

  void symmetrize(cvec& u) const override {
    for (std::size_t s : canonical_) u[static_cast<std::size_t>(mirror_[s])] = std::conj(u[s]);
    if (zero_ >= 0) u[static_cast<std::size_t>(zero_)] = 0.0;
  }

 private:
  struct Target {
    std::size_t s;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
  };

  std::int64_t signed_position(const LatticeIndex& n) const {
    std::int64_t p = 0;
    for (std::size_t i = 0; i < box_.lo.size(); ++i) p += n[i] * box_.stride[i];
    return p;
  }

  std::vector<Target> targets_;
  std::vector<std::size_t> canonical_;
  std::vector<std::ptrdiff_t> mirror_;
  std::ptrdiff_t zero_ = -1;
  std::vector<double> half_lambda_;
  detail::Box box_;
  std::int64_t base_ = 0;
  std::vector<std::int64_t> mode_offset_;
  std::vector<double> box_half_lambda_;
};

bool in_dyadic_shell(double x, std::int64_t n) {
  const double a = std::abs(x);
  return a > 0.5 * static_cast<double>(n) && a <= static_cast<double>(n);
}

}  // namespace

RealField::RealField(TrigPoly f) : f_(std::move(f)) { require_real(f_); }

RealField RealField::from_half(std::shared_ptr<const LatticeSpec> spec, const std::vector<Term>& half) {
  std::vector<Term> terms;
  for (const auto& t : half) {
    spec->check_shape(t.n);
    if (!t.n.is_canonical_half()) {
      throw ValidationError("canonical-half coefficients need a positive first nonzero index entry");
    }
    terms.push_back(t);
    terms.push_back({-t.n, std::conj(t.c)});
  }
  return RealField(TrigPoly::from_terms(std::move(spec), std::move(terms)));
}

RealField RealField::from_half(LatticeSpec spec, const std::vector<Term>& half) {
  return from_half(std::make_shared<const LatticeSpec>(std::move(spec)), half);
}

std::vector<Term> RealField::canonical_half() const {
  std::vector<Term> half;
  for (const auto& t : f_.terms()) {
    if (t.n.is_canonical_half()) half.push_back(t);
  }
  return half;
}

ResonanceValue resonance(const QScalar& xi1, const QScalar& xi2) {
  const QScalar s = xi1 + xi2;
  ResonanceValue r;
  r.expanded = s * s * s - xi1 * xi1 * xi1 - xi2 * xi2 * xi2;
  r.factored = QScalar(3) * s * xi1 * xi2;
  if (r.expanded.is_exact() && r.factored.is_exact()) {
    r.agree = r.expanded == r.factored;
  } else {
    const double scale = std::max({std::abs(xi1.value()), std::abs(xi2.value()), std::abs(s.value())});
    r.agree = std::abs(r.expanded.value() - r.factored.value()) <= 1e-12 * scale * scale * scale;
  }
  return r;
}

ResonanceBoundReport resonance_bound_check(std::int64_t n, std::int64_t n1, std::int64_t n2, std::uint64_t samples,
                                           std::uint64_t seed) {
  require_dyadic(n, "N");
  require_dyadic(n1, "N1");
  require_dyadic(n2, "N2");
  if (samples == 0) throw ValidationError("need at least one sample");
  ResonanceBoundReport rep;
  rep.n = n;
  rep.n1 = n1;
  rep.n2 = n2;
  rep.requested = samples;
  const double nmax = static_cast<double>(std::max({n, n1, n2}));
  const double nmin = static_cast<double>(std::min({n, n1, n2}));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](std::int64_t shell) {
    // (1 − U) ∈ (0, 1] keeps the magnitude in the half-open shell.
    const double mag = 0.5 * static_cast<double>(shell) * (2.0 - unit(rng));
    return unit(rng) < 0.5 ? -mag : mag;
  };
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  const std::uint64_t attempts = samples * 200;
  for (std::uint64_t k = 0; k < attempts && rep.accepted < samples; ++k) {
    const double x1 = draw(n1);
    const double x2 = draw(n2);
    if (!in_dyadic_shell(x1, n1) || !in_dyadic_shell(x2, n2) || !in_dyadic_shell(x1 + x2, n)) continue;
    const double omega = std::abs(resonance(QScalar::approx(x1), QScalar::approx(x2)).factored.value());
    const double ratio = omega / (nmax * nmax * nmin);
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    ++rep.accepted;
  }
  rep.feasible = rep.accepted > 0;
  if (!rep.feasible) rep.min_ratio = 0.0;
  rep.within_band = rep.feasible && rep.min_ratio >= 3.0 / 16.0 && rep.max_ratio <= 48.0;
  return rep;
}

RealField kdv_rhs(const RealField& u, double trunc_height, const Budget& budget) {
  const TrigPoly& f = u.poly();
  const auto& spec = f.spec();
  TrigPoly sq = multiply(f, f, budget);
  if (std::isfinite(trunc_height)) {
    const auto limit = static_cast<std::int64_t>(std::floor(trunc_height * trunc_height + 1e-9));
    sq = sq.filtered([limit](const LatticeIndex& n) { return n.norm2() <= limit; });
  }
  TrigPoly g = sq.mapped([&](const LatticeIndex& n, Complex c) {
    if (n.is_zero()) return Complex(0.0, 0.0);
    return Complex(0.0, 0.5 * spec.freq1_value(n)) * c;
  });
  return RealField(mirror_half(g));
}

SolveResult kdv_solve(const RealField& u0, const SolverConfig& cfg) {
  cfg.validate();
  const auto& f = u0.poly();
  if (cfg.trunc_center && !cfg.trunc_center->is_zero()) {
    throw ValidationError("KdV truncation ball must be centered at 0");
  }
  const ModeSpace space =
      ModeSpace::ball(f.spec_ptr(), f.spec().zero_index(), cfg.trunc_height, DispersionSymbol::airy());
  const KdvNonlinearity nonlinearity(space);
  SolveResult out = detail::integrate(space, nonlinearity, space.gather(f), cfg);
  out.state = mirror_half(out.state);
  return out;
}

double low_frequency_norm(const TrigPoly& f, double s1, double s2) {
  if (f.spec().dim() != 1) throw DimensionError("low_frequency_norm needs d = 1");
  double s = 0;
  for (const auto& t : f.terms()) {
    const double lam = std::abs(f.spec().freq1_value(t.n));
    if (lam == 0) continue;
    s += std::pow(lam, 2 * s1) * std::pow(1.0 + t.n.height(), 2 * s2) * std::norm(t.c);
  }
  return std::sqrt(s);
}

}  // namespace qpwave
