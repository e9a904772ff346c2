#include "qpwave/nls.hpp"

#include <cmath>
#include <unordered_map>

#include "detail/galerkin.hpp"
#include "qpwave/dispersion.hpp"
#include "qpwave/evolution.hpp"
#include "qpwave/meannorms.hpp"

namespace qpwave {
namespace {

using detail::Box;
using detail::cvec;
using detail::ModeSpace;

/// Signed linear position Σ n_i·stride_i; combined with a base offset it
/// addresses sums of indices inside a larger box.
std::int64_t signed_position(const Box& box, const LatticeIndex& n) {
  std::int64_t p = 0;
  for (std::size_t i = 0; i < box.lo.size(); ++i) p += n[i] * box.stride[i];
  return p;
}

/// Dense power nonlinearity −i·sign·|u|^{2(m−1)}u on a Galerkin ball.
class PowerNonlinearity final : public detail::Nonlinearity {
 public:
  PowerNonlinearity(const ModeSpace& space, int sign, int power) : space_(space), sign_(sign), power_(power) {
    const std::size_t m = space.modes.size();
    const std::int64_t r = space.box_radius();
    const LatticeIndex zero = space.spec->zero_index();
    base_ = Box::around(zero, 2 * r);
    full_ = Box::around(zero, 2 * r * (power - 1));
    const std::int64_t out_radius = 2 * r * (power - 1) + r;
    out_ = Box::around(space.center, out_radius);
    const Budget budget = default_budget();
    budget.require(static_cast<std::uint64_t>(full_.volume), "dense nonlinearity grid");
    budget.require(static_cast<std::uint64_t>(out_.volume), "dense nonlinearity grid");
    budget.require(static_cast<std::uint64_t>(m) * m, "Galerkin difference table");
    diff_base_.resize(m * m);
    diff_full_.resize(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const LatticeIndex d = space.modes[i] - space.modes[j];
        diff_base_[i * m + j] = base_.offset(d);
        diff_full_[i * m + j] = full_.offset(d);
      }
    }
    // Offsets of the product G·u inside out_: full_ positions plus mode positions.
    out_base_ = -signed_position(out_, LatticeIndex::from(std::vector<std::int64_t>(out_.lo.begin(), out_.lo.end())));
    mode_pos_.resize(m);
    for (std::size_t j = 0; j < m; ++j) mode_pos_[j] = signed_position(out_, space.modes[j]);
    full_pos_.resize(static_cast<std::size_t>(full_.volume));
    for (std::int64_t q = 0; q < full_.volume; ++q) full_pos_[q] = signed_position(out_, unravel(full_, q));
    if (power_ > 2) {
      base_pos_.resize(static_cast<std::size_t>(base_.volume));
      for (std::int64_t q = 0; q < base_.volume; ++q) base_pos_[q] = signed_position(full_, unravel(base_, q));
      full_base_ = -signed_position(full_, LatticeIndex::from(std::vector<std::int64_t>(full_.lo.begin(), full_.lo.end())));
    }
  }

  void apply(const cvec& u, cvec& out) const override {
    const cvec g = modulus_power(u);
    const std::size_t m = u.size();
    out.assign(m, 0.0);
    const std::complex<double> factor(0.0, -static_cast<double>(sign_));
    for (std::size_t i = 0; i < m; ++i) {
      std::complex<double> acc = 0.0;
      const std::int64_t* row = &diff_full_[i * m];
      for (std::size_t j = 0; j < m; ++j) acc += g[static_cast<std::size_t>(row[j])] * u[j];
      out[i] = factor * acc;
    }
  }

  double untruncated_norm2(const cvec& u) const override {
    const cvec g = modulus_power(u);
    cvec h(static_cast<std::size_t>(out_.volume), 0.0);
    for (std::int64_t q = 0; q < full_.volume; ++q) {
      const auto gq = g[static_cast<std::size_t>(q)];
      if (gq == std::complex<double>(0.0, 0.0)) continue;
      const std::int64_t p = out_base_ + full_pos_[static_cast<std::size_t>(q)];
      for (std::size_t j = 0; j < u.size(); ++j) h[static_cast<std::size_t>(p + mode_pos_[j])] += gq * u[j];
    }
    double s = 0;
    for (const auto& z : h) s += std::norm(z);
    return s;
  }

 private:
  static LatticeIndex unravel(const Box& box, std::int64_t q) {
    LatticeIndex n(box.lo.size());
    for (std::size_t i = 0; i < box.lo.size(); ++i) {
      n[i] = static_cast<std::int32_t>(box.lo[i] + (q / box.stride[i]) % box.extent[i]);
    }
    return n;
  }

  /// |u|^{2(m−1)} as coefficients on full_.
  cvec modulus_power(const cvec& u) const {
    const std::size_t m = u.size();
    cvec g(static_cast<std::size_t>(base_.volume), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (u[i] == std::complex<double>(0.0, 0.0)) continue;
      const std::int64_t* row = &diff_base_[i * m];
      for (std::size_t j = 0; j < m; ++j) g[static_cast<std::size_t>(row[j])] += u[i] * std::conj(u[j]);
    }
    if (power_ == 2) return g;
    // Repeated dense self-convolution, always landing on the full_ grid.
    cvec acc(static_cast<std::size_t>(full_.volume), 0.0);
    for (std::int64_t q = 0; q < base_.volume; ++q) {
      acc[static_cast<std::size_t>(full_base_ + base_pos_[static_cast<std::size_t>(q)])] = g[static_cast<std::size_t>(q)];
    }
    for (int k = 2; k < power_; ++k) {
      cvec next(acc.size(), 0.0);
      for (std::int64_t a = 0; a < full_.volume; ++a) {
        const auto va = acc[static_cast<std::size_t>(a)];
        if (va == std::complex<double>(0.0, 0.0)) continue;
        const LatticeIndex na = unravel(full_, a);
        for (std::int64_t b = 0; b < base_.volume; ++b) {
          const auto vb = g[static_cast<std::size_t>(b)];
          if (vb == std::complex<double>(0.0, 0.0)) continue;
          const LatticeIndex s = na + unravel(base_, b);
          if (full_.contains(s)) next[static_cast<std::size_t>(full_.offset(s))] += va * vb;
        }
      }
      acc = std::move(next);
    }
    return acc;
  }

  const ModeSpace& space_;
  int sign_;
  int power_;
  Box base_, full_, out_;
  std::vector<std::int64_t> diff_base_, diff_full_;
  std::int64_t out_base_ = 0, full_base_ = 0;
  std::vector<std::int64_t> mode_pos_, full_pos_, base_pos_;
};

}  // namespace

void SolverConfig::validate() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw ValidationError("dt must be > 0");
  if (!(T > 0) || !std::isfinite(T)) throw ValidationError("T must be > 0");
  if (!(picard_tol > 0)) throw ValidationError("picard_tol must be > 0");
  if (max_picard < 1) throw ValidationError("max_picard must be >= 1");
  if (sign != 1 && sign != -1) throw ValidationError("sign must be +1 (defocusing) or -1 (focusing)");
  if (power < 2) throw ValidationError("power m must be >= 2");
  if (!(trunc_height >= 0) || !std::isfinite(trunc_height)) throw ValidationError("trunc_height must be >= 0");
}

double SolveTrace::mass_drift() const {
  if (rows.empty() || rows.front().mass == 0) return 0.0;
  const double m0 = std::sqrt(rows.front().mass);
  return std::abs(std::sqrt(rows.back().mass) - m0) / m0;
}

NonlinearTerm cubic_nonlinearity(const TrigPoly& u, int sign, double trunc_height, const Budget& budget) {
  if (sign != 1 && sign != -1) throw ValidationError("sign must be +1 or -1");
  const TrigPoly w = multiply(multiply(u, u.conjugate(), budget), u, budget).scaled(static_cast<double>(sign));
  if (!std::isfinite(trunc_height)) return {w, 0.0};
  const auto limit = static_cast<std::int64_t>(std::floor(trunc_height * trunc_height + 1e-9));
  TrigPoly kept = w.filtered([limit](const LatticeIndex& n) { return n.norm2() <= limit; });
  const double discarded = std::max(0.0, w.l2_norm2() - kept.l2_norm2());
  return {std::move(kept), discarded};
}

SolveResult solve(const TrigPoly& u0, const SolverConfig& cfg) {
  cfg.validate();
  const LatticeIndex center = cfg.trunc_center.value_or(u0.spec().zero_index());
  const ModeSpace space = ModeSpace::ball(u0.spec_ptr(), center, cfg.trunc_height, DispersionSymbol::schrodinger());
  const PowerNonlinearity nonlinearity(space, cfg.sign, cfg.power);
  return detail::integrate(space, nonlinearity, space.gather(u0), cfg);
}

TrigPoly picard_coefficients(const TrigPoly& f, double t, const Budget& budget) {
  const std::uint64_t m = f.size();
  budget.require(m * m * m, "first Picard iterate triple sum");
  if (t == 0.0 || f.empty()) return TrigPoly(f.spec_ptr());
  const auto& spec = f.spec();
  const auto symbol = DispersionSymbol::schrodinger();
  const bool exact = spec.exact();
  std::vector<QScalar> rate(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) rate[i] = symbol.rate(spec.freq(f.terms()[i].n));
  std::unordered_map<LatticeIndex, QScalar, LatticeIndexHash> out_rate;
  std::unordered_map<LatticeIndex, Complex, LatticeIndexHash> acc;
  const auto terms = f.terms();
  for (std::size_t i1 = 0; i1 < terms.size(); ++i1) {
    for (std::size_t i3 = 0; i3 < terms.size(); ++i3) {
      const LatticeIndex q = terms[i1].n + terms[i3].n;
      const QScalar r13 = rate[i1] + rate[i3];
      const Complex w13 = terms[i1].c * terms[i3].c;
      for (std::size_t i2 = 0; i2 < terms.size(); ++i2) {
        const LatticeIndex n = q - terms[i2].n;
        auto it = out_rate.find(n);
        if (it == out_rate.end()) it = out_rate.emplace(n, symbol.rate(spec.freq(n))).first;
        const QScalar omega = r13 - rate[i2] - it->second;
        const bool resonant = exact ? omega.is_zero() : omega.is_zero(kFloatZeroTolerance);
        const Complex integral = resonant ? Complex(t, 0.0) : t * phi1(Complex(0.0, -t * omega.value()));
        acc[n] += w13 * std::conj(terms[i2].c) * integral;
      }
    }
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [n, c] : acc) out.push_back({n, c});
  return TrigPoly::from_terms(f.spec_ptr(), std::move(out)).pruned();
}

TrigPoly first_picard_iterate(const TrigPoly& f, double t, const Budget& budget) {
  return propagate(picard_coefficients(f, t, budget), DispersionSymbol::schrodinger(), t);
}

ScanReport picard_blowup_scan(const LatticeSpec& spec, const std::vector<std::int64_t>& heights, double t,
                              const Budget& budget) {
  if (!(t > 0)) throw ValidationError("Picard scan needs t > 0");
  ScanReport report;
  report.name = "picard-scan";
  report.budget = budget.max_items;
  report.config = {{"t", t}, {"heights", heights}, {"rank", spec.rank()}};
  for (auto c : heights) {
    const TrigPoly f = extremizer(spec, c, budget);
    const double v = first_picard_iterate(f, t, budget).l2_norm();
    report.rows.push_back({static_cast<double>(c), v, v, v});
  }
  report.refit();
  return report;
}

}  // namespace qpwave
