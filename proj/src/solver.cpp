#include <algorithm>
#include <array>
#include <cmath>

#include "detail/galerkin.hpp"
#include "qpwave/errors.hpp"

namespace qpwave::detail {
namespace {

constexpr int kStages = 4;

struct Tableau {
  std::array<double, kStages> c{};
  std::array<double, kStages> b{};
  std::array<std::array<double, kStages>, kStages> a{};
};

// Gauss–Legendre nodes/weights on [−1, 1].
constexpr std::array<double, kStages> kNodes = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                                0.8611363115940526};
constexpr std::array<double, kStages> kWeights = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                                  0.3478548451374538};

Tableau gauss_tableau() {
  Tableau tab;
  for (int i = 0; i < kStages; ++i) {
    tab.c[i] = 0.5 * (1.0 + kNodes[i]);
    tab.b[i] = 0.5 * kWeights[i];
  }
  auto lagrange = [&](int j, double x) {
    double v = 1.0;
    for (int m = 0; m < kStages; ++m) {
      if (m != j) v *= (x - tab.c[m]) / (tab.c[j] - tab.c[m]);
    }
    return v;
  };
  // a_ij = ∫_0^{c_i} ℓ_j; the 4-point rule is exact for the cubic ℓ_j.
  for (int i = 0; i < kStages; ++i) {
    for (int j = 0; j < kStages; ++j) {
      double s = 0;
      for (int q = 0; q < kStages; ++q) {
        const double x = 0.5 * tab.c[i] * (1.0 + kNodes[q]);
        s += 0.5 * tab.c[i] * kWeights[q] * lagrange(j, x);
      }
      tab.a[i][j] = s;
    }
  }
  return tab;
}

double norm2(const cvec& v) {
  double s = 0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

}  // namespace

Box Box::around(const LatticeIndex& center, std::int64_t radius) {
  Box box;
  const std::size_t r = center.size();
  box.lo.resize(r);
  box.extent.resize(r);
  box.stride.resize(r);
  std::int64_t stride = 1;
  for (std::size_t i = r; i-- > 0;) {
    box.lo[i] = center[i] - radius;
    box.extent[i] = 2 * radius + 1;
    box.stride[i] = stride;
    stride *= box.extent[i];
  }
  box.volume = stride;
  return box;
}

bool Box::contains(const LatticeIndex& n) const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    const std::int64_t x = n[i] - lo[i];
    if (x < 0 || x >= extent[i]) return false;
  }
  return true;
}

std::int64_t Box::offset(const LatticeIndex& n) const {
  std::int64_t off = 0;
  for (std::size_t i = 0; i < lo.size(); ++i) off += (n[i] - lo[i]) * stride[i];
  return off;
}

ModeSpace ModeSpace::ball(std::shared_ptr<const LatticeSpec> spec, const LatticeIndex& center, double radius,
                          const DispersionSymbol& symbol) {
  spec->check_shape(center);
  if (!(radius >= 0) || !std::isfinite(radius)) throw ValidationError("truncation height must be finite and >= 0");
  ModeSpace space;
  space.spec = spec;
  space.center = center;
  space.radius2 = static_cast<std::int64_t>(std::floor(radius * radius + 1e-9));
  for_each_in_ball(spec->rank(), space.radius2, default_budget(),
                   [&](const LatticeIndex& off) { space.modes.push_back(off + center); });
  space.rates.reserve(space.modes.size());
  for (const auto& n : space.modes) space.rates.push_back(symbol.rate_value(spec->freq_values(n)));
  return space;
}

std::int64_t ModeSpace::box_radius() const {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(radius2)));
  while ((r + 1) * (r + 1) <= radius2) ++r;
  return r;
}

std::ptrdiff_t ModeSpace::find(const LatticeIndex& n) const {
  auto it = std::lower_bound(modes.begin(), modes.end(), n);
  if (it != modes.end() && *it == n) return it - modes.begin();
  return -1;
}

cvec ModeSpace::gather(const TrigPoly& u) const {
  cvec v(modes.size());
  for (const auto& t : u.terms()) {
    const auto i = find(t.n);
    if (i < 0) throw ValidationError("initial data must be supported in the truncation ball");
    v[static_cast<std::size_t>(i)] = t.c;
  }
  return v;
}

TrigPoly ModeSpace::scatter(const cvec& v) const {
  std::vector<Term> terms;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (v[i] != std::complex<double>(0.0, 0.0)) terms.push_back({modes[i], v[i]});
  }
  return TrigPoly::from_terms(spec, std::move(terms));
}

SolveResult integrate(const ModeSpace& space, const Nonlinearity& nonlinearity, cvec u, const SolverConfig& cfg) {
  cfg.validate();
  static const Tableau tab = gauss_tableau();
  const std::size_t m = space.modes.size();
  const auto steps = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(cfg.T / cfg.dt - 1e-9)));
  const double h = cfg.T / static_cast<double>(steps);

  std::array<cvec, kStages> to_lab, to_int;
  for (int j = 0; j < kStages; ++j) {
    to_lab[j].resize(m);
    to_int[j].resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      to_int[j][i] = std::polar(1.0, tab.c[j] * h * space.rates[i]);
      to_lab[j][i] = std::conj(to_int[j][i]);
    }
  }
  cvec full_step(m);
  for (std::size_t i = 0; i < m; ++i) full_step[i] = std::polar(1.0, -h * space.rates[i]);

  std::vector<double> hs_weight(m);
  for (std::size_t i = 0; i < m; ++i) {
    hs_weight[i] = std::pow(1.0 + space.modes[i].height(), 2.0 * cfg.hs_s);
  }

  cvec scratch(m), image(m);
  auto rhs = [&](int j, const cvec& v, cvec& out) {
    for (std::size_t i = 0; i < m; ++i) scratch[i] = to_lab[j][i] * v[i];
    nonlinearity.apply(scratch, image);
    out.resize(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = to_int[j][i] * image[i];
  };

  SolveResult result;
  auto record = [&](double t, int iters, double ratio) {
    TraceRow row;
    row.t = t;
    row.mass = norm2(u);
    double hs = 0;
    for (std::size_t i = 0; i < m; ++i) hs += hs_weight[i] * std::norm(u[i]);
    row.hs_norm = std::sqrt(hs);
    if (row.mass > 0) {
      nonlinearity.apply(u, image);
      const double outside = std::max(0.0, nonlinearity.untruncated_norm2(u) - norm2(image));
      row.trunc_loss = h * h * outside / row.mass;
    }
    row.picard_iters = iters;
    row.contraction = ratio;
    result.trace.max_trunc_loss = std::max(result.trace.max_trunc_loss, row.trunc_loss);
    if (row.trunc_loss > cfg.trunc_warn) result.trace.truncation_warning = true;
    result.trace.rows.push_back(row);
  };
  record(0.0, 0, 0.0);

  std::array<cvec, kStages> stage, slope, next;
  for (std::int64_t step = 0; step < steps; ++step) {
    const cvec& v0 = u;
    const double tol = cfg.picard_tol * std::max(1.0, std::sqrt(norm2(v0)));
    for (int j = 0; j < kStages; ++j) {
      stage[j] = v0;
      rhs(j, stage[j], slope[j]);
    }
    double prev = 0.0, ratio = 0.0;
    int iters = 0;
    bool converged = false;
    while (iters < cfg.max_picard) {
      ++iters;
      double diff = 0.0;
      for (int j = 0; j < kStages; ++j) {
        next[j].resize(m);
        double d = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          std::complex<double> acc = 0.0;
          for (int l = 0; l < kStages; ++l) acc += tab.a[j][l] * slope[l][i];
          next[j][i] = v0[i] + h * acc;
          d += std::norm(next[j][i] - stage[j][i]);
        }
        diff = std::max(diff, std::sqrt(d));
      }
      if (!std::isfinite(diff)) {
        throw NonContractionError("stage iteration diverged at t = " + std::to_string(step * h), ratio);
      }
      if (iters > 1 && prev > 0) ratio = diff / prev;
      prev = diff;
      std::swap(stage, next);
      for (int j = 0; j < kStages; ++j) rhs(j, stage[j], slope[j]);
      if (diff <= tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NonContractionError("stage iteration did not contract within " + std::to_string(cfg.max_picard) +
                                    " sweeps at t = " + std::to_string(step * h) +
                                    " (last ratio " + std::to_string(ratio) + "); reduce dt or the data size",
                                ratio);
    }
    cvec v1(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::complex<double> acc = 0.0;
      for (int l = 0; l < kStages; ++l) acc += tab.b[l] * slope[l][i];
      v1[i] = (v0[i] + h * acc) * full_step[i];
    }
    u = std::move(v1);
    nonlinearity.symmetrize(u);
    record(static_cast<double>(step + 1) * h, iters, ratio);
  }
  result.state = space.scatter(u);
  return result;
}

}  // namespace qpwave::detail
