#include "qpwave/lattice.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

namespace qpwave {

LatticeIndex::LatticeIndex(std::size_t rank) {
  if (rank > kMaxRank) throw DimensionError("lattice rank exceeds " + std::to_string(kMaxRank));
  size_ = static_cast<std::uint8_t>(rank);
}

LatticeIndex::LatticeIndex(std::initializer_list<std::int32_t> values) : LatticeIndex(values.size()) {
  std::copy(values.begin(), values.end(), c_.begin());
}

LatticeIndex LatticeIndex::from(std::span<const std::int64_t> values) {
  LatticeIndex n(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < std::numeric_limits<std::int32_t>::min() ||
        values[i] > std::numeric_limits<std::int32_t>::max()) {
      throw ValidationError("lattice index component out of 32-bit range");
    }
    n.c_[i] = static_cast<std::int32_t>(values[i]);
  }
  return n;
}

std::int64_t LatticeIndex::norm2() const noexcept {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < size_; ++i) s += static_cast<std::int64_t>(c_[i]) * c_[i];
  return s;
}

bool LatticeIndex::is_canonical_half() const noexcept {
  for (std::size_t i = 0; i < size_; ++i) {
    if (c_[i] != 0) return c_[i] > 0;
  }
  return false;
}

LatticeIndex LatticeIndex::operator-() const noexcept {
  LatticeIndex r = *this;
  for (std::size_t i = 0; i < size_; ++i) r.c_[i] = -c_[i];
  return r;
}

LatticeIndex& LatticeIndex::operator+=(const LatticeIndex& o) {
  if (o.size_ != size_) throw DimensionError("lattice index rank mismatch");
  for (std::size_t i = 0; i < size_; ++i) c_[i] += o.c_[i];
  return *this;
}

LatticeIndex& LatticeIndex::operator-=(const LatticeIndex& o) {
  if (o.size_ != size_) throw DimensionError("lattice index rank mismatch");
  for (std::size_t i = 0; i < size_; ++i) c_[i] -= o.c_[i];
  return *this;
}

bool operator==(const LatticeIndex& a, const LatticeIndex& b) noexcept {
  if (a.size_ != b.size_) return false;
  for (std::size_t i = 0; i < a.size_; ++i) {
    if (a.c_[i] != b.c_[i]) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const LatticeIndex& a, const LatticeIndex& b) noexcept {
  if (auto c = a.size_ <=> b.size_; c != 0) return c;
  for (std::size_t i = 0; i < a.size_; ++i) {
    if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::size_t LatticeIndex::hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull ^ size_;
  for (std::size_t i = 0; i < size_; ++i) {
    h ^= static_cast<std::uint32_t>(c_[i]);
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

bool is_dyadic(std::int64_t c) noexcept { return c >= 1 && (c & (c - 1)) == 0; }

LatticeSpec::LatticeSpec(std::vector<std::vector<QScalar>> omega) : omega_(std::move(omega)) {
  if (omega_.empty()) throw ValidationError("lattice needs at least one spatial dimension");
  std::int64_t field = 0;
  for (const auto& block : omega_) {
    if (block.empty()) throw ValidationError("every lattice block needs at least one generator");
    for (const auto& w : block) {
      if (w.sign() <= 0) throw ValidationError("lattice generators must be positive, got " + w.str());
      if (!w.is_exact()) {
        exact_ = false;
      } else if (w.radicand() != 0) {
        if (field != 0 && field != w.radicand()) exact_ = false;
        field = w.radicand();
      }
    }
    rank_ += block.size();
  }
  if (rank_ > LatticeIndex::kMaxRank) {
    throw DimensionError("total lattice rank exceeds " + std::to_string(LatticeIndex::kMaxRank));
  }
}

LatticeSpec LatticeSpec::sqrt2() { return one_dim({QScalar(1), QScalar::sqrt_of(2)}); }

std::vector<std::size_t> LatticeSpec::ranks() const {
  std::vector<std::size_t> r;
  r.reserve(omega_.size());
  for (const auto& block : omega_) r.push_back(block.size());
  return r;
}

void LatticeSpec::check_shape(const LatticeIndex& n) const {
  if (n.size() != rank_) {
    throw DimensionError("index of rank " + std::to_string(n.size()) +
                         " does not match lattice rank " + std::to_string(rank_));
  }
}

std::vector<QScalar> LatticeSpec::freq(const LatticeIndex& n) const {
  check_shape(n);
  std::vector<QScalar> out;
  out.reserve(omega_.size());
  std::size_t k = 0;
  for (const auto& block : omega_) {
    QScalar s;
    for (const auto& w : block) {
      if (n[k] != 0) s += w * QScalar(static_cast<std::int64_t>(n[k]));
      ++k;
    }
    out.push_back(std::move(s));
  }
  return out;
}

QScalar LatticeSpec::freq1(const LatticeIndex& n) const {
  if (dim() != 1) throw DimensionError("scalar frequency requested on a multi-dimensional lattice");
  check_shape(n);
  QScalar s;
  for (std::size_t k = 0; k < rank_; ++k) {
    if (n[k] != 0) s += omega_[0][k] * QScalar(static_cast<std::int64_t>(n[k]));
  }
  return s;
}

std::vector<double> LatticeSpec::freq_values(const LatticeIndex& n) const {
  std::vector<double> out;
  for (const auto& q : freq(n)) out.push_back(q.value());
  return out;
}

bool operator==(const LatticeSpec& a, const LatticeSpec& b) { return a.omega_ == b.omega_; }

double ball_point_estimate(std::size_t rank, double radius) {
  const double nu = static_cast<double>(rank);
  const double unit = std::pow(std::numbers::pi, nu / 2) / std::tgamma(nu / 2 + 1);
  return unit * std::pow(radius + 1.0, nu);
}

std::vector<LatticeIndex> height_shell(std::size_t rank, std::int64_t c, const Budget& budget) {
  require_dyadic(c, "height C");
  std::vector<LatticeIndex> out;
  for_each_in_ball(rank, c * c, budget, [&](const LatticeIndex& n) {
    if (in_height_shell(n.norm2(), c)) out.push_back(n);
  });
  return out;
}

namespace {

// Exact comparison when possible; floats within the coincidence tolerance tie.
int compare_tol(const QScalar& x, const QScalar& y) {
  if (x.is_exact() && y.is_exact()) return compare(x, y);
  const double d = x.value() - y.value();
  if (std::abs(d) <= kFloatZeroTolerance) return 0;
  return d > 0 ? 1 : -1;
}

void require_one_dim(const LatticeSpec& spec, const char* op) {
  if (spec.dim() != 1) throw DimensionError(std::string(op) + " needs a one-dimensional lattice");
}

struct FreqPoint {
  double value;
  QScalar exact;
  LatticeIndex n;
};

std::vector<FreqPoint> sorted_frequencies(const LatticeSpec& spec, std::int64_t radius2,
                                          const Budget& budget,
                                          const std::function<bool(const LatticeIndex&)>& keep) {
  std::vector<FreqPoint> pts;
  for_each_in_ball(spec.rank(), radius2, budget, [&](const LatticeIndex& n) {
    if (!keep(n)) return;
    QScalar f = spec.freq1(n);
    pts.push_back({f.value(), std::move(f), n});
  });
  std::sort(pts.begin(), pts.end(), [](const FreqPoint& a, const FreqPoint& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.n < b.n;
  });
  return pts;
}

}  // namespace

bool Interval::contains(const QScalar& x) const {
  const int cl = compare_tol(x, lo);
  if (cl < 0 || (cl == 0 && !lo_closed)) return false;
  const int ch = compare_tol(x, hi);
  if (ch > 0 || (ch == 0 && !hi_closed)) return false;
  return true;
}

std::uint64_t count_in_interval(const LatticeSpec& spec, std::int64_t c, const Interval& interval,
                                const Budget& budget) {
  require_one_dim(spec, "count_in_interval");
  require_dyadic(c, "height C");
  std::uint64_t count = 0;
  for_each_in_ball(spec.rank(), c * c, budget, [&](const LatticeIndex& n) {
    if (in_height_shell(n.norm2(), c) && interval.contains(spec.freq1(n))) ++count;
  });
  return count;
}

UnitIntervalCount max_unit_interval_count(const LatticeSpec& spec, std::int64_t c,
                                          const Budget& budget) {
  require_one_dim(spec, "max_unit_interval_count");
  require_dyadic(c, "height C");
  const QScalar lo(-c);
  const QScalar hi_start(c - 1);
  auto pts = sorted_frequencies(spec, c * c, budget, [&](const LatticeIndex& n) {
    return in_height_shell(n.norm2(), c);
  });
  UnitIntervalCount best;
  std::size_t j = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (compare_tol(pts[i].exact, lo) < 0) continue;
    if (compare_tol(pts[i].exact, hi_start) > 0) break;
    const QScalar end = pts[i].exact + QScalar(1);
    if (j < i) j = i;
    while (j < pts.size() && compare_tol(pts[j].exact, end) < 0) ++j;
    const std::uint64_t cnt = j - i;
    if (cnt > best.count) {
      best.count = cnt;
      best.start = pts[i].exact;
    }
  }
  return best;
}

MinGapReport min_gap(const LatticeSpec& spec, std::int64_t height, const Budget& budget) {
  require_one_dim(spec, "min_gap");
  if (height < 1) throw ValidationError("min_gap needs H >= 1");

  auto gap_at = [&](std::int64_t h, MinGapReport* full) {
    auto pts = sorted_frequencies(spec, h * h, budget, [](const LatticeIndex&) { return true; });
    std::optional<QScalar> best;
    std::size_t arg = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      QScalar g = pts[i + 1].exact - pts[i].exact;
      if (!best || compare(g, *best) < 0) {
        best = g;
        arg = i;
      }
    }
    if (!best) throw ValidationError("min_gap needs at least two frequencies");
    if (full) {
      full->gap = *best;
      full->gap_value = best->value();
      full->first = pts[arg].n;
      full->second = pts[arg + 1].n;
    }
    return best->value();
  };

  MinGapReport report;
  gap_at(height, &report);
  std::vector<std::int64_t> heights;
  for (std::int64_t h = 2; h <= height; h *= 2) heights.push_back(h);
  if (heights.empty() || heights.back() != height) heights.push_back(height);
  std::vector<std::pair<double, double>> fit_points;
  for (std::int64_t h : heights) {
    const double g = (h == height) ? report.gap_value : gap_at(h, nullptr);
    report.series.emplace_back(h, g);
    if (g > 0) fit_points.emplace_back(static_cast<double>(h), g);
  }
  if (fit_points.size() >= 2 && fit_points.size() == report.series.size()) {
    const ExponentFit fit = fit_exponent(fit_points, 2);
    report.beta = -fit.slope;
    report.alpha = std::exp(fit.intercept);
    report.fit_valid = true;
  }
  return report;
}

NonResonanceReport nonresonance_check(const LatticeSpec& spec, std::int64_t height,
                                      double tolerance, const Budget& budget) {
  if (height < 1) throw ValidationError("nonresonance_check needs H >= 1");
  NonResonanceReport report;
  bool have = false;
  for (std::size_t blk = 0; blk < spec.dim(); ++blk) {
    const auto& block = spec.omega()[blk];
    if (block.size() == 1) {
      // rank one: the only frequencies are n·ω with |n| >= 1
      const QScalar v = block[0];
      if (!have || compare(v, report.min_abs) < 0) {
        report.min_abs = v;
        report.witness = LatticeIndex{1};
        report.block = blk;
        have = true;
      }
      continue;
    }
    for_each_in_ball(block.size(), height * height, budget, [&](const LatticeIndex& n) {
      if (n.is_zero()) return;
      QScalar s;
      for (std::size_t k = 0; k < block.size(); ++k) {
        if (n[k] != 0) s += block[k] * QScalar(static_cast<std::int64_t>(n[k]));
      }
      s = s.abs();
      if (s.is_exact() && s.is_zero()) {
        std::string rel;
        for (std::size_t k = 0; k < block.size(); ++k) {
          rel += (k ? ", " : "") + std::to_string(n[k]);
        }
        throw ResonantLatticeError("exact integer relation n·ω = 0 at n = (" + rel +
                                   ") in block " + std::to_string(blk));
      }
      if (!have || compare(s, report.min_abs) < 0) {
        report.min_abs = s;
        report.witness = n;
        report.block = blk;
        have = true;
      }
    });
  }
  report.min_value = report.min_abs.value();
  report.flagged = !report.min_abs.is_exact() && report.min_value <= tolerance;
  return report;
}

}  // namespace qpwave
