#include <algorithm>
#include <cmath>

#include "detail/parallel.hpp"
#include "detail/sum.hpp"
#include "detail/tuples.hpp"

namespace qpwave::detail {
namespace {

constexpr double kFloatResonance = 1e-10;
constexpr std::size_t kChunks = 64;

struct Group {
  Complex w;
  QScalar theta;
  double theta_value;
};

}  // namespace

ModeTable mode_table(const TrigPoly& f, const DispersionSymbol& symbol) {
  ModeTable table;
  table.reserve(f.size());
  for (const auto& t : f.terms()) {
    const auto xi = f.spec().freq(t.n);
    QScalar rate = symbol.rate(xi);
    const double v = rate.value();
    table.push_back({t.n, t.c, std::move(rate), v});
  }
  return table;
}

std::vector<TupleEntry> tuple_entries(const std::vector<const ModeTable*>& factors, bool exact) {
  std::vector<TupleEntry> out;
  if (factors.empty()) return out;
  std::size_t total = 1;
  for (const auto* f : factors) total *= f->size();
  out.reserve(total);
  TupleEntry seed{factors[0]->empty() ? LatticeIndex() : (*factors[0])[0].n, 1.0, QScalar(), 0.0};
  auto recurse = [&](auto&& self, std::size_t level, const TupleEntry& acc) -> void {
    for (const auto& m : *factors[level]) {
      TupleEntry e;
      e.k = level == 0 ? m.n : acc.k + m.n;
      e.w = level == 0 ? m.a : acc.w * m.a;
      if (exact) e.theta = level == 0 ? m.rate : acc.theta + m.rate;
      e.theta_value = level == 0 ? m.rate_value : acc.theta_value + m.rate_value;
      if (level + 1 == factors.size()) {
        out.push_back(std::move(e));
      } else {
        self(self, level + 1, e);
      }
    }
  };
  recurse(recurse, 0, seed);
  return out;
}

double resonant_form(std::vector<TupleEntry> entries, TimeMode mode, double T, bool exact) {
  if (exact) {
    for (auto& e : entries) e.theta_value = e.theta.value();
  }
  std::sort(entries.begin(), entries.end(), [](const TupleEntry& a, const TupleEntry& b) {
    if (a.k != b.k) return a.k < b.k;
    return a.theta_value < b.theta_value;
  });
  std::vector<std::pair<std::size_t, std::size_t>> buckets;
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i + 1;
    while (j < entries.size() && entries[j].k == entries[i].k) ++j;
    buckets.emplace_back(i, j);
    i = j;
  }

  std::vector<Complex> partial(kChunks);
  std::vector<double> scale(kChunks);
  parallel_for(kChunks, [&](std::size_t chunk) {
    const std::size_t lo = buckets.size() * chunk / kChunks;
    const std::size_t hi = buckets.size() * (chunk + 1) / kChunks;
    CompensatedComplexSum acc;
    CompensatedSum mag;
    std::vector<Group> groups;
    for (std::size_t b = lo; b < hi; ++b) {
      groups.clear();
      for (std::size_t i = buckets[b].first; i < buckets[b].second; ++i) {
        const auto& e = entries[i];
        bool same = false;
        if (!groups.empty()) {
          same = exact ? groups.back().theta == e.theta
                       : std::abs(e.theta_value - groups.back().theta_value) < kFloatResonance;
        }
        if (same) {
          groups.back().w += e.w;
        } else {
          groups.push_back({e.w, e.theta, e.theta_value});
        }
      }
      if (mode == TimeMode::global_mean) {
        for (const auto& g : groups) acc.add(std::norm(g.w));
        continue;
      }
      for (const auto& g : groups) {
        for (const auto& h : groups) {
          const double omega = exact ? (g.theta - h.theta).value() : g.theta_value - h.theta_value;
          const Complex integral = T * phi1(Complex(0.0, -T * omega));
          acc.add(g.w * std::conj(h.w) * integral);
          mag.add(std::abs(g.w) * std::abs(h.w) * T);
        }
      }
    }
    partial[chunk] = acc.value();
    scale[chunk] = mag.value();
  });
  CompensatedComplexSum total;
  CompensatedSum total_scale;
  for (std::size_t c = 0; c < kChunks; ++c) {
    total.add(partial[c]);
    total_scale.add(scale[c]);
  }
  const Complex v = total.value();
  if (std::abs(v.imag()) > 1e-12 * std::max(v.real(), total_scale.value())) {
    throw NumericConsistencyError("tuple sum has imaginary residue " + std::to_string(v.imag()) +
                                  " against real part " + std::to_string(v.real()));
  }
  return v.real();
}

}  // namespace qpwave::detail
