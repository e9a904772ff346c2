#include "qpwave/scan.hpp"

#include <cstdio>

namespace qpwave {

std::vector<std::pair<double, double>> ScanReport::points() const {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.emplace_back(r.param, r.value);
  return pts;
}

void ScanReport::refit() {
  fit_valid = false;
  const auto pts = points();
  if (pts.size() < 2) return;
  fit = fit_exponent(pts, 2);
  fit_valid = true;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ScanReport::config_hash() const { return fnv1a_hex(config.dump()); }

}  // namespace qpwave
