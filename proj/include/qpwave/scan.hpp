#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qpwave/fit.hpp"

namespace qpwave {

struct ScanRow {
  double param = 0.0;
  double value = 0.0;
  double lo_ci = 0.0;  // smallest trial value at this parameter
  double hi_ci = 0.0;  // largest trial value at this parameter
};

/// Table of (parameter, measured value) rows with a log-log exponent fit.
struct ScanReport {
  std::string name;
  std::vector<ScanRow> rows;
  ExponentFit fit;
  bool fit_valid = false;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  nlohmann::json config = nlohmann::json::object();

  std::vector<std::pair<double, double>> points() const;
  /// Refits the exponent on the current rows (needs >= 2 positive rows).
  void refit();
  /// 16 hex digits of FNV-1a over the compact config JSON.
  std::string config_hash() const;
};

std::string fnv1a_hex(const std::string& text);

}  // namespace qpwave
