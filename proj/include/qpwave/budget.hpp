#pragma once

#include <cstdint>
#include <string>

namespace qpwave {

/// Work limit for enumerations and tuple tables, counted in visited items.
struct Budget {
  std::uint64_t max_items = 10'000'000;

  /// Throws BudgetError when `items` exceeds the limit.
  void require(std::uint64_t items, const std::string& what) const;
};

/// Default budget: 10^7 items, or the value of QPWAVE_BUDGET when set.
Budget default_budget();

/// Number of worker threads used by parallel scans (0 = hardware).
void set_worker_count(unsigned workers);
unsigned worker_count();

}  // namespace qpwave
