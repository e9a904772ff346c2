#include "qpwave/budget.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

#include "qpwave/errors.hpp"

namespace qpwave {
namespace {
std::atomic<unsigned> g_workers{0};
}

void Budget::require(std::uint64_t items, const std::string& what) const {
  if (items > max_items) {
    throw BudgetError(what + " needs " + std::to_string(items) + " items, budget is " +
                      std::to_string(max_items));
  }
}

Budget default_budget() {
  Budget b;
  if (const char* env = std::getenv("QPWAVE_BUDGET")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size() && v > 0) b.max_items = v;
    } catch (const std::exception&) {
      // malformed values fall back to the default
    }
  }
  return b;
}

void set_worker_count(unsigned workers) { g_workers.store(workers); }

unsigned worker_count() {
  const unsigned w = g_workers.load();
  if (w != 0) return w;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace qpwave
