#pragma once

#include <atomic>
#include <cstdint>

namespace durion::counters {

// Instrumentation hooks. rational_gcd_calls counts every rational gcd
// (the expensive step of common-divisor re-encoding); duration_folds counts
// every expression node visited while lowering a lazy duration to a value.
// Parsing must leave duration_folds untouched, and absolute-unit edits must
// leave rational_gcd_calls untouched; tests pin both.

inline std::atomic<std::uint64_t> rational_gcd_calls{0};
inline std::atomic<std::uint64_t> duration_folds{0};

inline void reset() {
  rational_gcd_calls.store(0, std::memory_order_relaxed);
  duration_folds.store(0, std::memory_order_relaxed);
}

}  // namespace durion::counters
