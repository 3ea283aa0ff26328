#pragma once

#include <chrono>
#include <cstdint>

namespace gpm {

// Monotonic nanosecond clock. Routing-time and runtime measurements sample
// this around the timed section only.
struct SteadyClock {
  std::uint64_t now_ns() const {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now().time_since_epoch())
            .count());
  }
};

}  // namespace gpm
