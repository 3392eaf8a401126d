#include "ehr/clock.hpp"

#include <chrono>

namespace ehr {

std::int64_t SystemClock::now_unix() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace ehr
