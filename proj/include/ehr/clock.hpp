#pragma once

#include <cstdint>

namespace ehr {

// Injectable time source; timestamps are UTC seconds since the epoch.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_unix() = 0;
};

class SystemClock final : public Clock {
 public:
  std::int64_t now_unix() override;
};

// Starts at a fixed instant and advances by one second per reading, so that
// repeated runs order events identically.
class FixedClock final : public Clock {
 public:
  explicit FixedClock(std::int64_t start) : next_(start) {}
  std::int64_t now_unix() override { return next_++; }

 private:
  std::int64_t next_;
};

}  // namespace ehr
