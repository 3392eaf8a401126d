#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "ehr/bytes.hpp"

namespace ehr {

// Injectable randomness so deterministic replay can swap the OS source out.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  Bytes bytes(std::size_t n);
  std::uint64_t next_u64();
  // Lower-case hex, 8-4-4-4-12 grouping; not an RFC 4122 claim, just a
  // collision-resistant identifier.
  std::string uuid_like();
};

class OsRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// ChaCha20 keystream expanded from a seed string. Identical seeds give
// identical streams, which the deterministic workflow mode relies on.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::string_view seed);
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::array<std::uint8_t, 32> key_;
  std::uint64_t block_ = 0;
};

}  // namespace ehr
