#pragma once

#include <array>

#include "ehr/bytes.hpp"

namespace ehr {

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(BytesView data);

// Incremental variant for multi-part inputs.
class Sha256 {
 public:
  Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;
  ~Sha256();

  Sha256& update(BytesView data);
  Sha256& update(std::string_view data);
  Sha256Digest finish();

 private:
  void* ctx_;
};

}  // namespace ehr
