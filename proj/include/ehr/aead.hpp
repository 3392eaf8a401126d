#pragma once

#include <optional>

#include "ehr/bytes.hpp"

namespace ehr {

inline constexpr std::size_t kAeadKeySize = 32;
inline constexpr std::size_t kAeadNonceSize = 12;
inline constexpr std::size_t kAeadTagSize = 16;

// AES-256-GCM. Seal returns ciphertext with the tag appended; open returns
// nothing on any authentication failure.
Bytes aead_seal(BytesView key, BytesView nonce, BytesView aad,
                BytesView plaintext);
std::optional<Bytes> aead_open(BytesView key, BytesView nonce, BytesView aad,
                               BytesView sealed);

}  // namespace ehr
