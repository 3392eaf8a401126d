#include "ehr/rng.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <cstring>
#include <stdexcept>

#include "ehr/digest.hpp"
#include "ehr/hex.hpp"

namespace ehr {

Bytes RandomSource::bytes(std::size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

std::uint64_t RandomSource::next_u64() {
  std::array<std::uint8_t, 8> buf{};
  fill(buf);
  std::uint64_t v = 0;
  for (auto b : buf) v = (v << 8) | b;
  return v;
}

std::string RandomSource::uuid_like() {
  Bytes raw = bytes(16);
  std::string hex = to_hex(raw);
  return hex.substr(0, 8) + "-" + hex.substr(8, 4) + "-" + hex.substr(12, 4) +
         "-" + hex.substr(16, 4) + "-" + hex.substr(20, 12);
}

void OsRandom::fill(std::span<std::uint8_t> out) {
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw std::runtime_error("system randomness unavailable");
  }
}

SeededRandom::SeededRandom(std::string_view seed)
    : key_(sha256(BytesView(reinterpret_cast<const std::uint8_t*>(seed.data()),
                            seed.size()))) {}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  // One 64-byte keystream block per counter value; partial blocks discard
  // the tail so the stream position stays limb-aligned and reproducible.
  std::size_t done = 0;
  while (done < out.size()) {
    std::array<std::uint8_t, 16> iv{};
    for (int i = 0; i < 8; ++i) iv[15 - i] = std::uint8_t(block_ >> (8 * i));
    ++block_;

    std::array<std::uint8_t, 64> zeros{};
    std::array<std::uint8_t, 64> stream{};
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    int len = 0;
    if (!ctx ||
        EVP_EncryptInit_ex(ctx, EVP_chacha20(), nullptr, key_.data(),
                           iv.data()) != 1 ||
        EVP_EncryptUpdate(ctx, stream.data(), &len, zeros.data(),
                          zeros.size()) != 1) {
      EVP_CIPHER_CTX_free(ctx);
      throw std::runtime_error("chacha20 keystream failed");
    }
    EVP_CIPHER_CTX_free(ctx);

    std::size_t take = std::min(out.size() - done, stream.size());
    std::memcpy(out.data() + done, stream.data(), take);
    done += take;
  }
}

}  // namespace ehr
