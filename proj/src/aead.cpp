#include "ehr/aead.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>

namespace ehr {
namespace {

struct CipherCtx {
  EVP_CIPHER_CTX* ctx;
  CipherCtx() : ctx(EVP_CIPHER_CTX_new()) {
    if (!ctx) throw std::runtime_error("aead: EVP context allocation failed");
  }
  ~CipherCtx() { EVP_CIPHER_CTX_free(ctx); }
  CipherCtx(const CipherCtx&) = delete;
  CipherCtx& operator=(const CipherCtx&) = delete;
};

void check_sizes(BytesView key, BytesView nonce) {
  if (key.size() != kAeadKeySize) {
    throw std::invalid_argument("aead: key must be 32 bytes");
  }
  if (nonce.size() != kAeadNonceSize) {
    throw std::invalid_argument("aead: nonce must be 12 bytes");
  }
}

}  // namespace

Bytes aead_seal(BytesView key, BytesView nonce, BytesView aad,
                BytesView plaintext) {
  check_sizes(key, nonce);
  CipherCtx c;
  if (EVP_EncryptInit_ex(c.ctx, EVP_aes_256_gcm(), nullptr, key.data(),
                         nonce.data()) != 1) {
    throw std::runtime_error("aead: encrypt init failed");
  }
  int len = 0;
  if (!aad.empty() &&
      EVP_EncryptUpdate(c.ctx, nullptr, &len, aad.data(),
                        static_cast<int>(aad.size())) != 1) {
    throw std::runtime_error("aead: aad update failed");
  }
  Bytes out(plaintext.size() + kAeadTagSize);
  if (!plaintext.empty() &&
      EVP_EncryptUpdate(c.ctx, out.data(), &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1) {
    throw std::runtime_error("aead: encrypt update failed");
  }
  int fin = 0;
  if (EVP_EncryptFinal_ex(c.ctx, out.data() + len, &fin) != 1) {
    throw std::runtime_error("aead: encrypt final failed");
  }
  if (EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_GET_TAG,
                          static_cast<int>(kAeadTagSize),
                          out.data() + plaintext.size()) != 1) {
    throw std::runtime_error("aead: tag extraction failed");
  }
  return out;
}

std::optional<Bytes> aead_open(BytesView key, BytesView nonce, BytesView aad,
                               BytesView sealed) {
  check_sizes(key, nonce);
  if (sealed.size() < kAeadTagSize) return std::nullopt;
  const std::size_t ct_len = sealed.size() - kAeadTagSize;

  CipherCtx c;
  if (EVP_DecryptInit_ex(c.ctx, EVP_aes_256_gcm(), nullptr, key.data(),
                         nonce.data()) != 1) {
    throw std::runtime_error("aead: decrypt init failed");
  }
  int len = 0;
  if (!aad.empty() &&
      EVP_DecryptUpdate(c.ctx, nullptr, &len, aad.data(),
                        static_cast<int>(aad.size())) != 1) {
    throw std::runtime_error("aead: aad update failed");
  }
  Bytes out(ct_len);
  if (ct_len > 0 &&
      EVP_DecryptUpdate(c.ctx, out.data(), &len, sealed.data(),
                        static_cast<int>(ct_len)) != 1) {
    return std::nullopt;
  }
  // The tag is const to us; OpenSSL's ctrl interface wants a mutable pointer.
  std::uint8_t tag[kAeadTagSize];
  std::copy(sealed.begin() + static_cast<std::ptrdiff_t>(ct_len), sealed.end(),
            tag);
  if (EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_SET_TAG,
                          static_cast<int>(kAeadTagSize), tag) != 1) {
    throw std::runtime_error("aead: tag set failed");
  }
  int fin = 0;
  if (EVP_DecryptFinal_ex(c.ctx, out.data() + len, &fin) != 1) {
    return std::nullopt;  // authentication failure
  }
  return out;
}

}  // namespace ehr
