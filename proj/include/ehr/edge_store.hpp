#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "ehr/bytes.hpp"
#include "ehr/clock.hpp"
#include "ehr/ledger.hpp"
#include "ehr/rng.hpp"

// Off-chain store for encrypted EHR objects with one-time self-destructing
// URLs. Objects are content-addressed by digest; tokens are 128-bit random
// values whose redemption state transitions exactly once, enforced by a
// mutex-guarded compare-and-set and persisted through a write-ahead journal
// so the exactly-once guarantee survives restarts.

namespace ehr::edge {

struct StoreConfig {
  std::filesystem::path dir;
  std::string url_base = "https://edge.local";  // URLs: <base>/once/<token>
  std::int64_t default_ttl_seconds = 24 * 60 * 60;
};

class EdgeStore final : public ledger::TokenIssuer {
 public:
  EdgeStore(StoreConfig config, Clock& clock, RandomSource& rng);

  // Content-addressed, idempotent put. Bytes must parse as a ciphertext
  // container (malformed input raises ParseError).
  std::string put_object(const std::string& owner_gid, BytesView ciphertext);

  bool has_object(const std::string& object_id) const;
  Bytes get_object(const std::string& object_id) const;

  // TokenIssuer: fresh unredeemed token for an existing object. The URL
  // encodes the token only, never the object id.
  std::pair<std::string, std::string> issue(const std::string& object_id,
                                            std::int64_t ttl_seconds) override;

  // First redemption of a live token returns the ciphertext and atomically
  // marks the token redeemed. Every other case — unknown, already used,
  // expired — returns the same empty result with no distinguishing oracle.
  std::optional<Bytes> redeem(const std::string& token);

  // Marks every unredeemed token past its deadline as expired; idempotent.
  std::size_t expire_sweep(std::int64_t now);

  std::int64_t default_ttl_seconds() const {
    return config_.default_ttl_seconds;
  }
  std::size_t token_count() const;

 private:
  enum class TokenState { kUnredeemed, kRedeemed, kExpired };
  struct TokenRecord {
    std::string object_id;
    std::int64_t expires_at = 0;
    TokenState state = TokenState::kUnredeemed;
  };

  void journal_append(const std::string& line);
  void replay_journal();
  std::filesystem::path object_path(const std::string& object_id) const;

  StoreConfig config_;
  Clock& clock_;
  RandomSource& rng_;
  mutable std::mutex mutex_;
  std::map<std::string, TokenRecord> tokens_;
  std::filesystem::path journal_path_;
};

// Minimal HTTP facade over one store:
//   PUT  /objects       body = ciphertext      → 200 {"object_id": ...}
//   POST /tokens        body = {"object_id", "ttl_seconds"?} → 200 {token,url}
//   GET  /once/<token>  → 200 ciphertext | 410 gone (uniform body)
class EdgeHttpFacade {
 public:
  EdgeHttpFacade(EdgeStore& store, const std::string& owner_gid);
  ~EdgeHttpFacade();

  // Binds 127.0.0.1 on an ephemeral port and serves from a background
  // thread; returns the chosen port.
  int start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ehr::edge
