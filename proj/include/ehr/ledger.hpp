#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ehr/abms.hpp"
#include "ehr/bls.hpp"
#include "ehr/clock.hpp"
#include "ehr/digest.hpp"
#include "ehr/rng.hpp"

// Tamper-evident event ledger with embedded participant, profile, and ACL
// state. Each transaction hashes its header and payload digest together with
// the previous hash, so any byte of recorded history is covered. Patient
// gids never enter the record: state is keyed by a salted hash commitment
// and payloads carry only commitments.

namespace ehr::ledger {

enum class Role { kPatient, kProvider, kAuthority };
enum class TxKind { kRegister, kProfileWrite, kAuthEvent, kAccessActivity };

std::string role_name(Role role);
std::string kind_name(TxKind kind);

// Commitment used everywhere a payload or state key needs to reference a
// holder: hex SHA-256 over a domain tag and the gid.
std::string gid_commitment(std::string_view gid);

struct RegistryRow {
  std::string authority_id;
  std::string attribute_name;
  std::string vk_hex;  // versioned verification key encoding
};

struct Participant {
  std::string gid;
  std::string display_name;
  Role role = Role::kPatient;
  std::string provider_kind;          // providers: e.g. "doctor", "lab"
  abms::ThresholdSpec threshold;      // providers: their (t, n) policy
  std::vector<RegistryRow> registry_rows;  // authorities: published VKs
};

struct AclRule {
  // "gid" rules name one registered provider by commitment; "role" rules
  // match every provider ("provider") or one kind ("provider:doctor").
  enum class Kind { kGid, kRole };
  Kind kind = Kind::kRole;
  std::string subject;     // commitment hex or role pattern
  std::string permission;  // "read_profile" | "request_access"
};

struct LedgerTransaction {
  std::uint64_t seq = 0;
  std::int64_t timestamp = 0;
  TxKind kind = TxKind::kRegister;
  std::string event_id;
  Sha256Digest payload_digest{};
  Sha256Digest prev_hash{};
  Sha256Digest this_hash{};
  std::string payload_json;  // canonical payload, digest-checked

  Sha256Digest compute_hash() const;
};

struct ProfileView {
  std::string gid;  // empty unless the owner is reading
  std::string display_name;
  std::vector<abms::AttributeSignature> signatures;
  std::vector<std::string> ehr_refs;
};

struct AccessOutcome {
  bool granted = false;
  int valid_count = 0;
  std::string event_id;   // of the auth_event transaction
  std::string url;        // one-time URL when granted
  std::string object_id;  // EHR object the token points at
};

struct ChainStatus {
  bool ok = true;
  std::uint64_t break_seq = 0;  // first bad sequence when !ok
};

// Issues one-time tokens; implemented by the edge store (or a test double).
class TokenIssuer {
 public:
  virtual ~TokenIssuer() = default;
  virtual std::pair<std::string, std::string> issue(
      const std::string& object_id, std::int64_t ttl_seconds) = 0;
};

class Ledger {
 public:
  // Opens or creates the ledger under `dir`. Existing records replay into
  // live state; a broken chain refuses to open.
  Ledger(const std::filesystem::path& dir, Clock& clock, RandomSource& rng,
         const bls::PairingParams& params);

  // Appends a register transaction. Duplicate gids (by commitment) fail.
  std::string register_participant(const Participant& participant);

  // Owner-only profile write; every signature must verify against the
  // on-ledger registry before anything is appended.
  std::string write_profile(const std::string& owner_gid,
                            const std::vector<abms::AttributeSignature>& sigs);

  // Owner-only: links an uploaded EHR object to the profile.
  std::string attach_ehr(const std::string& owner_gid,
                         const std::string& object_id);

  // Owner-only ACL replacement. Default is deny-everything; patient
  // grantees are rejected outright.
  std::string set_acl(const std::string& owner_gid,
                      const std::vector<AclRule>& rules);

  // Owner or ACL-granted provider. Non-owner views have the gid redacted.
  // Denials and grants both append an access_activity transaction.
  ProfileView read_profile(const std::string& caller_gid,
                           const std::string& owner_gid);

  // Provider asks for the owner's EHR. ACL gate first, then threshold
  // verification of the stored profile signatures under the caller's own
  // (t, n) policy; either verdict appends exactly one auth_event carrying
  // the valid count and no holder identity.
  AccessOutcome request_access(const std::string& caller_gid,
                               const std::string& owner_gid,
                               TokenIssuer& issuer, std::int64_t ttl_seconds);

  // Recomputes every hash and link; reports the first break.
  ChainStatus verify_chain() const;
  static ChainStatus verify_transactions(
      const std::vector<LedgerTransaction>& txs);

  const std::vector<LedgerTransaction>& transactions() const { return txs_; }
  const abms::VkRegistry& registry() const { return registry_; }

  // Canonical JSON snapshot of live state (participants, profiles, ACLs,
  // registry). Replaying the record file must reproduce it byte for byte.
  std::string state_snapshot() const;
  static std::string replay_snapshot(const std::filesystem::path& dir);

  bool has_profile(const std::string& owner_gid) const;
  std::filesystem::path record_path() const { return record_path_; }

  // Test hook: flips one byte of a stored profile signature in live state
  // only, simulating off-chain state corruption. The chain is untouched, so
  // verify_chain stays green while threshold verification sees a bad row.
  void debug_corrupt_profile_signature(const std::string& owner_gid,
                                       std::size_t index);

 private:
  struct StoredParticipant {
    std::string display_name;
    Role role = Role::kPatient;
    std::string provider_kind;
    abms::ThresholdSpec threshold;
  };
  struct StoredProfile {
    std::string display_name;
    std::vector<abms::AttributeSignature> signatures;
    std::vector<std::string> ehr_refs;
  };

  const StoredParticipant& require_participant(const std::string& commitment,
                                               const char* who) const;
  std::string append(TxKind kind, const std::string& payload_json);
  void apply(const LedgerTransaction& tx);  // state transition on replay
  void persist_state() const;
  bool acl_allows(const std::string& owner_commitment,
                  const std::string& caller_commitment,
                  const StoredParticipant& caller,
                  const std::string& permission) const;

  std::filesystem::path dir_;
  std::filesystem::path record_path_;
  std::filesystem::path state_path_;
  Clock& clock_;
  RandomSource& rng_;
  bls::PairingParams params_;

  std::vector<LedgerTransaction> txs_;
  std::map<std::string, StoredParticipant> participants_;
  std::map<std::string, StoredProfile> profiles_;
  std::map<std::string, std::vector<AclRule>> acls_;
  abms::VkRegistry registry_;
};

}  // namespace ehr::ledger
