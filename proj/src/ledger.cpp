#include "ehr/ledger.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ehr/errors.hpp"
#include "ehr/hex.hpp"

namespace ehr::ledger {
namespace {

using Json = nlohmann::json;

constexpr std::string_view kGidCommitTag = "ehr-gid-commitment-v1";
constexpr char kRecordFile[] = "ledger.log";
constexpr char kStateFile[] = "state.json";

constexpr char kPermRead[] = "read_profile";
constexpr char kPermRequest[] = "request_access";

Sha256Digest digest_of(std::string_view text) {
  return sha256(BytesView(reinterpret_cast<const std::uint8_t*>(text.data()),
                          text.size()));
}

std::string digest_hex(const Sha256Digest& d) { return to_hex(d); }

Sha256Digest digest_from_hex(const std::string& hex, const char* what) {
  auto bytes = from_hex(hex);
  if (!bytes || bytes->size() != 32) {
    throw StateError(std::string("ledger: bad digest in ") + what);
  }
  Sha256Digest out;
  std::copy(bytes->begin(), bytes->end(), out.begin());
  return out;
}

TxKind kind_from_name(const std::string& name) {
  if (name == "register") return TxKind::kRegister;
  if (name == "profile_write") return TxKind::kProfileWrite;
  if (name == "auth_event") return TxKind::kAuthEvent;
  if (name == "access_activity") return TxKind::kAccessActivity;
  throw StateError("ledger: unknown transaction kind: " + name);
}

Role role_from_name(const std::string& name) {
  if (name == "patient") return Role::kPatient;
  if (name == "provider") return Role::kProvider;
  if (name == "authority") return Role::kAuthority;
  throw StateError("ledger: unknown role: " + name);
}

Json signature_row(const abms::AttributeSignature& sig) {
  return Json{{"authority_id", sig.authority_id},
              {"name", sig.attribute_name},
              {"digest", to_hex(sig.hashed_value_digest)},
              {"signature", to_hex(bls::encode_signature(sig.signature))}};
}

abms::AttributeSignature signature_from_row(const Json& row) {
  abms::AttributeSignature sig;
  sig.authority_id = row.at("authority_id").get<std::string>();
  sig.attribute_name = row.at("name").get<std::string>();
  sig.hashed_value_digest =
      digest_from_hex(row.at("digest").get<std::string>(), "signature row");
  auto encoded = from_hex(row.at("signature").get<std::string>());
  if (!encoded) throw StateError("ledger: bad signature hex");
  sig.signature = bls::decode_signature(*encoded);
  return sig;
}

}  // namespace

std::string role_name(Role role) {
  switch (role) {
    case Role::kPatient: return "patient";
    case Role::kProvider: return "provider";
    case Role::kAuthority: return "authority";
  }
  return "unknown";
}

std::string kind_name(TxKind kind) {
  switch (kind) {
    case TxKind::kRegister: return "register";
    case TxKind::kProfileWrite: return "profile_write";
    case TxKind::kAuthEvent: return "auth_event";
    case TxKind::kAccessActivity: return "access_activity";
  }
  return "unknown";
}

std::string gid_commitment(std::string_view gid) {
  Sha256 h;
  h.update(kGidCommitTag);
  h.update(gid);
  return to_hex(h.finish());
}

Sha256Digest LedgerTransaction::compute_hash() const {
  Bytes header;
  append_u64_be(header, seq);
  append_u64_be(header, static_cast<std::uint64_t>(timestamp));
  append_u8(header, static_cast<std::uint8_t>(kind));
  append(header, event_id);
  append(header, payload_digest);
  append(header, prev_hash);
  return sha256(header);
}

Ledger::Ledger(const std::filesystem::path& dir, Clock& clock,
               RandomSource& rng, const bls::PairingParams& params)
    : dir_(dir),
      record_path_(dir / kRecordFile),
      state_path_(dir / kStateFile),
      clock_(clock),
      rng_(rng),
      params_(params) {
  std::filesystem::create_directories(dir_);
  if (std::filesystem::exists(record_path_)) {
    std::ifstream in(record_path_, std::ios::binary);
    if (!in) throw StateError("ledger: cannot read record file");
    while (true) {
      std::uint8_t len_be[4];
      in.read(reinterpret_cast<char*>(len_be), 4);
      if (in.gcount() == 0) break;
      if (in.gcount() != 4) throw StateError("ledger: truncated record");
      const std::uint32_t len = (std::uint32_t(len_be[0]) << 24) |
                                (std::uint32_t(len_be[1]) << 16) |
                                (std::uint32_t(len_be[2]) << 8) |
                                std::uint32_t(len_be[3]);
      std::string text(len, '\0');
      in.read(text.data(), len);
      if (static_cast<std::uint32_t>(in.gcount()) != len) {
        throw StateError("ledger: truncated record");
      }
      Json j = Json::parse(text, nullptr, false);
      if (j.is_discarded()) throw StateError("ledger: unparseable record");
      LedgerTransaction tx;
      try {
        tx.seq = j.at("seq").get<std::uint64_t>();
        tx.timestamp = j.at("timestamp").get<std::int64_t>();
        tx.kind = kind_from_name(j.at("kind").get<std::string>());
        tx.event_id = j.at("event_id").get<std::string>();
        tx.payload_digest =
            digest_from_hex(j.at("payload_digest").get<std::string>(), "tx");
        tx.prev_hash = digest_from_hex(j.at("prev_hash").get<std::string>(),
                                       "tx");
        tx.this_hash = digest_from_hex(j.at("this_hash").get<std::string>(),
                                       "tx");
        tx.payload_json = j.at("payload").get<std::string>();
      } catch (const Json::exception& e) {
        throw StateError(std::string("ledger: bad record field: ") + e.what());
      }
      txs_.push_back(std::move(tx));
    }
    ChainStatus status = verify_transactions(txs_);
    if (!status.ok) {
      throw StateError("ledger: hash chain broken at seq " +
                       std::to_string(status.break_seq));
    }
    for (const auto& tx : txs_) apply(tx);
  } else {
    // Genesis anchors the chain with an all-zero previous hash.
    append(TxKind::kRegister, Json{{"genesis", true}}.dump());
  }
}

std::string Ledger::append(TxKind kind, const std::string& payload_json) {
  LedgerTransaction tx;
  tx.seq = txs_.size();
  tx.timestamp = clock_.now_unix();
  tx.kind = kind;
  tx.event_id = txs_.empty() ? std::string("genesis") : rng_.uuid_like();
  tx.payload_digest = digest_of(payload_json);
  if (!txs_.empty()) tx.prev_hash = txs_.back().this_hash;
  tx.payload_json = payload_json;
  tx.this_hash = tx.compute_hash();

  Json j{{"seq", tx.seq},
         {"timestamp", tx.timestamp},
         {"kind", kind_name(tx.kind)},
         {"event_id", tx.event_id},
         {"payload_digest", digest_hex(tx.payload_digest)},
         {"prev_hash", digest_hex(tx.prev_hash)},
         {"this_hash", digest_hex(tx.this_hash)},
         {"payload", tx.payload_json}};
  const std::string line = j.dump();

  std::ofstream out(record_path_, std::ios::binary | std::ios::app);
  if (!out) throw StateError("ledger: cannot append to record file");
  std::uint8_t len_be[4] = {std::uint8_t(line.size() >> 24),
                            std::uint8_t(line.size() >> 16),
                            std::uint8_t(line.size() >> 8),
                            std::uint8_t(line.size())};
  out.write(reinterpret_cast<const char*>(len_be), 4);
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.flush();
  if (!out) throw StateError("ledger: short write to record file");

  txs_.push_back(tx);
  apply(txs_.back());
  persist_state();
  return txs_.back().event_id;
}

void Ledger::apply(const LedgerTransaction& tx) {
  Json payload = Json::parse(tx.payload_json, nullptr, false);
  if (payload.is_discarded()) {
    throw StateError("ledger: unparseable payload at seq " +
                     std::to_string(tx.seq));
  }
  switch (tx.kind) {
    case TxKind::kRegister: {
      if (payload.value("genesis", false)) return;
      StoredParticipant p;
      const std::string commitment =
          payload.at("commitment").get<std::string>();
      p.display_name = payload.at("display_name").get<std::string>();
      p.role = role_from_name(payload.at("role").get<std::string>());
      p.provider_kind = payload.value("provider_kind", "");
      p.threshold.t = payload.value("t", 0);
      p.threshold.n = payload.value("n", 0);
      participants_.emplace(commitment, std::move(p));
      for (const Json& row : payload.value("registry_rows", Json::array())) {
        auto encoded = from_hex(row.at("vk").get<std::string>());
        if (!encoded) throw StateError("ledger: bad registry row");
        registry_.publish(row.at("authority_id").get<std::string>(),
                          row.at("name").get<std::string>(),
                          bls::decode_verification_key(*encoded));
      }
      return;
    }
    case TxKind::kProfileWrite: {
      const std::string commitment =
          payload.at("commitment").get<std::string>();
      const std::string op = payload.at("op").get<std::string>();
      if (op == "write") {
        StoredProfile profile;
        profile.display_name =
            participants_.at(commitment).display_name;
        for (const Json& row : payload.at("signatures")) {
          profile.signatures.push_back(signature_from_row(row));
        }
        profiles_[commitment] = std::move(profile);
      } else if (op == "attach") {
        profiles_.at(commitment)
            .ehr_refs.push_back(payload.at("ehr_ref").get<std::string>());
      } else if (op == "acl") {
        std::vector<AclRule>& dst = acls_[commitment];  // rules accumulate
        for (const Json& row : payload.at("rules")) {
          AclRule rule;
          rule.kind = row.at("kind").get<std::string>() == "gid"
                          ? AclRule::Kind::kGid
                          : AclRule::Kind::kRole;
          rule.subject = row.at("subject").get<std::string>();
          rule.permission = row.at("permission").get<std::string>();
          dst.push_back(std::move(rule));
        }
      } else {
        throw StateError("ledger: unknown profile op: " + op);
      }
      return;
    }
    case TxKind::kAuthEvent:
    case TxKind::kAccessActivity:
      return;  // audit records carry no state transition
  }
}

const Ledger::StoredParticipant& Ledger::require_participant(
    const std::string& commitment, const char* who) const {
  auto it = participants_.find(commitment);
  if (it == participants_.end()) {
    throw StateError(std::string("ledger: unknown participant (") + who + ")");
  }
  return it->second;
}

std::string Ledger::register_participant(const Participant& participant) {
  if (participant.gid.empty()) {
    throw std::invalid_argument("ledger: gid must not be empty");
  }
  const std::string commitment = gid_commitment(participant.gid);
  if (participants_.count(commitment)) {
    throw StateError("ledger: participant already registered");
  }
  if (participant.role == Role::kProvider) {
    if (participant.threshold.t < 1 ||
        participant.threshold.t > participant.threshold.n) {
      throw std::invalid_argument(
          "ledger: provider threshold must satisfy 1 <= t <= n");
    }
  }
  Json payload{{"commitment", commitment},
               {"display_name", participant.display_name},
               {"role", role_name(participant.role)}};
  if (participant.role == Role::kProvider) {
    payload["provider_kind"] = participant.provider_kind;
    payload["t"] = participant.threshold.t;
    payload["n"] = participant.threshold.n;
  }
  if (participant.role == Role::kAuthority) {
    Json rows = Json::array();
    for (const RegistryRow& row : participant.registry_rows) {
      if (row.authority_id != participant.display_name) {
        throw std::invalid_argument(
            "ledger: registry rows must match the authority's own id");
      }
      auto encoded = from_hex(row.vk_hex);
      if (!encoded) {
        throw std::invalid_argument("ledger: registry row vk is not hex");
      }
      bls::decode_verification_key(*encoded);  // malformed keys stop here
      rows.push_back(Json{{"authority_id", row.authority_id},
                          {"name", row.attribute_name},
                          {"vk", row.vk_hex}});
    }
    payload["registry_rows"] = std::move(rows);
  }
  return append(TxKind::kRegister, payload.dump());
}

std::string Ledger::write_profile(
    const std::string& owner_gid,
    const std::vector<abms::AttributeSignature>& sigs) {
  const std::string commitment = gid_commitment(owner_gid);
  const StoredParticipant& owner = require_participant(commitment, "owner");
  if (owner.role != Role::kPatient) {
    throw DeniedError("ledger: only patients own profiles");
  }
  if (sigs.empty()) {
    throw std::invalid_argument("ledger: profile needs at least one signature");
  }
  for (const abms::AttributeSignature& sig : sigs) {
    auto vk = registry_.lookup(sig.authority_id, sig.attribute_name);
    if (!vk ||
        abms::verify_attribute(params_, sig, *vk) != bls::VerifyResult::kAccept) {
      throw DeniedError("ledger: profile signature failed verification: " +
                        sig.authority_id + "/" + sig.attribute_name);
    }
  }
  Json rows = Json::array();
  for (const abms::AttributeSignature& sig : sigs) {
    rows.push_back(signature_row(sig));
  }
  Json payload{{"commitment", commitment},
               {"op", "write"},
               {"signatures", std::move(rows)}};
  return append(TxKind::kProfileWrite, payload.dump());
}

std::string Ledger::attach_ehr(const std::string& owner_gid,
                               const std::string& object_id) {
  const std::string commitment = gid_commitment(owner_gid);
  require_participant(commitment, "owner");
  if (!profiles_.count(commitment)) {
    throw StateError("ledger: no profile to attach to");
  }
  Json payload{{"commitment", commitment},
               {"op", "attach"},
               {"ehr_ref", object_id}};
  return append(TxKind::kProfileWrite, payload.dump());
}

std::string Ledger::set_acl(const std::string& owner_gid,
                            const std::vector<AclRule>& rules) {
  const std::string commitment = gid_commitment(owner_gid);
  const StoredParticipant& owner = require_participant(commitment, "owner");
  if (owner.role != Role::kPatient) {
    throw DeniedError("ledger: only patients own ACLs");
  }
  Json rows = Json::array();
  for (const AclRule& rule : rules) {
    if (rule.permission != kPermRead && rule.permission != kPermRequest) {
      throw std::invalid_argument("ledger: unknown permission: " +
                                  rule.permission);
    }
    std::string subject = rule.subject;
    if (rule.kind == AclRule::Kind::kGid) {
      // The caller names a grantee by gid; only registered providers
      // qualify. Patients can never be grantees of other patients.
      subject = gid_commitment(rule.subject);
      const StoredParticipant& grantee =
          require_participant(subject, "grantee");
      if (grantee.role != Role::kProvider) {
        throw DeniedError("ledger: only providers can be ACL grantees");
      }
    } else {
      if (rule.subject != "provider" &&
          rule.subject.rfind("provider:", 0) != 0) {
        throw std::invalid_argument(
            "ledger: role patterns must name providers");
      }
    }
    rows.push_back(Json{
        {"kind", rule.kind == AclRule::Kind::kGid ? "gid" : "role"},
        {"subject", subject},
        {"permission", rule.permission}});
  }
  Json payload{{"commitment", commitment},
               {"op", "acl"},
               {"rules", std::move(rows)}};
  return append(TxKind::kProfileWrite, payload.dump());
}

bool Ledger::acl_allows(const std::string& owner_commitment,
                        const std::string& caller_commitment,
                        const StoredParticipant& caller,
                        const std::string& permission) const {
  if (caller.role != Role::kProvider) return false;  // default deny
  auto it = acls_.find(owner_commitment);
  if (it == acls_.end()) return false;
  for (const AclRule& rule : it->second) {
    if (rule.permission != permission) continue;
    if (rule.kind == AclRule::Kind::kGid) {
      if (rule.subject == caller_commitment) return true;
    } else if (rule.subject == "provider" ||
               rule.subject == "provider:" + caller.provider_kind) {
      return true;
    }
  }
  return false;
}

ProfileView Ledger::read_profile(const std::string& caller_gid,
                                 const std::string& owner_gid) {
  const std::string caller_commitment = gid_commitment(caller_gid);
  const std::string owner_commitment = gid_commitment(owner_gid);
  const StoredParticipant& caller =
      require_participant(caller_commitment, "caller");
  require_participant(owner_commitment, "owner");
  auto profile_it = profiles_.find(owner_commitment);
  if (profile_it == profiles_.end()) {
    throw StateError("ledger: owner has no profile");
  }

  const bool is_owner = caller_commitment == owner_commitment;
  const bool granted =
      is_owner ||
      acl_allows(owner_commitment, caller_commitment, caller, kPermRead);

  Json payload{{"action", "read_profile"},
               {"caller", caller_commitment},
               {"owner", owner_commitment},
               {"outcome", granted ? "granted" : "denied"}};
  append(TxKind::kAccessActivity, payload.dump());

  if (!granted) {
    throw DeniedError("ledger: profile read denied");
  }
  ProfileView view;
  view.gid = is_owner ? owner_gid : std::string();  // redacted for others
  view.display_name = profile_it->second.display_name;
  view.signatures = profile_it->second.signatures;
  view.ehr_refs = profile_it->second.ehr_refs;
  return view;
}

AccessOutcome Ledger::request_access(const std::string& caller_gid,
                                     const std::string& owner_gid,
                                     TokenIssuer& issuer,
                                     std::int64_t ttl_seconds) {
  const std::string caller_commitment = gid_commitment(caller_gid);
  const std::string owner_commitment = gid_commitment(owner_gid);
  const StoredParticipant& caller =
      require_participant(caller_commitment, "caller");
  require_participant(owner_commitment, "owner");
  if (caller.role != Role::kProvider) {
    throw DeniedError("ledger: only providers may request access");
  }

  // The ACL gate comes before any profile-state checks so an unauthorized
  // caller learns nothing about what the owner has stored.
  if (!acl_allows(owner_commitment, caller_commitment, caller,
                  kPermRequest)) {
    Json denial{{"action", "request_access"},
                {"caller", caller_commitment},
                {"owner", owner_commitment},
                {"outcome", "denied"}};
    append(TxKind::kAccessActivity, denial.dump());
    throw DeniedError("ledger: access request denied by ACL");
  }

  auto profile_it = profiles_.find(owner_commitment);
  if (profile_it == profiles_.end()) {
    throw StateError("ledger: owner has no profile");
  }
  if (profile_it->second.ehr_refs.empty()) {
    throw StateError("ledger: profile has no EHR object");
  }

  // The caller's own (t, n) policy drives verification; all stored
  // signatures are evaluated regardless of outcome.
  abms::ThresholdOutcome outcome = abms::verify_threshold(
      params_, profile_it->second.signatures, registry_, caller.threshold);

  AccessOutcome result;
  result.valid_count = outcome.valid_count;
  result.object_id = profile_it->second.ehr_refs.back();

  Json payload{{"action", "request_access"},
               {"caller", caller_commitment},
               {"caller_role", role_name(caller.role)},
               {"caller_kind", caller.provider_kind},
               {"outcome", outcome.authenticated ? "authenticated" : "rejected"},
               {"valid_count", outcome.valid_count},
               {"t", caller.threshold.t},
               {"n", caller.threshold.n},
               {"ehr_ref", result.object_id}};
  if (outcome.authenticated) {
    auto [token, url] = issuer.issue(result.object_id, ttl_seconds);
    result.granted = true;
    result.url = url;
    payload["token_digest"] = to_hex(digest_of(token));
  }
  result.event_id = append(TxKind::kAuthEvent, payload.dump());
  return result;
}

ChainStatus Ledger::verify_transactions(
    const std::vector<LedgerTransaction>& txs) {
  Sha256Digest prev{};
  for (std::size_t i = 0; i < txs.size(); ++i) {
    const LedgerTransaction& tx = txs[i];
    const bool ok = tx.seq == i && tx.prev_hash == prev &&
                    tx.payload_digest == digest_of(tx.payload_json) &&
                    tx.this_hash == tx.compute_hash();
    // Report the position, not the stored seq: the seq itself may be the
    // mutated field.
    if (!ok) return {false, static_cast<std::uint64_t>(i)};
    prev = tx.this_hash;
  }
  return {true, 0};
}

ChainStatus Ledger::verify_chain() const { return verify_transactions(txs_); }

std::string Ledger::state_snapshot() const {
  Json participants = Json::object();
  for (const auto& [commitment, p] : participants_) {
    Json row{{"display_name", p.display_name}, {"role", role_name(p.role)}};
    if (p.role == Role::kProvider) {
      row["provider_kind"] = p.provider_kind;
      row["t"] = p.threshold.t;
      row["n"] = p.threshold.n;
    }
    participants[commitment] = std::move(row);
  }
  Json profiles = Json::object();
  for (const auto& [commitment, profile] : profiles_) {
    Json rows = Json::array();
    for (const auto& sig : profile.signatures) rows.push_back(signature_row(sig));
    profiles[commitment] = Json{{"display_name", profile.display_name},
                                {"signatures", std::move(rows)},
                                {"ehr_refs", profile.ehr_refs}};
  }
  Json acls = Json::object();
  for (const auto& [commitment, rules] : acls_) {
    Json rows = Json::array();
    for (const AclRule& rule : rules) {
      rows.push_back(Json{
          {"kind", rule.kind == AclRule::Kind::kGid ? "gid" : "role"},
          {"subject", rule.subject},
          {"permission", rule.permission}});
    }
    acls[commitment] = std::move(rows);
  }
  Json registry = Json::array();
  for (const auto& [authority_id, name, vk] : registry_.rows()) {
    registry.push_back(
        Json{{"authority_id", authority_id},
             {"name", name},
             {"vk", to_hex(bls::encode_verification_key(vk))}});
  }
  Json snapshot{{"participants", std::move(participants)},
                {"profiles", std::move(profiles)},
                {"acls", std::move(acls)},
                {"registry", std::move(registry)}};
  return snapshot.dump(2);
}

void Ledger::persist_state() const {
  std::ofstream out(state_path_, std::ios::binary | std::ios::trunc);
  if (!out) throw StateError("ledger: cannot write state file");
  const std::string text = state_snapshot();
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string Ledger::replay_snapshot(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / kRecordFile)) {
    throw StateError("ledger: nothing to replay");
  }
  FixedClock clock(0);
  OsRandom rng;
  Ledger replayed(dir, clock, rng, bls::setup(128));
  return replayed.state_snapshot();
}

bool Ledger::has_profile(const std::string& owner_gid) const {
  return profiles_.count(gid_commitment(owner_gid)) > 0;
}

void Ledger::debug_corrupt_profile_signature(const std::string& owner_gid,
                                             std::size_t index) {
  auto& profile = profiles_.at(gid_commitment(owner_gid));
  profile.signatures.at(index).hashed_value_digest[0] ^= 0x01;
}

}  // namespace ehr::ledger
