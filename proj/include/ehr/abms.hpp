#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ehr/bls.hpp"
#include "ehr/clock.hpp"
#include "ehr/digest.hpp"

// Attribute-based multi-signature layer. Authorities attest attributes with
// one BLS key pair per attribute; holders sign the hashed attribute value;
// verifiers check signature sets against a public key registry and a
// threshold, never learning who signed.

namespace ehr::abms {

struct AttributeDescriptor {
  std::string authority_id;
  std::string name;
  std::string value;

  friend bool operator==(const AttributeDescriptor& a,
                         const AttributeDescriptor& b) {
    return a.authority_id == b.authority_id && a.name == b.name &&
           a.value == b.value;
  }
  friend auto operator<=>(const AttributeDescriptor& a,
                          const AttributeDescriptor& b) {
    return std::tie(a.authority_id, a.name, a.value) <=>
           std::tie(b.authority_id, b.name, b.value);
  }
};

struct AuthorityAttributeKeys {
  AttributeDescriptor attribute;
  bls::SecretKey signature_key;
  bls::VerificationKey verification_key;
};

struct IssuanceRecord {
  std::string authority_id;
  std::string gid;
  AttributeDescriptor attribute;
  std::int64_t timestamp;
};

struct ExtractedSigningKey {
  AttributeDescriptor attribute;
  std::string gid;
  bls::SecretKey signing_key;
  IssuanceRecord issuance;
};

// What a verifier sees. Deliberately carries no holder identity: only the
// attribute label, the digest that was signed, and the group signature.
struct AttributeSignature {
  std::string authority_id;
  std::string attribute_name;
  Sha256Digest hashed_value_digest;
  bls::GroupSignature signature;
};

struct ThresholdSpec {
  int t = 0;
  int n = 0;
};

struct ThresholdOutcome {
  bool authenticated = false;
  int valid_count = 0;
};

// Digest actually signed: domain tag followed by the attribute value.
Sha256Digest hash_attribute_value(std::string_view value);

// Public lookup table mapping (authority, attribute name) to the attested
// verification key. Attribute values never appear here.
class VkRegistry {
 public:
  void publish(const std::string& authority_id, const std::string& name,
               const bls::VerificationKey& vk);
  std::optional<bls::VerificationKey> lookup(const std::string& authority_id,
                                             const std::string& name) const;
  std::size_t size() const { return keys_.size(); }

  // Sorted (authority_id, name, vk) rows, e.g. for state snapshots.
  std::vector<std::tuple<std::string, std::string, bls::VerificationKey>>
  rows() const;

 private:
  std::map<std::pair<std::string, std::string>, bls::VerificationKey> keys_;
};

class AttributeAuthority {
 public:
  AttributeAuthority(std::string authority_id, const bls::PairingParams& params)
      : authority_id_(std::move(authority_id)), params_(params) {}

  const std::string& id() const { return authority_id_; }

  // One key pair per attested attribute; re-registering the same
  // (name, value) pair is an error.
  const AuthorityAttributeKeys& register_attribute(
      const AttributeDescriptor& attribute, RandomSource& entropy);

  // Reinstalls persisted key material when a workspace reopens; the
  // duplicate and ownership rules of register_attribute apply.
  void restore_attribute(const AuthorityAttributeKeys& keys);

  // Admission gates extraction: only known holders may receive keys.
  void admit_holder(const std::string& gid);
  bool holder_admitted(const std::string& gid) const;

  // Hands the attribute signing key to an admitted holder and logs the
  // issuance. Repeat extraction returns the identical key material.
  ExtractedSigningKey extract(const std::string& gid,
                              const AttributeDescriptor& attribute,
                              Clock& clock);

  const AuthorityAttributeKeys& keys_for(
      const AttributeDescriptor& attribute) const;
  std::vector<AttributeDescriptor> attributes() const;
  const std::vector<IssuanceRecord>& issuance_log() const { return log_; }

 private:
  std::string authority_id_;
  bls::PairingParams params_;
  std::map<AttributeDescriptor, AuthorityAttributeKeys> keys_;
  std::set<std::string> admitted_;
  std::vector<IssuanceRecord> log_;
};

// Holder-side signing. The value presented must equal the attested value
// baked into the key; anything else is refused before any crypto runs.
AttributeSignature sign_attribute(const bls::PairingParams& params,
                                  const ExtractedSigningKey& key,
                                  std::string_view attribute_value);

// Verification never takes a holder identity, only public material.
bls::VerifyResult verify_attribute(const bls::PairingParams& params,
                                   const AttributeSignature& sig,
                                   const bls::VerificationKey& vk);

// Checks every signature in the set against the registry (no short
// circuiting) and authenticates when at least spec.t of spec.n are valid.
ThresholdOutcome verify_threshold(const bls::PairingParams& params,
                                  const std::vector<AttributeSignature>& sigs,
                                  const VkRegistry& registry,
                                  const ThresholdSpec& spec);

// Wallet-side container for a holder's signatures and issuance history.
// Issuance records embed the gid, so `shareable` drops them along with the
// top-level gid before the bundle leaves the wallet.
struct ProfileBundle {
  int version = 1;
  std::optional<std::string> gid;
  std::vector<AttributeSignature> signatures;
  std::vector<IssuanceRecord> issuances;

  ProfileBundle shareable() const;
};

std::string encode_profile_bundle(const ProfileBundle& bundle);
ProfileBundle decode_profile_bundle(std::string_view text);  // ParseError

}  // namespace ehr::abms
