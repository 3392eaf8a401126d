#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ehr/bls.hpp"
#include "ehr/lsss.hpp"
#include "ehr/policy.hpp"
#include "ehr/rng.hpp"

// Multi-authority attribute-based encryption of payloads, built as a hybrid:
// a fresh scalar secret is split by the policy's LSSS matrix, each share is
// encapsulated to the owning authority's attribute public key (ECIES over
// the first pairing group), and the payload itself is AES-256-GCM encrypted
// in chunks under a key derived from the secret.
//
// Collusion limits: decryption keys are bound to a holder gid and the
// decrypt entry point refuses mixed-gid key sets, but that check is the only
// cross-user barrier. Two holders pooling raw key material outside this API
// are not stopped; deployments needing cryptographic collusion resistance
// must layer a scheme that randomizes keys per holder.

namespace ehr::maabe {

struct AbeAttributeKeys {
  std::string authority_id;
  std::string name;
  bls381::Fr master_secret;
  bls381::G1Affine public_key;  // g1 ^ master_secret
};

struct AbeUserKey {
  std::string authority_id;
  std::string name;
  std::string gid;
  bls381::Fr key_material;
};

// Published encryption keys, one row per (authority, attribute name).
class PkDirectory {
 public:
  void publish(const std::string& authority_id, const std::string& name,
               const bls381::G1Affine& pk);
  std::optional<bls381::G1Affine> lookup(const std::string& authority_id,
                                         const std::string& name) const;
  std::size_t size() const { return keys_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, bls381::G1Affine> keys_;
};

class AbeAuthority {
 public:
  AbeAuthority(std::string authority_id, const bls::PairingParams& params)
      : authority_id_(std::move(authority_id)), params_(params) {}

  const std::string& id() const { return authority_id_; }

  // Fresh key pair per attribute name; duplicates are an error.
  const AbeAttributeKeys& register_attribute(const std::string& name,
                                             RandomSource& entropy);

  // Reinstalls persisted key material when a workspace reopens; the
  // duplicate and ownership rules of register_attribute apply.
  void restore_attribute(const AbeAttributeKeys& keys);

  void admit_holder(const std::string& gid);

  // Issues the decryption key for one attribute to an admitted holder.
  AbeUserKey issue_key(const std::string& gid, const std::string& name) const;

  const AbeAttributeKeys& keys_for(const std::string& name) const;
  std::vector<std::string> attribute_names() const;

 private:
  std::string authority_id_;
  bls::PairingParams params_;
  std::map<std::string, AbeAttributeKeys> keys_;
  std::set<std::string> admitted_;
};

// Parsed view of the ciphertext container header (no secrets).
struct CiphertextInfo {
  int version = 0;
  std::string policy_text;
  std::size_t row_count = 0;
  std::size_t chunk_count = 0;
  std::size_t total_size = 0;
};

// Encrypts under the policy; throws ParseError for bad policy text,
// StateError when a leaf has no published key, std::invalid_argument for an
// empty plaintext. Fresh randomness makes repeated calls differ.
Bytes abe_encrypt(const bls::PairingParams& params, const PkDirectory& pks,
                  std::string_view policy_text, BytesView plaintext,
                  RandomSource& entropy);

// Decrypts with the holder's key set. Outcomes:
//   - plaintext on success;
//   - DeniedError with a fixed message when the keys do not satisfy the
//     policy (wrong keys and missing attributes are indistinguishable);
//   - std::invalid_argument for an empty or mixed-gid key set;
//   - ParseError for a structurally malformed container;
//   - CryptoError when the container fails payload authentication.
Bytes abe_decrypt(const bls::PairingParams& params, BytesView ciphertext,
                  const std::vector<AbeUserKey>& keys);

// Structural parse used by storage layers to vet incoming blobs.
CiphertextInfo inspect_ciphertext(BytesView ciphertext);

}  // namespace ehr::maabe
