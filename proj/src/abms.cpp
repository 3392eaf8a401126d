#include "ehr/abms.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "ehr/errors.hpp"
#include "ehr/hex.hpp"

namespace ehr::abms {
namespace {

constexpr std::string_view kValueTag = "ehr-abms-attribute-value-v1";

}  // namespace

Sha256Digest hash_attribute_value(std::string_view value) {
  Sha256 h;
  h.update(kValueTag);
  h.update(value);
  return h.finish();
}

void VkRegistry::publish(const std::string& authority_id,
                         const std::string& name,
                         const bls::VerificationKey& vk) {
  auto key = std::make_pair(authority_id, name);
  auto [it, inserted] = keys_.emplace(key, vk);
  if (!inserted) {
    throw StateError("registry: attribute already published: " + authority_id +
                     "/" + name);
  }
}

std::optional<bls::VerificationKey> VkRegistry::lookup(
    const std::string& authority_id, const std::string& name) const {
  auto it = keys_.find(std::make_pair(authority_id, name));
  if (it == keys_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::tuple<std::string, std::string, bls::VerificationKey>>
VkRegistry::rows() const {
  std::vector<std::tuple<std::string, std::string, bls::VerificationKey>> out;
  out.reserve(keys_.size());
  for (const auto& [key, vk] : keys_) {
    out.emplace_back(key.first, key.second, vk);
  }
  return out;
}

const AuthorityAttributeKeys& AttributeAuthority::register_attribute(
    const AttributeDescriptor& attribute, RandomSource& entropy) {
  if (attribute.authority_id != authority_id_) {
    throw std::invalid_argument("authority " + authority_id_ +
                                " cannot attest for " + attribute.authority_id);
  }
  if (keys_.count(attribute)) {
    throw StateError("attribute already registered: " + attribute.name);
  }
  bls::BlsKeyPair pair = bls::keygen(params_, entropy);
  AuthorityAttributeKeys keys{attribute, pair.sk, pair.vk};
  return keys_.emplace(attribute, std::move(keys)).first->second;
}

void AttributeAuthority::restore_attribute(const AuthorityAttributeKeys& keys) {
  if (keys.attribute.authority_id != authority_id_) {
    throw std::invalid_argument("authority " + authority_id_ +
                                " cannot attest for " +
                                keys.attribute.authority_id);
  }
  if (keys_.count(keys.attribute)) {
    throw StateError("attribute already registered: " + keys.attribute.name);
  }
  keys_.emplace(keys.attribute, keys);
}

void AttributeAuthority::admit_holder(const std::string& gid) {
  admitted_.insert(gid);
}

bool AttributeAuthority::holder_admitted(const std::string& gid) const {
  return admitted_.count(gid) > 0;
}

ExtractedSigningKey AttributeAuthority::extract(
    const std::string& gid, const AttributeDescriptor& attribute,
    Clock& clock) {
  if (!holder_admitted(gid)) {
    throw DeniedError("extract: holder not admitted by " + authority_id_);
  }
  auto it = keys_.find(attribute);
  if (it == keys_.end()) {
    throw StateError("extract: attribute not attested by " + authority_id_ +
                     ": " + attribute.name);
  }
  IssuanceRecord record{authority_id_, gid, attribute, clock.now_unix()};
  log_.push_back(record);
  return ExtractedSigningKey{attribute, gid, it->second.signature_key, record};
}

const AuthorityAttributeKeys& AttributeAuthority::keys_for(
    const AttributeDescriptor& attribute) const {
  auto it = keys_.find(attribute);
  if (it == keys_.end()) {
    throw StateError("unknown attribute: " + attribute.name);
  }
  return it->second;
}

std::vector<AttributeDescriptor> AttributeAuthority::attributes() const {
  std::vector<AttributeDescriptor> out;
  out.reserve(keys_.size());
  for (const auto& [attr, keys] : keys_) out.push_back(attr);
  return out;
}

AttributeSignature sign_attribute(const bls::PairingParams& params,
                                  const ExtractedSigningKey& key,
                                  std::string_view attribute_value) {
  if (attribute_value != key.attribute.value) {
    throw std::invalid_argument(
        "sign_attribute: value does not match the attested attribute");
  }
  Sha256Digest digest = hash_attribute_value(attribute_value);
  AttributeSignature sig;
  sig.authority_id = key.attribute.authority_id;
  sig.attribute_name = key.attribute.name;
  sig.hashed_value_digest = digest;
  sig.signature = bls::bls_sign(params, key.signing_key, digest);
  return sig;
}

bls::VerifyResult verify_attribute(const bls::PairingParams& params,
                                   const AttributeSignature& sig,
                                   const bls::VerificationKey& vk) {
  return bls::bls_verify(params, vk, sig.hashed_value_digest, sig.signature);
}

ThresholdOutcome verify_threshold(const bls::PairingParams& params,
                                  const std::vector<AttributeSignature>& sigs,
                                  const VkRegistry& registry,
                                  const ThresholdSpec& spec) {
  if (spec.t < 1 || spec.t > spec.n) {
    throw std::invalid_argument("verify_threshold: need 1 <= t <= n");
  }
  if (static_cast<std::size_t>(spec.n) != sigs.size()) {
    throw std::invalid_argument(
        "verify_threshold: n must equal the number of signatures");
  }
  ThresholdOutcome outcome;
  // Every signature is checked regardless of how early the threshold is
  // reached, so work does not depend on which entries are valid.
  for (const AttributeSignature& sig : sigs) {
    auto vk = registry.lookup(sig.authority_id, sig.attribute_name);
    if (!vk) continue;
    if (verify_attribute(params, sig, *vk) == bls::VerifyResult::kAccept) {
      ++outcome.valid_count;
    }
  }
  outcome.authenticated = outcome.valid_count >= spec.t;
  return outcome;
}

ProfileBundle ProfileBundle::shareable() const {
  ProfileBundle out;
  out.version = version;
  out.signatures = signatures;
  return out;
}

namespace {

using Json = nlohmann::json;

Json signature_to_json(const AttributeSignature& sig) {
  return Json{{"authority_id", sig.authority_id},
              {"name", sig.attribute_name},
              {"digest", to_hex(sig.hashed_value_digest)},
              {"signature", to_hex(bls::encode_signature(sig.signature))}};
}

AttributeSignature signature_from_json(const Json& j) {
  AttributeSignature sig;
  sig.authority_id = j.at("authority_id").get<std::string>();
  sig.attribute_name = j.at("name").get<std::string>();
  auto digest = from_hex(j.at("digest").get<std::string>());
  if (!digest || digest->size() != sig.hashed_value_digest.size()) {
    throw ParseError("profile bundle: bad digest field");
  }
  std::copy(digest->begin(), digest->end(), sig.hashed_value_digest.begin());
  auto encoded = from_hex(j.at("signature").get<std::string>());
  if (!encoded) throw ParseError("profile bundle: bad signature hex");
  sig.signature = bls::decode_signature(*encoded);
  return sig;
}

}  // namespace

std::string encode_profile_bundle(const ProfileBundle& bundle) {
  Json j;
  j["version"] = bundle.version;
  if (bundle.gid) j["gid"] = *bundle.gid;
  j["signatures"] = Json::array();
  for (const auto& sig : bundle.signatures) {
    j["signatures"].push_back(signature_to_json(sig));
  }
  j["issuances"] = Json::array();
  for (const auto& rec : bundle.issuances) {
    j["issuances"].push_back(Json{{"authority_id", rec.authority_id},
                                  {"gid", rec.gid},
                                  {"name", rec.attribute.name},
                                  {"value", rec.attribute.value},
                                  {"timestamp", rec.timestamp}});
  }
  return j.dump(2);
}

ProfileBundle decode_profile_bundle(std::string_view text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ParseError("profile bundle: not a JSON object");
  }
  ProfileBundle bundle;
  try {
    bundle.version = j.at("version").get<int>();
    if (bundle.version != 1) {
      throw ParseError("profile bundle: unsupported version");
    }
    if (j.contains("gid")) bundle.gid = j.at("gid").get<std::string>();
    for (const auto& s : j.at("signatures")) {
      bundle.signatures.push_back(signature_from_json(s));
    }
    for (const auto& r : j.value("issuances", Json::array())) {
      IssuanceRecord rec;
      rec.authority_id = r.at("authority_id").get<std::string>();
      rec.gid = r.at("gid").get<std::string>();
      rec.attribute.authority_id = rec.authority_id;
      rec.attribute.name = r.at("name").get<std::string>();
      rec.attribute.value = r.at("value").get<std::string>();
      rec.timestamp = r.at("timestamp").get<std::int64_t>();
      bundle.issuances.push_back(std::move(rec));
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("profile bundle: ") + e.what());
  }
  return bundle;
}

}  // namespace ehr::abms
