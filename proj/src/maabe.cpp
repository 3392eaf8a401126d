#include "ehr/maabe.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "ehr/aead.hpp"
#include "ehr/digest.hpp"
#include "ehr/errors.hpp"

namespace ehr::maabe {
namespace {

constexpr std::uint8_t kContainerVersion = 1;
constexpr std::size_t kChunkSize = 64 * 1024;
constexpr std::size_t kRowBlobSize = 48 + kAeadNonceSize + 32 + kAeadTagSize;

constexpr std::string_view kDataKeyTag = "ehr-maabe-data-key-v1";
constexpr std::string_view kCommitTag = "ehr-maabe-key-commitment-v1";
constexpr std::string_view kRowKeyTag = "ehr-maabe-row-key-v1";

// Single fixed message for every policy or key failure so callers cannot
// tell which rows decapsulated.
[[noreturn]] void uniform_failure() {
  throw DeniedError("abe: decryption failed");
}

Bytes row_box_key(BytesView ephemeral, BytesView shared,
                  const std::string& authority_id, const std::string& name) {
  Sha256 h;
  h.update(kRowKeyTag);
  h.update(ephemeral);
  h.update(shared);
  h.update(authority_id);
  h.update(std::string_view("\x1f", 1));
  h.update(name);
  auto digest = h.finish();
  return Bytes(digest.begin(), digest.end());
}

Bytes row_aad(const std::string& authority_id, const std::string& name) {
  Bytes aad = to_bytes(authority_id);
  append_u8(aad, 0x1f);
  append(aad, name);
  return aad;
}

bls381::Fr random_nonzero_fr(RandomSource& entropy) {
  bls381::Fr v;
  do {
    Bytes wide = entropy.bytes(64);
    v = bls381::fr_from_wide_bytes(wide);
  } while (v.is_zero());
  return v;
}

Bytes derive_data_key(const bls381::Fr& secret) {
  Sha256 h;
  h.update(kDataKeyTag);
  h.update(secret.to_bytes_be());
  auto digest = h.finish();
  return Bytes(digest.begin(), digest.end());
}

Sha256Digest key_commitment(BytesView data_key) {
  Sha256 h;
  h.update(kCommitTag);
  h.update(data_key);
  return h.finish();
}

struct Cursor {
  BytesView in;
  std::size_t pos = 0;

  [[noreturn]] void fail() const {
    throw ParseError("abe: malformed ciphertext container");
  }

  BytesView take(std::size_t n) {
    if (in.size() - pos < n) fail();
    BytesView out = in.subspan(pos, n);
    pos += n;
    return out;
  }
  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() {
    BytesView b = take(2);
    return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
  }
  std::uint32_t u32() {
    BytesView b = take(4);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
  }
  std::uint64_t u64() {
    std::uint64_t hi = u32();
    return (hi << 32) | u32();
  }
  bool done() const { return pos == in.size(); }
};

struct RowRecord {
  std::string authority_id;
  std::string name;
  Bytes blob;
};

struct Container {
  std::string policy_text;
  std::vector<RowRecord> rows;
  Sha256Digest commitment;
  std::array<std::uint8_t, kAeadNonceSize> nonce_prefix;
  std::uint64_t plaintext_size = 0;
  std::vector<Bytes> chunks;
  std::size_t header_size = 0;  // bytes covered by the header digest
};

Container parse_container(BytesView in) {
  Cursor c{in};
  Container out;
  if (c.u8() != kContainerVersion) c.fail();
  if (c.u8() != bls::kCurveId) c.fail();
  const std::uint32_t policy_len = c.u32();
  if (policy_len == 0 || policy_len > 64 * 1024) c.fail();
  out.policy_text = to_string(c.take(policy_len));
  const std::uint32_t row_count = c.u32();
  if (row_count == 0 || row_count > 4096) c.fail();
  out.rows.reserve(row_count);
  for (std::uint32_t i = 0; i < row_count; ++i) {
    RowRecord row;
    row.authority_id = to_string(c.take(c.u16()));
    row.name = to_string(c.take(c.u16()));
    const std::uint16_t blob_len = c.u16();
    if (blob_len != kRowBlobSize) c.fail();
    BytesView blob = c.take(blob_len);
    row.blob.assign(blob.begin(), blob.end());
    out.rows.push_back(std::move(row));
  }
  BytesView commit = c.take(32);
  std::copy(commit.begin(), commit.end(), out.commitment.begin());
  BytesView prefix = c.take(kAeadNonceSize);
  std::copy(prefix.begin(), prefix.end(), out.nonce_prefix.begin());
  out.plaintext_size = c.u64();
  const std::uint32_t chunk_count = c.u32();
  out.header_size = c.pos;
  if (chunk_count == 0 || chunk_count > (1u << 20)) c.fail();
  const std::uint64_t expect_chunks =
      (out.plaintext_size + kChunkSize - 1) / kChunkSize;
  if (chunk_count != expect_chunks) c.fail();
  out.chunks.reserve(chunk_count);
  for (std::uint32_t i = 0; i < chunk_count; ++i) {
    const std::uint32_t len = c.u32();
    if (len < kAeadTagSize || len > kChunkSize + kAeadTagSize) c.fail();
    BytesView chunk = c.take(len);
    out.chunks.emplace_back(chunk.begin(), chunk.end());
  }
  if (!c.done()) c.fail();
  return out;
}

std::array<std::uint8_t, kAeadNonceSize> chunk_nonce(
    const std::array<std::uint8_t, kAeadNonceSize>& prefix,
    std::uint32_t index) {
  auto nonce = prefix;
  nonce[8] = std::uint8_t(index >> 24);
  nonce[9] = std::uint8_t(index >> 16);
  nonce[10] = std::uint8_t(index >> 8);
  nonce[11] = std::uint8_t(index);
  return nonce;
}

Bytes chunk_aad(const Sha256Digest& header_digest, std::uint32_t index) {
  Bytes aad(header_digest.begin(), header_digest.end());
  append_u32_be(aad, index);
  return aad;
}

}  // namespace

void PkDirectory::publish(const std::string& authority_id,
                          const std::string& name,
                          const bls381::G1Affine& pk) {
  auto key = std::make_pair(authority_id, name);
  if (!keys_.emplace(key, pk).second) {
    throw StateError("abe: public key already published: " + authority_id +
                     "/" + name);
  }
}

std::optional<bls381::G1Affine> PkDirectory::lookup(
    const std::string& authority_id, const std::string& name) const {
  auto it = keys_.find(std::make_pair(authority_id, name));
  if (it == keys_.end()) return std::nullopt;
  return it->second;
}

const AbeAttributeKeys& AbeAuthority::register_attribute(
    const std::string& name, RandomSource& entropy) {
  if (keys_.count(name)) {
    throw StateError("abe: attribute already registered: " + name);
  }
  AbeAttributeKeys keys;
  keys.authority_id = authority_id_;
  keys.name = name;
  keys.master_secret = random_nonzero_fr(entropy);
  keys.public_key = bls381::to_affine(params_.g1_generator.to_jacobian() *
                                      keys.master_secret);
  return keys_.emplace(name, std::move(keys)).first->second;
}

void AbeAuthority::restore_attribute(const AbeAttributeKeys& keys) {
  if (keys.authority_id != authority_id_) {
    throw std::invalid_argument("abe: authority " + authority_id_ +
                                " cannot hold keys for " + keys.authority_id);
  }
  if (keys_.count(keys.name)) {
    throw StateError("abe: attribute already registered: " + keys.name);
  }
  keys_.emplace(keys.name, keys);
}

void AbeAuthority::admit_holder(const std::string& gid) {
  admitted_.insert(gid);
}

AbeUserKey AbeAuthority::issue_key(const std::string& gid,
                                   const std::string& name) const {
  if (!admitted_.count(gid)) {
    throw DeniedError("abe: holder not admitted by " + authority_id_);
  }
  auto it = keys_.find(name);
  if (it == keys_.end()) {
    throw StateError("abe: attribute not managed by " + authority_id_ + ": " +
                     name);
  }
  return AbeUserKey{authority_id_, name, gid, it->second.master_secret};
}

const AbeAttributeKeys& AbeAuthority::keys_for(const std::string& name) const {
  auto it = keys_.find(name);
  if (it == keys_.end()) {
    throw StateError("abe: unknown attribute: " + name);
  }
  return it->second;
}

std::vector<std::string> AbeAuthority::attribute_names() const {
  std::vector<std::string> out;
  out.reserve(keys_.size());
  for (const auto& [name, keys] : keys_) out.push_back(name);
  return out;
}

Bytes abe_encrypt(const bls::PairingParams& params, const PkDirectory& pks,
                  std::string_view policy_text, BytesView plaintext,
                  RandomSource& entropy) {
  if (plaintext.empty()) {
    throw std::invalid_argument("abe: refusing to encrypt an empty payload");
  }
  const policy::PolicyNode root = policy::parse_policy(policy_text);
  const lsss::Matrix matrix = lsss::policy_to_lsss(root);

  const bls381::Fr secret = random_nonzero_fr(entropy);
  const std::vector<bls381::Fr> shares =
      lsss::share_secret(matrix, secret, entropy);

  Bytes out;
  append_u8(out, kContainerVersion);
  append_u8(out, bls::kCurveId);
  const std::string canonical = policy::policy_to_string(root);
  append_u32_be(out, static_cast<std::uint32_t>(canonical.size()));
  append(out, canonical);
  append_u32_be(out, static_cast<std::uint32_t>(matrix.rows.size()));

  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    const auto& [authority_id, name] = matrix.row_labels[i];
    auto pk = pks.lookup(authority_id, name);
    if (!pk) {
      throw StateError("abe: no public key published for " + authority_id +
                       "/" + name);
    }
    const bls381::Fr r = random_nonzero_fr(entropy);
    const auto ephemeral =
        bls381::g1_to_compressed(bls381::to_affine(
            params.g1_generator.to_jacobian() * r));
    const auto shared =
        bls381::g1_to_compressed(bls381::to_affine(pk->to_jacobian() * r));
    const Bytes box_key = row_box_key(ephemeral, shared, authority_id, name);

    Bytes nonce = entropy.bytes(kAeadNonceSize);
    const Bytes sealed = aead_seal(box_key, nonce, row_aad(authority_id, name),
                                   shares[i].to_bytes_be());

    append_u8(out, std::uint8_t(authority_id.size() >> 8));
    append_u8(out, std::uint8_t(authority_id.size()));
    append(out, authority_id);
    append_u8(out, std::uint8_t(name.size() >> 8));
    append_u8(out, std::uint8_t(name.size()));
    append(out, name);
    const std::size_t blob_len = ephemeral.size() + nonce.size() + sealed.size();
    append_u8(out, std::uint8_t(blob_len >> 8));
    append_u8(out, std::uint8_t(blob_len));
    append(out, ephemeral);
    append(out, nonce);
    append(out, sealed);
  }

  const Bytes data_key = derive_data_key(secret);
  const Sha256Digest commitment = key_commitment(data_key);
  append(out, commitment);

  std::array<std::uint8_t, kAeadNonceSize> prefix{};
  entropy.fill(std::span<std::uint8_t>(prefix.data(), 8));
  append(out, prefix);

  append_u64_be(out, plaintext.size());
  const std::uint32_t chunk_count = static_cast<std::uint32_t>(
      (plaintext.size() + kChunkSize - 1) / kChunkSize);
  append_u32_be(out, chunk_count);

  const Sha256Digest header_digest = sha256(out);
  for (std::uint32_t i = 0; i < chunk_count; ++i) {
    const std::size_t off = std::size_t(i) * kChunkSize;
    const std::size_t len = std::min(kChunkSize, plaintext.size() - off);
    const Bytes sealed =
        aead_seal(data_key, chunk_nonce(prefix, i), chunk_aad(header_digest, i),
                  plaintext.subspan(off, len));
    append_u32_be(out, static_cast<std::uint32_t>(sealed.size()));
    append(out, sealed);
  }
  return out;
}

Bytes abe_decrypt(const bls::PairingParams& params, BytesView ciphertext,
                  const std::vector<AbeUserKey>& keys) {
  (void)params;
  if (keys.empty()) {
    throw std::invalid_argument("abe: empty key set");
  }
  for (const AbeUserKey& key : keys) {
    if (key.gid != keys.front().gid) {
      throw std::invalid_argument("abe: key set mixes holder gids");
    }
  }

  const Container box = parse_container(ciphertext);
  policy::PolicyNode root;
  try {
    root = policy::parse_policy(box.policy_text);
  } catch (const ParseError&) {
    throw ParseError("abe: malformed ciphertext container");
  }
  const lsss::Matrix matrix = lsss::policy_to_lsss(root);
  if (matrix.rows.size() != box.rows.size()) {
    throw ParseError("abe: malformed ciphertext container");
  }
  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    if (matrix.row_labels[i].first != box.rows[i].authority_id ||
        matrix.row_labels[i].second != box.rows[i].name) {
      throw ParseError("abe: malformed ciphertext container");
    }
  }

  std::map<policy::AttributeLabel, bls381::Fr> key_by_label;
  for (const AbeUserKey& key : keys) {
    key_by_label.emplace(std::make_pair(key.authority_id, key.name),
                         key.key_material);
  }
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    if (key_by_label.count(matrix.row_labels[i])) selected.push_back(i);
  }

  const auto coeffs = lsss::reconstruction_coefficients(matrix, selected);
  if (!coeffs) uniform_failure();

  bls381::Fr secret = bls381::Fr::zero();
  for (std::size_t j = 0; j < selected.size(); ++j) {
    if ((*coeffs)[j].is_zero()) continue;
    const RowRecord& row = box.rows[selected[j]];
    BytesView blob(row.blob);
    auto ephemeral_pt = bls381::g1_from_compressed(blob.subspan(0, 48));
    if (!ephemeral_pt) uniform_failure();
    const bls381::Fr sk = key_by_label.at(
        std::make_pair(row.authority_id, row.name));
    const auto shared = bls381::g1_to_compressed(
        bls381::to_affine(ephemeral_pt->to_jacobian() * sk));
    const Bytes box_key =
        row_box_key(blob.subspan(0, 48), shared, row.authority_id, row.name);
    auto opened =
        aead_open(box_key, blob.subspan(48, kAeadNonceSize),
                  row_aad(row.authority_id, row.name),
                  blob.subspan(48 + kAeadNonceSize));
    // A failed row box means a wrong key or a damaged row; both collapse
    // into the uniform failure by design.
    if (!opened || opened->size() != 32) uniform_failure();
    auto share = bls381::Fr::from_bytes_be(*opened);
    if (!share) uniform_failure();
    secret = secret + (*coeffs)[j] * *share;
  }

  const Bytes data_key = derive_data_key(secret);
  if (key_commitment(data_key) != box.commitment) uniform_failure();

  // From here on the keys are provably right, so failures indict the
  // payload bytes themselves.
  const Sha256Digest header_digest =
      sha256(BytesView(ciphertext).subspan(0, box.header_size));
  Bytes plaintext;
  plaintext.reserve(box.plaintext_size);
  for (std::uint32_t i = 0; i < box.chunks.size(); ++i) {
    auto opened = aead_open(data_key, chunk_nonce(box.nonce_prefix, i),
                            chunk_aad(header_digest, i), box.chunks[i]);
    if (!opened) {
      throw CryptoError("abe: payload authentication failed");
    }
    append(plaintext, *opened);
  }
  if (plaintext.size() != box.plaintext_size) {
    throw CryptoError("abe: payload authentication failed");
  }
  return plaintext;
}

CiphertextInfo inspect_ciphertext(BytesView ciphertext) {
  const Container box = parse_container(ciphertext);
  CiphertextInfo info;
  info.version = kContainerVersion;
  info.policy_text = box.policy_text;
  info.row_count = box.rows.size();
  info.chunk_count = box.chunks.size();
  info.total_size = ciphertext.size();
  return info;
}

}  // namespace ehr::maabe
