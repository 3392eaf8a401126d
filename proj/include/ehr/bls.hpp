#pragma once

#include <optional>
#include <string>

#include "ehr/bls381/g1.hpp"
#include "ehr/bls381/g2.hpp"
#include "ehr/bytes.hpp"
#include "ehr/rng.hpp"

// Minimal BLS signature primitive: verification keys in the first source
// group (48 byte encodings), signatures in the second (96 bytes), so that
// vk = g1^sk and sigma = H(m)^sk with H hashing into the signature group.

namespace ehr::bls {

inline constexpr std::uint8_t kEncodingVersion = 1;
inline constexpr std::uint8_t kCurveId = 1;  // BLS12-381, the only curve

struct PairingParams {
  std::uint8_t curve_id;
  bls381::G1Affine g1_generator;
  bls381::G2Affine g2_generator;
};

struct SecretKey {
  bls381::Fr scalar;  // in [1, r-1]
};

struct VerificationKey {
  bls381::G1Affine point;

  friend bool operator==(const VerificationKey& a, const VerificationKey& b) {
    return a.point == b.point;
  }
};

struct BlsKeyPair {
  SecretKey sk;
  VerificationKey vk;
};

struct GroupSignature {
  bls381::G2Affine point;

  friend bool operator==(const GroupSignature& a, const GroupSignature& b) {
    return a.point == b.point;
  }
};

enum class VerifyResult { kAccept, kReject };

// Only the 128-bit level exists; anything else throws.
PairingParams setup(int security_level);

BlsKeyPair keygen(const PairingParams& params, RandomSource& entropy);

// Deterministic hash into the signature group. Empty messages are refused:
// upstream callers always hash a tagged value, so an empty input is a bug.
bls381::G2 hash_to_group(const PairingParams& params, BytesView message);

GroupSignature bls_sign(const PairingParams& params, const SecretKey& key,
                        BytesView message);

// Accept iff e(g1, sigma) == e(vk, H(message)). Structural problems with
// the inputs surface as exceptions at decode time, never as a reject here.
VerifyResult bls_verify(const PairingParams& params, const VerificationKey& vk,
                        BytesView message, const GroupSignature& sig);

// Versioned canonical encodings: [version byte][curve id byte][payload].
Bytes encode_params(const PairingParams& params);
Bytes encode_verification_key(const VerificationKey& vk);
Bytes encode_signature(const GroupSignature& sig);
Bytes encode_secret_key(const SecretKey& sk);

// Decoders throw CryptoError on malformed bytes (wrong version, bad point,
// out-of-subgroup), keeping "malformed" distinct from "reject".
PairingParams decode_params(BytesView in);
VerificationKey decode_verification_key(BytesView in);
GroupSignature decode_signature(BytesView in);
SecretKey decode_secret_key(BytesView in);

// Three-coordinate projective rendering for display and debugging; the wire
// format stays compressed affine.
std::string debug_render_projective(const bls381::G2& point);
std::string debug_render_projective(const bls381::G1& point);

}  // namespace ehr::bls
