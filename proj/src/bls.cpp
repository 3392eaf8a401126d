#include "ehr/bls.hpp"

#include <stdexcept>

#include "ehr/bls381/hash_to_g2.hpp"
#include "ehr/bls381/pairing.hpp"
#include "ehr/errors.hpp"
#include "ehr/hex.hpp"

namespace ehr::bls {
namespace {

// Ciphersuite tag for the basic scheme over this curve and hash.
constexpr char kSignatureDst[] = "BLS_SIG_BLS12381G2_XMD:SHA-256_SSWU_RO_NUL_";

Bytes with_header(BytesView payload) {
  Bytes out;
  out.reserve(payload.size() + 2);
  out.push_back(kEncodingVersion);
  out.push_back(kCurveId);
  append(out, payload);
  return out;
}

// Strips and checks the two header bytes, returning the payload.
BytesView check_header(BytesView in, std::size_t payload_size,
                       const char* what) {
  if (in.size() != payload_size + 2) {
    throw CryptoError(std::string(what) + ": wrong length");
  }
  if (in[0] != kEncodingVersion) {
    throw CryptoError(std::string(what) + ": unsupported version");
  }
  if (in[1] != kCurveId) {
    throw CryptoError(std::string(what) + ": unknown curve id");
  }
  return in.subspan(2);
}

}  // namespace

PairingParams setup(int security_level) {
  if (security_level != 128) {
    throw std::invalid_argument("setup: unsupported security level " +
                                std::to_string(security_level));
  }
  PairingParams params;
  params.curve_id = kCurveId;
  params.g1_generator = bls381::to_affine(bls381::g1_generator());
  params.g2_generator = bls381::to_affine(bls381::g2_generator());
  return params;
}

BlsKeyPair keygen(const PairingParams& params, RandomSource& entropy) {
  bls381::Fr scalar;
  do {
    // 64 uniform bytes reduced mod r leaves negligible bias.
    Bytes wide = entropy.bytes(64);
    scalar = bls381::fr_from_wide_bytes(wide);
  } while (scalar == bls381::Fr::zero());

  BlsKeyPair pair;
  pair.sk.scalar = scalar;
  pair.vk.point =
      bls381::to_affine(params.g1_generator.to_jacobian() * scalar);
  return pair;
}

bls381::G2 hash_to_group(const PairingParams& params, BytesView message) {
  (void)params;
  if (message.empty()) {
    throw std::invalid_argument("hash_to_group: empty message");
  }
  return bls381::hash_to_g2(message, kSignatureDst);
}

GroupSignature bls_sign(const PairingParams& params, const SecretKey& key,
                        BytesView message) {
  if (key.scalar == bls381::Fr::zero()) {
    throw std::invalid_argument("bls_sign: zero signing scalar");
  }
  GroupSignature sig;
  sig.point = bls381::to_affine(hash_to_group(params, message) * key.scalar);
  return sig;
}

VerifyResult bls_verify(const PairingParams& params, const VerificationKey& vk,
                        BytesView message, const GroupSignature& sig) {
  if (vk.point.infinity || sig.point.infinity) {
    return VerifyResult::kReject;  // identity keys and signatures never pass
  }
  const bls381::G2Affine hashed =
      bls381::to_affine(hash_to_group(params, message));
  const bls381::Fp12 lhs =
      bls381::pairing(params.g1_generator, sig.point);
  const bls381::Fp12 rhs = bls381::pairing(vk.point, hashed);
  return lhs == rhs ? VerifyResult::kAccept : VerifyResult::kReject;
}

Bytes encode_params(const PairingParams& params) {
  Bytes payload;
  append(payload, bls381::g1_to_compressed(params.g1_generator));
  append(payload, bls381::g2_to_compressed(params.g2_generator));
  return with_header(payload);
}

Bytes encode_verification_key(const VerificationKey& vk) {
  return with_header(bls381::g1_to_compressed(vk.point));
}

Bytes encode_signature(const GroupSignature& sig) {
  return with_header(bls381::g2_to_compressed(sig.point));
}

Bytes encode_secret_key(const SecretKey& sk) {
  return with_header(sk.scalar.to_bytes_be());
}

PairingParams decode_params(BytesView in) {
  BytesView payload = check_header(in, 48 + 96, "params");
  auto g1 = bls381::g1_from_compressed(payload.subspan(0, 48));
  auto g2 = bls381::g2_from_compressed(payload.subspan(48, 96));
  if (!g1 || !g2) {
    throw CryptoError("params: malformed generator encoding");
  }
  // The generators are fixed by the curve id; reject impostors.
  const PairingParams canonical = setup(128);
  if (!(*g1 == canonical.g1_generator) || !(*g2 == canonical.g2_generator)) {
    throw CryptoError("params: generator mismatch for curve id");
  }
  return canonical;
}

VerificationKey decode_verification_key(BytesView in) {
  BytesView payload = check_header(in, 48, "verification key");
  auto point = bls381::g1_from_compressed(payload);
  if (!point) {
    throw CryptoError("verification key: malformed point encoding");
  }
  return VerificationKey{*point};
}

GroupSignature decode_signature(BytesView in) {
  BytesView payload = check_header(in, 96, "signature");
  auto point = bls381::g2_from_compressed(payload);
  if (!point) {
    throw CryptoError("signature: malformed point encoding");
  }
  return GroupSignature{*point};
}

SecretKey decode_secret_key(BytesView in) {
  BytesView payload = check_header(in, 32, "secret key");
  auto scalar = bls381::Fr::from_bytes_be(payload);
  if (!scalar || *scalar == bls381::Fr::zero()) {
    throw CryptoError("secret key: scalar out of range");
  }
  return SecretKey{*scalar};
}

namespace {

std::string render_fp2(const bls381::Fp2& v) {
  return "(" + to_hex(v.c0.to_bytes_be()) + ", " +
         to_hex(v.c1.to_bytes_be()) + ")";
}

}  // namespace

std::string debug_render_projective(const bls381::G2& point) {
  return "X=" + render_fp2(point.x) + "\nY=" + render_fp2(point.y) +
         "\nZ=" + render_fp2(point.z);
}

std::string debug_render_projective(const bls381::G1& point) {
  return "X=" + to_hex(point.x.to_bytes_be()) +
         "\nY=" + to_hex(point.y.to_bytes_be()) +
         "\nZ=" + to_hex(point.z.to_bytes_be());
}

}  // namespace ehr::bls
