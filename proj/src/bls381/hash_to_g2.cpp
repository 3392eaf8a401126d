#include "ehr/bls381/hash_to_g2.hpp"

#include <stdexcept>

#include "ehr/digest.hpp"

namespace ehr::bls381 {

namespace {

constexpr std::size_t kHashLen = 32;  // SHA-256 output
constexpr std::size_t kBlockLen = 64;
constexpr std::size_t kFieldBytes = 64;  // L per base field element

Fp2 fp2_from_okm(BytesView okm) {
  Fp two256 = fp_two_pow_256();
  Fp c0 = Fp::from_wide_bytes_be(okm.subspan(0, 64), two256);
  Fp c1 = Fp::from_wide_bytes_be(okm.subspan(64, 64), two256);
  return {c0, c1};
}

// One simplified SWU evaluation onto the isogenous curve E'.
G2Affine map_to_curve_sswu(const Fp2& u) {
  Fp2 a = Fp2::from_raw(params::kSswuA);
  Fp2 b = Fp2::from_raw(params::kSswuB);
  Fp2 z = Fp2::from_raw(params::kSswuZ);

  Fp2 zu2 = z * u.square();
  Fp2 tv = zu2.square() + zu2;  // Z^2 u^4 + Z u^2
  Fp2 x1;
  if (tv.is_zero()) {
    x1 = b * (z * a).inverse();  // exceptional case: x1 = B / (Z A)
  } else {
    x1 = (-b * (tv + Fp2::one())) * (a * tv).inverse();
  }
  Fp2 gx1 = (x1.square() + a) * x1 + b;

  Fp2 x;
  Fp2 y;
  if (auto root = gx1.sqrt()) {
    x = x1;
    y = *root;
  } else {
    Fp2 x2 = zu2 * x1;
    Fp2 gx2 = (x2.square() + a) * x2 + b;
    auto root2 = gx2.sqrt();
    if (!root2) throw std::logic_error("sswu: no root on either candidate");
    x = x2;
    y = *root2;
  }
  if (u.sign_bit() != y.sign_bit()) y = -y;
  return {x, y, false};
}

// Evaluates the degree-3 isogeny from E' to the target curve. Poles of the
// rational maps correspond to the point at infinity.
G2Affine iso3_map(const G2Affine& p) {
  auto horner = [&](const params::Fp2Limbs* coeffs, std::size_t n,
                    const Fp2& at) {
    Fp2 acc = Fp2::from_raw(coeffs[n - 1]);
    for (std::size_t i = n - 1; i-- > 0;)
      acc = acc * at + Fp2::from_raw(coeffs[i]);
    return acc;
  };
  Fp2 xden = horner(params::kIso3XDen, 3, p.x);
  Fp2 yden = horner(params::kIso3YDen, 4, p.x);
  if (xden.is_zero() || yden.is_zero()) return G2Affine::identity();
  Fp2 xnum = horner(params::kIso3XNum, 4, p.x);
  Fp2 ynum = horner(params::kIso3YNum, 4, p.x);
  return {xnum * xden.inverse(), p.y * ynum * yden.inverse(), false};
}

}  // namespace

Bytes expand_message_xmd(BytesView msg, BytesView dst, std::size_t len) {
  if (len == 0 || len > 255 * kHashLen)
    throw std::invalid_argument("expand_message_xmd: bad output length");

  Bytes dst_actual(dst.begin(), dst.end());
  if (dst_actual.size() > 255) {
    Sha256 h;
    h.update(std::string_view("H2C-OVERSIZED-DST-"));
    h.update(dst);
    auto d = h.finish();
    dst_actual.assign(d.begin(), d.end());
  }

  const std::size_t ell = (len + kHashLen - 1) / kHashLen;
  Bytes dst_prime = dst_actual;
  dst_prime.push_back(std::uint8_t(dst_actual.size()));

  Sha256 h0;
  Bytes zpad(kBlockLen, 0);
  h0.update(zpad);
  h0.update(msg);
  Bytes lenbuf = {std::uint8_t(len >> 8), std::uint8_t(len & 0xff), 0};
  h0.update(lenbuf);
  h0.update(dst_prime);
  Sha256Digest b0 = h0.finish();

  Bytes out;
  out.reserve(ell * kHashLen);
  Sha256Digest prev{};
  for (std::size_t i = 1; i <= ell; ++i) {
    Bytes block(b0.begin(), b0.end());
    if (i > 1) {
      for (std::size_t j = 0; j < kHashLen; ++j) block[j] = b0[j] ^ prev[j];
    }
    block.push_back(std::uint8_t(i));
    append(block, dst_prime);
    prev = sha256(block);
    out.insert(out.end(), prev.begin(), prev.end());
  }
  out.resize(len);
  return out;
}

G2 hash_to_g2(BytesView msg, std::string_view dst) {
  BytesView dstv(reinterpret_cast<const std::uint8_t*>(dst.data()),
                 dst.size());
  Bytes okm = expand_message_xmd(msg, dstv, 2 * 2 * kFieldBytes);
  Fp2 u0 = fp2_from_okm(BytesView(okm).subspan(0, 128));
  Fp2 u1 = fp2_from_okm(BytesView(okm).subspan(128, 128));
  G2 q0 = iso3_map(map_to_curve_sswu(u0)).to_jacobian();
  G2 q1 = iso3_map(map_to_curve_sswu(u1)).to_jacobian();
  return g2_clear_cofactor(q0 + q1);
}

}  // namespace ehr::bls381
