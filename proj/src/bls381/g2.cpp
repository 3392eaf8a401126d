#include "ehr/bls381/g2.hpp"

#include <algorithm>

namespace ehr::bls381 {

namespace {

constexpr std::uint8_t kFlagCompressed = 0x80;
constexpr std::uint8_t kFlagInfinity = 0x40;
constexpr std::uint8_t kFlagYLargest = 0x20;

std::optional<Fp2> fp2_from_bytes_zc(std::span<const std::uint8_t> in) {
  auto c1 = Fp::from_bytes_be(in.subspan(0, 48));
  auto c0 = Fp::from_bytes_be(in.subspan(48, 48));
  if (!c0 || !c1) return std::nullopt;
  return Fp2{*c0, *c1};
}

void fp2_to_bytes_zc(const Fp2& v, std::span<std::uint8_t> out) {
  v.c1.to_bytes_be(out.subspan(0, 48));
  v.c0.to_bytes_be(out.subspan(48, 48));
}

}  // namespace

G2 g2_generator() {
  return {Fp2::from_raw(params::kG2GenX), Fp2::from_raw(params::kG2GenY),
          Fp2::one()};
}

bool g2_on_curve(const G2Affine& p) {
  if (p.infinity) return true;
  Fp2 rhs = p.x.square() * p.x + Fp2::from_raw(params::kG2B);
  return p.y.square() == rhs;
}

bool g2_in_subgroup(const G2Affine& p) {
  if (p.infinity) return true;
  return p.to_jacobian()
      .mul_limbs(std::span(params::kFrModulus))
      .is_identity();
}

std::array<std::uint8_t, kG2CompressedSize> g2_to_compressed(
    const G2Affine& p) {
  std::array<std::uint8_t, kG2CompressedSize> out{};
  if (p.infinity) {
    out[0] = kFlagCompressed | kFlagInfinity;
    return out;
  }
  fp2_to_bytes_zc(p.x, out);
  out[0] |= kFlagCompressed;
  if (p.y.is_lex_largest()) out[0] |= kFlagYLargest;
  return out;
}

std::array<std::uint8_t, kG2UncompressedSize> g2_to_uncompressed(
    const G2Affine& p) {
  std::array<std::uint8_t, kG2UncompressedSize> out{};
  if (p.infinity) {
    out[0] = kFlagInfinity;
    return out;
  }
  fp2_to_bytes_zc(p.x, std::span(out).subspan(0, 96));
  fp2_to_bytes_zc(p.y, std::span(out).subspan(96, 96));
  return out;
}

std::optional<G2Affine> g2_from_compressed(std::span<const std::uint8_t> in) {
  if (in.size() != kG2CompressedSize) return std::nullopt;
  std::uint8_t flags = in[0];
  if (!(flags & kFlagCompressed)) return std::nullopt;
  std::array<std::uint8_t, 96> buf{};
  std::copy(in.begin(), in.end(), buf.begin());
  buf[0] &= 0x1f;
  if (flags & kFlagInfinity) {
    if (flags & kFlagYLargest) return std::nullopt;
    for (auto b : buf)
      if (b != 0) return std::nullopt;
    return G2Affine::identity();
  }
  auto x = fp2_from_bytes_zc(buf);
  if (!x) return std::nullopt;
  auto y = (x->square() * *x + Fp2::from_raw(params::kG2B)).sqrt();
  if (!y) return std::nullopt;
  if (y->is_lex_largest() != bool(flags & kFlagYLargest)) y = -*y;
  G2Affine p{*x, *y, false};
  if (!g2_in_subgroup(p)) return std::nullopt;
  return p;
}

std::optional<G2Affine> g2_from_uncompressed(std::span<const std::uint8_t> in) {
  if (in.size() != kG2UncompressedSize) return std::nullopt;
  std::uint8_t flags = in[0];
  if ((flags & kFlagCompressed) || (flags & kFlagYLargest)) return std::nullopt;
  if (flags & kFlagInfinity) {
    for (std::size_t i = 0; i < in.size(); ++i)
      if (in[i] != (i == 0 ? kFlagInfinity : 0)) return std::nullopt;
    return G2Affine::identity();
  }
  std::array<std::uint8_t, 96> xb{};
  std::copy(in.begin(), in.begin() + 96, xb.begin());
  xb[0] &= 0x1f;
  auto x = fp2_from_bytes_zc(xb);
  auto y = fp2_from_bytes_zc(in.subspan(96, 96));
  if (!x || !y) return std::nullopt;
  G2Affine p{*x, *y, false};
  if (!g2_on_curve(p) || !g2_in_subgroup(p)) return std::nullopt;
  return p;
}

G2 g2_psi(const G2& p) {
  // Conjugation commutes with the Jacobian scaling, so the endomorphism can
  // be applied coordinate-wise.
  return {p.x.conjugate() * Fp2::from_raw(params::kPsiCoeffX),
          p.y.conjugate() * Fp2::from_raw(params::kPsiCoeffY),
          p.z.conjugate()};
}

G2 g2_psi2(const G2& p) {
  return {p.x.scale(Fp::from_raw(params::kPsi2CoeffX)), -p.y, p.z};
}

G2 g2_mul_by_signed_x(const G2& p) {
  std::uint64_t limbs[1] = {params::kBlsX};
  return -p.mul_limbs(std::span<const std::uint64_t>(limbs));
}

G2 g2_clear_cofactor(const G2& p) {
  G2 t1 = g2_mul_by_signed_x(p);  // [x] P
  G2 t2 = g2_psi(p);              // psi(P)
  return g2_psi2(p.dbl()) + g2_mul_by_signed_x(t1 + t2) - t1 - t2 - p;
}

}  // namespace ehr::bls381
