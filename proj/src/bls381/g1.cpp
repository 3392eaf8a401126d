#include "ehr/bls381/g1.hpp"

namespace ehr::bls381 {

namespace {

constexpr std::uint8_t kFlagCompressed = 0x80;
constexpr std::uint8_t kFlagInfinity = 0x40;
constexpr std::uint8_t kFlagYLargest = 0x20;

}  // namespace

G1 g1_generator() {
  return {Fp::from_raw(params::kG1GenX), Fp::from_raw(params::kG1GenY),
          Fp::one()};
}

bool g1_on_curve(const G1Affine& p) {
  if (p.infinity) return true;
  Fp rhs = p.x.square() * p.x + Fp::from_raw(params::kG1B);
  return p.y.square() == rhs;
}

bool g1_in_subgroup(const G1Affine& p) {
  if (p.infinity) return true;
  return p.to_jacobian()
      .mul_limbs(std::span(params::kFrModulus))
      .is_identity();
}

std::optional<Fp> fp_sqrt(const Fp& a) {
  // p = 3 mod 4, so a^((p+1)/4) is a root whenever one exists.
  Fp cand = a.pow(std::span(params::kFpExpSqrt));
  if (cand.square() != a) return std::nullopt;
  return cand;
}

std::array<std::uint8_t, kG1CompressedSize> g1_to_compressed(
    const G1Affine& p) {
  std::array<std::uint8_t, kG1CompressedSize> out{};
  if (p.infinity) {
    out[0] = kFlagCompressed | kFlagInfinity;
    return out;
  }
  p.x.to_bytes_be(out);
  out[0] |= kFlagCompressed;
  if (fp_lex_largest(p.y)) out[0] |= kFlagYLargest;
  return out;
}

std::array<std::uint8_t, kG1UncompressedSize> g1_to_uncompressed(
    const G1Affine& p) {
  std::array<std::uint8_t, kG1UncompressedSize> out{};
  if (p.infinity) {
    out[0] = kFlagInfinity;
    return out;
  }
  p.x.to_bytes_be(std::span(out).subspan(0, 48));
  p.y.to_bytes_be(std::span(out).subspan(48, 48));
  return out;
}

std::optional<G1Affine> g1_from_compressed(std::span<const std::uint8_t> in) {
  if (in.size() != kG1CompressedSize) return std::nullopt;
  std::uint8_t flags = in[0];
  if (!(flags & kFlagCompressed)) return std::nullopt;
  std::array<std::uint8_t, 48> buf{};
  std::copy(in.begin(), in.end(), buf.begin());
  buf[0] &= 0x1f;
  if (flags & kFlagInfinity) {
    if (flags & kFlagYLargest) return std::nullopt;
    for (auto b : buf)
      if (b != 0) return std::nullopt;
    return G1Affine::identity();
  }
  auto x = Fp::from_bytes_be(buf);
  if (!x) return std::nullopt;
  auto y = fp_sqrt(x->square() * *x + Fp::from_raw(params::kG1B));
  if (!y) return std::nullopt;
  if (fp_lex_largest(*y) != bool(flags & kFlagYLargest)) y = -*y;
  G1Affine p{*x, *y, false};
  if (!g1_in_subgroup(p)) return std::nullopt;
  return p;
}

std::optional<G1Affine> g1_from_uncompressed(std::span<const std::uint8_t> in) {
  if (in.size() != kG1UncompressedSize) return std::nullopt;
  std::uint8_t flags = in[0];
  if ((flags & kFlagCompressed) || (flags & kFlagYLargest)) return std::nullopt;
  if (flags & kFlagInfinity) {
    if (flags & kFlagYLargest) return std::nullopt;
    for (std::size_t i = 0; i < in.size(); ++i)
      if (in[i] != (i == 0 ? kFlagInfinity : 0)) return std::nullopt;
    return G1Affine::identity();
  }
  std::array<std::uint8_t, 48> xb{};
  std::copy(in.begin(), in.begin() + 48, xb.begin());
  xb[0] &= 0x1f;
  auto x = Fp::from_bytes_be(xb);
  auto y = Fp::from_bytes_be(in.subspan(48, 48));
  if (!x || !y) return std::nullopt;
  G1Affine p{*x, *y, false};
  if (!g1_on_curve(p) || !g1_in_subgroup(p)) return std::nullopt;
  return p;
}

}  // namespace ehr::bls381
