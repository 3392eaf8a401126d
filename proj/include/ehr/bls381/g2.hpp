#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "ehr/bls381/point.hpp"
#include "ehr/bls381/tower.hpp"

namespace ehr::bls381 {

using G2 = Jacobian<Fp2>;
using G2Affine = Affine<Fp2>;

inline constexpr std::size_t kG2CompressedSize = 96;
inline constexpr std::size_t kG2UncompressedSize = 192;

G2 g2_generator();
bool g2_on_curve(const G2Affine& p);
bool g2_in_subgroup(const G2Affine& p);

// Fp2 coordinates serialize as c1 || c0, flags in the first byte.
std::array<std::uint8_t, kG2CompressedSize> g2_to_compressed(const G2Affine& p);
std::array<std::uint8_t, kG2UncompressedSize> g2_to_uncompressed(
    const G2Affine& p);
std::optional<G2Affine> g2_from_compressed(std::span<const std::uint8_t> in);
std::optional<G2Affine> g2_from_uncompressed(std::span<const std::uint8_t> in);

// Untwist-Frobenius-twist endomorphism and its square.
G2 g2_psi(const G2& p);
G2 g2_psi2(const G2& p);

// Multiplication by the (signed, negative) curve parameter.
G2 g2_mul_by_signed_x(const G2& p);

// Maps an arbitrary curve point into the r-order subgroup.
G2 g2_clear_cofactor(const G2& p);

}  // namespace ehr::bls381
