#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "ehr/bls381/point.hpp"

namespace ehr::bls381 {

using G1 = Jacobian<Fp>;
using G1Affine = Affine<Fp>;

inline constexpr std::size_t kG1CompressedSize = 48;
inline constexpr std::size_t kG1UncompressedSize = 96;

G1 g1_generator();
bool g1_on_curve(const G1Affine& p);

// Order-r subgroup membership (the curve has composite order).
bool g1_in_subgroup(const G1Affine& p);

// Point serialization follows the widely used 381-bit format: the three top
// bits of the first byte carry compression / infinity / y-sign flags.
std::array<std::uint8_t, kG1CompressedSize> g1_to_compressed(const G1Affine& p);
std::array<std::uint8_t, kG1UncompressedSize> g1_to_uncompressed(
    const G1Affine& p);

// Decoders reject malformed flags, non-canonical coordinates, points off the
// curve, and points outside the r-order subgroup.
std::optional<G1Affine> g1_from_compressed(std::span<const std::uint8_t> in);
std::optional<G1Affine> g1_from_uncompressed(std::span<const std::uint8_t> in);

std::optional<Fp> fp_sqrt(const Fp& a);

}  // namespace ehr::bls381
