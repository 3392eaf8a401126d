#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "ehr/bls381/params.hpp"

namespace ehr::bls381 {

namespace detail {

// a + b*c + carry, full 128-bit; returns low word, carry gets high word.
inline std::uint64_t mac(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                         std::uint64_t& carry) {
  unsigned __int128 t = static_cast<unsigned __int128>(b) * c + a + carry;
  carry = static_cast<std::uint64_t>(t >> 64);
  return static_cast<std::uint64_t>(t);
}

inline std::uint64_t adc(std::uint64_t a, std::uint64_t b, std::uint64_t& carry) {
  unsigned __int128 t = static_cast<unsigned __int128>(a) + b + carry;
  carry = static_cast<std::uint64_t>(t >> 64);
  return static_cast<std::uint64_t>(t);
}

inline std::uint64_t sbb(std::uint64_t a, std::uint64_t b, std::uint64_t& borrow) {
  unsigned __int128 t =
      static_cast<unsigned __int128>(a) - b - borrow;
  borrow = static_cast<std::uint64_t>(t >> 64) & 1u;
  return static_cast<std::uint64_t>(t);
}

}  // namespace detail

struct FpParams {
  static constexpr std::size_t kLimbs = 6;
  static constexpr auto kModulus = params::kFpModulus;
  static constexpr std::uint64_t kMontInv = params::kFpMontInv;
  static constexpr auto kR2 = params::kFpR2;
  static constexpr auto kOne = params::kFpOne;
  static constexpr auto kExpInv = params::kFpExpInv;
};

struct FrParams {
  static constexpr std::size_t kLimbs = 4;
  static constexpr auto kModulus = params::kFrModulus;
  static constexpr std::uint64_t kMontInv = params::kFrMontInv;
  static constexpr auto kR2 = params::kFrR2;
  static constexpr auto kOne = params::kFrOne;
  static constexpr auto kExpInv = params::kFrExpInv;
};

// Prime field element in Montgomery form. Arithmetic is variable time; the
// library targets correctness and benchmarking, not side channel resistance.
template <typename P>
class MontField {
 public:
  static constexpr std::size_t kLimbCount = P::kLimbs;
  using Limbs = std::array<std::uint64_t, kLimbCount>;

  constexpr MontField() : limbs_{} {}

  static constexpr MontField zero() { return MontField(); }
  static constexpr MontField one() { return from_raw(P::kOne); }

  // Interprets `mont` as an already Montgomery encoded value.
  static constexpr MontField from_raw(const Limbs& mont) {
    MontField f;
    f.limbs_ = mont;
    return f;
  }

  static MontField from_u64(std::uint64_t v) {
    Limbs l{};
    l[0] = v;
    return mul_limbs(l, P::kR2);
  }

  // Accepts any raw limb value below 2^(64*N) and reduces it mod the modulus.
  static MontField from_limbs_any(const Limbs& raw) {
    return mul_limbs(raw, P::kR2);
  }

  // Strict decode: rejects values >= modulus.
  static std::optional<MontField> from_bytes_be(
      std::span<const std::uint8_t> in) {
    if (in.size() != kLimbCount * 8) return std::nullopt;
    Limbs raw{};
    for (std::size_t i = 0; i < kLimbCount; ++i) {
      std::uint64_t w = 0;
      for (std::size_t j = 0; j < 8; ++j)
        w = (w << 8) | in[(kLimbCount - 1 - i) * 8 + j];
      raw[i] = w;
    }
    if (!less_than(raw, P::kModulus)) return std::nullopt;
    return mul_limbs(raw, P::kR2);
  }

  // Reduces a 64 byte big-endian string: hi * 2^256 + lo mod modulus.
  static MontField from_wide_bytes_be(std::span<const std::uint8_t> in,
                                      const MontField& two_pow_256) {
    Limbs hi{};
    Limbs lo{};
    auto load = [&](Limbs& dst, std::span<const std::uint8_t> part) {
      for (std::size_t i = 0; i < 4; ++i) {
        std::uint64_t w = 0;
        for (std::size_t j = 0; j < 8; ++j) w = (w << 8) | part[(3 - i) * 8 + j];
        dst[i] = w;
      }
    };
    load(hi, in.subspan(0, 32));
    load(lo, in.subspan(32, 32));
    return from_limbs_any(hi) * two_pow_256 + from_limbs_any(lo);
  }

  Limbs canonical() const {
    std::array<std::uint64_t, 2 * kLimbCount> t{};
    for (std::size_t i = 0; i < kLimbCount; ++i) t[i] = limbs_[i];
    return montgomery_reduce(t);
  }

  void to_bytes_be(std::span<std::uint8_t> out) const {
    Limbs c = canonical();
    for (std::size_t i = 0; i < kLimbCount; ++i) {
      std::uint64_t w = c[kLimbCount - 1 - i];
      for (std::size_t j = 0; j < 8; ++j) out[i * 8 + j] = std::uint8_t(w >> (56 - 8 * j));
    }
  }

  std::array<std::uint8_t, kLimbCount * 8> to_bytes_be() const {
    std::array<std::uint8_t, kLimbCount * 8> out{};
    to_bytes_be(std::span<std::uint8_t>(out));
    return out;
  }

  bool is_zero() const {
    for (auto l : limbs_)
      if (l != 0) return false;
    return true;
  }

  friend bool operator==(const MontField& a, const MontField& b) {
    return a.limbs_ == b.limbs_;
  }
  friend bool operator!=(const MontField& a, const MontField& b) {
    return !(a == b);
  }

  MontField operator+(const MontField& o) const {
    Limbs r;
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < kLimbCount; ++i)
      r[i] = detail::adc(limbs_[i], o.limbs_[i], carry);
    return from_raw(reduce_once(r, carry));
  }

  MontField operator-(const MontField& o) const {
    Limbs r;
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < kLimbCount; ++i)
      r[i] = detail::sbb(limbs_[i], o.limbs_[i], borrow);
    if (borrow) {
      std::uint64_t carry = 0;
      for (std::size_t i = 0; i < kLimbCount; ++i)
        r[i] = detail::adc(r[i], P::kModulus[i], carry);
    }
    return from_raw(r);
  }

  MontField operator-() const { return zero() - *this; }

  MontField operator*(const MontField& o) const {
    return mul_limbs(limbs_, o.limbs_);
  }

  MontField& operator+=(const MontField& o) { return *this = *this + o; }
  MontField& operator-=(const MontField& o) { return *this = *this - o; }
  MontField& operator*=(const MontField& o) { return *this = *this * o; }

  MontField square() const { return *this * *this; }

  MontField dbl() const { return *this + *this; }

  // Exponent given as little-endian limbs, scanned from the top bit.
  MontField pow(std::span<const std::uint64_t> exp) const {
    MontField acc = one();
    for (std::size_t i = exp.size(); i-- > 0;) {
      for (int bit = 63; bit >= 0; --bit) {
        acc = acc.square();
        if ((exp[i] >> bit) & 1) acc *= *this;
      }
    }
    return acc;
  }

  MontField inverse() const { return pow(std::span(P::kExpInv)); }

  // Parity of the canonical representative (RFC 9380 sgn0 for m = 1).
  bool sign_bit() const { return canonical()[0] & 1; }

  // True when the canonical value exceeds (modulus - 1) / 2, i.e. the element
  // compares greater than its negation.
  bool is_lex_largest(const Limbs& half_floor) const {
    Limbs c = canonical();
    for (std::size_t i = kLimbCount; i-- > 0;) {
      if (c[i] != half_floor[i]) return c[i] > half_floor[i];
    }
    return false;  // equal to the floor: not larger
  }

  const Limbs& raw() const { return limbs_; }

 private:
  static bool less_than(const Limbs& a, const Limbs& b) {
    for (std::size_t i = kLimbCount; i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }

  // Subtracts the modulus when the (value, carry) pair is >= modulus.
  static Limbs reduce_once(const Limbs& r, std::uint64_t carry) {
    Limbs s;
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < kLimbCount; ++i)
      s[i] = detail::sbb(r[i], P::kModulus[i], borrow);
    return (carry != 0 || borrow == 0) ? s : r;
  }

  static MontField mul_limbs(const Limbs& a, const Limbs& b) {
    std::array<std::uint64_t, 2 * kLimbCount> t{};
    for (std::size_t i = 0; i < kLimbCount; ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < kLimbCount; ++j)
        t[i + j] = detail::mac(t[i + j], a[i], b[j], carry);
      t[i + kLimbCount] = carry;
    }
    return from_raw(montgomery_reduce(t));
  }

  static Limbs montgomery_reduce(std::array<std::uint64_t, 2 * kLimbCount> t) {
    std::uint64_t chain = 0;
    for (std::size_t i = 0; i < kLimbCount; ++i) {
      std::uint64_t k = t[i] * P::kMontInv;
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < kLimbCount; ++j)
        t[i + j] = detail::mac(t[i + j], k, P::kModulus[j], carry);
      unsigned __int128 v =
          static_cast<unsigned __int128>(t[i + kLimbCount]) + carry + chain;
      t[i + kLimbCount] = static_cast<std::uint64_t>(v);
      chain = static_cast<std::uint64_t>(v >> 64);
    }
    Limbs r;
    for (std::size_t i = 0; i < kLimbCount; ++i) r[i] = t[i + kLimbCount];
    return reduce_once(r, chain);
  }

  Limbs limbs_;
};

using Fp = MontField<FpParams>;
using Fr = MontField<FrParams>;

inline Fp fp_two_pow_256() { return Fp::from_raw(params::kFpTwoPow256); }
inline Fr fr_two_pow_256() { return Fr::from_raw(params::kFrTwoPow256); }

// Reduces 64 uniform bytes into Fr; used for key generation.
inline Fr fr_from_wide_bytes(std::span<const std::uint8_t> in) {
  return Fr::from_wide_bytes_be(in, fr_two_pow_256());
}

inline bool fp_lex_largest(const Fp& v) {
  return v.is_lex_largest(params::kFpHalfModulusFloor);
}

}  // namespace ehr::bls381
