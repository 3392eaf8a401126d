#pragma once

#include <cstdint>
#include <span>

#include "ehr/bls381/fp.hpp"

namespace ehr::bls381 {

// Jacobian projective point (X/Z^2, Y/Z^3) on a curve y^2 = x^3 + b.
// The identity is encoded as Z = 0. Formulas assume a = 0.
template <typename F>
struct Jacobian {
  F x;
  F y;
  F z;

  static Jacobian identity() { return {F::one(), F::one(), F::zero()}; }

  bool is_identity() const { return z.is_zero(); }

  Jacobian operator-() const { return {x, -y, z}; }

  Jacobian dbl() const {
    if (is_identity()) return *this;
    F a = x.square();
    F b = y.square();
    F c = b.square();
    F d = ((x + b).square() - a - c).dbl();
    F e = a + a + a;
    F f = e.square();
    F x3 = f - d.dbl();
    F y3 = e * (d - x3) - c.dbl().dbl().dbl();
    F z3 = (y * z).dbl();
    return {x3, y3, z3};
  }

  Jacobian operator+(const Jacobian& q) const {
    if (is_identity()) return q;
    if (q.is_identity()) return *this;
    F z1z1 = z.square();
    F z2z2 = q.z.square();
    F u1 = x * z2z2;
    F u2 = q.x * z1z1;
    F s1 = y * q.z * z2z2;
    F s2 = q.y * z * z1z1;
    if (u1 == u2) {
      if (s1 == s2) return dbl();
      return identity();
    }
    F h = u2 - u1;
    F i = h.dbl().square();
    F j = h * i;
    F r = (s2 - s1).dbl();
    F v = u1 * i;
    F x3 = r.square() - j - v.dbl();
    F y3 = r * (v - x3) - (s1 * j).dbl();
    F z3 = ((z + q.z).square() - z1z1 - z2z2) * h;
    return {x3, y3, z3};
  }

  Jacobian operator-(const Jacobian& q) const { return *this + (-q); }
  Jacobian& operator+=(const Jacobian& q) { return *this = *this + q; }

  // Variable-time double-and-add over little-endian limbs.
  Jacobian mul_limbs(std::span<const std::uint64_t> scalar) const {
    Jacobian acc = identity();
    bool started = false;
    for (std::size_t i = scalar.size(); i-- > 0;) {
      for (int bit = 63; bit >= 0; --bit) {
        if (started) acc = acc.dbl();
        if ((scalar[i] >> bit) & 1) {
          acc += *this;
          started = true;
        }
      }
    }
    return acc;
  }

  Jacobian operator*(const Fr& k) const {
    auto limbs = k.canonical();
    return mul_limbs(std::span<const std::uint64_t>(limbs));
  }

  friend bool operator==(const Jacobian& a, const Jacobian& b) {
    // (X1/Z1^2 == X2/Z2^2, Y1/Z1^3 == Y2/Z2^3) without inversions.
    if (a.is_identity() || b.is_identity())
      return a.is_identity() && b.is_identity();
    F z1z1 = a.z.square();
    F z2z2 = b.z.square();
    return a.x * z2z2 == b.x * z1z1 &&
           a.y * z2z2 * b.z == b.y * z1z1 * a.z;
  }
  friend bool operator!=(const Jacobian& a, const Jacobian& b) {
    return !(a == b);
  }
};

template <typename F>
struct Affine {
  F x;
  F y;
  bool infinity = false;

  static Affine identity() { return {F::zero(), F::zero(), true}; }

  friend bool operator==(const Affine& a, const Affine& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator!=(const Affine& a, const Affine& b) { return !(a == b); }

  Jacobian<F> to_jacobian() const {
    if (infinity) return Jacobian<F>::identity();
    return {x, y, F::one()};
  }
};

template <typename F>
Affine<F> to_affine(const Jacobian<F>& p) {
  if (p.is_identity()) return Affine<F>::identity();
  F zinv = p.z.inverse();
  F zinv2 = zinv.square();
  return {p.x * zinv2, p.y * zinv2 * zinv, false};
}

}  // namespace ehr::bls381
