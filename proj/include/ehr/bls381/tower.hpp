#pragma once

#include <optional>

#include "ehr/bls381/fp.hpp"

// Extension tower: Fp2 = Fp[u]/(u^2 + 1), Fp6 = Fp2[v]/(v^3 - xi) with
// xi = 1 + u, Fp12 = Fp6[w]/(w^2 - v).

namespace ehr::bls381 {

struct Fp2 {
  Fp c0;
  Fp c1;

  static Fp2 zero() { return {Fp::zero(), Fp::zero()}; }
  static Fp2 one() { return {Fp::one(), Fp::zero()}; }
  static Fp2 from_raw(const params::Fp2Limbs& l) {
    return {Fp::from_raw(l.c0), Fp::from_raw(l.c1)};
  }

  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }

  friend bool operator==(const Fp2& a, const Fp2& b) {
    return a.c0 == b.c0 && a.c1 == b.c1;
  }
  friend bool operator!=(const Fp2& a, const Fp2& b) { return !(a == b); }

  Fp2 operator+(const Fp2& o) const { return {c0 + o.c0, c1 + o.c1}; }
  Fp2 operator-(const Fp2& o) const { return {c0 - o.c0, c1 - o.c1}; }
  Fp2 operator-() const { return {-c0, -c1}; }

  Fp2 operator*(const Fp2& o) const {
    return {c0 * o.c0 - c1 * o.c1, c0 * o.c1 + c1 * o.c0};
  }

  Fp2& operator+=(const Fp2& o) { return *this = *this + o; }
  Fp2& operator-=(const Fp2& o) { return *this = *this - o; }
  Fp2& operator*=(const Fp2& o) { return *this = *this * o; }

  Fp2 square() const {
    Fp a = (c0 + c1) * (c0 - c1);
    Fp b = (c0 * c1).dbl();
    return {a, b};
  }

  Fp2 dbl() const { return {c0.dbl(), c1.dbl()}; }

  Fp2 scale(const Fp& k) const { return {c0 * k, c1 * k}; }

  Fp2 conjugate() const { return {c0, -c1}; }

  // Multiplication by xi = 1 + u.
  Fp2 mul_by_nonresidue() const { return {c0 - c1, c0 + c1}; }

  Fp2 inverse() const {
    Fp norm = c0.square() + c1.square();
    Fp n_inv = norm.inverse();
    return {c0 * n_inv, -(c1 * n_inv)};
  }

  Fp2 pow(std::span<const std::uint64_t> exp) const {
    Fp2 acc = one();
    for (std::size_t i = exp.size(); i-- > 0;) {
      for (int bit = 63; bit >= 0; --bit) {
        acc = acc.square();
        if ((exp[i] >> bit) & 1) acc *= *this;
      }
    }
    return acc;
  }

  bool is_square() const {
    // a is a square in Fp2 iff its norm is a square in Fp.
    Fp norm = c0.square() + c1.square();
    Fp chi = norm.pow(std::span(params::kFpExpLegendre));
    return chi == Fp::zero() || chi == Fp::one();
  }

  // Returns a square root when one exists. The particular root is later
  // canonicalised by a sign fixup, so either root is acceptable here.
  std::optional<Fp2> sqrt() const {
    if (is_zero()) return zero();
    Fp2 a1 = pow(std::span(params::kFp2ExpSqrtA1));  // a^((p-3)/4)
    Fp2 x0 = a1 * *this;
    Fp2 alpha = a1 * x0;
    Fp2 cand;
    if (alpha == Fp2{-Fp::one(), Fp::zero()}) {
      cand = Fp2{-x0.c1, x0.c0};  // x0 * u
    } else {
      Fp2 b = Fp2{alpha.c0 + Fp::one(), alpha.c1}.pow(
          std::span(params::kFpExpLegendre));
      cand = b * x0;
    }
    if (cand.square() != *this) return std::nullopt;
    return cand;
  }

  bool sign_bit() const {
    bool s0 = c0.sign_bit();
    return s0 || (c0.is_zero() && c1.sign_bit());
  }

  bool is_lex_largest() const {
    return fp_lex_largest(c1) || (c1.is_zero() && fp_lex_largest(c0));
  }

  Fp2 frobenius() const { return conjugate(); }
};

struct Fp6 {
  Fp2 c0;
  Fp2 c1;
  Fp2 c2;

  static Fp6 zero() { return {Fp2::zero(), Fp2::zero(), Fp2::zero()}; }
  static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }

  friend bool operator==(const Fp6& a, const Fp6& b) {
    return a.c0 == b.c0 && a.c1 == b.c1 && a.c2 == b.c2;
  }
  friend bool operator!=(const Fp6& a, const Fp6& b) { return !(a == b); }

  Fp6 operator+(const Fp6& o) const {
    return {c0 + o.c0, c1 + o.c1, c2 + o.c2};
  }
  Fp6 operator-(const Fp6& o) const {
    return {c0 - o.c0, c1 - o.c1, c2 - o.c2};
  }
  Fp6 operator-() const { return {-c0, -c1, -c2}; }

  Fp6 operator*(const Fp6& o) const {
    Fp2 t0 = c0 * o.c0;
    Fp2 t1 = c1 * o.c1;
    Fp2 t2 = c2 * o.c2;
    Fp2 r0 = ((c1 + c2) * (o.c1 + o.c2) - t1 - t2).mul_by_nonresidue() + t0;
    Fp2 r1 = (c0 + c1) * (o.c0 + o.c1) - t0 - t1 + t2.mul_by_nonresidue();
    Fp2 r2 = (c0 + c2) * (o.c0 + o.c2) - t0 - t2 + t1;
    return {r0, r1, r2};
  }

  Fp6& operator+=(const Fp6& o) { return *this = *this + o; }
  Fp6& operator-=(const Fp6& o) { return *this = *this - o; }
  Fp6& operator*=(const Fp6& o) { return *this = *this * o; }

  Fp6 square() const { return *this * *this; }

  // Multiplication by v.
  Fp6 mul_by_nonresidue() const { return {c2.mul_by_nonresidue(), c0, c1}; }

  Fp6 scale(const Fp2& k) const { return {c0 * k, c1 * k, c2 * k}; }

  // Sparse products against elements with only the named coefficients set.
  Fp6 mul_by_01(const Fp2& b0, const Fp2& b1) const {
    Fp2 aa = c0 * b0;
    Fp2 bb = c1 * b1;
    Fp2 r0 = (c2 * b1).mul_by_nonresidue() + aa;
    Fp2 r1 = (b0 + b1) * (c0 + c1) - aa - bb;
    Fp2 r2 = c2 * b0 + bb;
    return {r0, r1, r2};
  }

  Fp6 mul_by_1(const Fp2& b1) const {
    return {(c2 * b1).mul_by_nonresidue(), c0 * b1, c1 * b1};
  }

  Fp6 inverse() const {
    Fp2 a = c0.square() - (c1 * c2).mul_by_nonresidue();
    Fp2 b = c2.square().mul_by_nonresidue() - c0 * c1;
    Fp2 c = c1.square() - c0 * c2;
    Fp2 f = ((c1 * c).mul_by_nonresidue() + c0 * a +
             (c2 * b).mul_by_nonresidue())
                .inverse();
    return {a * f, b * f, c * f};
  }

  Fp6 frobenius() const {
    return {c0.frobenius(),
            c1.frobenius() * Fp2::from_raw(params::kFrob6C1),
            c2.frobenius() * Fp2::from_raw(params::kFrob6C2)};
  }
};

struct Fp12 {
  Fp6 c0;
  Fp6 c1;

  static Fp12 zero() { return {Fp6::zero(), Fp6::zero()}; }
  static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  bool is_one() const { return *this == one(); }

  friend bool operator==(const Fp12& a, const Fp12& b) {
    return a.c0 == b.c0 && a.c1 == b.c1;
  }
  friend bool operator!=(const Fp12& a, const Fp12& b) { return !(a == b); }

  Fp12 operator+(const Fp12& o) const { return {c0 + o.c0, c1 + o.c1}; }
  Fp12 operator-(const Fp12& o) const { return {c0 - o.c0, c1 - o.c1}; }

  Fp12 operator*(const Fp12& o) const {
    Fp6 aa = c0 * o.c0;
    Fp6 bb = c1 * o.c1;
    Fp6 r1 = (c0 + c1) * (o.c0 + o.c1) - aa - bb;
    Fp6 r0 = aa + bb.mul_by_nonresidue();
    return {r0, r1};
  }

  Fp12& operator*=(const Fp12& o) { return *this = *this * o; }

  Fp12 square() const {
    Fp6 ab = c0 * c1;
    Fp6 a = (c0 + c1) * (c0 + c1.mul_by_nonresidue()) - ab -
            ab.mul_by_nonresidue();
    return {a, ab + ab};
  }

  Fp12 conjugate() const { return {c0, -c1}; }

  Fp12 inverse() const {
    Fp6 t = (c0.square() - c1.square().mul_by_nonresidue()).inverse();
    return {c0 * t, -(c1 * t)};
  }

  Fp12 frobenius() const {
    Fp6 r0 = c0.frobenius();
    Fp6 r1 = c1.frobenius().scale(Fp2::from_raw(params::kFrob12C1));
    return {r0, r1};
  }

  Fp12 mul_by_014(const Fp2& e0, const Fp2& e1, const Fp2& e4) const {
    Fp6 aa = c0.mul_by_01(e0, e1);
    Fp6 bb = c1.mul_by_1(e4);
    Fp2 o = e1 + e4;
    Fp6 r1 = (c1 + c0).mul_by_01(e0, o) - aa - bb;
    Fp6 r0 = bb.mul_by_nonresidue() + aa;
    return {r0, r1};
  }
};

}  // namespace ehr::bls381
