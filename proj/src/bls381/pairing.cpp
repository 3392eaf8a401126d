#include "ehr/bls381/pairing.hpp"

namespace ehr::bls381 {

namespace {

struct LineCoeffs {
  Fp2 c0;
  Fp2 c1;
  Fp2 c2;
};

// Doubling and addition steps from eprint 2010/354, algorithms 26 and 27,
// producing the line coefficients alongside the updated accumulator.
LineCoeffs doubling_step(G2& r) {
  Fp2 tmp0 = r.x.square();
  Fp2 tmp1 = r.y.square();
  Fp2 tmp2 = tmp1.square();
  Fp2 tmp3 = ((tmp1 + r.x).square() - tmp0 - tmp2).dbl();
  Fp2 tmp4 = tmp0 + tmp0 + tmp0;
  Fp2 tmp6 = r.x + tmp4;
  Fp2 tmp5 = tmp4.square();
  Fp2 zsquared = r.z.square();
  r.x = tmp5 - tmp3 - tmp3;
  r.z = (r.z + r.y).square() - tmp1 - zsquared;
  r.y = (tmp3 - r.x) * tmp4 - tmp2.dbl().dbl().dbl();
  Fp2 l1 = -(tmp4 * zsquared).dbl();
  Fp2 l2 = tmp6.square() - tmp0 - tmp5 - tmp1.dbl().dbl();
  Fp2 l0 = (r.z * zsquared).dbl();
  return {l0, l1, l2};
}

LineCoeffs addition_step(G2& r, const G2Affine& q) {
  Fp2 zsquared = r.z.square();
  Fp2 ysquared = q.y.square();
  Fp2 t0 = zsquared * q.x;
  Fp2 t1 = ((q.y + r.z).square() - ysquared - zsquared) * zsquared;
  Fp2 t2 = t0 - r.x;
  Fp2 t3 = t2.square();
  Fp2 t4 = t3.dbl().dbl();
  Fp2 t5 = t4 * t2;
  Fp2 t6 = t1 - r.y - r.y;
  Fp2 t9 = t6 * q.x;
  Fp2 t7 = t4 * r.x;
  r.x = t6.square() - t5 - t7.dbl();
  r.z = (r.z + t2).square() - zsquared - t3;
  Fp2 t10 = q.y + r.z;
  Fp2 t8 = (t7 - r.x) * t6;
  r.y = t8 - (r.y * t5).dbl();
  t10 = t10.square() - ysquared - r.z.square();
  t9 = t9.dbl() - t10;
  Fp2 l0 = r.z.dbl();
  Fp2 l1 = -t6.dbl();
  return {l0, l1, t9};
}

Fp12 ell(const Fp12& f, const LineCoeffs& coeffs, const G1Affine& p) {
  Fp2 c0 = coeffs.c0.scale(p.y);
  Fp2 c1 = coeffs.c1.scale(p.x);
  return f.mul_by_014(coeffs.c2, c1, c0);
}

// (a + bw)^2 in Fp4 = Fp2[w]/(w^2 - xi); used by the cyclotomic square.
void fp4_square(Fp2& out_a, Fp2& out_b, const Fp2& a, const Fp2& b) {
  Fp2 t0 = a.square();
  Fp2 t1 = b.square();
  out_a = t1.mul_by_nonresidue() + t0;
  out_b = (a + b).square() - t0 - t1;
}

// Granger-Scott squaring, valid only in the cyclotomic subgroup.
Fp12 cyclotomic_square(const Fp12& f) {
  Fp2 z0 = f.c0.c0;
  Fp2 z4 = f.c0.c1;
  Fp2 z3 = f.c0.c2;
  Fp2 z2 = f.c1.c0;
  Fp2 z1 = f.c1.c1;
  Fp2 z5 = f.c1.c2;

  Fp2 t0, t1, t2, t3;
  fp4_square(t0, t1, z0, z1);
  z0 = (t0 - z0).dbl() + t0;
  z1 = (t1 + z1).dbl() + t1;

  fp4_square(t0, t1, z2, z3);
  fp4_square(t2, t3, z4, z5);
  z4 = (t0 - z4).dbl() + t0;
  z5 = (t1 + z5).dbl() + t1;

  t0 = t3.mul_by_nonresidue();
  z2 = (t0 + z2).dbl() + t0;
  z3 = (t2 - z3).dbl() + t2;

  return {{z0, z4, z3}, {z2, z1, z5}};
}

// f^|x| via cyclotomic squarings, then inverted because x is negative.
Fp12 cyclotomic_exp(const Fp12& f) {
  Fp12 tmp = Fp12::one();
  bool found_one = false;
  for (int i = 63; i >= 0; --i) {
    bool bit = (params::kBlsX >> i) & 1;
    if (found_one)
      tmp = cyclotomic_square(tmp);
    else
      found_one = bit;
    if (bit) tmp *= f;
  }
  return tmp.conjugate();
}

}  // namespace

Fp12 miller_loop(const G1Affine& p, const G2Affine& qa) {
  if (p.infinity || qa.infinity) return Fp12::one();
  G2 r = qa.to_jacobian();
  Fp12 f = Fp12::one();
  bool found_one = false;
  constexpr std::uint64_t kLoopBits = params::kBlsX >> 1;
  for (int i = 63; i >= 0; --i) {
    bool bit = (kLoopBits >> i) & 1;
    if (!found_one) {
      found_one = bit;
      continue;
    }
    f = ell(f, doubling_step(r), p);
    if (bit) f = ell(f, addition_step(r, qa), p);
    f = f.square();
  }
  f = ell(f, doubling_step(r), p);
  return f.conjugate();  // the curve parameter is negative
}

Fp12 final_exponentiation(const Fp12& f) {
  // Easy part: f^((p^6 - 1)(p^2 + 1)).
  Fp12 t0 = f.conjugate();  // f^(p^6)
  Fp12 t1 = f.inverse();
  Fp12 t2 = t0 * t1;
  t1 = t2;
  t2 = t2.frobenius().frobenius() * t1;

  // Hard part, addition chain in terms of the curve parameter.
  t1 = cyclotomic_square(t2).conjugate();
  Fp12 t3 = cyclotomic_exp(t2);
  Fp12 t4 = cyclotomic_square(t3);
  Fp12 t5 = t1 * t3;
  t1 = cyclotomic_exp(t5);
  t0 = cyclotomic_exp(t1);
  Fp12 t6 = cyclotomic_exp(t0) * t4;
  t4 = cyclotomic_exp(t6);
  t5 = t5.conjugate();
  t4 *= t5 * t2;
  t5 = t2.conjugate();
  t1 *= t2;
  t1 = t1.frobenius().frobenius().frobenius();
  t6 *= t5;
  t6 = t6.frobenius();
  t3 *= t0;
  t3 = t3.frobenius().frobenius() * t1 * t6;
  return t3 * t4;
}

Fp12 pairing(const G1Affine& p, const G2Affine& q) {
  return final_exponentiation(miller_loop(p, q));
}

Fp12 gt_pow(const Fp12& base, const Fr& e) {
  Fp12 acc = Fp12::one();
  auto limbs = e.canonical();
  for (std::size_t i = limbs.size(); i-- > 0;) {
    for (int bit = 63; bit >= 0; --bit) {
      acc = acc.square();
      if ((limbs[i] >> bit) & 1) acc *= base;
    }
  }
  return acc;
}

}  // namespace ehr::bls381
