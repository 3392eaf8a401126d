#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "ehr/bls381/hash_to_g2.hpp"
#include "ehr/bls381/pairing.hpp"
#include "ehr/rng.hpp"
#include "support/vectors.hpp"

using namespace ehr;
using namespace ehr::bls381;

namespace {

#include "support/final_exp_hard.inc"

Fr random_fr(RandomSource& rng) { return fr_from_wide_bytes(rng.bytes(64)); }

Fp12 pow_hex(const Fp12& base, const std::string& hex) {
  Fp12 acc = Fp12::one();
  for (char c : hex) {
    int nib = c <= '9' ? c - '0' : c - 'a' + 10;
    for (int bit = 3; bit >= 0; --bit) {
      acc = acc.square();
      if ((nib >> bit) & 1) acc *= base;
    }
  }
  return acc;
}

// Final exponentiation from first principles: the easy quotient followed by
// a plain square-and-multiply of the hard exponent (the threefold multiple
// the optimised chain targets).
Fp12 final_exp_reference(const Fp12& f) {
  Fp12 easy = f.conjugate() * f.inverse();  // f^(p^6 - 1)
  easy = easy.frobenius().frobenius() * easy;
  return pow_hex(easy, kFinalExpHardHex);
}

}  // namespace

TEST_CASE("fast final exponentiation equals the definitional one") {
  SeededRandom rng("final-exp");
  G1Affine p = to_affine(g1_generator() * random_fr(rng));
  G2Affine q = to_affine(g2_generator() * random_fr(rng));
  Fp12 m = miller_loop(p, q);
  CHECK(final_exponentiation(m) == final_exp_reference(m));

  Fp12 m2 = miller_loop(to_affine(g1_generator()), q);
  CHECK(final_exponentiation(m2) == final_exp_reference(m2));
}

TEST_CASE("bilinearity") {
  SeededRandom rng("bilinearity");
  Fr a = random_fr(rng);
  Fr b = random_fr(rng);
  G1Affine g = to_affine(g1_generator());
  G2Affine h = to_affine(g2_generator());
  G1Affine ga = to_affine(g1_generator() * a);
  G2Affine hb = to_affine(g2_generator() * b);

  Fp12 base = pairing(g, h);
  CHECK(pairing(ga, hb) == gt_pow(base, a * b));
  CHECK(pairing(ga, h) == gt_pow(base, a));
  CHECK(pairing(g, hb) == gt_pow(base, b));

  // Multiplicativity in each slot.
  G2Affine h2 = to_affine(g2_generator() * b + g2_generator());
  CHECK(pairing(g, h2) == pairing(g, hb) * pairing(g, h));
}

TEST_CASE("non-degeneracy and group order") {
  G1Affine g = to_affine(g1_generator());
  G2Affine h = to_affine(g2_generator());
  Fp12 e = pairing(g, h);
  CHECK(e != Fp12::one());
  CHECK(gt_pow(e, Fr::zero() - Fr::one()) * e == Fp12::one());
  CHECK(pairing(g, to_affine(g2_generator() * (Fr::zero() - Fr::one()))) ==
        e.conjugate());  // inverse in the cyclotomic subgroup
}

TEST_CASE("identity inputs pair to one") {
  G1Affine g = to_affine(g1_generator());
  G2Affine h = to_affine(g2_generator());
  CHECK(pairing(G1Affine::identity(), h) == Fp12::one());
  CHECK(pairing(g, G2Affine::identity()) == Fp12::one());
  CHECK(miller_loop(G1Affine::identity(), h) == Fp12::one());
}

TEST_CASE("signature vectors satisfy the pairing equation") {
  constexpr std::string_view kDst = "BLS_SIG_BLS12381G2_XMD:SHA-256_SSWU_RO_NUL_";
  auto vecs = test::load_vectors("bls_sig.json");
  G1Affine g = to_affine(g1_generator());
  for (const auto& c : vecs) {
    auto pk = g1_from_compressed(test::unhex(c["pk"]));
    auto sig = g2_from_compressed(test::unhex(c["sig"]));
    REQUIRE(pk.has_value());
    REQUIRE(sig.has_value());
    Bytes msg = test::unhex(c["msg"]);
    G2Affine hm = to_affine(hash_to_g2(msg, kDst));
    CHECK(pairing(g, *sig) == pairing(*pk, hm));

    // Recomputing the signature from the recorded secret key must agree.
    auto sk = Fr::from_bytes_be(test::unhex(c["sk"]));
    REQUIRE(sk.has_value());
    CHECK(to_affine(hash_to_g2(msg, kDst) * *sk) == *sig);
    CHECK(to_affine(g1_generator() * *sk) == *pk);
  }

  auto bad = test::load_vectors("bls_sig_invalid.json");
  for (const auto& c : bad) {
    auto pk = g1_from_compressed(test::unhex(c["pk"]));
    auto sig = g2_from_compressed(test::unhex(c["sig"]));
    REQUIRE(pk.has_value());
    REQUIRE(sig.has_value());
    G2Affine hm = to_affine(hash_to_g2(test::unhex(c["msg"]), kDst));
    CHECK(pairing(g, *sig) != pairing(*pk, hm));
  }
}
