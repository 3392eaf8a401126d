#pragma once

#include "ehr/bls381/g1.hpp"
#include "ehr/bls381/g2.hpp"
#include "ehr/bls381/tower.hpp"

namespace ehr::bls381 {

// Optimal ate Miller loop. Returns one when either input is the identity.
Fp12 miller_loop(const G1Affine& p, const G2Affine& qa);

// Maps a Miller loop output into the order-r target group.
Fp12 final_exponentiation(const Fp12& f);

Fp12 pairing(const G1Affine& p, const G2Affine& q);

// Exponentiation in the target group (variable time).
Fp12 gt_pow(const Fp12& base, const Fr& e);

}  // namespace ehr::bls381
