#pragma once

#include <string_view>

#include "ehr/bls381/g2.hpp"
#include "ehr/bytes.hpp"

namespace ehr::bls381 {

// expand_message_xmd with SHA-256 (RFC 9380 section 5.3.1).
Bytes expand_message_xmd(BytesView msg, BytesView dst, std::size_t len);

// Full hash-to-curve for G2: hash_to_field, simplified SWU on the 3-isogenous
// curve twice, isogeny evaluation, then cofactor clearing.
G2 hash_to_g2(BytesView msg, std::string_view dst);

}  // namespace ehr::bls381
