#pragma once

#include <array>
#include <cstdint>

namespace ehr::bls381::params {
#include "ehr/bls381/params.inc"
}  // namespace ehr::bls381::params
