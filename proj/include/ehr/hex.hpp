#pragma once

#include <optional>
#include <string>

#include "ehr/bytes.hpp"

namespace ehr {

std::string to_hex(BytesView data);
std::optional<Bytes> from_hex(std::string_view hex);

}  // namespace ehr
