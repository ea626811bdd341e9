#pragma once

#include <cstdint>
#include <string_view>

namespace rolp {

// 32-bit FNV-1a.
uint32_t fnv1a32(std::string_view bytes);
uint64_t fnv1a64(std::string_view bytes);

// 16-bit identifiers: FNV-1a folded by xor of the two halves.
uint16_t method_hash(std::string_view signature);
uint16_t site_id(std::string_view signature, int64_t line);

}  // namespace rolp
