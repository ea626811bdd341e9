#include "rolp/hashing.hpp"

#include <string>

namespace rolp {

uint32_t fnv1a32(std::string_view bytes) {
  uint32_t h = 2166136261u;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

uint16_t fold16(uint32_t h) { return static_cast<uint16_t>((h >> 16) ^ (h & 0xFFFFu)); }

}  // namespace

uint16_t method_hash(std::string_view signature) { return fold16(fnv1a32(signature)); }

uint16_t site_id(std::string_view signature, int64_t line) {
  std::string key(signature);
  key += ':';
  key += std::to_string(line);
  return fold16(fnv1a32(key));
}

}  // namespace rolp
