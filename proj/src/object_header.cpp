#include "rolp/object_header.hpp"

#include <stdexcept>
#include <string>

namespace rolp {

namespace {

void check_range(const char* name, uint64_t value, uint64_t max) {
  if (value > max) {
    throw std::out_of_range(std::string("object header field '") + name + "' out of range: " +
                            std::to_string(value) + " > " + std::to_string(max));
  }
}

}  // namespace

ObjectHeader ObjectHeader::pack(unsigned lock_bits, unsigned age, uint32_t identity_hash,
                                uint32_t alloc_context) {
  check_range("lock_bits", lock_bits, max_lock_bits);
  check_range("age", age, max_age);
  check_range("identity_hash", identity_hash, max_identity_hash);
  uint64_t raw = uint64_t{lock_bits} << lock_shift;
  raw |= uint64_t{age} << age_shift;
  raw |= uint64_t{identity_hash} << hash_shift;
  raw |= uint64_t{alloc_context} << context_shift;
  return ObjectHeader(raw);
}

ObjectHeader ObjectHeader::with_age(unsigned age) const {
  check_range("age", age, max_age);
  uint64_t mask = uint64_t{max_age} << age_shift;
  return ObjectHeader((_raw & ~mask) | (uint64_t{age} << age_shift));
}

ObjectHeader ObjectHeader::with_lock_bits(unsigned lock_bits) const {
  check_range("lock_bits", lock_bits, max_lock_bits);
  uint64_t mask = uint64_t{max_lock_bits} << lock_shift;
  return ObjectHeader((_raw & ~mask) | (uint64_t{lock_bits} << lock_shift));
}

}  // namespace rolp
