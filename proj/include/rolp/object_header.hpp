#pragma once

#include <cstdint>

namespace rolp {

// 64-bit object header word.
//
//  63                            32 31                  8   7   6     3 2      0
//  [      allocation context      |    identity hash     | - |  age  | lock   ]
//
// The context occupies the half of the word that a biased lock would claim
// for its owner thread, so locking an object destroys its profiling data.
class ObjectHeader {
 public:
  static constexpr unsigned lock_shift = 0;
  static constexpr unsigned lock_width = 3;
  static constexpr unsigned age_shift = 3;
  static constexpr unsigned age_width = 4;
  static constexpr unsigned hash_shift = 8;
  static constexpr unsigned hash_width = 24;
  static constexpr unsigned context_shift = 32;

  static constexpr unsigned max_age = (1u << age_width) - 1;
  static constexpr uint32_t max_identity_hash = (1u << hash_width) - 1;
  static constexpr unsigned max_lock_bits = (1u << lock_width) - 1;

  // Lock pattern of a biased object (biased bit + unlocked).
  static constexpr unsigned biased_lock_pattern = 0b101;

  constexpr ObjectHeader() = default;
  constexpr explicit ObjectHeader(uint64_t raw) : _raw(raw) {}

  // Throws std::out_of_range if any field does not fit its slot.
  static ObjectHeader pack(unsigned lock_bits, unsigned age, uint32_t identity_hash,
                           uint32_t alloc_context);

  constexpr uint64_t raw() const { return _raw; }
  constexpr unsigned lock_bits() const { return field(lock_shift, lock_width); }
  constexpr unsigned age() const { return field(age_shift, age_width); }
  constexpr uint32_t identity_hash() const { return field(hash_shift, hash_width); }
  constexpr uint32_t alloc_context() const { return static_cast<uint32_t>(_raw >> context_shift); }
  constexpr bool is_biased() const { return lock_bits() == biased_lock_pattern; }

  ObjectHeader with_age(unsigned age) const;
  ObjectHeader with_lock_bits(unsigned lock_bits) const;

  // Replaces bits 32..63, leaves the lower word alone.
  constexpr ObjectHeader with_context(uint32_t alloc_context) const {
    return ObjectHeader((_raw & 0xFFFFFFFFull) | (uint64_t{alloc_context} << context_shift));
  }

  friend constexpr bool operator==(ObjectHeader, ObjectHeader) = default;

 private:
  constexpr uint32_t field(unsigned shift, unsigned width) const {
    return static_cast<uint32_t>((_raw >> shift) & ((uint64_t{1} << width) - 1));
  }

  uint64_t _raw = 0;
};

inline ObjectHeader install_context(ObjectHeader header, uint32_t alloc_context) {
  return header.with_context(alloc_context);
}

}  // namespace rolp
