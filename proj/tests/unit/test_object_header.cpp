#include <doctest.h>

#include <random>
#include <stdexcept>

#include "rolp/heap.hpp"
#include "rolp/object_header.hpp"

using rolp::ObjectHeader;

TEST_CASE("header fields land in their documented bit ranges") {
  ObjectHeader h = ObjectHeader::pack(0b101, 9, 0xABCDEF, 0x12345678);
  CHECK(h.raw() == ((uint64_t{0x12345678} << 32) | (uint64_t{0xABCDEF} << 8) | (9u << 3) | 0b101));
  CHECK(h.lock_bits() == 0b101);
  CHECK(h.age() == 9);
  CHECK(h.identity_hash() == 0xABCDEF);
  CHECK(h.alloc_context() == 0x12345678);
  CHECK(h.is_biased());
  // bit 7 is never set by pack
  CHECK((h.raw() & 0x80) == 0);
}

TEST_CASE("pack rejects oversized fields") {
  CHECK_THROWS_AS(ObjectHeader::pack(8, 0, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(ObjectHeader::pack(0, 16, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(ObjectHeader::pack(0, 0, 1u << 24, 0), std::out_of_range);
  CHECK_NOTHROW(ObjectHeader::pack(7, 15, (1u << 24) - 1, 0xFFFFFFFF));
}

TEST_CASE("pack/unpack round trip over every lock and age value") {
  std::mt19937_64 rng(7);
  for (unsigned lock = 0; lock <= ObjectHeader::max_lock_bits; ++lock) {
    for (unsigned age = 0; age <= ObjectHeader::max_age; ++age) {
      for (int i = 0; i < 200; ++i) {
        auto hash = static_cast<uint32_t>(rng()) & ObjectHeader::max_identity_hash;
        auto ctx = static_cast<uint32_t>(rng());
        ObjectHeader h = ObjectHeader::pack(lock, age, hash, ctx);
        REQUIRE(h.lock_bits() == lock);
        REQUIRE(h.age() == age);
        REQUIRE(h.identity_hash() == hash);
        REQUIRE(h.alloc_context() == ctx);
        REQUIRE(ObjectHeader(h.raw()) == h);
      }
    }
  }
}

TEST_CASE("installing a context leaves the low word untouched") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    ObjectHeader h(rng());
    auto ctx = static_cast<uint32_t>(rng());
    ObjectHeader out = rolp::install_context(h, ctx);
    REQUIRE((out.raw() & 0xFFFFFFFFull) == (h.raw() & 0xFFFFFFFFull));
    REQUIRE(out.alloc_context() == ctx);
  }
}

TEST_CASE("with_age and with_lock_bits only touch their own field") {
  ObjectHeader h = ObjectHeader::pack(1, 3, 0x123456, 0xCAFEBABE);
  ObjectHeader aged = h.with_age(15);
  CHECK(aged.age() == 15);
  CHECK(aged.lock_bits() == 1);
  CHECK(aged.identity_hash() == 0x123456);
  CHECK(aged.alloc_context() == 0xCAFEBABE);
  ObjectHeader locked = h.with_lock_bits(ObjectHeader::biased_lock_pattern);
  CHECK(locked.is_biased());
  CHECK(locked.age() == 3);
  CHECK_THROWS(h.with_age(16));
}

TEST_CASE("biased locking overwrites the installed context") {
  rolp::HeapConfig cfg;
  rolp::Heap heap(cfg, rolp::HeapLayout::n_generational(cfg));
  auto out = heap.allocate(0, 64, 0xBEEF0042, 1000, true);
  REQUIRE(out.ok());
  CHECK(heap.object(*out.object).header.alloc_context() == 0xBEEF0042);
  heap.bias_lock(*out.object, 3);
  const auto& obj = heap.object(*out.object);
  CHECK(obj.header.is_biased());
  CHECK(obj.header.alloc_context() == rolp::Heap::thread_marker(3));
  CHECK_FALSE(obj.profiled);
}
