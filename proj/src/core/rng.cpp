#include "obfetch/core/rng.hpp"

#include <sodium.h>

#include <bit>
#include <cstring>
#include <stdexcept>

namespace obfetch {

SeedRng::SeedRng(const Seed32& seed, uint64_t stream) : key_(seed) {
  for (int i = 0; i < 8; ++i) nonce_[static_cast<size_t>(i)] = static_cast<uint8_t>(stream >> (8 * i));
}

void SeedRng::refill() {
  static const std::array<uint8_t, 4096> kZeros{};
  crypto_stream_chacha20_xor_ic(buf_.data(), kZeros.data(), buf_.size(), nonce_.data(), block_,
                                key_.data());
  block_ += buf_.size() / 64;
  pos_ = 0;
}

void SeedRng::fill(std::span<uint8_t> out) {
  size_t off = 0;
  while (off < out.size()) {
    if (pos_ == buf_.size()) refill();
    size_t n = std::min(out.size() - off, buf_.size() - pos_);
    std::memcpy(out.data() + off, buf_.data() + pos_, n);
    pos_ += n;
    off += n;
  }
}

uint8_t SeedRng::next_u8() {
  uint8_t b;
  fill({&b, 1});
  return b;
}

uint32_t SeedRng::next_u32() {
  uint8_t b[4];
  fill(b);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

uint64_t SeedRng::next_u64() {
  uint8_t b[8];
  fill(b);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

uint32_t SeedRng::uniform(uint32_t bound) {
  // Rejection sampling over the largest multiple of bound below 2^32.
  uint32_t limit = bound * (UINT32_C(0xFFFFFFFF) / bound);
  for (;;) {
    uint32_t v = next_u32();
    if (v < limit) return v % bound;
  }
}

int32_t SeedRng::centered_binomial(int k) {
  uint64_t bits = next_u64();
  uint64_t mask = (k == 32) ? 0xFFFFFFFFull : ((1ull << k) - 1);
  int a = std::popcount(bits & mask);
  int b = std::popcount((bits >> k) & mask);
  return a - b;
}

int32_t SeedRng::ternary() {
  for (;;) {
    uint8_t v = next_u8() & 3;
    if (v < 3) return static_cast<int32_t>(v) - 1;
  }
}

Seed32 SeedRng::os_seed() {
  if (sodium_init() < 0) throw std::runtime_error("sodium_init failed");
  Seed32 s;
  randombytes_buf(s.data(), s.size());
  return s;
}

}  // namespace obfetch
