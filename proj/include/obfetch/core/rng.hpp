#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace obfetch {

using Seed32 = std::array<uint8_t, 32>;

/// Deterministic ChaCha20 keystream reader (libsodium core). The same
/// (seed, stream) pair yields the same byte sequence on every platform,
/// which is what lets client and proxy regenerate hyperplanes and query
/// masks independently. Production call sites seed from the OS; tests pin
/// seeds.
class SeedRng {
 public:
  explicit SeedRng(const Seed32& seed, uint64_t stream = 0);

  void fill(std::span<uint8_t> out);
  uint8_t next_u8();
  uint32_t next_u32();
  uint64_t next_u64();

  /// Uniform in [0, bound) by rejection; bound must be nonzero.
  uint32_t uniform(uint32_t bound);

  /// Centered binomial: sum(k bits) - sum(k bits); variance k/2. k <= 32.
  int32_t centered_binomial(int k);

  /// Uniform over {-1, 0, 1}.
  int32_t ternary();

  /// Fresh entropy from the operating system.
  static Seed32 os_seed();

 private:
  void refill();

  Seed32 key_;
  std::array<uint8_t, 8> nonce_;
  uint64_t block_ = 0;
  std::array<uint8_t, 4096> buf_;
  size_t pos_ = sizeof(buf_);
};

}  // namespace obfetch
