#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "obfetch/core/rng.hpp"
#include "obfetch/core/serde.hpp"
#include "obfetch/pir/database.hpp"
#include "obfetch/pir/fold.hpp"
#include "obfetch/pir/ntt.hpp"
#include "obfetch/pir/params.hpp"

namespace obfetch::pir {

/// Server half of the lattice backend: the database encoded as centered byte
/// polynomials, NTT-transformed once per snapshot, plus the staged fold that
/// answers queries. Immutable after construction; reply() is const and safe
/// to call from many threads.
class LatticeServer {
 public:
  LatticeServer(const PirParams& params, const PirDatabase& db);

  Bytes reply(std::span<const uint8_t> query_payload, FoldMode mode) const;

  const LatticeLayout& layout() const { return layout_; }

 private:
  PirParams params_;
  LatticeLayout layout_;
  NttContext ntt_;
  std::vector<uint32_t> db_ntt_;  // padded_records * stage_chunks[0] * degree
};

/// Client half: holds the ring secret, builds encrypted indicator vectors,
/// and peels fold stages out of a reply. One instance per session.
class LatticeClient {
 public:
  /// Generates a fresh ternary secret from rng.
  LatticeClient(const PirParams& params, SeedRng& rng);
  /// Restores a client from a serialized secret (signed coefficient bytes).
  LatticeClient(const PirParams& params, std::span<const uint8_t> secret_key);

  Bytes query_payload(uint32_t index, SeedRng& rng) const;
  /// Returns the record; raises DecryptionFailure when the embedded checksum
  /// rejects the decode.
  Bytes extract(std::span<const uint8_t> reply_payload) const;

  Bytes serialize_secret() const;

 private:
  void set_secret(std::span<const int8_t> coeffs);
  void decrypt_ct(std::span<const uint32_t> a, std::span<const uint32_t> b,
                  std::span<uint8_t> out_bytes) const;

  PirParams params_;
  LatticeLayout layout_;
  NttContext ntt_;
  std::vector<int8_t> secret_;        // ternary ring coefficients
  std::vector<uint32_t> secret_ntt_;  // with Shoup companions below
  std::vector<uint32_t> secret_ntt_shoup_;
};

/// Uniform NTT-domain polynomial shared by client and server: both expand
/// the query's a-parts from the 32-byte wire seed.
void expand_uniform_poly(const Seed32& seed, uint64_t stream, uint32_t modulus,
                         std::span<uint32_t> out);

/// Centered byte encoding used for every fold multiplicand: coefficient
/// (byte - 128) lifted into Z_q. Bytes beyond `bytes.size()` pad as zero.
void encode_centered_bytes(std::span<const uint8_t> bytes, uint32_t modulus,
                           std::span<uint32_t> out_coeffs);

uint32_t crc32_of(std::span<const uint8_t> data);

}  // namespace obfetch::pir
