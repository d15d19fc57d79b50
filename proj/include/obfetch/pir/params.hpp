#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "obfetch/pir/ntt.hpp"

namespace obfetch::pir {

enum class Backend : uint8_t { trivial = 0, lattice = 1 };

inline constexpr uint32_t kPlainModulus = 256;  // one byte per ring coefficient
inline constexpr uint32_t kRecordChecksumBytes = 4;
inline constexpr uint32_t kQuerySeedBytes = 32;

/// Ring-LWE configuration for the lattice backend. The secret dimension is
/// the ring degree, so one ciphertext covers secret_dim plaintext bytes.
struct LatticeConfig {
  uint32_t modulus = kDefaultModulus;
  uint32_t secret_dim = 1024;
  double noise_stddev = 3.2;
  std::vector<uint32_t> hypercube_dims;  // product must cover num_records
};

struct PirParams {
  Backend backend = Backend::trivial;
  uint32_t record_size = 0;
  uint32_t num_records = 0;
  uint64_t db_epoch = 0;        // version of the database snapshot queries bind to
  uint64_t storage_budget = 0;  // client-side record budget (parameter c); informational
  double failure_log2 = -40.0;  // admissible per-query decryption failure probability
  LatticeConfig lattice;        // ignored for the trivial backend

  /// Fingerprint binding a query to one database layout; goes on the wire.
  uint64_t hash() const;

  size_t query_payload_bytes() const;
  size_t reply_payload_bytes() const;
  size_t query_wire_bytes() const;
  size_t reply_wire_bytes() const;
  double reply_expansion() const;
};

/// Byte/chunk bookkeeping for the staged fold. stage_bytes[s] is the size of
/// one data entry entering stage s; entries of stage s+1 are the serialized
/// ciphertexts produced by stage s.
struct LatticeLayout {
  uint32_t degree = 0;
  std::vector<uint32_t> dims;
  std::vector<size_t> stage_bytes;
  std::vector<size_t> stage_chunks;  // ceil(stage_bytes / degree)
  size_t padded_records = 0;         // product of dims
  size_t reply_cts = 0;              // chunks of the final stage
};

LatticeLayout lattice_layout(const LatticeConfig& cfg, uint32_t record_size);

std::vector<uint32_t> default_hypercube_dims(uint32_t num_records);

/// Centered-binomial parameter used by the noise sampler for a target stddev.
int binomial_k(double stddev);

/// Analytic log2 of the per-query decryption failure probability: subgaussian
/// tail of the accumulated fold noise, union-bounded over every coefficient
/// the client decodes.
double lattice_failure_log2(const LatticeConfig& cfg, uint32_t record_size);

/// Validates and completes a parameter set. Raises UnsatisfiableNoiseBudget
/// when the (chosen or supplied) lattice configuration cannot meet the
/// failure bound, ConfigInvalid for structural problems.
PirParams make_params(Backend backend, uint32_t record_size, uint32_t num_records,
                      uint64_t db_epoch, uint64_t storage_budget,
                      const std::optional<LatticeConfig>& lattice_override = {},
                      double failure_log2 = -40.0);

}  // namespace obfetch::pir
