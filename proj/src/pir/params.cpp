#include "obfetch/pir/params.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "obfetch/core/error.hpp"
#include "obfetch/core/hash.hpp"
#include "obfetch/core/serde.hpp"

namespace obfetch::pir {

namespace {

size_t ceil_div(size_t a, size_t b) { return (a + b - 1) / b; }

void check_lattice_structure(const LatticeConfig& cfg, uint32_t num_records) {
  if (cfg.secret_dim < 1024 || !std::has_single_bit(cfg.secret_dim))
    raise(Errc::config_invalid, "secret dimension must be a power of two >= 1024");
  if (cfg.modulus >= (1u << 31) || !is_prime(cfg.modulus))
    raise(Errc::config_invalid, "lattice modulus must be a prime below 2^31");
  if ((cfg.modulus - 1) % (2ull * cfg.secret_dim) != 0)
    raise(Errc::config_invalid, "lattice modulus must support the ring degree (q ≡ 1 mod 2n)");
  if (cfg.noise_stddev <= 0) raise(Errc::config_invalid, "noise stddev must be positive");
  if (cfg.hypercube_dims.empty() || cfg.hypercube_dims.size() > 3)
    raise(Errc::config_invalid, "hypercube must have 1 to 3 dimensions");
  size_t prod = 1;
  for (uint32_t d : cfg.hypercube_dims) {
    if (d == 0) raise(Errc::config_invalid, "hypercube dimensions must be positive");
    prod *= d;
  }
  if (prod < num_records)
    raise(Errc::config_invalid, "hypercube dimension product below record count");
}

}  // namespace

int binomial_k(double stddev) {
  int k = static_cast<int>(std::lround(2.0 * stddev * stddev));
  return std::max(1, std::min(32, k));
}

std::vector<uint32_t> default_hypercube_dims(uint32_t n) {
  if (n <= 64) return {std::max(n, 1u)};
  if (n <= 64 * 1024) return {64, static_cast<uint32_t>(ceil_div(n, 64))};
  return {64, 64, static_cast<uint32_t>(ceil_div(n, 4096))};
}

LatticeLayout lattice_layout(const LatticeConfig& cfg, uint32_t record_size) {
  LatticeLayout lay;
  lay.degree = cfg.secret_dim;
  lay.dims = cfg.hypercube_dims;
  lay.padded_records = 1;
  for (uint32_t d : lay.dims) lay.padded_records *= d;

  size_t bytes = record_size + kRecordChecksumBytes;
  for (size_t s = 0; s < lay.dims.size(); ++s) {
    size_t chunks = ceil_div(bytes, lay.degree);
    lay.stage_bytes.push_back(bytes);
    lay.stage_chunks.push_back(chunks);
    bytes = chunks * 2 * lay.degree * sizeof(uint32_t);  // serialized (a, b) pairs
  }
  lay.reply_cts = lay.stage_chunks.back();
  return lay;
}

double lattice_failure_log2(const LatticeConfig& cfg, uint32_t record_size) {
  const LatticeLayout lay = lattice_layout(cfg, record_size);
  const double q = cfg.modulus;
  const double p = kPlainModulus;
  const double sigma_e = std::sqrt(binomial_k(cfg.noise_stddev) / 2.0);
  const double threshold = q / (2.0 * p) - p;
  if (threshold <= 0) return 0.0;

  // Each decoded coefficient carries noise sum_{i<d} m_i * e_i with centered
  // byte multipliers |m| <= p/2 over d*degree independent subgaussian terms.
  double total_log2 = -std::numeric_limits<double>::infinity();
  for (size_t s = 0; s < lay.dims.size(); ++s) {
    double sigma = (p / 2.0) * sigma_e * std::sqrt(double(lay.dims[s]) * lay.degree);
    double tail_log2 = 1.0 - (threshold * threshold) / (2.0 * sigma * sigma) / std::numbers::ln2;
    double coeffs = double(lay.stage_chunks[s]) * lay.degree;
    double stage_log2 = std::log2(coeffs) + tail_log2;
    total_log2 = std::max(total_log2, stage_log2) +
                 std::log1p(std::exp2(-std::abs(total_log2 - stage_log2))) / std::numbers::ln2;
  }
  return total_log2;
}

uint64_t PirParams::hash() const {
  ByteWriter w;
  w.put_u8(static_cast<uint8_t>(backend));
  w.put_u32(record_size);
  w.put_u32(num_records);
  w.put_u64(db_epoch);
  if (backend == Backend::lattice) {
    w.put_u32(lattice.modulus);
    w.put_u32(lattice.secret_dim);
    w.put_u32(static_cast<uint32_t>(binomial_k(lattice.noise_stddev)));
    w.put_u8(static_cast<uint8_t>(lattice.hypercube_dims.size()));
    for (uint32_t d : lattice.hypercube_dims) w.put_u32(d);
  }
  return fnv1a64(w.bytes());
}

size_t PirParams::query_payload_bytes() const {
  if (backend == Backend::trivial) return 0;
  size_t slots = 0;
  for (uint32_t d : lattice.hypercube_dims) slots += d;
  return kQuerySeedBytes + slots * size_t(lattice.secret_dim) * sizeof(uint32_t);
}

size_t PirParams::reply_payload_bytes() const {
  if (backend == Backend::trivial) return size_t(num_records) * record_size;
  const LatticeLayout lay = lattice_layout(lattice, record_size);
  return lay.reply_cts * 2 * size_t(lattice.secret_dim) * sizeof(uint32_t);
}

// Wire frame: backend (1) ‖ params-hash (8) ‖ payload length (4) ‖ payload.
size_t PirParams::query_wire_bytes() const { return 13 + query_payload_bytes(); }
size_t PirParams::reply_wire_bytes() const { return 13 + reply_payload_bytes(); }

double PirParams::reply_expansion() const {
  return double(reply_payload_bytes()) / double(record_size);
}

PirParams make_params(Backend backend, uint32_t record_size, uint32_t num_records,
                      uint64_t db_epoch, uint64_t storage_budget,
                      const std::optional<LatticeConfig>& lattice_override, double failure_log2) {
  if (record_size == 0) raise(Errc::shape_mismatch, "record size must be positive");
  if (num_records == 0) raise(Errc::empty_database, "database has no records");

  PirParams p;
  p.backend = backend;
  p.record_size = record_size;
  p.num_records = num_records;
  p.db_epoch = db_epoch;
  p.storage_budget = storage_budget;
  p.failure_log2 = failure_log2;
  if (backend == Backend::trivial) return p;

  p.lattice = lattice_override.value_or(LatticeConfig{});
  if (p.lattice.hypercube_dims.empty())
    p.lattice.hypercube_dims = default_hypercube_dims(num_records);
  check_lattice_structure(p.lattice, num_records);

  double achieved = lattice_failure_log2(p.lattice, record_size);
  if (achieved > failure_log2)
    raise(Errc::unsatisfiable_noise_budget,
          "noise budget " + std::to_string(achieved) + " exceeds bound " +
              std::to_string(failure_log2));
  return p;
}

}  // namespace obfetch::pir
