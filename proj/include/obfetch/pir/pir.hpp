#pragma once

#include <array>
#include <memory>
#include <optional>
#include <utility>

#include "obfetch/core/rng.hpp"
#include "obfetch/core/serde.hpp"
#include "obfetch/pir/database.hpp"
#include "obfetch/pir/fold.hpp"
#include "obfetch/pir/lattice.hpp"
#include "obfetch/pir/params.hpp"

namespace obfetch::pir {

struct PirQuery {
  Backend backend = Backend::trivial;
  uint64_t params_hash = 0;
  Bytes payload;
};

struct PirReply {
  Backend backend = Backend::trivial;
  uint64_t params_hash = 0;
  Bytes payload;
};

// Wire format, bit-exact: backend_id (1) ‖ params-hash (8, LE) ‖ payload
// length (4, LE) ‖ payload.
Bytes serialize_query(const PirQuery& q);
PirQuery parse_query(std::span<const uint8_t> wire);
Bytes serialize_reply(const PirReply& r);
PirReply parse_reply(std::span<const uint8_t> wire);

/// Per-session client state. The secret key never appears in any wire
/// message; the trivial backend keeps the queried index here instead of in
/// the query. Not safe to share across threads.
struct PirClientState {
  PirParams params;
  Bytes secret_key;  // empty for the trivial backend
  std::array<uint8_t, 16> session_nonce{};
  std::optional<uint32_t> pending_index;
  Seed32 rng_seed{};
  uint64_t rng_counter = 0;
  std::shared_ptr<const LatticeClient> cached_client;  // lazy; derived from the fields above
};

/// Client+server setup: derives parameters from the database shape and mints
/// fresh client state. `storage_budget` is the paper's record-budget knob c.
std::pair<PirParams, PirClientState> pir_init(uint64_t storage_budget, const PirDatabase& db,
                                              Backend backend, uint64_t db_epoch = 0,
                                              const std::optional<LatticeConfig>& lattice = {},
                                              const std::optional<Seed32>& seed = {});

/// Client-only setup against parameters learned out of band (tree sync).
PirClientState client_init(const PirParams& params, const std::optional<Seed32>& seed = {});

PirQuery pir_query(uint32_t index, PirClientState& st);

/// Server handle holding an immutable prepared snapshot; reply() is pure and
/// safe under concurrent callers.
class PirServer {
 public:
  PirServer(const PirParams& params, const PirDatabase& db);

  const PirParams& params() const { return params_; }
  PirReply reply(const PirQuery& q, FoldMode mode = FoldMode::parallel) const;

 private:
  PirParams params_;
  Bytes trivial_flat_;
  std::shared_ptr<const LatticeServer> lattice_;
};

/// One-shot convenience over PirServer for small databases and tests.
PirReply pir_reply(const PirQuery& q, const PirDatabase& db, const PirParams& params,
                   FoldMode mode = FoldMode::parallel);

Bytes pir_extract(const PirReply& r, PirClientState& st);

}  // namespace obfetch::pir
