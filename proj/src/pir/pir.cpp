#include "obfetch/pir/pir.hpp"

#include <cstring>

namespace obfetch::pir {

namespace {

Bytes serialize_envelope(Backend backend, uint64_t hash, const Bytes& payload) {
  ByteWriter w;
  w.put_u8(static_cast<uint8_t>(backend));
  w.put_u64(hash);
  w.put_u32(static_cast<uint32_t>(payload.size()));
  w.put_bytes(payload);
  return w.take();
}

void parse_envelope(std::span<const uint8_t> wire, Errc bad, Backend& backend, uint64_t& hash,
                    Bytes& payload) {
  if (wire.size() < 13) raise(bad, "envelope truncated");
  ByteReader r(wire);
  uint8_t id = r.get_u8();
  if (id > static_cast<uint8_t>(Backend::lattice)) raise(bad, "unknown backend id");
  backend = static_cast<Backend>(id);
  hash = r.get_u64();
  uint32_t len = r.get_u32();
  if (len != r.remaining()) raise(bad, "payload length mismatch");
  auto body = r.get_bytes(len);
  payload.assign(body.begin(), body.end());
}

SeedRng state_rng(PirClientState& st) {
  return SeedRng(st.rng_seed, st.rng_counter++);
}

const LatticeClient& lattice_client(PirClientState& st) {
  if (!st.cached_client)
    st.cached_client = std::make_shared<const LatticeClient>(st.params, st.secret_key);
  return *st.cached_client;
}

}  // namespace

Bytes serialize_query(const PirQuery& q) {
  return serialize_envelope(q.backend, q.params_hash, q.payload);
}

PirQuery parse_query(std::span<const uint8_t> wire) {
  PirQuery q;
  parse_envelope(wire, Errc::malformed_query, q.backend, q.params_hash, q.payload);
  return q;
}

Bytes serialize_reply(const PirReply& r) {
  return serialize_envelope(r.backend, r.params_hash, r.payload);
}

PirReply parse_reply(std::span<const uint8_t> wire) {
  PirReply r;
  parse_envelope(wire, Errc::malformed_reply, r.backend, r.params_hash, r.payload);
  return r;
}

PirClientState client_init(const PirParams& params, const std::optional<Seed32>& seed) {
  PirClientState st;
  st.params = params;
  st.rng_seed = seed.value_or(SeedRng::os_seed());
  SeedRng rng(st.rng_seed, st.rng_counter++);
  rng.fill(st.session_nonce);
  if (params.backend == Backend::lattice) {
    LatticeClient client(params, rng);
    st.secret_key = client.serialize_secret();
  }
  return st;
}

std::pair<PirParams, PirClientState> pir_init(uint64_t storage_budget, const PirDatabase& db,
                                              Backend backend, uint64_t db_epoch,
                                              const std::optional<LatticeConfig>& lattice,
                                              const std::optional<Seed32>& seed) {
  if (db.empty()) raise(Errc::empty_database, "cannot initialize PIR over an empty database");
  PirParams params =
      make_params(backend, db.record_size(), db.num_records(), db_epoch, storage_budget, lattice);
  return {params, client_init(params, seed)};
}

PirQuery pir_query(uint32_t index, PirClientState& st) {
  if (index >= st.params.num_records)
    raise(Errc::index_out_of_range,
          "index " + std::to_string(index) + " of " + std::to_string(st.params.num_records));
  PirQuery q;
  q.backend = st.params.backend;
  q.params_hash = st.params.hash();
  if (st.params.backend == Backend::trivial) {
    // The trivial query carries nothing; the index stays local.
    st.pending_index = index;
    return q;
  }
  SeedRng rng = state_rng(st);
  q.payload = lattice_client(st).query_payload(index, rng);
  st.pending_index = index;
  return q;
}

PirServer::PirServer(const PirParams& params, const PirDatabase& db) : params_(params) {
  if (db.num_records() != params.num_records || db.record_size() != params.record_size)
    raise(Errc::shape_mismatch, "database does not match parameters");
  if (params.backend == Backend::trivial) {
    trivial_flat_.assign(db.flat().begin(), db.flat().end());
  } else {
    lattice_ = std::make_shared<const LatticeServer>(params, db);
  }
}

PirReply PirServer::reply(const PirQuery& q, FoldMode mode) const {
  if (q.backend != params_.backend) raise(Errc::malformed_query, "backend mismatch");
  if (q.params_hash != params_.hash())
    raise(Errc::stale_params, "query was built against a different database snapshot");
  PirReply r;
  r.backend = params_.backend;
  r.params_hash = q.params_hash;
  if (params_.backend == Backend::trivial) {
    if (!q.payload.empty()) raise(Errc::malformed_query, "trivial query payload must be empty");
    r.payload = trivial_flat_;
  } else {
    r.payload = lattice_->reply(q.payload, mode);
  }
  return r;
}

PirReply pir_reply(const PirQuery& q, const PirDatabase& db, const PirParams& params,
                   FoldMode mode) {
  return PirServer(params, db).reply(q, mode);
}

Bytes pir_extract(const PirReply& r, PirClientState& st) {
  if (r.backend != st.params.backend || r.params_hash != st.params.hash())
    raise(Errc::decryption_failure, "reply does not match this session's parameters");
  if (st.params.backend == Backend::trivial) {
    if (!st.pending_index)
      raise(Errc::decryption_failure, "no pending query in this session");
    if (r.payload.size() != st.params.reply_payload_bytes())
      raise(Errc::malformed_reply, "reply payload has wrong length");
    size_t off = size_t(*st.pending_index) * st.params.record_size;
    return Bytes(r.payload.begin() + off, r.payload.begin() + off + st.params.record_size);
  }
  return lattice_client(st).extract(r.payload);
}

}  // namespace obfetch::pir
