#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace obfetch {

enum class Errc {
  empty_database,
  shape_mismatch,
  unsatisfiable_noise_budget,
  index_out_of_range,
  malformed_query,
  malformed_reply,
  stale_params,
  decryption_failure,
  remove_unknown_ad,
  duplicate_ad,
  bucket_overflow,
  path_missing,
  empty_tree,
  unknown_version,
  unauthorized,
  empty_stash,
  dimension_mismatch,
  config_invalid,
  io_failure,
  network_failure,
  protocol_violation,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::empty_database: return "EmptyDatabase";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::unsatisfiable_noise_budget: return "UnsatisfiableNoiseBudget";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::malformed_query: return "MalformedQuery";
    case Errc::malformed_reply: return "MalformedReply";
    case Errc::stale_params: return "StaleParams";
    case Errc::decryption_failure: return "DecryptionFailure";
    case Errc::remove_unknown_ad: return "RemoveUnknownAd";
    case Errc::duplicate_ad: return "DuplicateAd";
    case Errc::bucket_overflow: return "BucketOverflow";
    case Errc::path_missing: return "PathMissing";
    case Errc::empty_tree: return "EmptyTree";
    case Errc::unknown_version: return "UnknownVersion";
    case Errc::unauthorized: return "Unauthorized";
    case Errc::empty_stash: return "EmptyStash";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::config_invalid: return "ConfigInvalid";
    case Errc::io_failure: return "IoFailure";
    case Errc::network_failure: return "NetworkFailure";
    case Errc::protocol_violation: return "ProtocolViolation";
  }
  return "UnknownError";
}

/// All recoverable failures in the library carry one of the codes above so
/// callers can branch on `code()` instead of parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace obfetch
