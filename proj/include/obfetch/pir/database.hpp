#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "obfetch/core/error.hpp"
#include "obfetch/core/serde.hpp"

namespace obfetch::pir {

/// Fixed-record-size array of opaque byte records, stored flat.
class PirDatabase {
 public:
  PirDatabase() = default;

  explicit PirDatabase(const std::vector<Bytes>& records) {
    if (records.empty()) return;
    record_size_ = static_cast<uint32_t>(records.front().size());
    for (const auto& r : records) {
      if (r.size() != record_size_)
        raise(Errc::shape_mismatch, "records must all have the same length");
    }
    if (record_size_ == 0) raise(Errc::shape_mismatch, "records must be nonempty");
    num_records_ = static_cast<uint32_t>(records.size());
    flat_.reserve(size_t(num_records_) * record_size_);
    for (const auto& r : records) flat_.insert(flat_.end(), r.begin(), r.end());
  }

  PirDatabase(Bytes flat, uint32_t record_size) : flat_(std::move(flat)), record_size_(record_size) {
    if (record_size_ == 0 || flat_.size() % record_size_ != 0)
      raise(Errc::shape_mismatch, "flat buffer is not a whole number of records");
    num_records_ = static_cast<uint32_t>(flat_.size() / record_size_);
  }

  uint32_t num_records() const { return num_records_; }
  uint32_t record_size() const { return record_size_; }
  bool empty() const { return num_records_ == 0; }

  std::span<const uint8_t> record(uint32_t i) const {
    if (i >= num_records_) raise(Errc::index_out_of_range, "record index " + std::to_string(i));
    return {flat_.data() + size_t(i) * record_size_, record_size_};
  }

  std::span<const uint8_t> flat() const { return flat_; }

 private:
  Bytes flat_;
  uint32_t record_size_ = 0;
  uint32_t num_records_ = 0;
};

}  // namespace obfetch::pir
