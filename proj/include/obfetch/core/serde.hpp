#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "obfetch/core/error.hpp"

namespace obfetch {

using Bytes = std::vector<uint8_t>;

/// Little-endian append-only encoder. All wire formats in the project go
/// through this so the byte layout is defined in exactly one place.
class ByteWriter {
 public:
  ByteWriter() = default;
  explicit ByteWriter(Bytes& out) : out_(&out) {}

  void put_u8(uint8_t v) { buf().push_back(v); }
  void put_u16(uint16_t v) { put_le(v, 2); }
  void put_u32(uint32_t v) { put_le(v, 4); }
  void put_u64(uint64_t v) { put_le(v, 8); }
  void put_i64(int64_t v) { put_le(static_cast<uint64_t>(v), 8); }
  void put_f64(double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    put_u64(bits);
  }
  void put_bytes(std::span<const uint8_t> b) { buf().insert(buf().end(), b.begin(), b.end()); }
  void put_str(std::string_view s) {
    put_bytes({reinterpret_cast<const uint8_t*>(s.data()), s.size()});
  }

  const Bytes& bytes() const { return out_ ? *out_ : own_; }
  Bytes take() { return std::move(own_); }

 private:
  Bytes& buf() { return out_ ? *out_ : own_; }
  void put_le(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf().push_back(static_cast<uint8_t>(v >> (8 * i)));
  }

  Bytes* out_ = nullptr;
  Bytes own_;
};

/// Bounds-checked little-endian decoder over a borrowed buffer.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t get_u8() { return static_cast<uint8_t>(get_le(1)); }
  uint16_t get_u16() { return static_cast<uint16_t>(get_le(2)); }
  uint32_t get_u32() { return static_cast<uint32_t>(get_le(4)); }
  uint64_t get_u64() { return get_le(8); }
  int64_t get_i64() { return static_cast<int64_t>(get_le(8)); }
  double get_f64() {
    uint64_t bits = get_u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::span<const uint8_t> get_bytes(size_t n) {
    need(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::string get_str(size_t n) {
    auto s = get_bytes(n);
    return std::string(reinterpret_cast<const char*>(s.data()), s.size());
  }

  size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }
  void expect_done() const {
    if (!done()) raise(Errc::protocol_violation, "trailing bytes in message");
  }

 private:
  void need(size_t n) const {
    if (data_.size() - pos_ < n) raise(Errc::protocol_violation, "message truncated");
  }
  uint64_t get_le(int n) {
    need(static_cast<size_t>(n));
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += static_cast<size_t>(n);
    return v;
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

inline std::span<const uint8_t> as_bytes_view(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

}  // namespace obfetch
