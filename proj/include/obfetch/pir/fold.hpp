#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace obfetch::pir {

enum class FoldMode { serial, parallel };

/// Encrypted indicator vector for one hypercube dimension. All polynomials
/// are in NTT domain; the Shoup companions make the fixed query operand a
/// two-multiply modular product inside the fold.
struct QueryVector {
  size_t slots = 0;
  size_t degree = 0;
  std::vector<uint32_t> a, a_shoup;  // slots * degree
  std::vector<uint32_t> b, b_shoup;
};

/// One homomorphic fold stage over a d × rest grid of data entries, each
/// entry `chunks` NTT-domain plaintext polynomials of `q.degree` coeffs:
///
///   out[r][c] = sum_{x < d} data[(x * rest + r) * chunks + c] ⊙ ct[x]
///
/// out_a and out_b receive rest * chunks polynomials each. The serial and
/// parallel kernels are bit-identical; the parallel one distributes output
/// polynomials across OpenMP threads.
void fold_stage_serial(std::span<const uint32_t> data_ntt, size_t d, size_t rest, size_t chunks,
                       const QueryVector& q, uint32_t modulus, std::span<uint32_t> out_a,
                       std::span<uint32_t> out_b);

void fold_stage_parallel(std::span<const uint32_t> data_ntt, size_t d, size_t rest, size_t chunks,
                         const QueryVector& q, uint32_t modulus, std::span<uint32_t> out_a,
                         std::span<uint32_t> out_b);

inline void fold_stage(std::span<const uint32_t> data_ntt, size_t d, size_t rest, size_t chunks,
                       const QueryVector& q, uint32_t modulus, std::span<uint32_t> out_a,
                       std::span<uint32_t> out_b, FoldMode mode) {
  if (mode == FoldMode::serial)
    fold_stage_serial(data_ntt, d, rest, chunks, q, modulus, out_a, out_b);
  else
    fold_stage_parallel(data_ntt, d, rest, chunks, q, modulus, out_a, out_b);
}

}  // namespace obfetch::pir
