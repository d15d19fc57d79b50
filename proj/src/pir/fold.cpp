#include "obfetch/pir/fold.hpp"

#include "obfetch/pir/ntt.hpp"

namespace obfetch::pir {

namespace {

// Accumulates one output polynomial pair. Lazy Shoup products stay below
// 2^32, so up to 2^32 terms fit in the u64 accumulators without reduction.
inline void accumulate_out(const uint32_t* data, size_t d, size_t rest, size_t chunks, size_t n,
                           const QueryVector& q, uint32_t modulus, size_t r, size_t c,
                           uint32_t* out_a, uint32_t* out_b, uint64_t* acc_a, uint64_t* acc_b) {
  for (size_t w = 0; w < n; ++w) acc_a[w] = acc_b[w] = 0;
  for (size_t x = 0; x < d; ++x) {
    const uint32_t* m = data + ((x * rest + r) * chunks + c) * n;
    const uint32_t* qa = q.a.data() + x * n;
    const uint32_t* qa_sh = q.a_shoup.data() + x * n;
    const uint32_t* qb = q.b.data() + x * n;
    const uint32_t* qb_sh = q.b_shoup.data() + x * n;
    for (size_t w = 0; w < n; ++w) {
      acc_a[w] += mul_shoup_lazy(m[w], qa[w], qa_sh[w], modulus);
      acc_b[w] += mul_shoup_lazy(m[w], qb[w], qb_sh[w], modulus);
    }
  }
  uint32_t* oa = out_a + (r * chunks + c) * n;
  uint32_t* ob = out_b + (r * chunks + c) * n;
  for (size_t w = 0; w < n; ++w) {
    oa[w] = static_cast<uint32_t>(acc_a[w] % modulus);
    ob[w] = static_cast<uint32_t>(acc_b[w] % modulus);
  }
}

}  // namespace

void fold_stage_serial(std::span<const uint32_t> data_ntt, size_t d, size_t rest, size_t chunks,
                       const QueryVector& q, uint32_t modulus, std::span<uint32_t> out_a,
                       std::span<uint32_t> out_b) {
  const size_t n = q.degree;
  std::vector<uint64_t> acc_a(n), acc_b(n);
  for (size_t r = 0; r < rest; ++r)
    for (size_t c = 0; c < chunks; ++c)
      accumulate_out(data_ntt.data(), d, rest, chunks, n, q, modulus, r, c, out_a.data(),
                     out_b.data(), acc_a.data(), acc_b.data());
}

void fold_stage_parallel(std::span<const uint32_t> data_ntt, size_t d, size_t rest, size_t chunks,
                         const QueryVector& q, uint32_t modulus, std::span<uint32_t> out_a,
                         std::span<uint32_t> out_b) {
  const size_t n = q.degree;
  const int64_t total = static_cast<int64_t>(rest * chunks);
#pragma omp parallel
  {
    std::vector<uint64_t> acc_a(n), acc_b(n);
#pragma omp for schedule(static)
    for (int64_t i = 0; i < total; ++i) {
      size_t r = static_cast<size_t>(i) / chunks;
      size_t c = static_cast<size_t>(i) % chunks;
      accumulate_out(data_ntt.data(), d, rest, chunks, n, q, modulus, r, c, out_a.data(),
                     out_b.data(), acc_a.data(), acc_b.data());
    }
  }
}

}  // namespace obfetch::pir
