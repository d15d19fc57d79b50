#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace obfetch::pir {

// 15 * 2^27 + 1; NTT-friendly for every power-of-two degree up to 2^26.
inline constexpr uint32_t kDefaultModulus = 2013265921;

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t mod);
bool is_prime(uint64_t n);

/// w_shoup = floor(w * 2^32 / q), the fixed-operand companion used below.
inline uint32_t shoup_precompute(uint32_t w, uint32_t q) {
  return static_cast<uint32_t>((static_cast<uint64_t>(w) << 32) / q);
}

/// x * w mod q for x, w < q < 2^31, lazily reduced into [0, 2q).
inline uint64_t mul_shoup_lazy(uint32_t x, uint32_t w, uint32_t w_shoup, uint32_t q) {
  uint64_t hi = (static_cast<uint64_t>(x) * w_shoup) >> 32;
  return static_cast<uint64_t>(x) * w - hi * q;
}

inline uint32_t mul_shoup(uint32_t x, uint32_t w, uint32_t w_shoup, uint32_t q) {
  uint64_t r = mul_shoup_lazy(x, w, w_shoup, q);
  return static_cast<uint32_t>(r >= q ? r - q : r);
}

/// Negacyclic number-theoretic transform over Z_q[X]/(X^n + 1).
///
/// forward() maps coefficient order to the (bit-reversed) evaluation order;
/// inverse() undoes it, including the 1/n scaling. Pointwise products of two
/// forward-domain polynomials correspond to negacyclic convolution.
class NttContext {
 public:
  /// n must be a power of two >= 4 and q a prime with q ≡ 1 (mod 2n), q < 2^31.
  NttContext(uint32_t q, uint32_t n);

  void forward(std::span<uint32_t> poly) const;
  void inverse(std::span<uint32_t> poly) const;

  uint32_t modulus() const { return q_; }
  uint32_t degree() const { return n_; }

  uint32_t add(uint32_t a, uint32_t b) const {
    uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  uint32_t sub(uint32_t a, uint32_t b) const {
    uint32_t d = a + q_ - b;
    return d >= q_ ? d - q_ : d;
  }

 private:
  uint32_t q_;
  uint32_t n_;
  std::vector<uint32_t> psi_rev_, psi_rev_shoup_;    // psi^brv(i)
  std::vector<uint32_t> ipsi_rev_, ipsi_rev_shoup_;  // psi^-brv(i)
  uint32_t n_inv_, n_inv_shoup_;
};

}  // namespace obfetch::pir
