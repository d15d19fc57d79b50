#include "obfetch/pir/ntt.hpp"

#include <bit>

#include "obfetch/core/error.hpp"

namespace obfetch::pir {

namespace {

uint64_t mul_mod_u64(uint64_t a, uint64_t b, uint64_t mod) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % mod);
}

std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> fs;
  for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      fs.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) fs.push_back(n);
  return fs;
}

// Smallest generator of Z_q^*, q prime.
uint32_t find_generator(uint32_t q) {
  auto factors = prime_factors(q - 1);
  for (uint32_t g = 2;; ++g) {
    bool ok = true;
    for (uint64_t p : factors) {
      if (pow_mod(g, (q - 1) / p, q) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

uint32_t bit_reverse(uint32_t v, int bits) {
  uint32_t r = 0;
  for (int i = 0; i < bits; ++i) r |= ((v >> i) & 1u) << (bits - 1 - i);
  return r;
}

}  // namespace

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t mod) {
  uint64_t r = 1 % mod;
  base %= mod;
  while (exp) {
    if (exp & 1) r = mul_mod_u64(r, base, mod);
    base = mul_mod_u64(base, base, mod);
    exp >>= 1;
  }
  return r;
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = std::countr_zero(d);
  d >>= s;
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < s - 1; ++i) {
      x = mul_mod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

NttContext::NttContext(uint32_t q, uint32_t n) : q_(q), n_(n) {
  if (n < 4 || !std::has_single_bit(n)) raise(Errc::config_invalid, "ntt degree must be a power of two >= 4");
  if (q >= (1u << 31) || !is_prime(q)) raise(Errc::config_invalid, "ntt modulus must be a prime below 2^31");
  if ((q - 1) % (2 * static_cast<uint64_t>(n)) != 0)
    raise(Errc::config_invalid, "ntt modulus must satisfy q ≡ 1 (mod 2n)");

  int log_n = std::countr_zero(n);
  uint32_t g = find_generator(q);
  uint32_t psi = static_cast<uint32_t>(pow_mod(g, (q - 1) / (2ull * n), q));
  uint32_t ipsi = static_cast<uint32_t>(pow_mod(psi, q - 2, q));

  psi_rev_.resize(n);
  psi_rev_shoup_.resize(n);
  ipsi_rev_.resize(n);
  ipsi_rev_shoup_.resize(n);
  std::vector<uint32_t> pw(n), ipw(n);
  pw[0] = ipw[0] = 1;
  for (uint32_t i = 1; i < n; ++i) {
    pw[i] = static_cast<uint32_t>(mul_mod_u64(pw[i - 1], psi, q));
    ipw[i] = static_cast<uint32_t>(mul_mod_u64(ipw[i - 1], ipsi, q));
  }
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t r = bit_reverse(i, log_n);
    psi_rev_[i] = pw[r];
    psi_rev_shoup_[i] = shoup_precompute(pw[r], q);
    ipsi_rev_[i] = ipw[r];
    ipsi_rev_shoup_[i] = shoup_precompute(ipw[r], q);
  }
  n_inv_ = static_cast<uint32_t>(pow_mod(n, q - 2, q));
  n_inv_shoup_ = shoup_precompute(n_inv_, q);
}

// Cooley-Tukey butterflies; standard-order input, bit-reversed output.
void NttContext::forward(std::span<uint32_t> a) const {
  const uint32_t q = q_;
  uint32_t t = n_;
  for (uint32_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (uint32_t i = 0; i < m; ++i) {
      uint32_t s = psi_rev_[m + i];
      uint32_t s_sh = psi_rev_shoup_[m + i];
      uint32_t j1 = 2 * i * t;
      for (uint32_t j = j1; j < j1 + t; ++j) {
        uint32_t u = a[j];
        uint32_t v = mul_shoup(a[j + t], s, s_sh, q);
        a[j] = add(u, v);
        a[j + t] = sub(u, v);
      }
    }
  }
}

// Gentleman-Sande butterflies; bit-reversed input, standard-order output.
void NttContext::inverse(std::span<uint32_t> a) const {
  const uint32_t q = q_;
  uint32_t t = 1;
  for (uint32_t m = n_; m > 1; m >>= 1) {
    uint32_t h = m >> 1;
    uint32_t j1 = 0;
    for (uint32_t i = 0; i < h; ++i) {
      uint32_t s = ipsi_rev_[h + i];
      uint32_t s_sh = ipsi_rev_shoup_[h + i];
      for (uint32_t j = j1; j < j1 + t; ++j) {
        uint32_t u = a[j];
        uint32_t v = a[j + t];
        a[j] = add(u, v);
        a[j + t] = mul_shoup(sub(u, v), s, s_sh, q);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& x : a) x = mul_shoup(x, n_inv_, n_inv_shoup_, q);
}

}  // namespace obfetch::pir
