#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "golomb/errors.hpp"
#include "golomb/integer.hpp"

namespace golomb {

// ---------------------------------------------------------------------------
// Primality
// ---------------------------------------------------------------------------

namespace detail {

inline bool mr_certifies_composite(const Integer& n, uint64_t a, const Integer& d,
                                   unsigned r) {
  Integer x = powm(Integer(a) % n, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned i = 1; i < r; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace detail

// Deterministic Miller-Rabin. The witness set {2,...,41} decides primality
// exactly for n < 3.317e24 (Sorenson-Webster); every value this library
// feeds in is far below that.
inline bool is_prime(const Integer& n) {
  if (n < 2) return false;
  static constexpr uint64_t kWitnesses[] = {2,  3,  5,  7,  11, 13, 17,
                                            19, 23, 29, 31, 37, 41};
  for (uint64_t w : kWitnesses) {
    if (n == w) return true;
    if (n % w == 0) return false;
  }
  Integer d = n - 1;
  unsigned r = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  for (uint64_t w : kWitnesses) {
    if (detail::mr_certifies_composite(n, w, d, r)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

struct PrimePower {
  Integer prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower& a, const PrimePower& b) {
    return a.prime == b.prime && a.exponent == b.exponent;
  }
};

// Prime factorization held as (prime, exponent) pairs with strictly
// increasing primes. The factorization of 1 is the empty list.
class Factorization {
 public:
  Factorization() = default;
  explicit Factorization(std::vector<PrimePower> factors)
      : factors_(std::move(factors)) {}

  const std::vector<PrimePower>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }

  Integer value() const {
    Integer v = 1;
    for (const auto& f : factors_) v *= ipow(f.prime, f.exponent);
    return v;
  }

  unsigned exponent_of(const Integer& p) const {
    for (const auto& f : factors_) {
      if (f.prime == p) return f.exponent;
    }
    return 0;
  }

  std::vector<Integer> divisors() const {
    std::vector<Integer> divs{1};
    for (const auto& f : factors_) {
      const std::size_t base = divs.size();
      Integer pk = 1;
      for (unsigned i = 1; i <= f.exponent; ++i) {
        pk *= f.prime;
        for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
      }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
  }

 private:
  std::vector<PrimePower> factors_;
};

namespace detail {

// Brent-cycle Pollard rho with batched gcds. Precondition: n is odd,
// composite and has no prime factor <= 1e6, so a nontrivial splitter exists.
inline Integer pollard_brent(const Integer& n) {
  for (uint64_t c = 1;; ++c) {
    Integer x = 2, y = 2, q = 1, g = 1, ys = 2;
    uint64_t r = 1;
    const uint64_t batch = 128;
    auto step = [&](const Integer& v) { return (v * v + c) % n; };
    while (g == 1) {
      x = y;
      for (uint64_t i = 0; i < r; ++i) y = step(y);
      for (uint64_t k = 0; k < r && g == 1; k += batch) {
        ys = y;
        const uint64_t lim = std::min<uint64_t>(batch, r - k);
        for (uint64_t i = 0; i < lim; ++i) {
          y = step(y);
          q = (q * (x > y ? x - y : y - x)) % n;
        }
        g = gcd(q, n);
      }
      r *= 2;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = step(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n) return g;
  }
}

}  // namespace detail

// Trial division by 2, 3, 5 and a mod-30 wheel up to 1e6, then Pollard rho
// on whatever composite cofactor survives.
inline Factorization factorize(const Integer& x) {
  if (x < 1) throw domain_error("factorize: argument must be >= 1, got " + x.str());
  std::vector<PrimePower> small;
  Integer rem = x;
  auto strip = [&](uint64_t p) {
    unsigned e = 0;
    while (rem % p == 0) {
      rem /= p;
      ++e;
    }
    if (e > 0) small.push_back({Integer(p), e});
  };
  strip(2);
  strip(3);
  strip(5);
  static constexpr uint32_t kWheel[] = {4, 2, 4, 2, 4, 6, 2, 6};
  uint64_t d = 7;
  std::size_t wi = 0;
  while (d <= 1000000 && Integer(d) * d <= rem) {
    if (rem % d == 0) strip(d);
    d += kWheel[wi];
    wi = (wi + 1) & 7;
  }

  std::map<Integer, unsigned> large;
  std::vector<Integer> pending;
  if (rem > 1) pending.push_back(rem);
  while (!pending.empty()) {
    Integer t = pending.back();
    pending.pop_back();
    if (is_prime(t)) {
      ++large[t];
      continue;
    }
    const Integer f = detail::pollard_brent(t);
    pending.push_back(f);
    pending.push_back(t / f);
  }
  for (const auto& [p, e] : large) small.push_back({p, e});
  return Factorization(std::move(small));
}

// ---------------------------------------------------------------------------
// p-adic helpers
// ---------------------------------------------------------------------------

inline unsigned padic_valuation(const Integer& p, const Integer& x) {
  if (!is_prime(p)) throw domain_error("padic_valuation: p must be prime, got " + p.str());
  if (x < 1) throw domain_error("padic_valuation: x must be >= 1, got " + x.str());
  unsigned v = 0;
  Integer rem = x;
  while (rem % p == 0) {
    rem /= p;
    ++v;
  }
  return v;
}

inline Integer totient_prime_power(const Integer& p, unsigned k) {
  if (!is_prime(p)) throw domain_error("totient_prime_power: p must be prime, got " + p.str());
  if (k < 1) throw domain_error("totient_prime_power: exponent must be >= 1");
  return ipow(p, k - 1) * (p - 1);
}

// ---------------------------------------------------------------------------
// Chinese remainder
// ---------------------------------------------------------------------------

struct Congruence {
  Integer residue;
  Integer modulus;

  friend bool operator==(const Congruence& a, const Congruence& b) {
    return a.residue == b.residue && a.modulus == b.modulus;
  }
};

// Folds the system left to right. Moduli must be pairwise coprime; a shared
// factor is reported as nullopt rather than by exception, since callers probe
// solvability as part of normal control flow.
inline std::optional<Congruence> crt_solve(const std::vector<Congruence>& system) {
  Integer r = 0, m = 1;
  for (const auto& c : system) {
    if (c.modulus < 1) throw domain_error("crt_solve: modulus must be >= 1");
    if (c.residue < 0 || c.residue >= c.modulus) {
      throw domain_error("crt_solve: residue " + c.residue.str() +
                         " out of range for modulus " + c.modulus.str());
    }
    if (gcd(m, c.modulus) != 1) return std::nullopt;
    const Integer inv = mod_inverse(m, c.modulus);
    const Integer delta = ((c.residue - r) % c.modulus + c.modulus) % c.modulus;
    r += m * ((delta * inv) % c.modulus);
    m *= c.modulus;
  }
  return Congruence{r, m};
}

// ---------------------------------------------------------------------------
// Unit groups mod p^n
// ---------------------------------------------------------------------------

// Multiplicative order of a mod p^n: start from phi(p^n) and strip every
// removable prime factor.
inline Integer mult_order(const Integer& a, const Integer& p, unsigned n) {
  if (!is_prime(p)) throw domain_error("mult_order: p must be prime, got " + p.str());
  if (n < 1) throw domain_error("mult_order: n must be >= 1");
  if (a < 1) throw domain_error("mult_order: a must be >= 1, got " + a.str());
  if (a % p == 0) throw domain_error("mult_order: " + a.str() + " is not a unit mod " +
                                     p.str() + "^" + std::to_string(n));
  const Integer modulus = ipow(p, n);
  std::vector<PrimePower> phi_primes = factorize(p - 1).factors();
  if (n >= 2) {
    auto it = std::lower_bound(
        phi_primes.begin(), phi_primes.end(), p,
        [](const PrimePower& f, const Integer& v) { return f.prime < v; });
    phi_primes.insert(it, {p, n - 1});
  }
  Integer order = totient_prime_power(p, n);
  for (const auto& f : phi_primes) {
    for (unsigned i = 0; i < f.exponent; ++i) {
      const Integer cand = order / f.prime;
      if (powm(a % modulus, cand, modulus) == 1) {
        order = cand;
      } else {
        break;
      }
    }
  }
  return order;
}

// Structure of (Z/p^n)^*. Cyclic for odd p and for 2^n in {2, 4}; for
// 2^n with n >= 3 the group splits as {+-1} x <5> with <5> of order 2^(n-2).
struct UnitGroupDescriptor {
  enum class Shape { Cyclic, TwoTorsionSplit };

  Integer p;
  unsigned n = 1;
  Integer order;  // phi(p^n)
  Shape shape = Shape::Cyclic;

  // Cyclic shape: a generator of the full group.
  Integer generator;

  // TwoTorsionSplit shape: the two factor generators and the order of <5>.
  Integer gen_minus_one;
  Integer gen_five;
  Integer cyclic_part_order;
};

inline UnitGroupDescriptor unit_group_structure(const Integer& p, unsigned n) {
  if (!is_prime(p)) {
    throw domain_error("unit_group_structure: p must be prime, got " + p.str());
  }
  if (n < 1) throw domain_error("unit_group_structure: n must be >= 1");
  UnitGroupDescriptor d;
  d.p = p;
  d.n = n;
  d.order = totient_prime_power(p, n);
  const Integer modulus = ipow(p, n);

  if (p == 2) {
    if (n == 1) {
      d.generator = 1;
      return d;
    }
    if (n == 2) {
      d.generator = 3;
      return d;
    }
    d.shape = UnitGroupDescriptor::Shape::TwoTorsionSplit;
    d.gen_minus_one = modulus - 1;
    d.gen_five = 5;
    d.cyclic_part_order = Integer(1) << (n - 2);
    if (mult_order(5, 2, n) != d.cyclic_part_order) {
      throw internal_error("unit_group_structure: 5 does not have order 2^(n-2) mod 2^" +
                           std::to_string(n));
    }
    return d;
  }

  // Odd p: scan upward for a primitive root. g generates iff no proper
  // power phi/q is trivial.
  const Integer phi = d.order;
  std::vector<PrimePower> phi_primes = factorize(p - 1).factors();
  if (n >= 2) phi_primes.push_back({p, n - 1});
  for (Integer g = 2;; ++g) {
    if (g % p == 0) continue;
    bool primitive = true;
    for (const auto& f : phi_primes) {
      if (powm(g, phi / f.prime, modulus) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      d.generator = g;
      return d;
    }
  }
}

// ---------------------------------------------------------------------------
// Small prime tables
// ---------------------------------------------------------------------------

inline std::vector<uint64_t> primes_below(uint64_t n) {
  if (n < 3) return {};
  std::vector<bool> composite(n, false);
  std::vector<uint64_t> primes;
  for (uint64_t i = 2; i < n; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    if (i <= 0xFFFFFFFFull) {
      for (uint64_t j = i * i; j < n; j += i) composite[j] = true;
    }
  }
  return primes;
}

}  // namespace golomb
