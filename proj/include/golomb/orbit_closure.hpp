#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "golomb/errors.hpp"
#include "golomb/integer.hpp"
#include "golomb/nt_core.hpp"
#include "golomb/periodic_set.hpp"

namespace golomb {

// Search depth at which we give up looking for a stabilization level. The
// level is at most v_p(a^e - 1) + 1 for a small e, so hitting this cap means
// a bug, not a hard input.
inline constexpr unsigned kMaxStabilizationLevel = 64;

enum class TwoAdicBranch { PlusOne, MinusOne };

// Closure of the multiplicative orbit {a, a^2, a^3, ...} inside the p-adic
// topology on N, together with the invariants that classify it: the first
// level where the cyclic subgroup generated by a stabilizes, and its index
// in the unit group at that level.
struct OrbitClosure {
  Integer p;
  Integer a;
  PeriodicSet set = PeriodicSet::empty_set();
  unsigned level = 0;            // n(X), minimal stabilization level
  Integer index;                 // i(X) = [ (Z/p^level)^* : <a> ]
  Integer subgroup_order;        // |<a>| at the stabilization level
  std::optional<TwoAdicBranch> branch;  // p == 2 only: a mod 4
};

namespace detail {

// All x >= 1 whose class mod p^m lies in the subgroup generated by a.
inline PeriodicSet closure_set_at_level(const Integer& a, const Integer& p,
                                        unsigned m) {
  const uint64_t modulus = to_u64(ipow(p, m), "orbit closure: p^level");
  const uint64_t start = to_u64(a % modulus, "orbit closure: generator residue");
  std::vector<uint64_t> residues;
  uint64_t v = 1 % modulus;
  do {
    residues.push_back(v);
    v = static_cast<uint64_t>(
        (static_cast<unsigned __int128>(v) * start) % modulus);
    if (residues.size() > kResidueLimit) {
      throw resource_error("orbit closure: subgroup too large to enumerate");
    }
  } while (v != 1 % modulus);
  return canonicalize(PeriodicSet::raw(1, modulus, std::move(residues), {}));
}

}  // namespace detail

// Requires a >= 2 coprime to p. Finds the least n with
// ord(a mod p^n) >= max(p, 3); from that level on, the preimage of <a>
// stops shrinking and equals the orbit closure.
inline OrbitClosure orbit_closure(const Integer& a, const Integer& p) {
  if (!is_prime(p)) throw domain_error("orbit_closure: p must be prime, got " + p.str());
  if (a < 2) throw domain_error("orbit_closure: generator must be >= 2, got " + a.str());
  if (a % p == 0) {
    throw domain_error("orbit_closure: generator " + a.str() +
                       " is divisible by p = " + p.str());
  }

  const Integer threshold = p < 3 ? Integer(3) : p;
  unsigned level = 0;
  Integer order = 1;
  Integer modulus = 1;
  for (unsigned n = 1; n <= kMaxStabilizationLevel; ++n) {
    modulus *= p;
    if (n == 1) {
      order = mult_order(a, p, 1);
    } else if (powm(a % modulus, order, modulus) != 1) {
      // Stepping up one level multiplies the order by at most p.
      order *= p;
    }
    if (powm(a % modulus, order, modulus) != 1) {
      throw internal_error("orbit_closure: order did not track level step");
    }
    if (order >= threshold) {
      level = n;
      break;
    }
  }
  if (level == 0) {
    throw internal_error("orbit_closure: no stabilization level below " +
                         std::to_string(kMaxStabilizationLevel));
  }
  if (order != mult_order(a, p, level)) {
    throw internal_error("orbit_closure: incremental order disagrees with direct order");
  }

  OrbitClosure x;
  x.p = p;
  x.a = a;
  x.level = level;
  x.subgroup_order = order;
  const Integer phi = totient_prime_power(p, level);
  if (phi % order != 0) {
    throw internal_error("orbit_closure: subgroup order does not divide the unit group");
  }
  x.index = phi / order;
  x.set = detail::closure_set_at_level(a, p, level);
  if (p == 2) {
    x.branch = (a % 4 == 1) ? TwoAdicBranch::PlusOne : TwoAdicBranch::MinusOne;
  }
  return x;
}

// Branch classification for p = 2, re-derived from the closed forms: with
// L the stabilization level, a = 1 mod 4 gives closure 1 + 2^(L-2) N0 and
// a = 3 mod 4 gives (1 + 2^(L-1) N0) u (2^(L-2) - 1 + 2^(L-1) N0). The
// computed closure is checked against the appropriate form.
inline TwoAdicBranch two_adic_branch(const Integer& a) {
  if (a < 2) throw domain_error("two_adic_branch: generator must be >= 2");
  if (a % 2 == 0) throw domain_error("two_adic_branch: generator must be odd");
  const OrbitClosure x = orbit_closure(a, 2);
  const unsigned level = x.level;
  if (level < 3) throw internal_error("two_adic_branch: stabilization level below 3");
  PeriodicSet expected = PeriodicSet::empty_set();
  if (a % 4 == 1) {
    const uint64_t m = 1ull << (level - 2);
    expected = PeriodicSet::raw(1, m, {1 % m}, {});
  } else {
    const uint64_t m = 1ull << (level - 1);
    const uint64_t half = 1ull << (level - 2);
    expected = PeriodicSet::raw(1, m, {1, half - 1}, {});
  }
  if (!(x.set == canonicalize(expected))) {
    throw internal_error("two_adic_branch: closure does not match its closed form for a = " +
                         a.str());
  }
  return *x.branch;
}

// Orbit closure of the canonical near-one generators: a = 1 + p^n for odd p
// (sign ignored), a = 1 + 2^n or -1 + 2^n for p = 2 with n >= 3. Asserts the
// closed-form set and index before returning.
inline OrbitClosure predicted_special_closure(const Integer& p, unsigned n, int sign) {
  if (!is_prime(p)) {
    throw domain_error("predicted_special_closure: p must be prime, got " + p.str());
  }
  if (sign != 1 && sign != -1) {
    throw domain_error("predicted_special_closure: sign must be +1 or -1");
  }

  if (p != 2) {
    if (n < 1) throw domain_error("predicted_special_closure: need n >= 1 for odd p");
    const Integer a = 1 + ipow(p, n);
    const OrbitClosure x = orbit_closure(a, p);
    // a has order exactly p one level up, and the closure is 1 + p^n N0 with
    // index p^(n-1) (p-1).
    if (mult_order(a, p, n + 1) != p) {
      throw internal_error("predicted_special_closure: 1 + p^n does not have order p at level n+1");
    }
    if (x.level != n + 1) {
      throw internal_error("predicted_special_closure: stabilization level is not n + 1");
    }
    const uint64_t m = to_u64(ipow(p, n), "predicted_special_closure: p^n");
    if (!(x.set == canonicalize(PeriodicSet::raw(1, m, {1 % m}, {})))) {
      throw internal_error("predicted_special_closure: set is not 1 + p^n N0");
    }
    if (x.index != ipow(p, n - 1) * (p - 1)) {
      throw internal_error("predicted_special_closure: index is not phi(p^n)");
    }
    return x;
  }

  if (n < 3) throw domain_error("predicted_special_closure: need n >= 3 for p = 2");
  const Integer a = sign == 1 ? Integer(1) + ipow(2, n) : Integer(-1) + ipow(2, n);
  const OrbitClosure x = orbit_closure(a, 2);
  // +-1 + 2^n squares to 1 + 2^(n+1) (mod 2^(n+2)), so the order first
  // reaches 4 at level n + 2.
  if (x.level != n + 2) {
    throw internal_error("predicted_special_closure: stabilization level is not n + 2");
  }
  if (x.subgroup_order != 4) {
    throw internal_error("predicted_special_closure: subgroup order is not 4");
  }
  if (x.index != ipow(2, n - 1)) {
    throw internal_error("predicted_special_closure: index is not 2^(n-1)");
  }
  PeriodicSet expected = PeriodicSet::empty_set();
  if (sign == 1) {
    const uint64_t m = 1ull << n;
    expected = PeriodicSet::raw(1, m, {1}, {});
  } else {
    const uint64_t m = 1ull << (n + 1);
    expected = PeriodicSet::raw(1, m, {1, (1ull << n) - 1}, {});
  }
  if (!(x.set == canonicalize(expected))) {
    throw internal_error("predicted_special_closure: set does not match its closed form");
  }
  return x;
}

inline const char* to_string(TwoAdicBranch b) {
  return b == TwoAdicBranch::PlusOne ? "plus-one" : "minus-one";
}

inline nlohmann::json to_json(const OrbitClosure& x) {
  nlohmann::json j{{"p", json_int(x.p)},
                   {"a", json_int(x.a)},
                   {"level", x.level},
                   {"index", json_int(x.index)},
                   {"subgroup_order", json_int(x.subgroup_order)},
                   {"set", to_json(x.set)}};
  if (x.branch) j["branch"] = to_string(*x.branch);
  return j;
}

}  // namespace golomb
