#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <initializer_list>
#include <map>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "golomb/errors.hpp"
#include "golomb/integer.hpp"
#include "golomb/nt_core.hpp"
#include "golomb/orbit_closure.hpp"
#include "golomb/periodic_set.hpp"
#include "golomb/poset.hpp"

namespace golomb {

// ---------------------------------------------------------------------------
// Verification reports
// ---------------------------------------------------------------------------

struct VerificationFailure {
  std::string input;
  std::string expected;
  std::string got;
};

struct VerificationReport {
  std::string lemma_id;
  std::map<std::string, std::string> parameters;
  uint64_t cases_checked = 0;
  std::vector<VerificationFailure> failures;
  std::chrono::milliseconds elapsed{0};

  bool pass() const { return failures.empty(); }
};

// Elapsed time is off by default so that repeated runs emit identical bytes.
inline nlohmann::json to_json(const VerificationReport& r,
                              bool include_elapsed = false) {
  nlohmann::json j;
  j["lemma"] = r.lemma_id;
  j["parameters"] = nlohmann::json::object();
  for (const auto& [k, v] : r.parameters) j["parameters"][k] = v;
  j["cases"] = r.cases_checked;
  j["pass"] = r.pass();
  j["failures"] = nlohmann::json::array();
  for (const auto& f : r.failures) {
    j["failures"].push_back(
        {{"input", f.input}, {"expected", f.expected}, {"got", f.got}});
  }
  if (include_elapsed) j["elapsed-ms"] = r.elapsed.count();
  return j;
}

namespace detail {

inline void add_failure(VerificationReport& rep, std::string input,
                        std::string expected, std::string got) {
  rep.failures.push_back(
      {std::move(input), std::move(expected), std::move(got)});
}

// Reports stay readable when something is systematically broken.
inline void trim_failures(VerificationReport& rep) {
  constexpr std::size_t kKeep = 256;
  if (rep.failures.size() <= kKeep) return;
  const std::size_t extra = rep.failures.size() - kKeep;
  rep.failures.resize(kKeep);
  rep.failures.push_back(
      {"(additional failures)", "0", std::to_string(extra)});
}

// Runs fn(index, report) over [0, count), optionally on several threads.
// Chunks are contiguous and merged in index order, so the resulting report
// does not depend on the job count.
template <typename Fn>
inline void run_indexed(std::size_t count, unsigned jobs,
                        VerificationReport& rep, const Fn& fn) {
  if (jobs <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i, rep);
    return;
  }
  const unsigned k = static_cast<unsigned>(
      std::min<std::size_t>(jobs, count));
  std::vector<VerificationReport> parts(k);
  std::vector<std::exception_ptr> errors(k);
  std::vector<std::thread> threads;
  threads.reserve(k);
  const std::size_t per = (count + k - 1) / k;
  for (unsigned t = 0; t < k; ++t) {
    threads.emplace_back([&, t] {
      try {
        const std::size_t lo = static_cast<std::size_t>(t) * per;
        const std::size_t hi = std::min(count, lo + per);
        for (std::size_t i = lo; i < hi; ++i) fn(i, parts[t]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (unsigned t = 0; t < k; ++t) {
    if (errors[t]) std::rethrow_exception(errors[t]);
  }
  for (const auto& part : parts) {
    rep.cases_checked += part.cases_checked;
    rep.failures.insert(rep.failures.end(), part.failures.begin(),
                        part.failures.end());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Neighborhood-filter oracle for Golomb closures
// ---------------------------------------------------------------------------

// One oracle sweep over the window [1, window]. x survives the bound B when
// every progression x + bN0 with gcd(b, x) = 1 and b <= B meets s.
// first_excluder[x] is the smallest b that rules x out (0 when none does up
// to modulus_bound), so a single run decides membership for every bound up
// to modulus_bound at once.
struct NeighborhoodFilterRun {
  uint64_t modulus_bound = 0;
  uint64_t window = 0;
  std::vector<uint64_t> members;         // survivors of the full bound
  std::vector<uint64_t> first_excluder;  // indexed by x, [0, window]
};

// Decides each emptiness test exactly: x + bN0 meets the periodic part of s
// iff some residue class of s is compatible mod gcd(b, M), and meets the
// exceptional prefix iff some exception >= x is congruent to x mod b. No
// finite scan is involved, so the only approximation axis is the bound.
inline NeighborhoodFilterRun golomb_closure_oracle(const PeriodicSet& s,
                                                   uint64_t modulus_bound,
                                                   uint64_t window) {
  if (modulus_bound < 1) {
    throw domain_error("golomb_closure_oracle: modulus bound must be >= 1");
  }
  if (window < 1) {
    throw domain_error("golomb_closure_oracle: window must be >= 1");
  }

  // Smallest prime factor table for fast coprimality tests against b.
  std::vector<uint32_t> spf(modulus_bound + 1, 0);
  for (uint64_t i = 2; i <= modulus_bound; ++i) {
    if (spf[i] != 0) continue;
    for (uint64_t j = i; j <= modulus_bound; j += i) {
      if (spf[j] == 0) spf[j] = static_cast<uint32_t>(i);
    }
  }

  const uint64_t m = s.modulus();
  const std::vector<uint64_t> residues = s.residues();
  const std::vector<uint64_t>& exceptions = s.exceptions();

  // Compatibility tables: for d = gcd(b, m), the set {r mod d : r in s}.
  std::map<uint64_t, std::vector<char>> compat;
  const auto table_for = [&](uint64_t d) -> const std::vector<char>& {
    auto it = compat.find(d);
    if (it == compat.end()) {
      std::vector<char> t(d, 0);
      for (uint64_t r : residues) t[r % d] = 1;
      it = compat.emplace(d, std::move(t)).first;
    }
    return it->second;
  };

  NeighborhoodFilterRun run;
  run.modulus_bound = modulus_bound;
  run.window = window;
  run.first_excluder.assign(window + 1, 0);

  std::vector<uint64_t> alive;
  alive.reserve(window);
  for (uint64_t x = 1; x <= window; ++x) alive.push_back(x);

  std::vector<uint64_t> primes_of_b;
  std::vector<uint64_t> next;
  for (uint64_t b = 1; b <= modulus_bound && !alive.empty(); ++b) {
    primes_of_b.clear();
    for (uint64_t v = b; v > 1;) {
      const uint64_t p = spf[v];
      primes_of_b.push_back(p);
      while (v % p == 0) v /= p;
    }
    const uint64_t d = std::gcd(b, m);
    const std::vector<char>& table = table_for(d);

    next.clear();
    for (uint64_t x : alive) {
      bool applies = true;
      for (uint64_t p : primes_of_b) {
        if (x % p == 0) {
          applies = false;
          break;
        }
      }
      if (!applies) {
        next.push_back(x);
        continue;
      }
      bool meets = !residues.empty() && table[x % d];
      if (!meets) {
        for (uint64_t e : exceptions) {
          if (e >= x && (e - x) % b == 0) {
            meets = true;
            break;
          }
        }
      }
      if (meets) {
        next.push_back(x);
      } else {
        run.first_excluder[x] = b;
      }
    }
    alive.swap(next);
  }
  run.members = std::move(alive);
  return run;
}

// ---------------------------------------------------------------------------
// p-adic orbit oracle
// ---------------------------------------------------------------------------

// Enumerates the multiplicative orbit of a mod p^depth by repeated
// multiplication until it cycles, then pulls the visited classes back to N.
// For depth at or above the stabilization level this reproduces
// orbit_closure(a, p).set exactly.
inline PeriodicSet padic_orbit_oracle(const Integer& a, const Integer& p,
                                      unsigned depth) {
  if (!is_prime(p)) {
    throw domain_error("padic_orbit_oracle: p must be prime, got " + p.str());
  }
  if (a < 2) {
    throw domain_error("padic_orbit_oracle: generator must be >= 2, got " +
                       a.str());
  }
  if (a % p == 0) {
    throw domain_error("padic_orbit_oracle: " + a.str() +
                       " is not a unit mod " + p.str());
  }
  if (depth < 1) throw domain_error("padic_orbit_oracle: depth must be >= 1");

  const Integer modulus_big = ipow(p, depth);
  if (modulus_big > kResidueLimit) {
    throw resource_error("padic_orbit_oracle: p^depth exceeds the residue limit");
  }
  const uint64_t m = to_u64(modulus_big, "padic_orbit_oracle modulus");
  const uint64_t step = to_u64(a % modulus_big, "padic_orbit_oracle generator");

  std::vector<char> seen(m, 0);
  std::vector<uint64_t> orbit;
  uint64_t x = step % m;
  while (!seen[x]) {
    seen[x] = 1;
    orbit.push_back(x);
    x = (x * step) % m;  // m <= 2^22, no overflow
  }
  std::sort(orbit.begin(), orbit.end());
  return canonicalize(PeriodicSet::raw(1, m, std::move(orbit), {}));
}

// ---------------------------------------------------------------------------
// Rigidity induction step
// ---------------------------------------------------------------------------

// Recovers n >= 2 from closure data alone: with alpha_p the exact valuation
// of p in n-1, the candidates are the members of
//   intersect_p (1 + p^alpha_p N0)  minus  union_p (1 + p^(alpha_p+1) N0)
// whose shifted value x-1 has no prime factors outside those of n-1. The
// survivor is unique; uniqueness is asserted over the window
// [1, 2 * prod_p p^(alpha_p+1)] and the survivor is checked symbolically.
inline Integer reconstruct_n(const Integer& n) {
  if (n < 2) throw domain_error("reconstruct_n: defined for n >= 2");
  const Integer target = n - 1;
  const Factorization f = factorize(target);

  PeriodicSet s = PeriodicSet::universe();
  Integer window_modulus = 1;
  for (const PrimePower& pp : f.factors()) {
    s = intersect(s, from_progression(1, ipow(pp.prime, pp.exponent)));
    window_modulus *= ipow(pp.prime, pp.exponent + 1);
  }
  for (const PrimePower& pp : f.factors()) {
    s = difference(s, from_progression(1, ipow(pp.prime, pp.exponent + 1)));
  }

  const uint64_t hi = to_u64(2 * window_modulus, "reconstruct_n window");
  std::vector<Integer> survivors;
  for (uint64_t x : members_in(s, 1, hi)) {
    Integer rest = Integer(x) - 1;
    if (rest == 0) continue;
    bool clean = true;
    for (const PrimePower& pp : f.factors()) {
      const Integer q = ipow(pp.prime, pp.exponent);
      if (rest % q != 0) {
        clean = false;
        break;
      }
      rest /= q;
    }
    if (clean && rest == 1) survivors.push_back(Integer(x));
  }

  if (survivors.size() != 1) {
    throw internal_error("reconstruct_n: window holds " +
                         std::to_string(survivors.size()) +
                         " candidates for n = " + n.str());
  }
  if (survivors.front() - 1 != target) {
    throw internal_error("reconstruct_n: survivor " + survivors.front().str() +
                         " does not shift to " + target.str());
  }
  return survivors.front();
}

// ---------------------------------------------------------------------------
// Prime predecessor scan
// ---------------------------------------------------------------------------

// Scans the odd primes p <= bound and confirms that p - 1 is prime exactly
// when p = 3. For odd p the predecessor is even, so the only candidate is 2;
// the scan documents this with an explicit primality test per case.
inline VerificationReport unique_prime_predecessor_check(uint64_t bound) {
  if (bound < 5) {
    throw domain_error("unique_prime_predecessor_check: bound must be >= 5");
  }
  VerificationReport rep;
  rep.lemma_id = "unique-prime-predecessor";
  rep.parameters["bound"] = std::to_string(bound);
  const auto start = std::chrono::steady_clock::now();
  for (uint64_t p : primes_below(bound + 1)) {
    if (p == 2) continue;
    ++rep.cases_checked;
    const bool predecessor_prime = is_prime(Integer(p) - 1);
    const bool expected = (p == 3);
    if (predecessor_prime != expected) {
      detail::add_failure(rep, "p=" + std::to_string(p),
                          expected ? "p-1 prime" : "p-1 composite",
                          predecessor_prime ? "p-1 prime" : "p-1 composite");
    }
  }
  rep.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return rep;
}

// ---------------------------------------------------------------------------
// Lemma suites
// ---------------------------------------------------------------------------

// Parameter values are lists; scalar parameters expect exactly one entry.
using SuiteParams = std::map<std::string, std::vector<Integer>>;

inline const std::vector<std::string>& lemma_ids() {
  static const std::vector<std::string> ids = {
      "basic-closure", "gauss",  "S5-stabilization", "index", "ind2",
      "X2",            "iso",    "ord2",             "anti2", "tree",
      "d3-vs-d5",      "antichain-2", "rigidity"};
  return ids;
}

namespace detail {

inline void require_keys(const SuiteParams& params,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, values] : params) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      std::string msg = "unknown parameter '" + key + "'; accepted:";
      for (const char* a : allowed) msg += std::string(" ") + a;
      throw domain_error(msg);
    }
    if (values.empty()) {
      throw domain_error("parameter '" + key + "' has no values");
    }
  }
}

inline Integer scalar_param(const SuiteParams& params, const std::string& key,
                            const Integer& fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (it->second.size() != 1) {
    throw domain_error("parameter '" + key + "' expects a single value");
  }
  return it->second.front();
}

inline std::vector<Integer> list_param(const SuiteParams& params,
                                       const std::string& key,
                                       std::vector<Integer> fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  return it->second;
}

inline std::string render_values(const std::vector<Integer>& xs) {
  std::string out;
  for (const Integer& x : xs) {
    if (!out.empty()) out += ",";
    out += x.str();
  }
  return out;
}

// --- basic-closure: closure formula versus the neighborhood filter ---------

inline VerificationReport suite_basic_closure(const SuiteParams& params,
                                              unsigned jobs) {
  require_keys(params, {"b-max", "window"});
  const uint64_t b_max = to_u64(scalar_param(params, "b-max", 60), "b-max");
  const uint64_t window = to_u64(scalar_param(params, "window", 1000), "window");
  if (b_max < 2) throw domain_error("basic-closure: b-max must be >= 2");
  if (window < 1) throw domain_error("basic-closure: window must be >= 1");

  VerificationReport rep;
  rep.lemma_id = "basic-closure";
  rep.parameters["b-max"] = std::to_string(b_max);
  rep.parameters["window"] = std::to_string(window);

  struct Pair {
    uint64_t a, b;
  };
  std::vector<Pair> pairs;
  for (uint64_t b = 2; b <= b_max; ++b) {
    for (uint64_t a = 1; a < b; ++a) {
      if (std::gcd(a, b) == 1) pairs.push_back({a, b});
    }
  }

  std::vector<uint64_t> observed(pairs.size(), 0);
  run_indexed(pairs.size(), jobs, rep, [&](std::size_t i,
                                           VerificationReport& part) {
    const auto [a, b] = pairs[i];
    const std::string tag = "a=" + std::to_string(a) + " b=" + std::to_string(b);
    const PeriodicSet closure = golomb_closure(a, b);

    uint64_t exact_bound = b;
    const Factorization bf = factorize(Integer(b));
    for (const PrimePower& pp : bf.factors()) {
      exact_bound *= to_u64(pp.prime, "basic-closure prime");
    }

    const NeighborhoodFilterRun run =
        golomb_closure_oracle(from_progression(a, b), exact_bound, window);
    ++part.cases_checked;
    for (uint64_t x = 1; x <= window; ++x) {
      const bool in_closure = closure.member_u64(x);
      const uint64_t excluder = run.first_excluder[x];
      if (in_closure && excluder != 0) {
        add_failure(part, tag + " x=" + std::to_string(x),
                    "member of the closure survives every bound",
                    "excluded at b=" + std::to_string(excluder));
      } else if (!in_closure && excluder == 0) {
        add_failure(part, tag + " x=" + std::to_string(x),
                    "excluded by bound " + std::to_string(exact_bound),
                    "still present at the exact bound");
      }
      if (!in_closure) observed[i] = std::max(observed[i], excluder);
    }
  });
  if (!pairs.empty()) {
    const uint64_t worst = *std::max_element(observed.begin(), observed.end());
    rep.parameters["observed-exact-bound-max"] = std::to_string(worst);
  }
  trim_failures(rep);
  return rep;
}

// --- gauss: unit group descriptors against exhaustive enumeration ----------

inline VerificationReport suite_gauss(const SuiteParams& params,
                                      unsigned jobs) {
  require_keys(params, {"limit", "p-max"});
  const uint64_t limit = to_u64(scalar_param(params, "limit", 1000000), "limit");
  const uint64_t p_max = to_u64(scalar_param(params, "p-max", 97), "p-max");
  if (limit < 2) throw domain_error("gauss: limit must be >= 2");

  VerificationReport rep;
  rep.lemma_id = "gauss";
  rep.parameters["limit"] = std::to_string(limit);
  rep.parameters["p-max"] = std::to_string(p_max);

  struct Item {
    uint64_t p;
    unsigned n;
  };
  std::vector<Item> items;
  for (uint64_t p : primes_below(p_max + 1)) {
    uint64_t power = p;
    unsigned n = 1;
    while (power <= limit) {
      items.push_back({p, n});
      if (power > limit / p) break;
      power *= p;
      ++n;
    }
  }

  run_indexed(items.size(), jobs, rep, [&](std::size_t i,
                                           VerificationReport& part) {
    const auto [p, n] = items[i];
    const std::string tag = "p=" + std::to_string(p) + " n=" + std::to_string(n);
    ++part.cases_checked;

    const UnitGroupDescriptor d = unit_group_structure(p, n);
    uint64_t m = 1;
    for (unsigned k = 0; k < n; ++k) m *= p;
    const uint64_t phi = (m / p) * (p - 1);
    if (d.order != phi) {
      add_failure(part, tag, "order " + std::to_string(phi), d.order.str());
      return;
    }

    const bool expect_cyclic = (p != 2) || m <= 4;
    if (expect_cyclic != (d.shape == UnitGroupDescriptor::Shape::Cyclic)) {
      add_failure(part, tag, expect_cyclic ? "cyclic" : "two-torsion split",
                  expect_cyclic ? "two-torsion split" : "cyclic");
      return;
    }

    std::vector<char> seen(m, 0);
    if (d.shape == UnitGroupDescriptor::Shape::Cyclic) {
      const uint64_t g = to_u64(d.generator, "gauss generator") % m;
      uint64_t x = 1;
      uint64_t steps = 0;
      do {
        x = (x * g) % m;
        seen[x] = 1;
        ++steps;
      } while (x != 1 && steps <= phi);
      if (steps != phi) {
        add_failure(part, tag, "generator order " + std::to_string(phi),
                    "order " + std::to_string(steps));
        return;
      }
    } else {
      const uint64_t five = to_u64(d.gen_five, "gauss gen_five") % m;
      const uint64_t cyclic_order =
          to_u64(d.cyclic_part_order, "gauss cyclic order");
      if (cyclic_order != m / 4) {
        add_failure(part, tag, "cyclic part order " + std::to_string(m / 4),
                    std::to_string(cyclic_order));
        return;
      }
      if (d.gen_minus_one != m - 1) {
        add_failure(part, tag, "gen_minus_one " + std::to_string(m - 1),
                    d.gen_minus_one.str());
        return;
      }
      uint64_t x = 1;
      uint64_t steps = 0;
      do {
        x = (x * five) % m;
        seen[x] = 1;
        seen[m - x] = 1;
        ++steps;
      } while (x != 1 && steps <= cyclic_order);
      if (steps != cyclic_order) {
        add_failure(part, tag,
                    "gen_five order " + std::to_string(cyclic_order),
                    "order " + std::to_string(steps));
        return;
      }
    }

    for (uint64_t u = 1; u < m; ++u) {
      const bool unit = (u % p) != 0;
      if (unit && !seen[u]) {
        add_failure(part, tag, "generated subgroup covers every unit",
                    "unit " + std::to_string(u) + " not reached");
        return;
      }
      if (!unit && seen[u]) {
        add_failure(part, tag, "generated subgroup inside the units",
                    "non-unit " + std::to_string(u) + " reached");
        return;
      }
    }
  });
  trim_failures(rep);
  return rep;
}

// --- S5-stabilization: orbit closures versus direct power enumeration ------

inline VerificationReport suite_s5_stabilization(const SuiteParams& params,
                                                 unsigned jobs) {
  require_keys(params, {"a-max", "p"});
  const uint64_t a_max = to_u64(scalar_param(params, "a-max", 200), "a-max");
  const std::vector<Integer> primes =
      list_param(params, "p", {2, 3, 5, 7, 11});
  if (a_max < 2) throw domain_error("S5-stabilization: a-max must be >= 2");
  for (const Integer& p : primes) {
    if (!is_prime(p)) {
      throw domain_error("S5-stabilization: parameter p contains non-prime " +
                         p.str());
    }
  }

  VerificationReport rep;
  rep.lemma_id = "S5-stabilization";
  rep.parameters["a-max"] = std::to_string(a_max);
  rep.parameters["p"] = render_values(primes);

  struct Item {
    Integer a, p;
  };
  std::vector<Item> items;
  for (const Integer& p : primes) {
    for (uint64_t a = 2; a <= a_max; ++a) {
      if (Integer(a) % p != 0) items.push_back({Integer(a), p});
    }
  }

  run_indexed(items.size(), jobs, rep, [&](std::size_t i,
                                           VerificationReport& part) {
    const auto& [a, p] = items[i];
    const OrbitClosure x = orbit_closure(a, p);
    for (unsigned depth = x.level; depth <= x.level + 2; ++depth) {
      ++part.cases_checked;
      const PeriodicSet enumerated = padic_orbit_oracle(a, p, depth);
      if (!(enumerated == x.set)) {
        add_failure(part,
                    "a=" + a.str() + " p=" + p.str() +
                        " depth=" + std::to_string(depth),
                    to_residue_string(x.set), to_residue_string(enumerated));
      }
    }
  });
  trim_failures(rep);
  return rep;
}

// --- index: closures of 1 + p^n for odd p ----------------------------------

inline VerificationReport suite_index(const SuiteParams& params,
                                      unsigned jobs) {
  require_keys(params, {"p", "n-max"});
  const std::vector<Integer> primes = list_param(params, "p", {3, 5, 7, 11});
  const unsigned n_max = static_cast<unsigned>(
      to_u64(scalar_param(params, "n-max", 4), "n-max"));
  if (n_max < 1) throw domain_error("index: n-max must be >= 1");
  for (const Integer& p : primes) {
    if (!is_prime(p) || p == 2) {
      throw domain_error("index: parameter p must list odd primes, got " +
                         p.str());
    }
  }

  VerificationReport rep;
  rep.lemma_id = "index";
  rep.parameters["p"] = render_values(primes);
  rep.parameters["n-max"] = std::to_string(n_max);

  struct Item {
    Integer p;
    unsigned n;
  };
  std::vector<Item> items;
  for (const Integer& p : primes) {
    for (unsigned n = 1; n <= n_max; ++n) items.push_back({p, n});
  }

  run_indexed(items.size(), jobs, rep, [&](std::size_t i,
                                           VerificationReport& part) {
    const auto& [p, n] = items[i];
    const std::string tag = "p=" + p.str() + " n=" + std::to_string(n);
    ++part.cases_checked;
    const OrbitClosure x = orbit_closure(1 + ipow(p, n), p);
    const PeriodicSet expected_set = from_progression(1, ipow(p, n));
    const Integer expected_index = ipow(p, n - 1) * (p - 1);
    if (!(x.set == expected_set)) {
      add_failure(part, tag, to_residue_string(expected_set),
                  to_residue_string(x.set));
    }
    if (x.index != expected_index) {
      add_failure(part, tag, "index " + expected_index.str(), x.index.str());
    }
    if (x.level != n + 1) {
      add_failure(part, tag, "level " + std::to_string(n + 1),
                  "level " + std::to_string(x.level));
    }
  });
  trim_failures(rep);
  return rep;
}

// --- ind2: the two 2-adic families near 1 and -1 ----------------------------

inline VerificationReport suite_ind2(const SuiteParams& params,
                                     unsigned jobs) {
  require_keys(params, {"n-min", "n-max"});
  const unsigned n_min = static_cast<unsigned>(
      to_u64(scalar_param(params, "n-min", 2), "n-min"));
  const unsigned n_max = static_cast<unsigned>(
      to_u64(scalar_param(params, "n-max", 8), "n-max"));
  if (n_min < 2) throw domain_error("ind2: n-min must be >= 2");
  if (n_max < n_min) throw domain_error("ind2: n-max must be >= n-min");

  VerificationReport rep;
  rep.lemma_id = "ind2";
  rep.parameters["n-min"] = std::to_string(n_min);
  rep.parameters["n-max"] = std::to_string(n_max);

  run_indexed(n_max - n_min + 1, jobs, rep, [&](std::size_t i,
                                                VerificationReport& part) {
    const unsigned n = n_min + static_cast<unsigned>(i);
    const Integer two_n = ipow(2, n);
    const Integer expected_index = ipow(2, n - 1);

    {
      ++part.cases_checked;
      const std::string tag = "a=1+2^" + std::to_string(n);
      const OrbitClosure x = orbit_closure(1 + two_n, 2);
      const PeriodicSet expected = from_progression(1, two_n);
      if (!(x.set == expected)) {
        add_failure(part, tag, to_residue_string(expected),
                    to_residue_string(x.set));
      }
      if (x.index != expected_index) {
        add_failure(part, tag, "index " + expected_index.str(),
                    x.index.str());
      }
    }
    {
      ++part.cases_checked;
      const std::string tag = "a=2^" + std::to_string(n) + "-1";
      const OrbitClosure x = orbit_closure(two_n - 1, 2);
      const uint64_t m = to_u64(2 * two_n, "ind2 modulus");
      const PeriodicSet expected = canonicalize(
          PeriodicSet::raw(1, m, {1, to_u64(two_n - 1, "ind2 residue")}, {}));
      if (!(x.set == expected)) {
        add_failure(part, tag, to_residue_string(expected),
                    to_residue_string(x.set));
      }
      if (x.index != expected_index) {
        add_failure(part, tag, "index " + expected_index.str(),
                    x.index.str());
      }
    }
  });
  trim_failures(rep);
  return rep;
}

// --- X2: branch closed forms and i(X) = 2^(n(X)-3) --------------------------

inline VerificationReport suite_x2(const SuiteParams& params, unsigned jobs) {
  require_keys(params, {"a-max"});
  const uint64_t a_max = to_u64(scalar_param(params, "a-max", 401), "a-max");
  if (a_max < 3) throw domain_error("X2: a-max must be >= 3");

  VerificationReport rep;
  rep.lemma_id = "X2";
  rep.parameters["a-max"] = std::to_string(a_max);

  std::vector<uint64_t> generators;
  for (uint64_t a = 3; a <= a_max; a += 2) generators.push_back(a);

  run_indexed(generators.size(), jobs, rep, [&](std::size_t i,
                                                VerificationReport& part) {
    const uint64_t a = generators[i];
    const std::string tag = "a=" + std::to_string(a);
    ++part.cases_checked;

    const OrbitClosure x = orbit_closure(a, 2);
    const unsigned level = x.level;
    const TwoAdicBranch expected_branch =
        (a % 4 == 1) ? TwoAdicBranch::PlusOne : TwoAdicBranch::MinusOne;
    if (!x.branch || *x.branch != expected_branch) {
      add_failure(part, tag, std::string(to_string(expected_branch)),
                  x.branch ? to_string(*x.branch) : "none");
      return;
    }
    if (two_adic_branch(a) != expected_branch) {
      add_failure(part, tag, "branch classifier agrees", "disagrees");
      return;
    }

    PeriodicSet expected_set = PeriodicSet::empty_set();
    if (expected_branch == TwoAdicBranch::PlusOne) {
      const uint64_t m = uint64_t{1} << (level - 2);
      expected_set = canonicalize(PeriodicSet::raw(1, m, {1 % m}, {}));
    } else {
      const uint64_t m = uint64_t{1} << (level - 1);
      const uint64_t half = uint64_t{1} << (level - 2);
      expected_set = canonicalize(PeriodicSet::raw(1, m, {1, half - 1}, {}));
    }
    if (!(x.set == expected_set)) {
      add_failure(part, tag, to_residue_string(expected_set),
                  to_residue_string(x.set));
    }
    if (x.index != ipow(2, level - 3)) {
      add_failure(part, tag, "index 2^" + std::to_string(level - 3),
                  x.index.str());
    }
    if (x.subgroup_order != 4) {
      add_failure(part, tag, "subgroup order 4", x.subgroup_order.str());
    }
  });
  trim_failures(rep);
  return rep;
}

// --- iso / ord2: order criteria versus reverse inclusion --------------------

inline bool set_contains(const PeriodicSet& outer, const PeriodicSet& inner) {
  const SetRelation r = relate(inner, outer);
  return r == SetRelation::Equal || r == SetRelation::ProperSubset;
}

inline VerificationReport suite_iso(const SuiteParams& params, unsigned jobs) {
  require_keys(params, {"p", "gen-max"});
  const std::vector<Integer> primes = list_param(params, "p", {3, 5, 7});
  const Integer gen_max = scalar_param(params, "gen-max", 80);
  for (const Integer& p : primes) {
    if (!is_prime(p) || p == 2) {
      throw domain_error("iso: parameter p must list odd primes, got " +
                         p.str());
    }
  }

  VerificationReport rep;
  rep.lemma_id = "iso";
  rep.parameters["p"] = render_values(primes);
  rep.parameters["gen-max"] = gen_max.str();

  for (const Integer& p : primes) {
    const FinitePoset poset = build_xp(p, gen_max);
    std::vector<const OrbitClosure*> nodes;
    for (std::size_t i = 0; i < poset.size(); ++i) {
      nodes.push_back(&std::get<OrbitClosure>(poset.node(i).payload));
    }

    // The index map is injective on distinct closures.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        ++rep.cases_checked;
        if (nodes[i]->index == nodes[j]->index) {
          detail::add_failure(rep,
                              "p=" + p.str() + " " + poset.node(i).label +
                                  " vs " + poset.node(j).label,
                              "distinct indices for distinct closures",
                              "both have index " + nodes[i]->index.str());
        }
      }
    }

    // Indices land in the divisor family p^k (p-1) generates.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      ++rep.cases_checked;
      Integer d = nodes[i]->index;
      while (d % p == 0) d /= p;
      if ((p - 1) % d != 0) {
        detail::add_failure(rep, "p=" + p.str() + " " + poset.node(i).label,
                            "index of the form p^k * divisor of p-1",
                            nodes[i]->index.str());
      }
    }

    // Divisibility of indices is exactly reverse inclusion of the sets.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        ++rep.cases_checked;
        const bool by_sets = set_contains(nodes[i]->set, nodes[j]->set);
        const bool by_index = nodes[j]->index % nodes[i]->index == 0;
        if (by_sets != by_index) {
          detail::add_failure(
              rep,
              "p=" + p.str() + " " + poset.node(i).label + " <= " +
                  poset.node(j).label,
              by_index ? "related by index divisibility" : "unrelated",
              by_sets ? "related by inclusion" : "not related by inclusion");
        }
      }
    }
  }
  (void)jobs;
  trim_failures(rep);
  return rep;
}

inline VerificationReport suite_ord2(const SuiteParams& params,
                                     unsigned jobs) {
  require_keys(params, {"gen-max"});
  const Integer gen_max = scalar_param(params, "gen-max", 80);

  VerificationReport rep;
  rep.lemma_id = "ord2";
  rep.parameters["gen-max"] = gen_max.str();

  const FinitePoset poset = build_xp(2, gen_max);
  std::vector<const OrbitClosure*> nodes;
  for (std::size_t i = 0; i < poset.size(); ++i) {
    nodes.push_back(&std::get<OrbitClosure>(poset.node(i).payload));
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      ++rep.cases_checked;
      const bool by_sets =
          (i == j) || set_contains(nodes[i]->set, nodes[j]->set);
      const bool by_rule =
          (i == j) || (nodes[j]->branch == TwoAdicBranch::PlusOne &&
                       nodes[i]->index < nodes[j]->index);
      if (by_sets != by_rule) {
        detail::add_failure(
            rep,
            poset.node(i).label + " <= " + poset.node(j).label,
            by_rule ? "related by the 2-adic index rule" : "unrelated",
            by_sets ? "related by inclusion" : "not related by inclusion");
      }
    }
  }
  (void)jobs;
  trim_failures(rep);
  return rep;
}

// --- anti2: minimal elements of X_2 and the chain above them ----------------

inline VerificationReport suite_anti2(const SuiteParams& params,
                                      unsigned jobs) {
  require_keys(params, {"gen-max"});
  const Integer gen_max = scalar_param(params, "gen-max", 33);
  if (gen_max < 9) throw domain_error("anti2: gen-max must be >= 9");

  VerificationReport rep;
  rep.lemma_id = "anti2";
  rep.parameters["gen-max"] = gen_max.str();

  const FinitePoset poset = build_xp(2, gen_max);
  const PeriodicSet one_mod_8 = from_progression(1, 8);
  const std::vector<std::size_t> minimal = minimal_elements(poset);

  std::vector<std::size_t> chain;
  for (std::size_t i = 0; i < poset.size(); ++i) {
    ++rep.cases_checked;
    const auto& node = std::get<OrbitClosure>(poset.node(i).payload);
    const bool inside = set_contains(one_mod_8, node.set);
    const bool is_minimal =
        std::binary_search(minimal.begin(), minimal.end(), i);
    if (inside == is_minimal) {
      detail::add_failure(
          rep, poset.node(i).label,
          inside ? "inside 1+8N0, hence not minimal"
                 : "not inside 1+8N0, hence minimal",
          is_minimal ? "minimal" : "not minimal");
    }
    if (inside) chain.push_back(i);
  }

  // The non-minimal part is the strictly descending chain of 1 + 2^m N0.
  for (std::size_t k = 0; k < chain.size(); ++k) {
    ++rep.cases_checked;
    const auto& node = std::get<OrbitClosure>(poset.node(chain[k]).payload);
    const PeriodicSet expected =
        from_progression(1, ipow(2, static_cast<unsigned>(3 + k)));
    if (!(node.set == expected)) {
      detail::add_failure(rep, poset.node(chain[k]).label,
                          to_residue_string(expected),
                          to_residue_string(node.set));
    }
    if (k > 0) {
      const auto& prev = std::get<OrbitClosure>(poset.node(chain[k - 1]).payload);
      if (relate(node.set, prev.set) != SetRelation::ProperSubset) {
        detail::add_failure(rep,
                            poset.node(chain[k - 1]).label + " > " +
                                poset.node(chain[k]).label,
                            "proper-subset", to_string(relate(node.set, prev.set)));
      }
    }
  }

  // At the drawn truncation the whole Hasse diagram is pinned down.
  if (gen_max == 33) {
    ++rep.cases_checked;
    const std::vector<std::string> want_labels{
        "cl(3^ℕ)", "cl(5^ℕ)", "cl(7^ℕ)",  "cl(9^ℕ)",
        "cl(15^ℕ)", "cl(17^ℕ)", "cl(31^ℕ)", "cl(33^ℕ)"};
    const std::vector<std::pair<std::string, std::string>> want_edges{
        {"cl(3^ℕ)", "cl(9^ℕ)"},  {"cl(5^ℕ)", "cl(9^ℕ)"},
        {"cl(7^ℕ)", "cl(17^ℕ)"}, {"cl(9^ℕ)", "cl(17^ℕ)"},
        {"cl(15^ℕ)", "cl(33^ℕ)"}, {"cl(17^ℕ)", "cl(33^ℕ)"}};
    bool label_ok = poset.size() == want_labels.size();
    for (std::size_t i = 0; label_ok && i < poset.size(); ++i) {
      label_ok = poset.node(i).label == want_labels[i];
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [lo, hi] : poset.hasse_edges()) {
      edges.emplace_back(poset.node(lo).label, poset.node(hi).label);
    }
    if (!label_ok) {
      detail::add_failure(rep, "node list", "the eight drawn closures",
                          std::to_string(poset.size()) + " nodes");
    } else if (edges != want_edges) {
      detail::add_failure(rep, "edge list", "the six drawn cover edges",
                          "differs");
    }
  }
  (void)jobs;
  trim_failures(rep);
  return rep;
}

// --- tree: up-chain elements of X_p for odd p -------------------------------

inline VerificationReport suite_tree(const SuiteParams& params,
                                     unsigned jobs) {
  require_keys(params, {"p", "gen-max"});
  const std::vector<Integer> primes = list_param(params, "p", {3, 5, 7});
  const Integer gen_max = scalar_param(params, "gen-max", 80);
  for (const Integer& p : primes) {
    if (!is_prime(p) || p == 2) {
      throw domain_error("tree: parameter p must list odd primes, got " +
                         p.str());
    }
  }

  VerificationReport rep;
  rep.lemma_id = "tree";
  rep.parameters["p"] = render_values(primes);
  rep.parameters["gen-max"] = gen_max.str();

  for (const Integer& p : primes) {
    const FinitePoset poset = build_xp(p, gen_max);
    std::vector<std::size_t> family;

    for (std::size_t i = 0; i < poset.size(); ++i) {
      ++rep.cases_checked;
      const auto& node = std::get<OrbitClosure>(poset.node(i).payload);
      const std::string tag = "p=" + p.str() + " " + poset.node(i).label;

      // Arithmetic side: index of the form p^j (p-1).
      Integer stripped = node.index;
      unsigned j = 0;
      while (stripped % p == 0) {
        stripped /= p;
        ++j;
      }
      const bool index_form = (stripped == p - 1);

      // Structural side: the set is 1 + p^m N0 for some m >= 1.
      bool structural = false;
      for (unsigned m = 1; m <= node.level; ++m) {
        if (node.set == from_progression(1, ipow(p, m))) {
          structural = true;
          break;
        }
      }

      if (index_form != structural) {
        detail::add_failure(rep, tag,
                            index_form ? "set of the form 1+p^m N0"
                                       : "set not of that form",
                            structural ? "is of that form" : "is not");
        continue;
      }

      if (index_form) {
        family.push_back(i);
        const PeriodicSet expected = from_progression(1, ipow(p, j + 1));
        if (!(node.set == expected)) {
          detail::add_failure(rep, tag, to_residue_string(expected),
                              to_residue_string(node.set));
        }
      } else {
        // Witness that the up-set branches: two incomparable index multiples
        // inside the divisor family. p*d and q*d work for any prime q
        // dividing (p-1)/stripped.
        Integer q = (p - 1) / stripped;
        const Factorization qf = factorize(q);
        if (qf.factors().empty()) {
          detail::add_failure(rep, tag,
                              "a prime divides (p-1)/" + stripped.str(),
                              "none does");
        } else {
          const Integer w1 = node.index * p;
          const Integer w2 = node.index * qf.factors().front().prime;
          if (w1 % w2 == 0 || w2 % w1 == 0) {
            detail::add_failure(rep, tag, "incomparable witnesses above",
                                w1.str() + " and " + w2.str() + " compare");
          }
        }
      }
    }

    // The family is a chain: consecutive members properly include.
    for (std::size_t k = 1; k < family.size(); ++k) {
      ++rep.cases_checked;
      const auto& lo = std::get<OrbitClosure>(poset.node(family[k - 1]).payload);
      const auto& hi = std::get<OrbitClosure>(poset.node(family[k]).payload);
      const auto& small = lo.index < hi.index ? hi : lo;
      const auto& large = lo.index < hi.index ? lo : hi;
      if (relate(small.set, large.set) != SetRelation::ProperSubset) {
        detail::add_failure(rep,
                            "p=" + p.str() + " chain step " +
                                large.index.str() + " -> " + small.index.str(),
                            "proper-subset",
                            to_string(relate(small.set, large.set)));
      }
    }
    if (family.empty()) {
      detail::add_failure(rep, "p=" + p.str(),
                          "the truncation meets the chain family",
                          "no member found");
    }
  }
  (void)jobs;
  trim_failures(rep);
  return rep;
}

// --- d3-vs-d5: the two drawn divisor posets and their separation ------------

inline VerificationReport suite_d3_vs_d5(const SuiteParams& params,
                                         unsigned jobs) {
  require_keys(params, {"depth-max"});
  const unsigned depth_max = static_cast<unsigned>(
      to_u64(scalar_param(params, "depth-max", 3), "depth-max"));
  if (depth_max < 1) throw domain_error("d3-vs-d5: depth-max must be >= 1");

  VerificationReport rep;
  rep.lemma_id = "d3-vs-d5";
  rep.parameters["depth-max"] = std::to_string(depth_max);

  struct Figure {
    Integer p;
    unsigned nmax;
    std::vector<std::string> labels;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::string> bold;
  };
  const std::vector<Figure> figures = {
      {3,
       2,
       {"1", "2", "3", "6", "9", "18"},
       {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 5}, {4, 5}},
       {"2", "6", "18"}},
      {5,
       1,
       {"1", "2", "4", "5", "10", "20"},
       {{0, 1}, {0, 3}, {1, 2}, {1, 4}, {2, 5}, {3, 4}, {4, 5}},
       {"4", "20"}},
  };

  for (const Figure& fig : figures) {
    ++rep.cases_checked;
    const std::string tag = "p=" + fig.p.str();
    const FinitePoset poset = dp_elements(fig.p, fig.nmax);
    bool ok = poset.size() == fig.labels.size();
    for (std::size_t i = 0; ok && i < poset.size(); ++i) {
      ok = poset.node(i).label == fig.labels[i];
    }
    if (!ok) {
      detail::add_failure(rep, tag + " nodes", "the drawn divisor set",
                          "differs");
      continue;
    }
    if (poset.hasse_edges() != fig.edges) {
      detail::add_failure(rep, tag + " edges", "the drawn cover edges",
                          "differ");
    }
    std::vector<std::string> bold;
    const auto& flags = poset.ambient_upchain_flags();
    for (std::size_t i = 0; i < poset.size(); ++i) {
      if (flags[i]) bold.push_back(poset.node(i).label);
    }
    if (bold != fig.bold) {
      detail::add_failure(rep, tag + " bold nodes",
                          "the drawn up-chain elements", "differ");
    }
  }

  for (unsigned d = 1; d <= depth_max; ++d) {
    ++rep.cases_checked;
    const Integer s3 = smallest_upchain_downset_size(3, d);
    const Integer s5 = smallest_upchain_downset_size(5, d);
    if (s3 != 2 || s5 != 3 || s3 == s5) {
      detail::add_failure(rep, "depth=" + std::to_string(d),
                          "downset sizes 2 vs 3",
                          s3.str() + " vs " + s5.str());
    }
  }
  (void)jobs;
  trim_failures(rep);
  return rep;
}

// --- antichain-2: pairwise incomparability of cl((2^n - 1)^N) ---------------

inline VerificationReport suite_antichain_2(const SuiteParams& params,
                                            unsigned jobs) {
  require_keys(params, {"n-min", "n-max"});
  const unsigned n_min = static_cast<unsigned>(
      to_u64(scalar_param(params, "n-min", 2), "n-min"));
  const unsigned n_max = static_cast<unsigned>(
      to_u64(scalar_param(params, "n-max", 10), "n-max"));
  if (n_min < 2) throw domain_error("antichain-2: n-min must be >= 2");
  if (n_max <= n_min) throw domain_error("antichain-2: n-max must exceed n-min");

  VerificationReport rep;
  rep.lemma_id = "antichain-2";
  rep.parameters["n-min"] = std::to_string(n_min);
  rep.parameters["n-max"] = std::to_string(n_max);

  std::vector<OrbitClosure> closures;
  for (unsigned n = n_min; n <= n_max; ++n) {
    closures.push_back(orbit_closure(ipow(2, n) - 1, 2));
  }
  for (std::size_t i = 0; i < closures.size(); ++i) {
    for (std::size_t j = i + 1; j < closures.size(); ++j) {
      ++rep.cases_checked;
      if (xp_leq(closures[i], closures[j]) ||
          xp_leq(closures[j], closures[i])) {
        detail::add_failure(rep,
                            "n=" + std::to_string(n_min + i) + " vs n=" +
                                std::to_string(n_min + j),
                            "incomparable", "comparable");
      }
    }
  }
  (void)jobs;
  trim_failures(rep);
  return rep;
}

// --- rigidity: the induction step over a range ------------------------------

inline VerificationReport suite_rigidity(const SuiteParams& params,
                                         unsigned jobs) {
  require_keys(params, {"from", "to"});
  const Integer from = scalar_param(params, "from", 2);
  const Integer to = scalar_param(params, "to", 10000);
  if (from < 2) throw domain_error("rigidity: from must be >= 2");
  if (to < from) throw domain_error("rigidity: to must be >= from");

  VerificationReport rep;
  rep.lemma_id = "rigidity";
  rep.parameters["from"] = from.str();
  rep.parameters["to"] = to.str();

  const uint64_t count = to_u64(to - from + 1, "rigidity range");
  run_indexed(count, jobs, rep, [&](std::size_t i, VerificationReport& part) {
    const Integer n = from + i;
    ++part.cases_checked;
    const Integer got = reconstruct_n(n);
    if (got != n) {
      detail::add_failure(part, "n=" + n.str(), n.str(), got.str());
    }
  });
  trim_failures(rep);
  return rep;
}

}  // namespace detail

// Runs the named verification sweep. Parameters not supplied fall back to
// the documented defaults; unknown names are rejected. jobs > 1 splits the
// dominant sweep dimension across threads without changing the report.
inline VerificationReport lemma_suite(const std::string& lemma_id,
                                      const SuiteParams& params = {},
                                      unsigned jobs = 1) {
  if (jobs < 1 || jobs > 64) {
    throw domain_error("lemma_suite: jobs must lie in [1, 64]");
  }
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  if (lemma_id == "basic-closure") {
    rep = detail::suite_basic_closure(params, jobs);
  } else if (lemma_id == "gauss") {
    rep = detail::suite_gauss(params, jobs);
  } else if (lemma_id == "S5-stabilization") {
    rep = detail::suite_s5_stabilization(params, jobs);
  } else if (lemma_id == "index") {
    rep = detail::suite_index(params, jobs);
  } else if (lemma_id == "ind2") {
    rep = detail::suite_ind2(params, jobs);
  } else if (lemma_id == "X2") {
    rep = detail::suite_x2(params, jobs);
  } else if (lemma_id == "iso") {
    rep = detail::suite_iso(params, jobs);
  } else if (lemma_id == "ord2") {
    rep = detail::suite_ord2(params, jobs);
  } else if (lemma_id == "anti2") {
    rep = detail::suite_anti2(params, jobs);
  } else if (lemma_id == "tree") {
    rep = detail::suite_tree(params, jobs);
  } else if (lemma_id == "d3-vs-d5") {
    rep = detail::suite_d3_vs_d5(params, jobs);
  } else if (lemma_id == "antichain-2") {
    rep = detail::suite_antichain_2(params, jobs);
  } else if (lemma_id == "rigidity") {
    rep = detail::suite_rigidity(params, jobs);
  } else {
    std::string msg = "unknown lemma id '" + lemma_id + "'; valid ids:";
    for (const std::string& id : lemma_ids()) msg += " " + id;
    throw domain_error(msg);
  }
  rep.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return rep;
}

}  // namespace golomb
