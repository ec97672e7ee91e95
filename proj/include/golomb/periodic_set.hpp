#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "golomb/errors.hpp"
#include "golomb/integer.hpp"
#include "golomb/nt_core.hpp"

namespace golomb {

// Hard cap on the number of residues any operation will materialize. Inputs
// that would push past it raise resource_error instead of thrashing.
inline constexpr uint64_t kResidueLimit = 1ull << 22;

// ---------------------------------------------------------------------------
// ResidueSet: an immutable subset of Z/M, bit-packed while M is small and a
// sorted list beyond that.
// ---------------------------------------------------------------------------

class ResidueSet {
 public:
  static constexpr uint64_t kDenseLimit = 1ull << 16;

  static ResidueSet from_vector(uint64_t modulus, std::vector<uint64_t> values) {
    if (modulus < 1) throw domain_error("ResidueSet: modulus must be >= 1");
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (!values.empty() && values.back() >= modulus) {
      throw domain_error("ResidueSet: residue " + std::to_string(values.back()) +
                         " >= modulus " + std::to_string(modulus));
    }
    if (values.size() > kResidueLimit) {
      throw resource_error("ResidueSet: residue count exceeds limit");
    }
    ResidueSet rs;
    rs.modulus_ = modulus;
    rs.dense_ = modulus <= kDenseLimit;
    if (rs.dense_) {
      rs.bits_.assign(modulus, false);
      for (uint64_t v : values) rs.bits_[v] = true;
      rs.count_ = values.size();
    } else {
      rs.sorted_ = std::move(values);
    }
    return rs;
  }

  uint64_t modulus() const { return modulus_; }
  bool dense() const { return dense_; }

  bool contains(uint64_t r) const {
    if (dense_) return bits_[r];
    return std::binary_search(sorted_.begin(), sorted_.end(), r);
  }

  uint64_t size() const { return dense_ ? count_ : sorted_.size(); }
  bool empty() const { return size() == 0; }

  std::vector<uint64_t> to_vector() const {
    if (!dense_) return sorted_;
    std::vector<uint64_t> out;
    out.reserve(count_);
    for (uint64_t r = 0; r < modulus_; ++r) {
      if (bits_[r]) out.push_back(r);
    }
    return out;
  }

  friend bool operator==(const ResidueSet& a, const ResidueSet& b) {
    if (a.modulus_ != b.modulus_ || a.size() != b.size()) return false;
    if (a.dense_) return a.bits_ == b.bits_;  // same modulus, same layout
    return a.sorted_ == b.sorted_;
  }

 private:
  ResidueSet() = default;

  uint64_t modulus_ = 1;
  bool dense_ = true;
  std::vector<bool> bits_;
  std::vector<uint64_t> sorted_;
  uint64_t count_ = 0;
};

// ---------------------------------------------------------------------------
// PeriodicSet: an eventually periodic subset of N = {1, 2, ...}. Membership
// of x < threshold is decided by the exception list, membership of
// x >= threshold by x mod modulus. Operations return canonical values
// (minimal modulus, then minimal threshold), under which structural equality
// coincides with set equality.
// ---------------------------------------------------------------------------

class PeriodicSet {
 public:
  // Builds a possibly non-canonical value; validates well-formedness only.
  static PeriodicSet raw(uint64_t threshold, uint64_t modulus,
                         std::vector<uint64_t> residues,
                         std::vector<uint64_t> exceptions) {
    if (threshold < 1) throw domain_error("PeriodicSet: threshold must be >= 1");
    PeriodicSet s;
    s.threshold_ = threshold;
    s.modulus_ = modulus;
    s.residues_ = ResidueSet::from_vector(modulus, std::move(residues));
    std::sort(exceptions.begin(), exceptions.end());
    exceptions.erase(std::unique(exceptions.begin(), exceptions.end()),
                     exceptions.end());
    if (!exceptions.empty() &&
        (exceptions.front() < 1 || exceptions.back() >= threshold)) {
      throw domain_error("PeriodicSet: exceptions must lie in [1, threshold)");
    }
    if (exceptions.size() > kResidueLimit) {
      throw resource_error("PeriodicSet: exception count exceeds limit");
    }
    s.exceptions_ = std::move(exceptions);
    return s;
  }

  static PeriodicSet universe() { return raw(1, 1, {0}, {}); }
  static PeriodicSet empty_set() { return raw(1, 1, {}, {}); }

  uint64_t threshold() const { return threshold_; }
  uint64_t modulus() const { return modulus_; }
  const ResidueSet& residue_set() const { return residues_; }
  uint64_t residue_count() const { return residues_.size(); }
  std::vector<uint64_t> residues() const { return residues_.to_vector(); }
  const std::vector<uint64_t>& exceptions() const { return exceptions_; }

  bool member_u64(uint64_t x) const {
    if (x < 1) throw domain_error("PeriodicSet: membership is defined on x >= 1");
    if (x < threshold_) {
      return std::binary_search(exceptions_.begin(), exceptions_.end(), x);
    }
    return residues_.contains(x % modulus_);
  }

  bool member(const Integer& x) const {
    if (x < 1) throw domain_error("PeriodicSet: membership is defined on x >= 1");
    if (x < threshold_) return member_u64(static_cast<uint64_t>(x));
    return residues_.contains(static_cast<uint64_t>(x % modulus_));
  }

  // Exact regardless of canonicity: no residue classes and no exceptions.
  bool is_empty() const { return residues_.empty() && exceptions_.empty(); }

  // Assumes canonical form.
  bool is_universe() const {
    return threshold_ == 1 && modulus_ == 1 && residues_.size() == 1;
  }

  friend bool operator==(const PeriodicSet& a, const PeriodicSet& b) {
    return a.threshold_ == b.threshold_ && a.modulus_ == b.modulus_ &&
           a.residues_ == b.residues_ && a.exceptions_ == b.exceptions_;
  }

 private:
  PeriodicSet() = default;

  uint64_t threshold_ = 1;
  uint64_t modulus_ = 1;
  ResidueSet residues_ = ResidueSet::from_vector(1, {});
  std::vector<uint64_t> exceptions_;
};

// ---------------------------------------------------------------------------
// Canonicalization
// ---------------------------------------------------------------------------

// Canonical form: (1) the modulus is the minimal period of the tail, found by
// repeatedly folding along prime quotients that leave the residue set
// shift-invariant; (2) the threshold is one past the last point where actual
// membership disagrees with the periodic rule, located directly from the
// residue classes and the exception list rather than by scanning.
inline PeriodicSet canonicalize(const PeriodicSet& s) {
  uint64_t M = s.modulus();
  std::vector<uint64_t> R = s.residues();

  if (R.empty()) {
    M = 1;
  } else {
    const Factorization period_factors = factorize(M);
    for (const auto& f : period_factors.factors()) {
      const uint64_t q = to_u64(f.prime, "canonicalize: period prime");
      while (M % q == 0) {
        const uint64_t d = M / q;
        if (d == 0) break;
        const ResidueSet rs = ResidueSet::from_vector(M, R);
        bool invariant = true;
        for (uint64_t r : R) {
          if (!rs.contains((r + d) % M)) {
            invariant = false;
            break;
          }
        }
        if (!invariant) break;
        for (uint64_t& r : R) r %= d;
        std::sort(R.begin(), R.end());
        R.erase(std::unique(R.begin(), R.end()), R.end());
        M = d;
      }
    }
  }

  const ResidueSet rule = ResidueSet::from_vector(M, R);
  const auto& E = s.exceptions();
  const uint64_t t_old = s.threshold();
  uint64_t last_disagreement = 0;

  // Exceptional members the periodic rule misses.
  for (uint64_t e : E) {
    if (!rule.contains(e % M)) last_disagreement = std::max(last_disagreement, e);
  }
  // Non-members below the old threshold the periodic rule would claim.
  if (t_old >= 2) {
    const uint64_t base = t_old - 1;
    for (uint64_t r : R) {
      if (base < r) continue;
      uint64_t x = base - ((base - r) % M);
      while (x >= 1 && std::binary_search(E.begin(), E.end(), x)) {
        if (x <= M) {
          x = 0;
          break;
        }
        x -= M;
      }
      last_disagreement = std::max(last_disagreement, x);
    }
  }

  const uint64_t t_new = last_disagreement + 1;
  std::vector<uint64_t> e_new;
  for (uint64_t e : E) {
    if (e < t_new) e_new.push_back(e);
  }
  return PeriodicSet::raw(t_new, M, std::move(R), std::move(e_new));
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

// Ascending members of s in [lo, hi]. Output size is capped at kResidueLimit.
inline std::vector<uint64_t> members_in(const PeriodicSet& s, uint64_t lo,
                                        uint64_t hi) {
  if (lo < 1) lo = 1;
  std::vector<uint64_t> out;
  if (hi < lo) return out;

  const uint64_t t = s.threshold();
  for (uint64_t e : s.exceptions()) {
    if (e >= lo && e <= hi) out.push_back(e);
  }
  if (hi >= t) {
    const uint64_t begin = std::max(lo, t);
    const uint64_t m = s.modulus();
    const uint64_t span_terms = (hi - begin) / m + 1;
    if (span_terms * s.residue_count() > kResidueLimit) {
      throw resource_error("members_in: window would enumerate too many members");
    }
    for (uint64_t r : s.residues()) {
      const uint64_t rem = begin % m;
      const uint64_t step = (r >= rem) ? (r - rem) : (m - (rem - r));
      if (hi - begin < step) continue;
      uint64_t x = begin + step;
      while (true) {
        out.push_back(x);
        if (hi - x < m) break;
        x += m;
      }
    }
    std::sort(out.begin(), out.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Set algebra. All binary operations align both sets to the lcm of their
// moduli (dense workspace when that lcm is small), handle the region below
// the joint threshold through explicit membership, and canonicalize.
// ---------------------------------------------------------------------------

namespace detail {

inline uint64_t joint_modulus(const PeriodicSet& a, const PeriodicSet& b,
                              const char* what) {
  return to_u64(lcm(Integer(a.modulus()), Integer(b.modulus())), what);
}

inline void check_lift_cost(const PeriodicSet& s, uint64_t L, const char* what) {
  const unsigned __int128 cost =
      static_cast<unsigned __int128>(s.residue_count()) * (L / s.modulus());
  if (cost > kResidueLimit) {
    throw resource_error(std::string(what) + ": residue table would exceed limit");
  }
}

inline unsigned __int128 lift_cost(const PeriodicSet& s, uint64_t L) {
  return static_cast<unsigned __int128>(s.residue_count()) * (L / s.modulus());
}

// All c in [0, L) whose class mod s.modulus() is in s, with M | L.
inline std::vector<uint64_t> lift_classes(const PeriodicSet& s, uint64_t L,
                                          const char* what) {
  check_lift_cost(s, L, what);
  std::vector<uint64_t> out;
  out.reserve(static_cast<std::size_t>(lift_cost(s, L)));
  const uint64_t m = s.modulus();
  for (uint64_t r : s.residues()) {
    for (uint64_t c = r; c < L; c += m) {
      out.push_back(c);
      if (L - c <= m) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<uint64_t> joint_exceptions(const PeriodicSet& a,
                                              const PeriodicSet& b, uint64_t t,
                                              bool keep_in_b) {
  // Members of a below t, filtered by membership (or non-membership) in b.
  std::vector<uint64_t> out;
  if (t <= 1) return out;
  for (uint64_t x : members_in(a, 1, t - 1)) {
    if (b.member_u64(x) == keep_in_b) out.push_back(x);
  }
  return out;
}

}  // namespace detail

inline PeriodicSet intersect(const PeriodicSet& a, const PeriodicSet& b) {
  const uint64_t L = detail::joint_modulus(a, b, "intersect: combined modulus");
  const uint64_t t = std::max(a.threshold(), b.threshold());
  std::vector<uint64_t> residues;
  if (L <= ResidueSet::kDenseLimit) {
    for (uint64_t c = 0; c < L; ++c) {
      if (a.residue_set().contains(c % a.modulus()) &&
          b.residue_set().contains(c % b.modulus())) {
        residues.push_back(c);
      }
    }
  } else if (detail::lift_cost(a, L) <= detail::lift_cost(b, L)) {
    for (uint64_t c : detail::lift_classes(a, L, "intersect")) {
      if (b.residue_set().contains(c % b.modulus())) residues.push_back(c);
    }
  } else {
    for (uint64_t c : detail::lift_classes(b, L, "intersect")) {
      if (a.residue_set().contains(c % a.modulus())) residues.push_back(c);
    }
  }
  auto exceptions = detail::joint_exceptions(a, b, t, true);
  return canonicalize(PeriodicSet::raw(t, L, std::move(residues), std::move(exceptions)));
}

inline PeriodicSet set_union(const PeriodicSet& a, const PeriodicSet& b) {
  const uint64_t L = detail::joint_modulus(a, b, "set_union: combined modulus");
  const uint64_t t = std::max(a.threshold(), b.threshold());
  std::vector<uint64_t> residues;
  if (L <= ResidueSet::kDenseLimit) {
    for (uint64_t c = 0; c < L; ++c) {
      if (a.residue_set().contains(c % a.modulus()) ||
          b.residue_set().contains(c % b.modulus())) {
        residues.push_back(c);
      }
    }
  } else {
    residues = detail::lift_classes(a, L, "set_union");
    auto more = detail::lift_classes(b, L, "set_union");
    residues.insert(residues.end(), more.begin(), more.end());
  }
  std::vector<uint64_t> exceptions;
  if (t > 1) {
    exceptions = members_in(a, 1, t - 1);
    auto more = members_in(b, 1, t - 1);
    exceptions.insert(exceptions.end(), more.begin(), more.end());
  }
  return canonicalize(PeriodicSet::raw(t, L, std::move(residues), std::move(exceptions)));
}

inline PeriodicSet complement(const PeriodicSet& s) {
  const uint64_t m = s.modulus();
  std::vector<uint64_t> residues;
  if (m - s.residue_count() > kResidueLimit) {
    throw resource_error("complement: residue table would exceed limit");
  }
  if (s.threshold() - 1 > kResidueLimit) {
    throw resource_error("complement: exception table would exceed limit");
  }
  if (m <= ResidueSet::kDenseLimit) {
    for (uint64_t c = 0; c < m; ++c) {
      if (!s.residue_set().contains(c)) residues.push_back(c);
    }
  } else {
    const auto present = s.residues();
    std::size_t i = 0;
    for (uint64_t c = 0; c < m; ++c) {
      if (i < present.size() && present[i] == c) {
        ++i;
      } else {
        residues.push_back(c);
      }
    }
  }
  std::vector<uint64_t> exceptions;
  const auto& e = s.exceptions();
  std::size_t i = 0;
  for (uint64_t x = 1; x < s.threshold(); ++x) {
    if (i < e.size() && e[i] == x) {
      ++i;
    } else {
      exceptions.push_back(x);
    }
    if (exceptions.size() > kResidueLimit) {
      throw resource_error("complement: exception table would exceed limit");
    }
  }
  return canonicalize(
      PeriodicSet::raw(s.threshold(), m, std::move(residues), std::move(exceptions)));
}

inline PeriodicSet difference(const PeriodicSet& a, const PeriodicSet& b) {
  const uint64_t L = detail::joint_modulus(a, b, "difference: combined modulus");
  const uint64_t t = std::max(a.threshold(), b.threshold());
  std::vector<uint64_t> residues;
  if (L <= ResidueSet::kDenseLimit) {
    for (uint64_t c = 0; c < L; ++c) {
      if (a.residue_set().contains(c % a.modulus()) &&
          !b.residue_set().contains(c % b.modulus())) {
        residues.push_back(c);
      }
    }
  } else {
    for (uint64_t c : detail::lift_classes(a, L, "difference")) {
      if (!b.residue_set().contains(c % b.modulus())) residues.push_back(c);
    }
  }
  auto exceptions = detail::joint_exceptions(a, b, t, false);
  return canonicalize(PeriodicSet::raw(t, L, std::move(residues), std::move(exceptions)));
}

enum class SetRelation { Equal, ProperSubset, ProperSuperset, Incomparable };

inline SetRelation relate(const PeriodicSet& a_in, const PeriodicSet& b_in) {
  const PeriodicSet a = canonicalize(a_in);
  const PeriodicSet b = canonicalize(b_in);
  if (a == b) return SetRelation::Equal;
  const PeriodicSet meet = intersect(a, b);
  if (meet == a) return SetRelation::ProperSubset;
  if (meet == b) return SetRelation::ProperSuperset;
  return SetRelation::Incomparable;
}

inline const char* to_string(SetRelation r) {
  switch (r) {
    case SetRelation::Equal: return "equal";
    case SetRelation::ProperSubset: return "proper-subset";
    case SetRelation::ProperSuperset: return "proper-superset";
    default: return "incomparable";
  }
}

// ---------------------------------------------------------------------------
// Arithmetic progressions and Golomb closures
// ---------------------------------------------------------------------------

// {a, a+b, a+2b, ...} as a PeriodicSet.
inline PeriodicSet from_progression(const Integer& a, const Integer& b) {
  if (a < 1 || b < 1) throw domain_error("from_progression: a and b must be >= 1");
  const uint64_t a64 = to_u64(a, "from_progression: a");
  const uint64_t b64 = to_u64(b, "from_progression: b");
  return canonicalize(PeriodicSet::raw(a64, b64, {a64 % b64}, {}));
}

inline bool is_golomb_basic(const Integer& a, const Integer& b) {
  if (a < 1 || b < 1) throw domain_error("is_golomb_basic: a and b must be >= 1");
  return gcd(a, b) == 1;
}

// Topological closure of the basic open set a + b N0: the intersection over
// the prime powers p^l || b of (multiples of p) U (a mod p^l class).
inline PeriodicSet golomb_closure(const Integer& a, const Integer& b) {
  if (a < 1 || b < 1) throw domain_error("golomb_closure: a and b must be >= 1");
  if (gcd(a, b) != 1) {
    throw domain_error("golomb_closure: a and b must be coprime, got a=" + a.str() +
                       " b=" + b.str());
  }
  const uint64_t b64 = to_u64(b, "golomb_closure: b");
  PeriodicSet acc = PeriodicSet::universe();
  if (b64 == 1) return acc;
  const Factorization bf = factorize(b64);
  for (const auto& f : bf.factors()) {
    const uint64_t p = to_u64(f.prime, "golomb_closure: prime");
    uint64_t pl = 1;
    for (unsigned i = 0; i < f.exponent; ++i) pl *= p;
    std::vector<uint64_t> residues;
    for (uint64_t c = 0; c < pl; c += p) residues.push_back(c);
    residues.push_back(to_u64(a % pl, "golomb_closure: residue"));
    acc = intersect(acc, PeriodicSet::raw(1, pl, std::move(residues), {}));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Serialization and printing
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const PeriodicSet& s) {
  return nlohmann::json{{"threshold", s.threshold()},
                        {"modulus", s.modulus()},
                        {"residues", s.residues()},
                        {"exceptions", s.exceptions()}};
}

inline PeriodicSet periodic_set_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw domain_error("periodic set: expected a JSON object");
  for (const auto& key : {"threshold", "modulus", "residues", "exceptions"}) {
    if (!j.contains(key)) {
      throw domain_error(std::string("periodic set: missing field '") + key + "'");
    }
  }
  auto read_u64 = [&](const char* key) {
    return to_u64(integer_from_json(j.at(key), key), key);
  };
  auto read_list = [&](const char* key) {
    const auto& arr = j.at(key);
    if (!arr.is_array()) {
      throw domain_error(std::string("periodic set: '") + key + "' must be an array");
    }
    std::vector<uint64_t> out;
    for (const auto& v : arr) out.push_back(to_u64(integer_from_json(v, key), key));
    return out;
  };
  return canonicalize(PeriodicSet::raw(read_u64("threshold"), read_u64("modulus"),
                                       read_list("residues"), read_list("exceptions")));
}

// "{x ≡ 0, 2 (mod 3)}" for purely periodic sets; sets with a nontrivial
// threshold get the progression rendering instead.
inline std::string to_progressions_string(const PeriodicSet& s_in);

inline std::string to_residue_string(const PeriodicSet& s_in) {
  const PeriodicSet s = canonicalize(s_in);
  if (s.is_empty()) return "∅";
  if (s.is_universe()) return "ℕ";
  if (s.threshold() > 1) return to_progressions_string(s);
  std::string out = "{x ≡ ";
  bool first = true;
  for (uint64_t r : s.residues()) {
    if (!first) out += ", ";
    out += std::to_string(r);
    first = false;
  }
  out += " (mod " + std::to_string(s.modulus()) + ")}";
  return out;
}

// "(1+8ℕ₀)∪(3+8ℕ₀)": each residue class printed from its first member at or
// above the threshold, exceptional members collected up front.
inline std::string to_progressions_string(const PeriodicSet& s_in) {
  const PeriodicSet s = canonicalize(s_in);
  if (s.is_empty()) return "∅";
  if (s.is_universe()) return "ℕ";
  std::string out;
  if (!s.exceptions().empty()) {
    out += "{";
    bool first = true;
    for (uint64_t e : s.exceptions()) {
      if (!first) out += ",";
      out += std::to_string(e);
      first = false;
    }
    out += "}";
  }
  const uint64_t t = s.threshold();
  const uint64_t m = s.modulus();
  std::vector<uint64_t> starts;
  for (uint64_t r : s.residues()) {
    const uint64_t rem = t % m;
    starts.push_back(t + ((r >= rem) ? (r - rem) : (m - (rem - r))));
  }
  std::sort(starts.begin(), starts.end());
  for (uint64_t v : starts) {
    if (!out.empty()) out += "∪";
    out += "(" + std::to_string(v) + "+" + std::to_string(m) + "ℕ₀)";
  }
  return out;
}

}  // namespace golomb
