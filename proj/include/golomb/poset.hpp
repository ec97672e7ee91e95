#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "golomb/errors.hpp"
#include "golomb/integer.hpp"
#include "golomb/nt_core.hpp"
#include "golomb/orbit_closure.hpp"

namespace golomb {

inline constexpr std::size_t kMaxPosetNodes = 20000;

struct PosetNode {
  std::string label;
  std::variant<Integer, OrbitClosure> payload;
};

// A finite poset held as an explicit order matrix. Construction re-verifies
// reflexivity, antisymmetry and transitivity over all node pairs, so a
// comparator bug surfaces here rather than downstream.
class FinitePoset {
 public:
  static FinitePoset build(std::vector<PosetNode> nodes,
                           const std::function<bool(std::size_t, std::size_t)>& leq_fn) {
    if (nodes.size() > kMaxPosetNodes) {
      throw resource_error("FinitePoset: too many nodes");
    }
    FinitePoset p;
    p.nodes_ = std::move(nodes);
    const std::size_t n = p.nodes_.size();
    p.leq_.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) p.leq_[i][j] = leq_fn(i, j);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!p.leq_[i][i]) {
        throw internal_error("FinitePoset: order is not reflexive at " +
                             p.nodes_[i].label);
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && p.leq_[i][j] && p.leq_[j][i]) {
          throw internal_error("FinitePoset: antisymmetry fails between " +
                               p.nodes_[i].label + " and " + p.nodes_[j].label);
        }
        for (std::size_t k = 0; k < n; ++k) {
          if (p.leq_[i][j] && p.leq_[j][k] && !p.leq_[i][k]) {
            throw internal_error("FinitePoset: transitivity fails through " +
                                 p.nodes_[j].label);
          }
        }
      }
    }
    // Hasse covers: i < j with nothing strictly between.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || !p.leq_[i][j]) continue;
        bool cover = true;
        for (std::size_t k = 0; k < n && cover; ++k) {
          if (k != i && k != j && p.leq_[i][k] && p.leq_[k][j]) cover = false;
        }
        if (cover) p.hasse_.emplace_back(i, j);
      }
    }
    std::sort(p.hasse_.begin(), p.hasse_.end());
    return p;
  }

  std::size_t size() const { return nodes_.size(); }
  const PosetNode& node(std::size_t i) const { return nodes_.at(i); }
  bool leq(std::size_t i, std::size_t j) const { return leq_.at(i).at(j); }
  const std::vector<std::pair<std::size_t, std::size_t>>& hasse_edges() const {
    return hasse_;
  }

  bool has_ambient_upchain_flags() const { return has_ambient_; }
  const std::vector<bool>& ambient_upchain_flags() const { return ambient_; }
  void set_ambient_upchain_flags(std::vector<bool> flags) {
    if (flags.size() != nodes_.size()) {
      throw internal_error("FinitePoset: flag vector has wrong size");
    }
    ambient_ = std::move(flags);
    has_ambient_ = true;
  }

  std::size_t index_of_label(const std::string& label) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].label == label) return i;
    }
    throw domain_error("FinitePoset: no node labeled " + label);
  }

 private:
  std::vector<PosetNode> nodes_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::pair<std::size_t, std::size_t>> hasse_;
  std::vector<bool> ambient_;
  bool has_ambient_ = false;
};

// Nodes whose up-set within the poset is totally ordered.
inline std::vector<std::size_t> upchain_elements(const FinitePoset& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<std::size_t> up;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p.leq(i, j)) up.push_back(j);
    }
    bool chain = true;
    for (std::size_t a = 0; a < up.size() && chain; ++a) {
      for (std::size_t b = a + 1; b < up.size(); ++b) {
        if (!p.leq(up[a], up[b]) && !p.leq(up[b], up[a])) {
          chain = false;
          break;
        }
      }
    }
    if (chain) out.push_back(i);
  }
  return out;
}

inline std::vector<std::size_t> minimal_elements(const FinitePoset& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool minimal = true;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j != i && p.leq(j, i)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Divisor posets D_p
// ---------------------------------------------------------------------------

// Divisors of p^nmax (p-1) under divisibility. Each node also carries an
// ambient up-chain flag: in the untruncated poset (all exponents of p) the
// up-set of d is a chain iff d's p-free part is exactly p-1, since any
// smaller cofactor admits the incomparable covers d*p and d*q.
inline FinitePoset dp_elements(const Integer& p, unsigned nmax) {
  if (!is_prime(p)) throw domain_error("dp_elements: p must be prime, got " + p.str());
  std::vector<Integer> divs;
  {
    const Factorization f = factorize(p - 1);
    const std::vector<Integer> base = f.divisors();
    Integer pk = 1;
    for (unsigned k = 0; k <= nmax; ++k) {
      for (const Integer& d : base) divs.push_back(d * pk);
      pk *= p;
    }
  }
  std::sort(divs.begin(), divs.end());
  divs.erase(std::unique(divs.begin(), divs.end()), divs.end());
  if (divs.size() > kMaxPosetNodes) {
    throw resource_error("dp_elements: divisor poset too large");
  }

  std::vector<PosetNode> nodes;
  nodes.reserve(divs.size());
  for (const Integer& d : divs) nodes.push_back({d.str(), d});
  FinitePoset poset = FinitePoset::build(
      nodes, [&](std::size_t i, std::size_t j) { return divs[j] % divs[i] == 0; });

  std::vector<bool> ambient(divs.size(), false);
  for (std::size_t i = 0; i < divs.size(); ++i) {
    Integer e = divs[i];
    while (e % p == 0) e /= p;
    ambient[i] = (e == p - 1);
  }
  poset.set_ambient_upchain_flags(std::move(ambient));
  return poset;
}

// Downset size of the smallest ambient up-chain element of D_p, which is
// p - 1 itself, so the answer is its divisor count whatever nmax is. The
// poset route and the arithmetic route are both computed and compared.
inline Integer smallest_upchain_downset_size(const Integer& p, unsigned nmax) {
  if (p == 2 || !is_prime(p)) {
    throw domain_error("smallest_upchain_downset_size: p must be an odd prime");
  }
  if (nmax < 1) throw domain_error("smallest_upchain_downset_size: nmax must be >= 1");

  const Integer tau = Integer(factorize(p - 1).divisors().size());

  const FinitePoset poset = dp_elements(p, std::min(nmax, 3u));
  const auto& flags = poset.ambient_upchain_flags();
  std::size_t smallest = poset.size();
  for (std::size_t i = 0; i < poset.size(); ++i) {
    if (flags[i]) {
      smallest = i;
      break;  // nodes are sorted ascending by value
    }
  }
  if (smallest == poset.size()) {
    throw internal_error("smallest_upchain_downset_size: no up-chain element found");
  }
  Integer downset = 0;
  for (std::size_t j = 0; j < poset.size(); ++j) {
    if (poset.leq(j, smallest)) ++downset;
  }
  if (downset != tau) {
    throw internal_error("smallest_upchain_downset_size: poset route gives " +
                         downset.str() + ", divisor count gives " + tau.str());
  }
  return tau;
}

// ---------------------------------------------------------------------------
// Orbit-closure posets X_p
// ---------------------------------------------------------------------------

// Reverse-inclusion order on orbit closures, computed two independent ways:
// once by set inclusion and once by the index criterion (odd p: x <= y iff
// i(x) | i(y); p = 2: strictly below exactly the closures inside 1 + 4 N0
// with larger index). Any disagreement is an internal error.
inline bool xp_leq(const OrbitClosure& x, const OrbitClosure& y) {
  if (x.p != y.p) {
    throw domain_error("xp_leq: closures live at different primes (" + x.p.str() +
                       " vs " + y.p.str() + ")");
  }
  const SetRelation rel = relate(x.set, y.set);
  const bool via_sets =
      rel == SetRelation::Equal || rel == SetRelation::ProperSuperset;

  bool via_index;
  if (x.p != 2) {
    via_index = (y.index % x.index == 0);
  } else if (x.set == y.set) {
    via_index = true;
  } else {
    // y sits inside 1 + 4 N0 exactly on the plus branch.
    via_index = y.branch == TwoAdicBranch::PlusOne && x.index < y.index;
  }

  if (via_sets != via_index) {
    throw internal_error("xp_leq: set route and index route disagree for a = " +
                         x.a.str() + ", " + y.a.str() + " at p = " + x.p.str());
  }
  return via_sets;
}

// Closures of a^N for all generators 2 <= a <= bound coprime to p, one node
// per distinct closure keeping its smallest generator, ordered by xp_leq.
inline FinitePoset build_xp(const Integer& p, const Integer& generator_bound) {
  if (!is_prime(p)) throw domain_error("build_xp: p must be prime, got " + p.str());
  if (generator_bound < 2) {
    throw domain_error("build_xp: generator bound must be >= 2");
  }
  const uint64_t bound = to_u64(generator_bound, "build_xp: generator bound");
  if (bound > (1u << 20)) {
    throw resource_error("build_xp: generator bound too large");
  }
  std::vector<OrbitClosure> closures;
  for (uint64_t a = 2; a <= bound; ++a) {
    if (Integer(a) % p == 0) continue;
    OrbitClosure x = orbit_closure(a, p);
    bool seen = false;
    for (const OrbitClosure& other : closures) {
      if (other.set == x.set) {
        seen = true;
        break;
      }
    }
    if (!seen) closures.push_back(std::move(x));
  }
  std::vector<PosetNode> nodes;
  nodes.reserve(closures.size());
  for (const OrbitClosure& x : closures) {
    nodes.push_back({"cl(" + x.a.str() + "^ℕ)", x});
  }
  return FinitePoset::build(nodes, [&](std::size_t i, std::size_t j) {
    return xp_leq(closures[i], closures[j]);
  });
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const FinitePoset& p) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const PosetNode& n = p.node(i);
    nlohmann::json payload;
    if (std::holds_alternative<Integer>(n.payload)) {
      payload = json_int(std::get<Integer>(n.payload));
    } else {
      payload = to_json(std::get<OrbitClosure>(n.payload));
    }
    nodes.push_back(nlohmann::json{{"label", n.label}, {"payload", payload}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [lo, hi] : p.hasse_edges()) {
    edges.push_back(nlohmann::json::array({lo, hi}));
  }
  return nlohmann::json{{"nodes", nodes}, {"edges", edges}};
}

// Graphviz rendering of the Hasse diagram, lower -> upper. Up-chain nodes
// (ambient flags when the builder provided them, otherwise computed within
// the poset) are drawn bold. Statements are sorted by label for stable
// output.
inline std::string to_dot(const FinitePoset& p) {
  std::vector<bool> bold(p.size(), false);
  if (p.has_ambient_upchain_flags()) {
    bold = p.ambient_upchain_flags();
  } else {
    for (std::size_t i : upchain_elements(p)) bold[i] = true;
  }

  std::vector<std::size_t> order(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p.node(a).label < p.node(b).label;
  });

  std::string out = "digraph hasse {\n  rankdir=BT;\n";
  for (std::size_t i : order) {
    out += "  \"" + p.node(i).label + "\"";
    if (bold[i]) out += " [style=bold]";
    out += ";\n";
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& [lo, hi] : p.hasse_edges()) {
    edges.emplace_back(p.node(lo).label, p.node(hi).label);
  }
  std::sort(edges.begin(), edges.end());
  for (const auto& [lo, hi] : edges) {
    out += "  \"" + lo + "\" -> \"" + hi + "\";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace golomb
