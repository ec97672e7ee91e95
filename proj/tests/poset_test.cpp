#include "golomb/poset.hpp"

#include <gtest/gtest.h>

#include <set>

#include "test_util.hpp"

using golomb::FinitePoset;
using golomb::Integer;
using golomb::OrbitClosure;
using golomb::PosetNode;

namespace {

std::vector<std::string> labels_of(const FinitePoset& p,
                                   const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (std::size_t i : idx) out.push_back(p.node(i).label);
  return out;
}

std::vector<std::pair<std::string, std::string>> edge_labels(const FinitePoset& p) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [lo, hi] : p.hasse_edges()) {
    out.emplace_back(p.node(lo).label, p.node(hi).label);
  }
  return out;
}

}  // namespace

TEST(FinitePoset, RejectsNonPosets) {
  std::vector<PosetNode> nodes{{"a", Integer(0)}, {"b", Integer(1)}};
  EXPECT_THROW(FinitePoset::build(nodes, [](std::size_t, std::size_t) { return false; }),
               golomb::internal_error);  // not reflexive
  EXPECT_THROW(FinitePoset::build(nodes, [](std::size_t, std::size_t) { return true; }),
               golomb::internal_error);  // not antisymmetric
  std::vector<PosetNode> three{{"a", Integer(0)}, {"b", Integer(1)}, {"c", Integer(2)}};
  EXPECT_THROW(FinitePoset::build(three,
                                  [](std::size_t i, std::size_t j) {
                                    if (i == j) return true;
                                    return (i == 0 && j == 1) || (i == 1 && j == 2);
                                  }),
               golomb::internal_error);  // not transitive
}

TEST(DpElements, FrozenD3) {
  const FinitePoset d3 = golomb::dp_elements(3, 2);
  ASSERT_EQ(d3.size(), 6u);
  const std::vector<std::string> want_labels{"1", "2", "3", "6", "9", "18"};
  for (std::size_t i = 0; i < want_labels.size(); ++i) {
    EXPECT_EQ(d3.node(i).label, want_labels[i]);
  }
  const std::vector<std::pair<std::size_t, std::size_t>> want_edges{
      {0, 1}, {0, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 5}, {4, 5}};
  EXPECT_EQ(d3.hasse_edges(), want_edges);

  ASSERT_TRUE(d3.has_ambient_upchain_flags());
  const auto& flags = d3.ambient_upchain_flags();
  std::vector<std::string> bold;
  for (std::size_t i = 0; i < d3.size(); ++i) {
    if (flags[i]) bold.push_back(d3.node(i).label);
  }
  EXPECT_EQ(bold, (std::vector<std::string>{"2", "6", "18"}));

  // The truncation makes 9 look like an up-chain element from inside; the
  // ambient flags must not.
  EXPECT_EQ(labels_of(d3, golomb::upchain_elements(d3)),
            (std::vector<std::string>{"2", "6", "9", "18"}));
  EXPECT_EQ(labels_of(d3, golomb::minimal_elements(d3)),
            std::vector<std::string>{"1"});
}

TEST(DpElements, FrozenD5) {
  const FinitePoset d5 = golomb::dp_elements(5, 1);
  ASSERT_EQ(d5.size(), 6u);
  const std::vector<std::string> want_labels{"1", "2", "4", "5", "10", "20"};
  for (std::size_t i = 0; i < want_labels.size(); ++i) {
    EXPECT_EQ(d5.node(i).label, want_labels[i]);
  }
  const std::vector<std::pair<std::size_t, std::size_t>> want_edges{
      {0, 1}, {0, 3}, {1, 2}, {1, 4}, {2, 5}, {3, 4}, {4, 5}};
  EXPECT_EQ(d5.hasse_edges(), want_edges);

  const auto& flags = d5.ambient_upchain_flags();
  std::vector<std::string> bold;
  for (std::size_t i = 0; i < d5.size(); ++i) {
    if (flags[i]) bold.push_back(d5.node(i).label);
  }
  EXPECT_EQ(bold, (std::vector<std::string>{"4", "20"}));
}

TEST(DpElements, EdgeCases) {
  const FinitePoset d2 = golomb::dp_elements(2, 0);
  ASSERT_EQ(d2.size(), 1u);
  EXPECT_EQ(d2.node(0).label, "1");
  EXPECT_TRUE(d2.hasse_edges().empty());

  const FinitePoset d2c = golomb::dp_elements(2, 3);
  ASSERT_EQ(d2c.size(), 4u);  // 1, 2, 4, 8: a chain
  EXPECT_EQ(golomb::upchain_elements(d2c).size(), 4u);

  EXPECT_THROW(golomb::dp_elements(6, 1), golomb::domain_error);
}

TEST(DpElements, DivisibilityOrderOnRandomPrimes) {
  auto g = testutil::rng(30);
  const uint64_t primes[] = {3, 5, 7, 11, 13, 17, 19, 23};
  for (int it = 0; it < 40; ++it) {
    const uint64_t p = primes[testutil::draw(g, 0, std::size(primes) - 1)];
    const unsigned nmax = static_cast<unsigned>(testutil::draw(g, 0, 3));
    const FinitePoset poset = golomb::dp_elements(p, nmax);

    // Node values are exactly the divisors of p^nmax (p-1).
    Integer top = golomb::ipow(p, nmax) * (p - 1);
    std::set<Integer> values;
    for (std::size_t i = 0; i < poset.size(); ++i) {
      const Integer d = std::get<Integer>(poset.node(i).payload);
      EXPECT_EQ(top % d, 0);
      values.insert(d);
    }
    for (const Integer& d : golomb::factorize(top).divisors()) {
      EXPECT_TRUE(values.count(d)) << d.str();
    }
    EXPECT_EQ(values.size(), poset.size());

    // Ambient up-chain values are exactly p^k (p-1).
    const auto& flags = poset.ambient_upchain_flags();
    for (std::size_t i = 0; i < poset.size(); ++i) {
      const Integer d = std::get<Integer>(poset.node(i).payload);
      bool expect_flag = false;
      Integer v = p - 1;
      for (unsigned k = 0; k <= nmax; ++k, v *= p) {
        if (v == d) expect_flag = true;
      }
      EXPECT_EQ(flags[i], expect_flag) << "p=" << p << " d=" << d.str();
    }
  }
}

TEST(SmallestUpchainDownset, FrozenValues) {
  EXPECT_EQ(golomb::smallest_upchain_downset_size(3, 2), 2);
  EXPECT_EQ(golomb::smallest_upchain_downset_size(5, 2), 3);
  EXPECT_EQ(golomb::smallest_upchain_downset_size(7, 1), 4);
  EXPECT_EQ(golomb::smallest_upchain_downset_size(13, 5), 6);
  // Independent of the truncation depth.
  for (unsigned nmax = 1; nmax <= 6; ++nmax) {
    EXPECT_EQ(golomb::smallest_upchain_downset_size(3, nmax), 2);
  }
  EXPECT_THROW(golomb::smallest_upchain_downset_size(2, 1), golomb::domain_error);
  EXPECT_THROW(golomb::smallest_upchain_downset_size(5, 0), golomb::domain_error);
}

TEST(XpLeq, ReverseInclusionWithIndexCrossCheck) {
  const OrbitClosure x9 = golomb::orbit_closure(9, 2);
  const OrbitClosure x5 = golomb::orbit_closure(5, 2);
  EXPECT_TRUE(golomb::xp_leq(x5, x9));   // 1+8N0 inside 1+4N0
  EXPECT_FALSE(golomb::xp_leq(x9, x5));
  EXPECT_TRUE(golomb::xp_leq(x5, x5));

  const OrbitClosure x3 = golomb::orbit_closure(3, 2);
  const OrbitClosure x7 = golomb::orbit_closure(7, 2);
  EXPECT_FALSE(golomb::xp_leq(x3, x7));
  EXPECT_FALSE(golomb::xp_leq(x7, x3));

  const OrbitClosure y2 = golomb::orbit_closure(2, 3);
  const OrbitClosure y4 = golomb::orbit_closure(4, 3);
  EXPECT_TRUE(golomb::xp_leq(y2, y4));  // 1+3N0 inside N minus 3N
  EXPECT_FALSE(golomb::xp_leq(y4, y2));

  EXPECT_THROW(golomb::xp_leq(x9, y2), golomb::domain_error);
}

TEST(BuildXp, SmallOddCase) {
  const FinitePoset xp = golomb::build_xp(3, 4);
  ASSERT_EQ(xp.size(), 2u);
  EXPECT_EQ(xp.node(0).label, "cl(2^ℕ)");
  EXPECT_EQ(xp.node(1).label, "cl(4^ℕ)");
  const std::vector<std::pair<std::size_t, std::size_t>> want{{0, 1}};
  EXPECT_EQ(xp.hasse_edges(), want);
}

TEST(BuildXp, TwoAdicNineGenerators) {
  const FinitePoset xp = golomb::build_xp(2, 9);
  ASSERT_EQ(xp.size(), 4u);
  const std::vector<std::string> want_labels{"cl(3^ℕ)", "cl(5^ℕ)", "cl(7^ℕ)",
                                             "cl(9^ℕ)"};
  for (std::size_t i = 0; i < want_labels.size(); ++i) {
    EXPECT_EQ(xp.node(i).label, want_labels[i]);
  }
  const std::vector<std::pair<std::string, std::string>> want_edges{
      {"cl(3^ℕ)", "cl(9^ℕ)"}, {"cl(5^ℕ)", "cl(9^ℕ)"}};
  EXPECT_EQ(edge_labels(xp), want_edges);
}

TEST(BuildXp, TwoAdicThirtyThreeMatchesHasseFigure) {
  const FinitePoset xp = golomb::build_xp(2, 33);
  ASSERT_EQ(xp.size(), 8u);
  const std::vector<std::string> want_labels{
      "cl(3^ℕ)", "cl(5^ℕ)", "cl(7^ℕ)", "cl(9^ℕ)",
      "cl(15^ℕ)", "cl(17^ℕ)", "cl(31^ℕ)", "cl(33^ℕ)"};
  for (std::size_t i = 0; i < want_labels.size(); ++i) {
    EXPECT_EQ(xp.node(i).label, want_labels[i]);
  }

  const std::vector<std::pair<std::string, std::string>> want_edges{
      {"cl(3^ℕ)", "cl(9^ℕ)"},  {"cl(5^ℕ)", "cl(9^ℕ)"},
      {"cl(7^ℕ)", "cl(17^ℕ)"}, {"cl(9^ℕ)", "cl(17^ℕ)"},
      {"cl(15^ℕ)", "cl(33^ℕ)"}, {"cl(17^ℕ)", "cl(33^ℕ)"}};
  EXPECT_EQ(edge_labels(xp), want_edges);

  EXPECT_EQ(labels_of(xp, golomb::minimal_elements(xp)),
            (std::vector<std::string>{"cl(3^ℕ)", "cl(5^ℕ)", "cl(7^ℕ)",
                                      "cl(15^ℕ)", "cl(31^ℕ)"}));
}

TEST(BuildXp, DeduplicationKeepsSmallestGenerator) {
  const FinitePoset xp = golomb::build_xp(2, 29);
  // 11, 19, 27 share cl(3); 13, 21, 29 share cl(5); 23 shares cl(7);
  // 25 shares cl(9).
  std::set<std::string> labels;
  for (std::size_t i = 0; i < xp.size(); ++i) labels.insert(xp.node(i).label);
  EXPECT_TRUE(labels.count("cl(3^ℕ)"));
  EXPECT_FALSE(labels.count("cl(11^ℕ)"));
  EXPECT_FALSE(labels.count("cl(19^ℕ)"));
  EXPECT_FALSE(labels.count("cl(25^ℕ)"));
  EXPECT_FALSE(labels.count("cl(29^ℕ)"));
}

TEST(BuildXp, Validation) {
  EXPECT_THROW(golomb::build_xp(4, 10), golomb::domain_error);
  EXPECT_THROW(golomb::build_xp(3, 1), golomb::domain_error);
  EXPECT_THROW(golomb::build_xp(3, Integer(1) << 30), golomb::resource_error);
}

TEST(PosetJson, SchemaAndPayloads) {
  const FinitePoset d3 = golomb::dp_elements(3, 1);
  const nlohmann::json j = golomb::to_json(d3);
  ASSERT_TRUE(j.contains("nodes"));
  ASSERT_TRUE(j.contains("edges"));
  ASSERT_EQ(j["nodes"].size(), 4u);  // 1, 2, 3, 6
  EXPECT_EQ(j["nodes"][0]["label"], "1");
  EXPECT_EQ(j["nodes"][0]["payload"], 1);
  for (const auto& e : j["edges"]) {
    ASSERT_TRUE(e.is_array());
    ASSERT_EQ(e.size(), 2u);
    EXPECT_LT(e[0].get<std::size_t>(), d3.size());
    EXPECT_LT(e[1].get<std::size_t>(), d3.size());
  }

  const nlohmann::json jx = golomb::to_json(golomb::build_xp(2, 9));
  EXPECT_EQ(jx["nodes"][0]["label"], "cl(3^ℕ)");
  EXPECT_EQ(jx["nodes"][0]["payload"]["index"], 2);
  EXPECT_EQ(jx["nodes"][0]["payload"]["branch"], "minus-one");
}

TEST(PosetDot, DeterministicRendering) {
  const FinitePoset d3 = golomb::dp_elements(3, 1);
  const std::string dot = golomb::to_dot(d3);
  EXPECT_EQ(dot, golomb::to_dot(golomb::dp_elements(3, 1)));
  EXPECT_NE(dot.find("digraph hasse {"), std::string::npos);
  EXPECT_NE(dot.find("rankdir=BT"), std::string::npos);
  EXPECT_NE(dot.find("\"2\" [style=bold];"), std::string::npos);
  EXPECT_NE(dot.find("\"6\" [style=bold];"), std::string::npos);
  EXPECT_EQ(dot.find("\"1\" [style=bold]"), std::string::npos);
  EXPECT_NE(dot.find("\"1\" -> \"2\";"), std::string::npos);
  EXPECT_NE(dot.find("\"3\" -> \"6\";"), std::string::npos);

  // Within-poset fallback for posets without ambient flags.
  const std::string xdot = golomb::to_dot(golomb::build_xp(2, 9));
  EXPECT_NE(xdot.find("\"cl(3^ℕ)\" -> \"cl(9^ℕ)\";"), std::string::npos);
}
