#include "golomb/cli.hpp"

#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "golomb/orbit_closure.hpp"
#include "golomb/periodic_set.hpp"

namespace {

using golomb::PeriodicSet;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunResult r;
  r.code = golomb::cli::dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

TEST(ClosureCommand, TextOutput) {
  const RunResult r = run({"closure", "--a", "2", "--b", "3", "--format", "text"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{x ≡ 0, 2 (mod 3)}\n");
  EXPECT_EQ(r.err, "");
}

TEST(ClosureCommand, TextIsTheDefaultFormat) {
  EXPECT_EQ(run({"closure", "--a", "2", "--b", "3"}).out, "{x ≡ 0, 2 (mod 3)}\n");
}

TEST(ClosureCommand, JsonRoundTrips) {
  const RunResult r = run({"closure", "--a", "3", "--b", "8", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  const PeriodicSet parsed = golomb::periodic_set_from_json(j);
  EXPECT_EQ(golomb::relate(parsed, golomb::golomb_closure(3, 8)),
            golomb::SetRelation::Equal);
}

TEST(ClosureCommand, AcceptsArbitraryPrecisionOperands) {
  const RunResult r =
      run({"closure", "--a", "1000000000000000000000000000000", "--b", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{x ≡ 0, 1 (mod 3)}\n");
}

TEST(ClosureCommand, RejectsNonCoprimeInput) {
  const RunResult r = run({"closure", "--a", "2", "--b", "4"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "");
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  EXPECT_NE(r.err.find("coprime"), std::string::npos);
}

TEST(ClosureCommand, RejectsMalformedInteger) {
  const RunResult r = run({"closure", "--a", "two", "--b", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--a"), std::string::npos);
}

TEST(OrbitCommand, TwoAdicTextOutput) {
  const RunResult r = run({"orbit", "--a", "3", "--p", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "p: 2\n"
            "a: 3\n"
            "level: 4\n"
            "index: 2\n"
            "subgroup-order: 4\n"
            "branch: minus-one\n"
            "set: (1+8ℕ₀)∪(3+8ℕ₀)\n");
}

TEST(OrbitCommand, OddPrimeTextOmitsBranch) {
  const RunResult r = run({"orbit", "--a", "4", "--p", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "p: 3\n"
            "a: 4\n"
            "level: 2\n"
            "index: 2\n"
            "subgroup-order: 3\n"
            "set: (1+3ℕ₀)\n");
}

TEST(OrbitCommand, JsonMatchesClosureOfThree) {
  const RunResult r = run({"orbit", "--a", "3", "--p", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("p").get<int>(), 2);
  EXPECT_EQ(j.at("a").get<int>(), 3);
  EXPECT_EQ(j.at("level").get<unsigned>(), 4u);
  EXPECT_EQ(j.at("index").get<int>(), 2);
  EXPECT_EQ(j.at("subgroup_order").get<int>(), 4);
  EXPECT_EQ(j.at("branch").get<std::string>(), "minus-one");
  const PeriodicSet set = golomb::periodic_set_from_json(j.at("set"));
  const PeriodicSet expected =
      golomb::canonicalize(PeriodicSet::raw(1, 8, {1, 3}, {}));
  EXPECT_EQ(golomb::relate(set, expected), golomb::SetRelation::Equal);
}

TEST(OrbitCommand, RejectsGeneratorDivisibleByP) {
  EXPECT_EQ(run({"orbit", "--a", "6", "--p", "3"}).code, 1);
}

TEST(PosetCommand, DpTextOutput) {
  const RunResult r =
      run({"poset", "--kind", "dp", "--p", "3", "--nmax", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "6 nodes, 7 edges\n"
            "node 0: 1\n"
            "node 1: 2\n"
            "node 2: 3\n"
            "node 3: 6\n"
            "node 4: 9\n"
            "node 5: 18\n"
            "up-chain: 2 6 18\n"
            "1 -> 2\n"
            "1 -> 3\n"
            "2 -> 6\n"
            "3 -> 6\n"
            "3 -> 9\n"
            "6 -> 18\n"
            "9 -> 18\n");
}

TEST(PosetCommand, XpJsonOutput) {
  const RunResult r = run(
      {"poset", "--kind", "xp", "--p", "2", "--gen-max", "9", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.at("nodes").size(), 4u);
  auto index_of = [&](const std::string& label) -> std::size_t {
    for (std::size_t i = 0; i < j.at("nodes").size(); ++i) {
      if (j.at("nodes")[i].at("label").get<std::string>() == label) return i;
    }
    ADD_FAILURE() << "missing node " << label;
    return 0;
  };
  const std::size_t n3 = index_of("cl(3^ℕ)");
  const std::size_t n5 = index_of("cl(5^ℕ)");
  const std::size_t n9 = index_of("cl(9^ℕ)");
  index_of("cl(7^ℕ)");
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : j.at("edges")) {
    edges.emplace(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  const std::set<std::pair<std::size_t, std::size_t>> expected{{n3, n9},
                                                               {n5, n9}};
  EXPECT_EQ(edges, expected);
  EXPECT_EQ(j.at("nodes")[n3].at("payload").at("branch").get<std::string>(),
            "minus-one");
}

TEST(PosetCommand, KindAndDepthFlagsMustAgree) {
  EXPECT_EQ(run({"poset", "--kind", "dp", "--p", "3", "--gen-max", "9"}).code, 1);
  EXPECT_EQ(run({"poset", "--kind", "dp", "--p", "3"}).code, 1);
  EXPECT_EQ(run({"poset", "--kind", "xp", "--p", "3", "--nmax", "2"}).code, 1);
  EXPECT_EQ(run({"poset", "--kind", "xp", "--p", "3"}).code, 1);
  EXPECT_EQ(run({"poset", "--kind", "zp", "--p", "3", "--nmax", "2"}).code, 1);
}

TEST(PosetCommand, ResourceLimitMapsToExitOne) {
  const RunResult r =
      run({"poset", "--kind", "xp", "--p", "3", "--gen-max", "1073741824"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(HasseCommand, EmitsDot) {
  const RunResult r = run({"hasse", "--kind", "dp", "--p", "3", "--nmax", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("digraph hasse {", 0), 0u);
  EXPECT_NE(r.out.find("rankdir=BT"), std::string::npos);
  EXPECT_NE(r.out.find("\"2\" [style=bold];"), std::string::npos);
  EXPECT_NE(r.out.find("\"1\" -> \"2\";"), std::string::npos);
  EXPECT_NE(r.out.find("\"3\" -> \"6\";"), std::string::npos);
  EXPECT_EQ(r.out.substr(r.out.size() - 2), "}\n");
}

TEST(VerifyCommand, TextReportForPassingSweep) {
  const RunResult r = run(
      {"verify", "--lemma", "antichain-2", "--n-min", "2", "--n-max", "6"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("lemma: antichain-2\n"), std::string::npos);
  EXPECT_NE(r.out.find("cases: 10\n"), std::string::npos);
  EXPECT_NE(r.out.find("pass: yes\n"), std::string::npos);
  EXPECT_EQ(r.out.find("elapsed-ms"), std::string::npos);
}

TEST(VerifyCommand, JsonReportIsDeterministicAcrossJobs) {
  const std::vector<std::string> base{"verify",   "--lemma", "rigidity",
                                      "--from",   "2",       "--to",
                                      "120",      "--format", "json"};
  std::vector<std::string> jobs3 = base;
  jobs3.push_back("--jobs");
  jobs3.push_back("3");
  const RunResult a = run(base);
  const RunResult b = run(jobs3);
  const RunResult c = run(jobs3);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(b.out, c.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j.at("lemma").get<std::string>(), "rigidity");
  EXPECT_EQ(j.at("cases").get<uint64_t>(), 119u);
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_TRUE(j.at("failures").empty());
  EXPECT_FALSE(j.contains("elapsed-ms"));
}

TEST(VerifyCommand, TimingFlagAddsElapsed) {
  const RunResult text = run({"verify", "--lemma", "antichain-2", "--n-min",
                              "2", "--n-max", "4", "--timing"});
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("elapsed-ms: "), std::string::npos);
  const RunResult json =
      run({"verify", "--lemma", "antichain-2", "--n-min", "2", "--n-max", "4",
           "--timing", "--format", "json"});
  EXPECT_TRUE(nlohmann::json::parse(json.out).contains("elapsed-ms"));
}

TEST(VerifyCommand, ListParameterAcceptsCommas) {
  const RunResult r = run({"verify", "--lemma", "index", "--p", "3,5",
                           "--n-max", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("cases: 4\n"), std::string::npos);
}

TEST(VerifyCommand, RejectsUnknownLemma) {
  const RunResult r = run({"verify", "--lemma", "nope"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("unknown lemma id"), std::string::npos);
  EXPECT_NE(r.err.find("rigidity"), std::string::npos);
}

TEST(VerifyCommand, RejectsOutOfRangeJobs) {
  EXPECT_EQ(run({"verify", "--lemma", "rigidity", "--jobs", "0"}).code, 1);
  EXPECT_EQ(run({"verify", "--lemma", "rigidity", "--jobs", "65"}).code, 1);
}

TEST(VerifyCommand, RejectsParameterOutsideTheSuite) {
  const RunResult r =
      run({"verify", "--lemma", "antichain-2", "--window", "100"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(RigidityCommand, RunsRange) {
  const RunResult r = run({"rigidity", "--from", "4", "--to", "50"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("lemma: rigidity\n"), std::string::npos);
  EXPECT_NE(r.out.find("cases: 47\n"), std::string::npos);
  EXPECT_NE(r.out.find("pass: yes\n"), std::string::npos);
}

TEST(TopLevel, HelpExitsZero) {
  const RunResult r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("golomb-lab"), std::string::npos);
  for (const char* verb :
       {"closure", "orbit", "poset", "hasse", "verify", "rigidity"}) {
    EXPECT_NE(r.out.find(verb), std::string::npos) << verb;
  }
}

TEST(TopLevel, SubcommandHelpExitsZero) {
  const RunResult r = run({"verify", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--lemma"), std::string::npos);
}

TEST(TopLevel, MissingSubcommandIsAnError) {
  const RunResult r = run({});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(TopLevel, UnknownFlagIsAnError) {
  const RunResult r = run({"closure", "--a", "2", "--b", "3", "--bogus", "7"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

}  // namespace
