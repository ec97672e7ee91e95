#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "golomb/verify.hpp"

namespace {

using golomb::lemma_suite;
using golomb::VerificationReport;

// Runs one acceptance criterion and prints exactly one summary line. The
// criterion fails if the sweep reports failures, if a pinned case count is
// off, or if the wall-clock budget is exceeded.
void criterion(int number, const std::string& title, double budget_seconds,
               const std::function<VerificationReport()>& body,
               uint64_t expected_cases = 0) {
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  std::string abort_reason;
  try {
    rep = body();
  } catch (const std::exception& e) {
    abort_reason = e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const bool cases_ok =
      expected_cases == 0 || rep.cases_checked == expected_cases;
  const bool ok = abort_reason.empty() && rep.pass() && cases_ok &&
                  seconds < budget_seconds;
  std::ostringstream line;
  line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << std::setw(2)
       << number << ": " << title << " (" << rep.cases_checked << " cases, "
       << rep.failures.size() << " failures, " << std::fixed
       << std::setprecision(2) << seconds << "s of "
       << std::setprecision(0) << budget_seconds << "s)";
  std::cout << line.str() << std::endl;
  if (!abort_reason.empty()) {
    FAIL() << "criterion " << number << " aborted: " << abort_reason;
  }
  if (!rep.pass()) {
    std::ostringstream detail;
    for (std::size_t i = 0; i < rep.failures.size() && i < 3; ++i) {
      const auto& f = rep.failures[i];
      detail << "\n  " << f.input << " | expected " << f.expected << " | got "
             << f.got;
    }
    ADD_FAILURE() << "criterion " << number << " reported "
                  << rep.failures.size() << " failures:" << detail.str();
  }
  if (expected_cases != 0) {
    EXPECT_EQ(rep.cases_checked, expected_cases);
  }
  EXPECT_LT(seconds, budget_seconds);
}

TEST(Acceptance, ClosureFormulaMatchesNeighborhoodOracle) {
  uint64_t coprime_pairs = 0;
  for (uint64_t b = 2; b <= 60; ++b) {
    for (uint64_t a = 1; a < b; ++a) {
      if (std::gcd(a, b) == 1) ++coprime_pairs;
    }
  }
  criterion(1, "closure formula equals the neighborhood-filter oracle", 30.0,
            [] { return lemma_suite("basic-closure"); }, coprime_pairs);
}

TEST(Acceptance, UnitGroupDescriptorsMatchEnumeration) {
  criterion(2, "unit-group descriptors vs exhaustive enumeration", 20.0,
            [] { return lemma_suite("gauss"); }, 118);
}

TEST(Acceptance, OddPrimeOrbitIndexFormula) {
  criterion(3, "odd-prime orbit closures of 1+p^n", 5.0,
            [] { return lemma_suite("index"); }, 16);
}

TEST(Acceptance, TwoAdicOrbitIndexFamilies) {
  criterion(4, "two-adic orbit closures of 1+2^n and 2^n-1", 5.0,
            [] { return lemma_suite("ind2"); }, 14);
}

TEST(Acceptance, TwoAdicBranchAndIndexFormulas) {
  criterion(5, "two-adic branch formulas for all odd generators to 401", 10.0,
            [] { return lemma_suite("X2"); }, 200);
}

TEST(Acceptance, InclusionOrderMatchesIndexOrder) {
  criterion(6, "inclusion order equals index order on closure posets", 30.0,
            [] {
              VerificationReport merged = lemma_suite("iso");
              const VerificationReport two = lemma_suite("ord2");
              merged.lemma_id += "+" + two.lemma_id;
              merged.cases_checked += two.cases_checked;
              merged.failures.insert(merged.failures.end(),
                                     two.failures.begin(),
                                     two.failures.end());
              return merged;
            });
}

TEST(Acceptance, TwoAdicMinimalElementsAndHasseFigure) {
  criterion(7, "two-adic minimal elements and the eight-node figure", 5.0,
            [] { return lemma_suite("anti2"); }, 12);
}

TEST(Acceptance, DivisorPosetsSeparateThreeFromFive) {
  criterion(8, "divisor posets distinguish p=3 from p=5", 2.0,
            [] { return lemma_suite("d3-vs-d5"); }, 5);
}

TEST(Acceptance, MersenneOrbitClosuresFormAntichain) {
  criterion(9, "closures of 2^n-1 are pairwise incomparable", 2.0,
            [] { return lemma_suite("antichain-2"); }, 36);
}

TEST(Acceptance, EveryIntegerReconstructsFromClosureData) {
  criterion(10, "every n in [2, 10000] reconstructs uniquely", 60.0,
            [] { return lemma_suite("rigidity"); }, 9999);
}

TEST(Acceptance, OrbitOracleAgreesAtAllDepths) {
  uint64_t expected = 0;
  for (uint64_t p : {2, 3, 5, 7, 11}) {
    for (uint64_t a = 2; a <= 200; ++a) {
      if (std::gcd(a, p) == 1) expected += 3;
    }
  }
  criterion(11, "orbit oracle agrees at stabilization depth and beyond", 60.0,
            [] { return lemma_suite("S5-stabilization"); }, expected);
}

TEST(Acceptance, PrimePredecessorUniqueness) {
  criterion(12, "3 is the only prime with prime p-1 below one million", 5.0,
            [] { return golomb::unique_prime_predecessor_check(1000000); },
            78497);
}

struct Spawn {
  int code = -1;
  std::string out;
};

Spawn capture(const std::string& cmd) {
  Spawn s;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return s;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) s.out.append(buf, n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) s.code = WEXITSTATUS(status);
  return s;
}

TEST(Acceptance, CommandLineBinaryEndToEnd) {
  const std::string bin = std::string("'") + GOLOMB_LAB_BIN + "'";

  const Spawn closure = capture(bin + " closure --a 2 --b 3 --format text");
  EXPECT_EQ(closure.code, 0);
  EXPECT_EQ(closure.out, "{x ≡ 0, 2 (mod 3)}\n");

  const Spawn verify = capture(
      bin + " verify --lemma antichain-2 --n-min 2 --n-max 5 --format json");
  ASSERT_EQ(verify.code, 0);
  const auto j = nlohmann::json::parse(verify.out);
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_EQ(j.at("cases").get<uint64_t>(), 6u);

  const Spawn rejected = capture(bin + " closure --a 2 --b 4 2>/dev/null");
  EXPECT_EQ(rejected.code, 1);
  EXPECT_EQ(rejected.out, "");
}

}  // namespace
