#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "golomb/errors.hpp"
#include "golomb/integer.hpp"
#include "golomb/orbit_closure.hpp"
#include "golomb/periodic_set.hpp"
#include "golomb/poset.hpp"
#include "golomb/verify.hpp"

namespace golomb::cli {

namespace detail {

inline Integer parse_flag(const std::string& value, const char* flag) {
  try {
    return parse_integer(value);
  } catch (const domain_error&) {
    throw domain_error(std::string("flag ") + flag +
                       " expects an integer, got '" + value + "'");
  }
}

inline std::vector<Integer> parse_flag_list(const std::string& value,
                                            const char* flag) {
  std::vector<Integer> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const std::size_t comma = value.find(',', pos);
    const std::string item = value.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out.push_back(parse_flag(item, flag));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline void print_poset_text(const FinitePoset& poset, std::ostream& out) {
  out << poset.size() << " nodes, " << poset.hasse_edges().size()
      << " edges\n";
  for (std::size_t i = 0; i < poset.size(); ++i) {
    out << "node " << i << ": " << poset.node(i).label << "\n";
  }
  if (poset.has_ambient_upchain_flags()) {
    out << "up-chain:";
    const auto& flags = poset.ambient_upchain_flags();
    for (std::size_t i = 0; i < poset.size(); ++i) {
      if (flags[i]) out << " " << poset.node(i).label;
    }
    out << "\n";
  }
  for (const auto& [lo, hi] : poset.hasse_edges()) {
    out << poset.node(lo).label << " -> " << poset.node(hi).label << "\n";
  }
}

inline void print_report_text(const VerificationReport& rep, bool timing,
                              std::ostream& out) {
  out << "lemma: " << rep.lemma_id << "\n";
  out << "parameters:";
  for (const auto& [k, v] : rep.parameters) out << " " << k << "=" << v;
  out << "\n";
  out << "cases: " << rep.cases_checked << "\n";
  out << "pass: " << (rep.pass() ? "yes" : "no") << "\n";
  for (const auto& f : rep.failures) {
    out << "failure: " << f.input << " | expected " << f.expected << " | got "
        << f.got << "\n";
  }
  if (timing) out << "elapsed-ms: " << rep.elapsed.count() << "\n";
}

struct VerifyFlags {
  std::string lemma;
  unsigned jobs = 1;
  std::map<std::string, std::string> ranges;  // flag name -> raw value
};

inline int run_verify_suite(const std::string& lemma, const SuiteParams& params,
                            unsigned jobs, const std::string& format,
                            bool timing, std::ostream& out) {
  const VerificationReport rep = lemma_suite(lemma, params, jobs);
  if (format == "json") {
    out << to_json(rep, timing).dump(2) << "\n";
  } else {
    print_report_text(rep, timing, out);
  }
  return rep.pass() ? 0 : 2;
}

}  // namespace detail

// Full command surface; writes results to out and diagnostics to err.
// Returns the process exit status: 0 success, 1 rejected input, 2 a
// verification suite reported failures, 3 internal inconsistency.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out,
                    std::ostream& err) {
  CLI::App app{"Exact Golomb-topology toolkit: closures of arithmetic "
               "progressions, p-adic orbit closures, divisibility posets, "
               "and lemma verification sweeps"};
  app.name("golomb-lab");
  app.require_subcommand(1);

  std::string format = "text";

  // closure
  std::string closure_a, closure_b;
  CLI::App* closure = app.add_subcommand(
      "closure", "Topological closure of the progression a + b N0");
  closure->add_option("--a", closure_a, "start of the progression")
      ->required();
  closure->add_option("--b", closure_b, "step of the progression")->required();
  closure->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // orbit
  std::string orbit_a, orbit_p;
  CLI::App* orbit = app.add_subcommand(
      "orbit", "p-adic closure of the multiplicative orbit a^N");
  orbit->add_option("--a", orbit_a, "generator")->required();
  orbit->add_option("--p", orbit_p, "prime")->required();
  orbit->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // poset / hasse share their option set
  std::string poset_kind, poset_p, poset_nmax, poset_gen_max;
  const auto add_poset_options = [&](CLI::App* cmd, bool with_format) {
    cmd->add_option("--kind", poset_kind, "dp or xp")
        ->required()
        ->check(CLI::IsMember({"dp", "xp"}));
    cmd->add_option("--p", poset_p, "prime")->required();
    cmd->add_option("--nmax", poset_nmax, "truncation depth (dp)");
    cmd->add_option("--gen-max", poset_gen_max, "generator bound (xp)");
    if (with_format) {
      cmd->add_option("--format", format, "text or json")
          ->check(CLI::IsMember({"text", "json"}));
    }
  };
  CLI::App* poset = app.add_subcommand(
      "poset", "Truncation of the divisor poset Dp or the closure poset Xp");
  add_poset_options(poset, true);
  CLI::App* hasse = app.add_subcommand(
      "hasse", "Same truncations as poset, rendered as a DOT digraph");
  add_poset_options(hasse, false);

  // verify
  detail::VerifyFlags vf;
  bool timing = false;
  CLI::App* verify =
      app.add_subcommand("verify", "Run a lemma verification sweep");
  verify->add_option("--lemma", vf.lemma, "lemma id")->required();
  verify->add_option("--jobs", vf.jobs, "worker threads")
      ->check(CLI::Range(1u, 64u));
  verify->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  verify->add_flag("--timing", timing, "include elapsed time in the output");
  static constexpr const char* kRangeFlags[] = {
      "a-max", "b-max", "depth-max", "from",  "gen-max", "limit",
      "n-max", "n-min", "p",         "p-max", "to",      "window"};
  for (const char* name : kRangeFlags) {
    verify->add_option("--" + std::string(name), vf.ranges[name],
                       "suite parameter");
  }

  // rigidity
  std::string rig_from, rig_to;
  CLI::App* rigidity = app.add_subcommand(
      "rigidity", "Reconstruct every n in [from, to] from closure data");
  rigidity->add_option("--from", rig_from, "first n")->required();
  rigidity->add_option("--to", rig_to, "last n")->required();
  rigidity->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  rigidity->add_flag("--timing", timing,
                     "include elapsed time in the output");

  try {
    // CLI11 consumes the vector back to front.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << app.help();
    return 1;
  }

  try {
    if (closure->parsed()) {
      const Integer a = detail::parse_flag(closure_a, "--a");
      const Integer b = detail::parse_flag(closure_b, "--b");
      const PeriodicSet set = golomb_closure(a, b);
      if (format == "json") {
        out << to_json(set).dump(2) << "\n";
      } else {
        out << to_residue_string(set) << "\n";
      }
      return 0;
    }

    if (orbit->parsed()) {
      const Integer a = detail::parse_flag(orbit_a, "--a");
      const Integer p = detail::parse_flag(orbit_p, "--p");
      const OrbitClosure x = orbit_closure(a, p);
      if (format == "json") {
        out << to_json(x).dump(2) << "\n";
      } else {
        out << "p: " << x.p << "\n";
        out << "a: " << x.a << "\n";
        out << "level: " << x.level << "\n";
        out << "index: " << x.index << "\n";
        out << "subgroup-order: " << x.subgroup_order << "\n";
        if (x.branch) out << "branch: " << to_string(*x.branch) << "\n";
        out << "set: " << to_progressions_string(x.set) << "\n";
      }
      return 0;
    }

    if (poset->parsed() || hasse->parsed()) {
      const Integer p = detail::parse_flag(poset_p, "--p");
      const FinitePoset result = [&]() -> FinitePoset {
        if (poset_kind == "dp") {
          if (!poset_gen_max.empty()) {
            throw domain_error("dp posets take --nmax, not --gen-max");
          }
          if (poset_nmax.empty()) {
            throw domain_error("dp posets require --nmax");
          }
          const Integer nmax = detail::parse_flag(poset_nmax, "--nmax");
          return dp_elements(p, static_cast<unsigned>(to_u64(nmax, "--nmax")));
        }
        if (!poset_nmax.empty()) {
          throw domain_error("xp posets take --gen-max, not --nmax");
        }
        if (poset_gen_max.empty()) {
          throw domain_error("xp posets require --gen-max");
        }
        return build_xp(p, detail::parse_flag(poset_gen_max, "--gen-max"));
      }();
      if (hasse->parsed()) {
        out << to_dot(result);
      } else if (format == "json") {
        out << to_json(result).dump(2) << "\n";
      } else {
        detail::print_poset_text(result, out);
      }
      return 0;
    }

    if (verify->parsed()) {
      SuiteParams params;
      for (const auto& [name, raw] : vf.ranges) {
        if (raw.empty()) continue;
        const std::string flag = "--" + name;
        params[name] = (name == "p")
                           ? detail::parse_flag_list(raw, flag.c_str())
                           : std::vector<Integer>{
                                 detail::parse_flag(raw, flag.c_str())};
      }
      return detail::run_verify_suite(vf.lemma, params, vf.jobs, format,
                                      timing, out);
    }

    if (rigidity->parsed()) {
      SuiteParams params;
      params["from"] = {detail::parse_flag(rig_from, "--from")};
      params["to"] = {detail::parse_flag(rig_to, "--to")};
      return detail::run_verify_suite("rigidity", params, 1, format, timing,
                                      out);
    }

    err << "error: no command given\n";
    return 1;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const resource_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const internal_error& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace golomb::cli
