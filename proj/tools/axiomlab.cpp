#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "axiomlab/axioms.hpp"
#include "axiomlab/codec.hpp"
#include "axiomlab/errors.hpp"
#include "axiomlab/mechanisms.hpp"
#include "axiomlab/polytope.hpp"
#include "axiomlab/proofkit.hpp"

namespace {

using namespace axiomlab;
namespace pk = axiomlab::proofkit;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::unique_ptr<Mechanism> make_mechanism(const std::string& spec) {
  if (spec == "rsd") return std::make_unique<RsdMechanism>();
  if (spec == "ps") return std::make_unique<PsMechanism>();
  if (spec.rfind("table:", 0) == 0) {
    auto rows = parse_table(read_file(spec.substr(6)));
    return std::make_unique<TableMechanism>(std::move(rows));
  }
  throw InputError("unknown mechanism '" + spec + "' (expected rsd, ps, or table:<path>)");
}

int resolve_threads(int cliThreads) {
  if (cliThreads > 0) return cliThreads;
  if (const char* env = std::getenv("AXIOMLAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

json counterexample_to_json(const Counterexample& ce) {
  json j;
  j["profile"] = profile_to_json(ce.profile);
  if (ce.related) j["related"] = profile_to_json(*ce.related);
  if (ce.agent >= 0) j["agent"] = ce.profile.agentName(ce.agent);
  j["clause"] = ce.clause;
  return j;
}

json verdict_to_json(const AxiomVerdict& v) {
  json j;
  j["axiom"] = v.axiom;
  j["domain"] = v.domain;
  j["holds"] = v.holds;
  j["checked"] = v.checked;
  j["violations"] = v.totalViolations;
  json ces = json::array();
  for (const auto& ce : v.counterexamples) ces.push_back(counterexample_to_json(ce));
  j["counterexamples"] = ces;
  return j;
}

void print_verdict(const AxiomVerdict& v, long profileCount) {
  std::cout << v.axiom << ": " << (v.holds ? "HOLDS" : "VIOLATED") << " (" << profileCount
            << " profiles, " << v.checked << " transitions)";
  if (!v.holds) std::cout << " violations=" << v.totalViolations;
  std::cout << "\n";
  for (const auto& ce : v.counterexamples) {
    std::cout << "  counterexample";
    if (ce.agent >= 0) std::cout << " agent " << ce.profile.agentName(ce.agent);
    std::cout << ": " << ce.clause << "\n";
    std::istringstream prof(format_profile(ce.profile));
    std::string line;
    while (std::getline(prof, line)) std::cout << "    " << line << "\n";
    if (ce.related) {
      std::cout << "    vs\n";
      std::istringstream rel(format_profile(*ce.related));
      while (std::getline(rel, line)) std::cout << "    " << line << "\n";
    }
  }
}

std::string entry_text(const pk::EntryValue& v) { return v.str(); }

std::string expected_symbolic(const pk::ExpectedEntry& e) {
  if (e.unknown) return "?";
  if (e.k.isZero()) return e.c.str();
  std::string xPart = e.k == Rational(1) ? "x" : (e.k == Rational(-1) ? "-x" : e.k.str() + "x");
  if (e.c.isZero()) return xPart;
  if (xPart[0] == '-') return e.c.str() + xPart;
  return e.c.str() + "+" + xPart;
}

void print_report(const pk::ProofScript& script, const pk::ProofReport& report) {
  std::cout << "theorem " << script.theorem << " replay: " << script.nodes.size() << " nodes, "
            << script.steps.size() << " steps\n";
  std::cout << "axioms:";
  for (auto f : script.axioms) std::cout << " " << pk::family_name(f);
  std::cout << "\n";
  for (const auto& nodeCmp : report.nodes) {
    const auto& node = script.nodes[static_cast<size_t>(script.nodeIndex(nodeCmp.node))];
    std::cout << "\nprofile " << node.name;
    if (node.auxiliary) std::cout << " (auxiliary)";
    std::cout << "\n";
    std::istringstream prof(format_profile(node.profile));
    std::string line;
    while (std::getline(prof, line)) std::cout << "  " << line << "\n";
    const bool symbolic = node.paramRange.has_value() && nodeCmp.matched && !node.expected.empty();
    for (size_t i = 0; i < nodeCmp.derived.size(); ++i) {
      std::cout << " ";
      for (size_t j = 0; j < nodeCmp.derived[i].size(); ++j) {
        if (symbolic && !node.expected[i][j].unknown)
          std::cout << " " << expected_symbolic(node.expected[i][j]);
        else
          std::cout << " " << entry_text(nodeCmp.derived[i][j]);
      }
      std::cout << "\n";
    }
    if (node.paramRange)
      std::cout << "  with x in [" << node.paramRange->first.str() << ","
                << node.paramRange->second.str() << "]\n";
    if (nodeCmp.compared)
      std::cout << "  expected: " << (nodeCmp.matched ? "match" : "MISMATCH " + nodeCmp.mismatch)
                << "\n";
  }
  long applied = 0;
  for (const auto& s : report.steps)
    if (s.applied) ++applied;
  std::cout << "\nsteps applied: " << applied << "/" << report.steps.size() << "\n";
  for (const auto& s : report.steps)
    if (!s.applied) std::cout << "  step " << s.index << " " << s.summary << ": " << s.failure
                              << "\n";
  if (report.contradiction)
    std::cout << "CONTRADICTION: " << report.contradiction->description << "\n";
  std::cout << "RESULT: " << (report.success ? "verified" : "FAILED") << "\n";
  if (!report.success && !report.failure.empty())
    std::cout << "failure: " << report.failure << "\n";
}

json entry_value_to_json(const pk::EntryValue& v) {
  if (v.isKnown()) return v.lo.str();
  return json{{"lo", v.lo.str()}, {"hi", v.hi.str()}};
}

json report_to_json(const pk::ProofScript& script, const pk::ProofReport& report) {
  json j;
  j["theorem"] = script.theorem;
  j["success"] = report.success;
  if (!report.failure.empty()) j["failure"] = report.failure;
  json nodes = json::array();
  for (const auto& nodeCmp : report.nodes) {
    json n;
    n["name"] = nodeCmp.node;
    n["auxiliary"] = nodeCmp.auxiliary;
    n["matched"] = nodeCmp.matched;
    if (!nodeCmp.mismatch.empty()) n["mismatch"] = nodeCmp.mismatch;
    json grid = json::array();
    for (const auto& row : nodeCmp.derived) {
      json r = json::array();
      for (const auto& e : row) r.push_back(entry_value_to_json(e));
      grid.push_back(r);
    }
    n["derived"] = grid;
    nodes.push_back(n);
  }
  j["nodes"] = nodes;
  if (report.contradiction) {
    j["contradiction"] = {{"node", report.contradiction->node},
                          {"description", report.contradiction->description}};
  }
  j["contradictionMatched"] = report.contradictionMatched;
  return j;
}

struct CheckArgs {
  std::string mechanism;
  std::vector<std::string> axioms;
  int exhaustive = 0;
  std::string profilesPath;
  long sampledCount = 0;
  std::uint64_t seed = 0;
  int sampledN = 4;
  bool globalMode = false;
  int threads = 0;
  bool asJson = false;
};

int run_check(const CheckArgs& args) {
  auto mech = make_mechanism(args.mechanism);
  Domain domain = Domain::exhaustive(3);
  long profileCount = 0;
  if (args.exhaustive > 0) {
    domain = Domain::exhaustive(args.exhaustive);
    long orders = 1;
    for (int i = 2; i <= args.exhaustive; ++i) orders *= i;
    profileCount = 1;
    for (int i = 0; i < args.exhaustive; ++i) profileCount *= orders;
  } else if (!args.profilesPath.empty()) {
    std::vector<PreferenceProfile> profiles;
    if (args.profilesPath.rfind("table:", 0) == 0) {
      for (auto& [p, a] : parse_table(read_file(args.profilesPath.substr(6))))
        profiles.push_back(p);
    } else {
      profiles.push_back(parse_profile(read_file(args.profilesPath)));
    }
    profileCount = static_cast<long>(profiles.size());
    domain = Domain::explicitSet(std::move(profiles));
  } else if (args.sampledCount > 0) {
    domain = Domain::sampled(args.sampledN, args.sampledCount, args.seed);
    profileCount = args.sampledCount;
  } else {
    throw InputError("choose a domain: --exhaustive N, --profiles PATH or --sampled COUNT");
  }

  CheckOptions options;
  options.globalMode = args.globalMode;
  options.threads = resolve_threads(args.threads);

  std::set<TransitionAxiom> transitionAxioms;
  std::vector<std::string> profileAxioms;
  for (const auto& name : args.axioms) {
    if (name == "local-sp")
      transitionAxioms.insert(TransitionAxiom::LocalStrategyproofness);
    else if (name == "swap-monotonicity")
      transitionAxioms.insert(TransitionAxiom::SwapMonotonicity);
    else if (name == "upper-invariance")
      transitionAxioms.insert(TransitionAxiom::UpperInvariance);
    else if (name == "lower-invariance")
      transitionAxioms.insert(TransitionAxiom::LowerInvariance);
    else if (name == "non-bossiness")
      transitionAxioms.insert(TransitionAxiom::NonBossiness);
    else if (name == "symmetry" || name == "anonymity" || name == "neutrality" ||
             name == "ordinal-efficiency")
      profileAxioms.push_back(name);
    else
      throw InputError("unknown axiom '" + name + "'");
  }

  std::vector<AxiomVerdict> verdicts;
  if (!transitionAxioms.empty()) {
    auto byAxiom = check_transition_axioms(*mech, domain, transitionAxioms, options);
    for (auto& [a, v] : byAxiom) verdicts.push_back(std::move(v));
  }
  for (const auto& name : profileAxioms) {
    if (name == "symmetry") verdicts.push_back(check_symmetry(*mech, domain, options));
    if (name == "anonymity") verdicts.push_back(check_anonymity(*mech, domain, options));
    if (name == "neutrality") verdicts.push_back(check_neutrality(*mech, domain, options));
    if (name == "ordinal-efficiency")
      verdicts.push_back(check_ordinal_efficiency(*mech, domain, options));
  }

  bool allHold = true;
  for (const auto& v : verdicts) allHold = allHold && v.holds;
  if (args.asJson) {
    json out = json::array();
    for (const auto& v : verdicts) out.push_back(verdict_to_json(v));
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& v : verdicts) print_verdict(v, profileCount);
  }
  return allHold ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-rational random assignment mechanisms, axiom checkers, and proof replay"};
  app.require_subcommand(1);

  // eval
  auto* evalCmd = app.add_subcommand("eval", "evaluate a mechanism on a profile");
  std::string evalMech, evalProfile;
  bool evalJson = false;
  evalCmd->add_option("--mechanism", evalMech, "rsd | ps | table:<path>")->required();
  evalCmd->add_option("--profile", evalProfile, "profile file")->required();
  evalCmd->add_flag("--json", evalJson);

  // check
  auto* checkCmd = app.add_subcommand("check", "audit axioms over a domain");
  CheckArgs checkArgs;
  checkCmd->add_option("--mechanism", checkArgs.mechanism)->required();
  checkCmd->add_option("--axiom", checkArgs.axioms, "axiom names, repeatable")->required();
  checkCmd->add_option("--exhaustive", checkArgs.exhaustive, "all profiles of size n");
  checkCmd->add_option("--profiles", checkArgs.profilesPath,
                       "profile file or table:<path> for an explicit domain");
  checkCmd->add_option("--sampled", checkArgs.sampledCount, "number of seeded samples");
  checkCmd->add_option("--seed", checkArgs.seed, "sample seed");
  checkCmd->add_option("--n", checkArgs.sampledN, "market size for sampled domains");
  checkCmd->add_flag("--global", checkArgs.globalMode,
                     "quantify strategyproofness and non-bossiness over all misreports");
  checkCmd->add_option("--threads", checkArgs.threads,
                       "worker threads (falls back to AXIOMLAB_THREADS)");
  checkCmd->add_flag("--json", checkArgs.asJson);

  // efficient
  auto* effCmd = app.add_subcommand("efficient", "efficiency oracles for one assignment");
  std::string effProfile, effMatrix;
  bool effExpost = false, effJson = false;
  effCmd->add_option("--profile", effProfile)->required();
  effCmd->add_option("--matrix", effMatrix)->required();
  effCmd->add_flag("--expost", effExpost, "also decide ex-post efficiency");
  effCmd->add_flag("--json", effJson);

  // bvn
  auto* bvnCmd = app.add_subcommand("bvn", "Birkhoff-von Neumann decomposition");
  std::string bvnMatrix;
  bool bvnJson = false;
  bvnCmd->add_option("--matrix", bvnMatrix)->required();
  bvnCmd->add_flag("--json", bvnJson);

  // replay
  auto* replayCmd = app.add_subcommand("replay", "replay an impossibility proof");
  int replayTheorem = 0, replayPad = 0;
  std::string replayScript, replayDump;
  bool replayJson = false;
  replayCmd->add_option("--theorem", replayTheorem, "1 or 2");
  replayCmd->add_option("--script", replayScript, "external script JSON");
  replayCmd->add_option("--pad", replayPad, "extra agents appended to the market");
  replayCmd->add_option("--dump-script", replayDump, "write the script JSON and exit");
  replayCmd->add_flag("--json", replayJson);

  // search
  auto* searchCmd = app.add_subcommand("search", "independent infeasibility search");
  int searchTheorem = 0;
  std::string searchDrop;
  long searchLimit = 1'000'000;
  bool searchJson = false, searchCorollary = false;
  searchCmd->add_option("--theorem", searchTheorem, "1 or 2")->required();
  searchCmd->add_option("--drop", searchDrop, "axiom family to remove");
  searchCmd->add_option("--branch-limit", searchLimit);
  searchCmd->add_flag("--with-swap-monotonicity", searchCorollary,
                      "add swap monotonicity on top of theorem 1's set");
  searchCmd->add_flag("--json", searchJson);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*evalCmd) {
      auto mech = make_mechanism(evalMech);
      PreferenceProfile profile = parse_profile(read_file(evalProfile));
      Assignment a = mech->evaluate(profile);
      if (evalJson)
        std::cout << assignment_to_json(profile, a).dump(2) << "\n";
      else
        std::cout << format_matrix(profile, a);
      return 0;
    }
    if (*checkCmd) return run_check(checkArgs);
    if (*effCmd) {
      PreferenceProfile profile = parse_profile(read_file(effProfile));
      Assignment x = align_matrix(parse_matrix(read_file(effMatrix)), profile);
      auto cert = is_ordinally_efficient(x, profile);
      auto dominator = find_strict_dominator(x, profile);
      if (cert.efficient == dominator.has_value())
        throw Error("internal: efficiency oracles disagree");
      json out;
      if (cert.efficient) {
        std::string order;
        for (int obj : cert.topologicalOrder) {
          if (!order.empty()) order += " ";
          order += profile.objectName(obj);
        }
        if (effJson) {
          out["verdict"] = "efficient";
          out["topologicalOrder"] = order;
        } else {
          std::cout << "ORDINALLY EFFICIENT (object order: " << order << ")\n";
        }
      } else {
        std::string cyc;
        for (int obj : cert.cycle) cyc += profile.objectName(obj) + ">";
        cyc += profile.objectName(cert.cycle.front());
        if (effJson) {
          out["verdict"] = "dominated";
          out["cycle"] = cyc;
          out["dominator"] = matrix_to_json(cert.dominator->matrix());
        } else {
          std::cout << "DOMINATED (trading cycle " << cyc << ")\n";
          std::cout << "dominating assignment:\n" << format_matrix(profile, *cert.dominator);
        }
      }
      if (effExpost) {
        auto expost = is_expost_efficient(x, profile);
        if (effJson) {
          out["expost"] = expost.efficient;
        } else {
          std::cout << "ex-post: " << (expost.efficient ? "EFFICIENT" : "INEFFICIENT") << "\n";
          for (const auto& [w, perm] : expost.decomposition) {
            std::cout << "  " << w.str() << " :";
            for (int obj : perm) std::cout << " " << profile.objectName(obj);
            std::cout << "\n";
          }
        }
      }
      if (effJson) std::cout << out.dump(2) << "\n";
      return cert.efficient ? 0 : 1;
    }
    if (*bvnCmd) {
      ParsedMatrix pm = parse_matrix(read_file(bvnMatrix));
      Assignment x{pm.entries};
      auto decomp = bvn_decompose(x);
      if (bvnJson) {
        json out = json::array();
        for (const auto& comp : decomp.components) {
          json c;
          c["weight"] = comp.weight.str();
          std::vector<std::string> objs;
          for (int obj : comp.permutation) objs.push_back(pm.objects[static_cast<size_t>(obj)]);
          c["permutation"] = objs;
          out.push_back(c);
        }
        std::cout << out.dump(2) << "\n";
      } else {
        for (const auto& comp : decomp.components) {
          std::cout << comp.weight.str() << " :";
          for (int obj : comp.permutation)
            std::cout << " " << pm.objects[static_cast<size_t>(obj)];
          std::cout << "\n";
        }
      }
      return 0;
    }
    if (*replayCmd) {
      pk::ProofScript script;
      if (!replayScript.empty())
        script = pk::script_from_json(json::parse(read_file(replayScript)));
      else if (replayTheorem == 1 || replayTheorem == 2)
        script = pk::builtin_script(replayTheorem);
      else
        throw InputError("replay needs --theorem 1|2 or --script PATH");
      if (replayPad > 0) script = pk::pad_script(script, replayPad);
      if (!replayDump.empty()) {
        std::ofstream out(replayDump);
        out << pk::script_to_json(script).dump(2) << "\n";
        return 0;
      }
      auto report = pk::replay(script);
      if (replayJson)
        std::cout << report_to_json(script, report).dump(2) << "\n";
      else
        print_report(script, report);
      std::cerr << "replay wall time: " << report.wallMicros / 1000 << " ms\n";
      return report.success ? 0 : 1;
    }
    if (*searchCmd) {
      pk::SearchOptions options;
      options.branchLimit = searchLimit;
      options.addSwapMonotonicity = searchCorollary;
      if (!searchDrop.empty()) {
        auto f = pk::family_from_name(searchDrop);
        if (!f) throw InputError("unknown axiom family '" + searchDrop + "'");
        options.drop = f;
      }
      auto result = pk::independent_search(searchTheorem, options);
      const char* verdict = result.verdict == pk::SearchResult::Verdict::Infeasible
                                ? "INFEASIBLE"
                                : result.verdict == pk::SearchResult::Verdict::Witness
                                      ? "FEASIBLE"
                                      : "INCONCLUSIVE";
      if (searchJson) {
        json out;
        out["verdict"] = verdict;
        out["branches"] = result.branches;
        out["detail"] = result.detail;
        if (!result.witness.empty()) {
          json w = json::array();
          for (const auto& [p, a] : result.witness) w.push_back(assignment_to_json(p, a));
          out["witness"] = w;
        }
        std::cout << out.dump(2) << "\n";
      } else {
        std::cout << verdict << " (" << result.detail << "; " << result.branches
                  << " branches)\n";
        for (const auto& [p, a] : result.witness) {
          std::cout << "\n" << format_profile(p) << format_matrix(p, a);
        }
      }
      return result.verdict == pk::SearchResult::Verdict::Inconclusive ? 1 : 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
