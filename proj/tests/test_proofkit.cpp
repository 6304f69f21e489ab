#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>
#include <random>
#include <set>

#include "axiomlab/errors.hpp"
#include "axiomlab/mechanisms.hpp"
#include "axiomlab/proofkit.hpp"

using namespace axiomlab;
namespace pk = axiomlab::proofkit;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

std::vector<Rational> derivedRow(const pk::ProofReport& report, const std::string& node,
                                 int agent) {
  for (const auto& cmp : report.nodes) {
    if (cmp.node != node) continue;
    std::vector<Rational> row;
    for (const auto& e : cmp.derived[static_cast<size_t>(agent)]) {
      REQUIRE(e.isKnown());
      row.push_back(e.lo);
    }
    return row;
  }
  FAIL("node not found: " << node);
  return {};
}

const pk::NodeComparison& nodeOf(const pk::ProofReport& report, const std::string& name) {
  for (const auto& cmp : report.nodes)
    if (cmp.node == name) return cmp;
  FAIL("node not found: " << name);
  static pk::NodeComparison sink;
  return sink;
}

// Steps touching a common node keep their relative order; everything else
// may commute. Produces a random linear extension of that partial order.
std::vector<pk::InferenceStep> shuffled_steps(const pk::ProofScript& script,
                                              std::mt19937_64& rng) {
  const auto& steps = script.steps;
  const size_t m = steps.size();
  auto nodesOf = [&](const pk::InferenceStep& s) {
    std::set<std::string> out{s.target};
    if (!s.source.empty()) out.insert(s.source);
    return out;
  };
  std::vector<std::vector<size_t>> mustFollow(m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      auto a = nodesOf(steps[i]);
      auto b = nodesOf(steps[j]);
      bool shared = false;
      for (const auto& x : a)
        if (b.count(x)) shared = true;
      if (shared) mustFollow[j].push_back(i);
    }
  std::vector<bool> emitted(m, false);
  std::vector<pk::InferenceStep> out;
  while (out.size() < m) {
    std::vector<size_t> ready;
    for (size_t i = 0; i < m; ++i) {
      if (emitted[i]) continue;
      bool ok = true;
      for (size_t dep : mustFollow[i])
        if (!emitted[dep]) ok = false;
      if (ok) ready.push_back(i);
    }
    size_t pick = ready[rng() % ready.size()];
    emitted[pick] = true;
    out.push_back(steps[pick]);
  }
  return out;
}

}  // namespace

TEST_CASE("builtin script 1 carries the derivation's matrices") {
  auto script = pk::builtin_script(1);
  const auto& nodeII = script.nodes[static_cast<size_t>(script.nodeIndex("II"))];
  CHECK(nodeII.expected[0][2].c == R(1, 3));
  CHECK(nodeII.expected[3][2].c == R(0));
  CHECK(nodeII.expected[3][3].c == R(1, 2));
  const auto& nodeVIII = script.nodes[static_cast<size_t>(script.nodeIndex("VIII"))];
  REQUIRE(nodeVIII.paramRange.has_value());
  CHECK(nodeVIII.paramRange->second == R(1, 12));
  CHECK(nodeVIII.expected[2][2].k == R(1));       // x itself
  CHECK(nodeVIII.expected[2][3].c == R(5, 12));   // 5/12 - x
  CHECK(nodeVIII.expected[2][3].k == R(-1));
  CHECK(nodeVIII.expected[3][2].c == R(1, 12));   // 1/12 - x
}

TEST_CASE("builtin script 2 carries the derivation's matrices") {
  auto script = pk::builtin_script(2);
  const auto& nodeIV = script.nodes[static_cast<size_t>(script.nodeIndex("IV"))];
  const Rational row3[4] = {R(0), R(3, 4), R(1, 4), R(0)};
  const Rational row4[4] = {R(0), R(0), R(0), R(1)};
  for (int j = 0; j < 4; ++j) {
    CHECK(nodeIV.expected[2][static_cast<size_t>(j)].c == row3[j]);
    CHECK(nodeIV.expected[3][static_cast<size_t>(j)].c == row4[j]);
  }
}

TEST_CASE("replaying theorem 1 verifies every node and the interval clash") {
  auto report = pk::replay(pk::builtin_script(1));
  CHECK(report.success);
  REQUIRE(report.contradiction.has_value());
  CHECK(report.contradiction->node == "V");
  CHECK(report.contradiction->description.find("derived 1/6") != std::string::npos);
  CHECK(report.contradiction->description.find("[0,1/12]") != std::string::npos);
  CHECK(derivedRow(report, "V", 2) ==
        std::vector<Rational>{R(1, 4), R(1, 3), R(1, 6), R(1, 4)});
  // The parametric node resolves to the one-parameter interval family.
  const auto& viii = nodeOf(report, "VIII");
  CHECK(viii.derived[2][2] == pk::EntryValue::interval(R(0), R(1, 12)));
  CHECK(viii.derived[3][3] == pk::EntryValue::interval(R(7, 12), R(2, 3)));
}

TEST_CASE("replaying theorem 2 verifies every node and the row overflow") {
  auto report = pk::replay(pk::builtin_script(2));
  CHECK(report.success);
  REQUIRE(report.contradiction.has_value());
  CHECK(report.contradiction->node == "VII");
  CHECK(report.contradiction->kind == pk::ExpectedContradiction::Kind::LineSum);
  CHECK(report.contradiction->description.find("5/4") != std::string::npos);
  CHECK(derivedRow(report, "IV", 2) == std::vector<Rational>{R(0), R(3, 4), R(1, 4), R(0)});
  CHECK(derivedRow(report, "I", 0) == std::vector<Rational>{R(1, 2), R(0), R(1, 2), R(0)});
}

TEST_CASE("tampering with an expected matrix is caught at that node") {
  auto script = pk::builtin_script(1);
  auto& nodeII = script.nodes[static_cast<size_t>(script.nodeIndex("II"))];
  for (auto& row : nodeII.expected)
    for (auto& e : row) e = pk::ExpectedEntry::value(R(1, 4));
  auto report = pk::replay(script);
  CHECK_FALSE(report.success);
  CHECK(report.failure.find("node II") != std::string::npos);
  CHECK_FALSE(nodeOf(report, "II").matched);
  CHECK(nodeOf(report, "III").matched);
}

TEST_CASE("zero certification succeeds on every step and fails on the control") {
  for (int theorem : {1, 2}) {
    auto script = pk::builtin_script(theorem);
    auto report = pk::replay(script);
    REQUIRE(report.success);
    long certified = 0;
    for (const auto& step : report.steps)
      if (step.certificate) {
        CHECK(step.certificate->certified);
        CHECK(step.certificate->vertexCount > 0);
        ++certified;
      }
    CHECK(certified > 0);
  }
  // Control: the unconstrained unanimous node cannot certify a zero for an
  // entry the uniform matrix keeps positive.
  auto script = pk::builtin_script(1);
  pk::ProofState fresh(script);
  auto control = pk::certify_efficiency_zero(fresh, script.nodeIndex("I"), 0, 0);
  CHECK_FALSE(control.certified);
  CHECK_FALSE(control.failure.empty());
}

TEST_CASE("padding appends certified identity blocks") {
  auto script = pk::builtin_script(1);
  CHECK_THROWS_AS(pk::pad_script(script, 0), InputError);
  auto padded = pk::pad_script(script, 1);
  auto report = pk::replay(padded);
  CHECK(report.success);
  REQUIRE(report.contradiction.has_value());
  CHECK(report.contradiction->node == "V");
  const auto& nodeI = nodeOf(report, "I");
  for (int j = 0; j < 5; ++j) {
    CHECK(nodeI.derived[4][static_cast<size_t>(j)] ==
          pk::EntryValue::known(j == 4 ? R(1) : R(0)));
    CHECK(nodeI.derived[static_cast<size_t>(j) % 4][4] == pk::EntryValue::known(R(0)));
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(nodeI.derived[static_cast<size_t>(i)][static_cast<size_t>(j)] ==
                                      pk::EntryValue::known(R(1, 4)));
}

TEST_CASE("padded theorem 2 still collapses at profile VII") {
  auto report = pk::replay(pk::pad_script(pk::builtin_script(2), 1));
  CHECK(report.success);
  REQUIRE(report.contradiction.has_value());
  CHECK(report.contradiction->kind == pk::ExpectedContradiction::Kind::LineSum);
}

TEST_CASE("scripts survive a json round trip") {
  for (int theorem : {1, 2}) {
    auto script = pk::builtin_script(theorem);
    auto back = pk::script_from_json(pk::script_to_json(script));
    CHECK(back.nodes.size() == script.nodes.size());
    CHECK(back.steps.size() == script.steps.size());
    for (size_t i = 0; i < script.nodes.size(); ++i) {
      CHECK(back.nodes[i].name == script.nodes[i].name);
      CHECK(back.nodes[i].profile == script.nodes[i].profile);
    }
    auto report = pk::replay(back);
    CHECK(report.success);
  }
}

TEST_CASE("replay is order-faithful under dependency-respecting shuffles") {
  for (int theorem : {1, 2}) {
    auto script = pk::builtin_script(theorem);
    auto baseline = pk::replay(script);
    REQUIRE(baseline.success);
    std::mt19937_64 rng(99 + static_cast<std::uint64_t>(theorem));
    for (int trial = 0; trial < 4; ++trial) {
      auto shuffled = script;
      shuffled.steps = shuffled_steps(script, rng);
      auto report = pk::replay(shuffled);
      CHECK(report.success);
      for (size_t nd = 0; nd < baseline.nodes.size(); ++nd) {
        const auto& want = baseline.nodes[nd];
        const auto& got = nodeOf(report, want.node);
        CHECK(got.derived == want.derived);
      }
    }
  }
}

TEST_CASE("steps demand their licensing axiom") {
  auto script = pk::builtin_script(1);
  // Strip lower invariance from the declared set; the first lower link fails.
  auto& axioms = script.axioms;
  axioms.erase(std::remove(axioms.begin(), axioms.end(), pk::AxiomFamily::LowerInvariance),
               axioms.end());
  auto report = pk::replay(script);
  CHECK_FALSE(report.success);
  CHECK(report.failure.find("lower-invariance") != std::string::npos);
}

TEST_CASE("dropping any single axiom family from theorem 1 restores feasibility") {
  for (auto family : {pk::AxiomFamily::UpperInvariance, pk::AxiomFamily::OrdinalEfficiency,
                      pk::AxiomFamily::Symmetry}) {
    pk::SearchOptions opts;
    opts.drop = family;
    auto res = pk::independent_search(1, opts);
    INFO(pk::family_name(family));
    CHECK(res.verdict == pk::SearchResult::Verdict::Witness);
  }
}

TEST_CASE("adding swap monotonicity to theorem 1's set stays infeasible") {
  // The classical strategyproofness-based impossibility as a corollary run.
  pk::SearchOptions opts;
  opts.addSwapMonotonicity = true;
  CHECK(pk::independent_search(1, opts).verdict == pk::SearchResult::Verdict::Infeasible);
}

TEST_CASE("an exhausted branch limit is reported as inconclusive") {
  pk::SearchOptions opts;
  opts.branchLimit = 3;
  auto res = pk::independent_search(1, opts);
  CHECK(res.verdict == pk::SearchResult::Verdict::Inconclusive);
  CHECK(res.witness.empty());
}

TEST_CASE("independent search splits exactly at lower invariance") {
  auto infeasible = pk::independent_search(1);
  CHECK(infeasible.verdict == pk::SearchResult::Verdict::Infeasible);

  pk::SearchOptions drop;
  drop.drop = pk::AxiomFamily::LowerInvariance;
  auto feasible = pk::independent_search(1, drop);
  REQUIRE(feasible.verdict == pk::SearchResult::Verdict::Witness);
  CHECK_FALSE(feasible.witness.empty());

  // The probabilistic-serial table over the same profiles is itself a valid
  // witness for the relaxed system.
  std::vector<std::pair<PreferenceProfile, Assignment>> psTable;
  for (const auto& p : pk::search_profiles(1)) psTable.emplace_back(p, ps(p));
  std::string why;
  CHECK(pk::satisfies_search_constraints(1, drop, psTable, &why));
  // And it is not one for the full system.
  CHECK_FALSE(pk::satisfies_search_constraints(1, pk::SearchOptions{}, psTable, nullptr));
}
