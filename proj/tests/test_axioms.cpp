#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "axiomlab/axioms.hpp"
#include "axiomlab/errors.hpp"
#include "axiomlab/mechanisms.hpp"

using namespace axiomlab;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

Assignment grid4(std::initializer_list<std::initializer_list<Rational>> rows) {
  RatMatrix m(4, 4);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return Assignment(std::move(m));
}

// Serial dictatorship with a fixed priority order; strategyproof but
// blatantly agent-indexed, so anonymity must fail.
class FixedDictatorship final : public Mechanism {
 public:
  std::string name() const override { return "fixed-dictatorship"; }
  Assignment evaluate(const PreferenceProfile& p) const override {
    const int n = p.size();
    std::vector<bool> taken(static_cast<size_t>(n), false);
    RatMatrix m(n, n);
    m.setConstant(Rational(0));
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < n; ++r) {
        const int obj = p.order(i).at(r);
        if (!taken[static_cast<size_t>(obj)]) {
          taken[static_cast<size_t>(obj)] = true;
          m(i, obj) = Rational(1);
          break;
        }
      }
    return Assignment(std::move(m));
  }
};

// Ignores the reports entirely; neutrality cannot hold.
class ConstantMechanism final : public Mechanism {
 public:
  std::string name() const override { return "constant"; }
  Assignment evaluate(const PreferenceProfile& p) const override {
    std::vector<int> identity(static_cast<size_t>(p.size()));
    std::iota(identity.begin(), identity.end(), 0);
    return permutation_assignment(identity);
  }
};

const std::set<TransitionAxiom> kAllTransitionAxioms = {
    TransitionAxiom::LocalStrategyproofness, TransitionAxiom::SwapMonotonicity,
    TransitionAxiom::UpperInvariance, TransitionAxiom::LowerInvariance,
    TransitionAxiom::NonBossiness};

}  // namespace

TEST_CASE("rsd passes every transition axiom exhaustively at n=3") {
  RsdMechanism rsd;
  auto verdicts = check_transition_axioms(rsd, Domain::exhaustive(3), kAllTransitionAxioms);
  for (const auto& [axiom, v] : verdicts) {
    INFO(v.axiom);
    CHECK(v.holds);
    CHECK(v.checked == 1296);
  }
}

TEST_CASE("ps fails lower invariance and local strategyproofness at a known transition") {
  // Agent 3 swapping its top pair moves the derivation's profile V to VIII.
  auto profileV = make_profile({"a>b>c>d", "a>b>c>d", "a>b>d>c", "a>d>b>c"});
  auto profileVIII = make_profile({"a>b>c>d", "a>b>c>d", "b>a>d>c", "a>d>b>c"});
  PsMechanism mech;
  auto atV = mech.evaluate(profileV);
  auto atVIII = mech.evaluate(profileVIII);
  const auto& order = profileV.order(2);

  CHECK_FALSE(clause_lower_invariance(atV.row(2), atVIII.row(2), order, 1));
  CHECK_FALSE(clause_local_sp(atV.row(2), atVIII.row(2), order));
  CHECK(clause_upper_invariance(atV.row(2), atVIII.row(2), order, 0));
  CHECK(clause_swap_monotonicity(atV.row(2), atVIII.row(2), 0, 1));

  auto verdicts = check_transition_axioms(
      mech, Domain::explicitSet({profileV, profileVIII}), kAllTransitionAxioms);
  CHECK_FALSE(verdicts.at(TransitionAxiom::LowerInvariance).holds);
  CHECK_FALSE(verdicts.at(TransitionAxiom::LocalStrategyproofness).holds);
  CHECK(verdicts.at(TransitionAxiom::UpperInvariance).holds);
  CHECK(verdicts.at(TransitionAxiom::SwapMonotonicity).holds);
}

TEST_CASE("upper invariance binds and lower invariance is vacuous on a bottom-pair swap") {
  auto profileI = make_profile({"a>b>c>d", "a>b>c>d", "a>b>c>d", "a>b>c>d"});
  auto profileII = make_profile({"a>b>c>d", "a>b>c>d", "a>b>c>d", "a>b>d>c"});
  RatMatrix u(4, 4);
  u.setConstant(R(1, 4));
  auto mII = grid4({{R(1, 4), R(1, 4), R(1, 3), R(1, 6)},
                    {R(1, 4), R(1, 4), R(1, 3), R(1, 6)},
                    {R(1, 4), R(1, 4), R(1, 3), R(1, 6)},
                    {R(1, 4), R(1, 4), R(0), R(1, 2)}});
  TableMechanism table({{profileI, Assignment(u)}, {profileII, mII}});
  auto verdicts = check_transition_axioms(
      table, Domain::explicitSet({profileI, profileII}),
      {TransitionAxiom::UpperInvariance, TransitionAxiom::LowerInvariance});
  CHECK(verdicts.at(TransitionAxiom::UpperInvariance).holds);
  // The lower contour set of the bottom object is empty, so the clause holds
  // with nothing to check.
  CHECK(verdicts.at(TransitionAxiom::LowerInvariance).holds);
  CHECK(contour_sets(profileI.order(3), 3).lower.empty());
}

TEST_CASE("symmetry checker flags unequal treatment") {
  auto p = make_profile({"a>b", "a>b"});
  TableMechanism favoritism({{p, permutation_assignment({0, 1})}});
  auto v = check_symmetry(favoritism, Domain::explicitSet({p}));
  CHECK_FALSE(v.holds);
  REQUIRE(v.counterexamples.size() == 1);
  CHECK(v.counterexamples[0].pair == std::make_pair(0, 1));
}

TEST_CASE("ps satisfies the fairness axioms exhaustively at n=3") {
  PsMechanism mech;
  CHECK(check_symmetry(mech, Domain::exhaustive(3)).holds);
  CHECK(check_anonymity(mech, Domain::exhaustive(3)).holds);
  CHECK(check_neutrality(mech, Domain::exhaustive(3)).holds);
}

TEST_CASE("a fixed dictatorship is strategyproof but not anonymous") {
  FixedDictatorship mech;
  auto sp = check_transition_axioms(mech, Domain::exhaustive(3),
                                    {TransitionAxiom::LocalStrategyproofness});
  CHECK(sp.at(TransitionAxiom::LocalStrategyproofness).holds);
  CHECK_FALSE(check_anonymity(mech, Domain::exhaustive(3)).holds);
}

TEST_CASE("a constant mechanism is not neutral") {
  ConstantMechanism mech;
  CHECK_FALSE(check_neutrality(mech, Domain::exhaustive(3)).holds);
}

TEST_CASE("anonymity needs a swap-closed domain") {
  PsMechanism mech;
  auto p = make_profile({"a>b>c", "b>a>c", "c>b>a"});
  CHECK_THROWS_AS(check_anonymity(mech, Domain::explicitSet({p})), DomainError);
}

TEST_CASE("rows travel with orders between the exchanged two-block profiles") {
  auto profileI = make_profile({"a>b>c>d", "a>b>c>d", "b>a>d>c", "b>a>d>c"});
  auto exchanged = swap_agents(swap_agents(profileI, 0, 2), 1, 3);
  PsMechanism mech;
  auto atI = mech.evaluate(profileI);
  auto atExchanged = mech.evaluate(exchanged);
  for (int j = 0; j < 4; ++j) {
    CHECK(atI.at(0, j) == atExchanged.at(2, j));
    CHECK(atI.at(2, j) == atExchanged.at(0, j));
  }
}

TEST_CASE("trading-cycle oracle certifies the easy cases") {
  SUBCASE("the uniform matrix under unanimity is efficient") {
    auto p = make_profile({"a>b>c>d", "a>b>c>d", "a>b>c>d", "a>b>c>d"});
    RatMatrix u(4, 4);
    u.setConstant(R(1, 4));
    auto cert = is_ordinally_efficient(Assignment(u), p);
    CHECK(cert.efficient);
    CHECK(cert.topologicalOrder.size() == 4);
  }
  SUBCASE("rsd at the two-block profile is dominated and ps witnesses it") {
    auto p = make_profile({"a>b>c>d", "a>b>c>d", "b>a>d>c", "b>a>d>c"});
    auto rsdMatrix = rsd(p);
    auto cert = is_ordinally_efficient(rsdMatrix, p);
    REQUIRE_FALSE(cert.efficient);
    REQUIRE(cert.dominator.has_value());
    CHECK(ordinal_dominance(*cert.dominator, rsdMatrix, p).relation ==
          Dominance::StrictlyDominates);
    CHECK(ordinal_dominance(rsdMatrix, *cert.dominator, p).relation ==
          Dominance::Incomparable);
    CHECK(ordinal_dominance(ps(p), rsdMatrix, p).relation == Dominance::StrictlyDominates);
  }
  SUBCASE("moving c/d mass against the ranking creates a two-cycle") {
    auto p = make_profile({"a>b>c>d", "a>b>c>d", "a>b>c>d", "a>b>d>c"});
    auto tampered = grid4({{R(1, 4), R(1, 4), R(1, 3), R(1, 6)},
                           {R(1, 4), R(1, 4), R(1, 3), R(1, 6)},
                           {R(1, 4), R(1, 4), R(1, 6), R(1, 3)},
                           {R(1, 4), R(1, 4), R(1, 6), R(1, 3)}});
    auto cert = is_ordinally_efficient(tampered, p);
    REQUIRE_FALSE(cert.efficient);
    CHECK(cert.cycle.size() == 2);
  }
}

TEST_CASE("lp dominator search agrees with the trading-cycle oracle") {
  SUBCASE("efficient inputs yield no dominator") {
    auto p = make_profile({"a>b>c", "b>c>a", "c>a>b"});
    auto a = ps(p);
    CHECK(is_ordinally_efficient(a, p).efficient);
    CHECK_FALSE(find_strict_dominator(a, p).has_value());
  }
  SUBCASE("the dominated rsd matrix yields a checked dominator") {
    auto p = make_profile({"a>b>c>d", "a>b>c>d", "b>a>d>c", "b>a>d>c"});
    auto dom = find_strict_dominator(rsd(p), p);
    REQUIRE(dom.has_value());
    CHECK(ordinal_dominance(*dom, rsd(p), p).relation == Dominance::StrictlyDominates);
  }
  SUBCASE("agreement on random matrices") {
    std::mt19937_64 rng(5);
    auto profiles = all_profiles(3);
    for (int trial = 0; trial < 60; ++trial) {
      const auto& p = profiles[rng() % profiles.size()];
      std::vector<std::vector<int>> perms;
      std::vector<long> raw;
      long total = 0;
      for (int t = 0; t < 3; ++t) {
        std::vector<int> perm{0, 1, 2};
        for (int i = 2; i > 0; --i)
          std::swap(perm[static_cast<size_t>(i)], perm[rng() % (static_cast<std::uint64_t>(i) + 1)]);
        perms.push_back(perm);
        raw.push_back(1 + static_cast<long>(rng() % 7));
        total += raw.back();
      }
      std::vector<Rational> weights;
      for (long w : raw) weights.emplace_back(w, total);
      auto x = convex_combination(perms, weights);
      CHECK(is_ordinally_efficient(x, p).efficient == !find_strict_dominator(x, p).has_value());
    }
  }
}

TEST_CASE("ex-post efficiency by decomposition") {
  SUBCASE("a Pareto-efficient deterministic assignment decomposes as itself") {
    auto p = make_profile({"a>b>c", "b>a>c", "c>b>a"});
    auto det = permutation_assignment({0, 1, 2});
    auto cert = is_expost_efficient(det, p);
    CHECK(cert.efficient);
    REQUIRE(cert.decomposition.size() == 1);
    CHECK(cert.decomposition[0].first == R(1));
  }
  SUBCASE("the uniform matrix under unanimity is ex-post efficient") {
    auto p = make_profile({"a>b>c>d", "a>b>c>d", "a>b>c>d", "a>b>c>d"});
    RatMatrix u(4, 4);
    u.setConstant(R(1, 4));
    // Every deterministic assignment is Pareto-undominated when all agents
    // agree: any reshuffle helps one agent and hurts another.
    CHECK(pareto_efficient_permutations(p).size() == 24);
    CHECK(is_expost_efficient(Assignment(u), p).efficient);
  }
  SUBCASE("rsd at the two-block profile shows the refinement gap") {
    auto p = make_profile({"a>b>c>d", "a>b>c>d", "b>a>d>c", "b>a>d>c"});
    auto x = rsd(p);
    CHECK(is_expost_efficient(x, p).efficient);
    CHECK_FALSE(is_ordinally_efficient(x, p).efficient);
  }
  SUBCASE("ordinal efficiency refines ex-post efficiency at n=3") {
    std::mt19937_64 rng(17);
    auto profiles = all_profiles(3);
    for (int trial = 0; trial < 40; ++trial) {
      const auto& p = profiles[rng() % profiles.size()];
      auto x = ps(p);
      if (is_ordinally_efficient(x, p).efficient) CHECK(is_expost_efficient(x, p).efficient);
    }
  }
}

TEST_CASE("per-transition decomposition equivalence on random tables") {
  std::mt19937_64 rng(31);
  auto profiles = all_profiles(3);
  for (int seed = 0; seed < 10; ++seed) {
    auto table = random_table(3, profiles, 1000 + static_cast<std::uint64_t>(seed));
    for (const auto& t : Domain::exhaustive(3).transitions()) {
      auto atTruth = table.evaluate(t.profile);
      auto atMis = table.evaluate(t.misreport);
      RatRowVector truth = atTruth.row(t.agent);
      RatRowVector mis = atMis.row(t.agent);
      const auto& orderP = t.profile.order(t.agent);
      const auto& orderQ = t.misreport.order(t.agent);
      const bool spBoth = clause_local_sp(truth, mis, orderP) &&
                          clause_local_sp(mis, truth, orderQ);
      const bool decomposed =
          clause_swap_monotonicity(truth, mis, t.swapped.first, t.swapped.second) &&
          clause_upper_invariance(truth, mis, orderP, t.swapped.first) &&
          clause_lower_invariance(truth, mis, orderP, t.swapped.second);
      CHECK(spBoth == decomposed);
    }
  }
}

TEST_CASE("anonymity implies symmetry on closed domains") {
  PsMechanism ps;
  RsdMechanism rsd;
  for (const Mechanism* m : {static_cast<const Mechanism*>(&ps),
                             static_cast<const Mechanism*>(&rsd)}) {
    if (check_anonymity(*m, Domain::exhaustive(3)).holds)
      CHECK(check_symmetry(*m, Domain::exhaustive(3)).holds);
  }
  auto profiles = all_profiles(3);
  for (int seed = 0; seed < 5; ++seed) {
    auto table = random_table(3, profiles, 50 + static_cast<std::uint64_t>(seed));
    if (check_anonymity(table, Domain::exhaustive(3)).holds)
      CHECK(check_symmetry(table, Domain::exhaustive(3)).holds);
  }
}

TEST_CASE("global and local strategyproofness verdicts agree at n=3") {
  CheckOptions local;
  CheckOptions global;
  global.globalMode = true;
  PsMechanism ps;
  RsdMechanism rsd;
  auto profiles = all_profiles(3);
  std::vector<std::unique_ptr<Mechanism>> tables;
  for (int seed = 0; seed < 3; ++seed)
    tables.push_back(std::make_unique<TableMechanism>(
        random_table(3, profiles, 900 + static_cast<std::uint64_t>(seed))));
  std::vector<const Mechanism*> mechs{&ps, &rsd};
  for (const auto& t : tables) mechs.push_back(t.get());
  for (const Mechanism* m : mechs) {
    auto localV = check_transition_axioms(*m, Domain::exhaustive(3),
                                          {TransitionAxiom::LocalStrategyproofness}, local);
    auto globalV = check_transition_axioms(*m, Domain::exhaustive(3),
                                           {TransitionAxiom::LocalStrategyproofness}, global);
    CHECK(localV.at(TransitionAxiom::LocalStrategyproofness).holds ==
          globalV.at(TransitionAxiom::LocalStrategyproofness).holds);
  }
}

TEST_CASE("ps is non-bossy: exhaustive at n=3 and sampled at n=4") {
  PsMechanism mech;
  auto n3 = check_transition_axioms(mech, Domain::exhaustive(3),
                                    {TransitionAxiom::NonBossiness});
  CHECK(n3.at(TransitionAxiom::NonBossiness).holds);
  auto n4 = check_transition_axioms(mech, Domain::sampled(4, 400, 2024),
                                    {TransitionAxiom::NonBossiness});
  CHECK(n4.at(TransitionAxiom::NonBossiness).holds);
}

TEST_CASE("sampled domains are reproducible and thread count does not matter") {
  PsMechanism mech;
  CheckOptions onThreads;
  onThreads.threads = 4;
  auto a = check_transition_axioms(mech, Domain::sampled(4, 200, 77),
                                   {TransitionAxiom::UpperInvariance});
  auto b = check_transition_axioms(mech, Domain::sampled(4, 200, 77),
                                   {TransitionAxiom::UpperInvariance}, onThreads);
  CHECK(a.at(TransitionAxiom::UpperInvariance).holds ==
        b.at(TransitionAxiom::UpperInvariance).holds);
  CHECK(a.at(TransitionAxiom::UpperInvariance).checked ==
        b.at(TransitionAxiom::UpperInvariance).checked);
}
