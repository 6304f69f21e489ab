#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "axiomlab/assignment.hpp"
#include "axiomlab/codec.hpp"
#include "axiomlab/errors.hpp"
#include "axiomlab/preferences.hpp"

#include <nlohmann/json.hpp>

using namespace axiomlab;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

RatRowVector row4(long n0, long d0, long n1, long d1, long n2, long d2, long n3, long d3) {
  RatRowVector r(4);
  r << Rational(n0, d0), Rational(n1, d1), Rational(n2, d2), Rational(n3, d3);
  return r;
}

Assignment assignment4(std::initializer_list<std::initializer_list<Rational>> rows) {
  RatMatrix m(4, 4);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return Assignment(std::move(m));
}

// Degrades a row at the given order by moving mass downwards; the result is
// weakly dominated by the input.
RatRowVector degrade(RatRowVector r, const PreferenceOrder& order, std::mt19937_64& rng) {
  for (int step = 0; step < 3; ++step) {
    int a = static_cast<int>(rng() % static_cast<std::uint64_t>(order.size() - 1));
    int b = a + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(order.size() - 1 - a));
    int hi = order.at(a), lo = order.at(b);
    Rational amount = r(hi) / Rational(2 + static_cast<long>(rng() % 3));
    r(hi) -= amount;
    r(lo) += amount;
  }
  return r;
}

RatRowVector random_row(int n, std::mt19937_64& rng) {
  std::vector<long> raw;
  long total = 0;
  for (int j = 0; j < n; ++j) {
    raw.push_back(1 + static_cast<long>(rng() % 12));
    total += raw.back();
  }
  RatRowVector r(n);
  for (int j = 0; j < n; ++j) r(j) = Rational(raw[static_cast<size_t>(j)], total);
  return r;
}

}  // namespace

TEST_CASE("rational parsing and canonical form") {
  CHECK(Rational::fromString("5/24").str() == "5/24");
  CHECK(Rational::fromString("2/4").str() == "1/2");
  CHECK(Rational::fromString("0").str() == "0");
  CHECK(Rational::fromString("1").str() == "1");
  CHECK(Rational::fromString("-3/9").str() == "-1/3");
  CHECK(Rational(7, 12) + Rational(5, 12) == Rational(1));
  CHECK(Rational(1, 3) * Rational(3, 4) == Rational(1, 4));
  CHECK_THROWS_AS(Rational::fromString("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::fromString("1e3"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::fromString(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational::fromString("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::fromString("x"), std::invalid_argument);
}

TEST_CASE("rational matrices work under Eigen storage") {
  RatMatrix m(2, 2);
  m << R(1, 2), R(1, 2), R(1, 3), R(2, 3);
  RatMatrix twice = m + m;
  CHECK(twice(1, 0) == R(2, 3));
  CHECK(m.row(0).sum() == R(1));
}

TEST_CASE("adjacent swaps enumerate the neighborhood") {
  auto p = make_profile({"a>b>c>d", "a>b>c>d", "a>b>c>d", "a>b>c>d"});
  auto swaps = adjacent_swaps(p.order(0));
  REQUIRE(swaps.size() == 3);
  CHECK(swaps[0].second == std::make_pair(0, 1));
  CHECK(swaps[1].second == std::make_pair(1, 2));
  CHECK(swaps[2].second == std::make_pair(2, 3));
  CHECK(swaps[0].first == PreferenceOrder({1, 0, 2, 3}));
  CHECK(swaps[1].first == PreferenceOrder({0, 2, 1, 3}));
  CHECK(swaps[2].first == PreferenceOrder({0, 1, 3, 2}));

  PreferenceOrder two({0, 1});
  auto pair = adjacent_swaps(two);
  REQUIRE(pair.size() == 1);
  CHECK(pair[0].first == PreferenceOrder({1, 0}));
}

TEST_CASE("adjacency is symmetric and yields n-1 neighbors") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 3);
    std::vector<int> ranked(static_cast<size_t>(n));
    std::iota(ranked.begin(), ranked.end(), 0);
    for (int i = n - 1; i > 0; --i)
      std::swap(ranked[static_cast<size_t>(i)], ranked[rng() % (static_cast<std::uint64_t>(i) + 1)]);
    PreferenceOrder p(ranked);
    auto neighbors = adjacent_swaps(p);
    CHECK(static_cast<int>(neighbors.size()) == n - 1);
    for (const auto& [q, pair] : neighbors) {
      bool found = false;
      for (const auto& [back, bp] : adjacent_swaps(q))
        if (back == p) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("contour sets split the object set") {
  PreferenceOrder p({0, 1, 2, 3});  // a>b>c>d
  auto atC = contour_sets(p, 2);
  CHECK(atC.upper == std::vector<int>{0, 1});
  CHECK(atC.lower == std::vector<int>{3});
  auto atA = contour_sets(p, 0);
  CHECK(atA.upper.empty());
  CHECK(atA.lower == std::vector<int>{1, 2, 3});
  auto atD = contour_sets(p, 3);
  CHECK(atD.upper == std::vector<int>{0, 1, 2});
  CHECK(atD.lower.empty());
  CHECK_THROWS_AS(contour_sets(p, 9), InputError);
}

TEST_CASE("fosd comparison over preference prefixes") {
  PreferenceOrder abcd({0, 1, 2, 3});
  auto x = row4(1, 4, 1, 4, 1, 3, 1, 6);
  auto y = row4(1, 4, 1, 4, 1, 4, 1, 4);
  SUBCASE("identical rows are Equal") {
    auto v = fosd_compare(x, x, abcd);
    CHECK(v.relation == Dominance::Equal);
    CHECK_FALSE(v.witness.has_value());
  }
  SUBCASE("prefix sums 1/4,1/2,5/6,1 dominate 1/4,1/2,3/4,1") {
    auto v = fosd_compare(x, y, abcd);
    CHECK(v.relation == Dominance::StrictlyDominates);
    CHECK(v.witness == 2);  // strict first at object c
  }
  SUBCASE("PS row dominates the RSD row at the two-block profile") {
    auto ps = row4(1, 2, 0, 1, 1, 2, 0, 1);
    auto rsd = row4(5, 12, 1, 12, 5, 12, 1, 12);
    CHECK(fosd_compare(ps, rsd, abcd).relation == Dominance::StrictlyDominates);
    CHECK(fosd_compare(rsd, ps, abcd).relation == Dominance::Incomparable);
  }
  SUBCASE("crossing prefix sums are incomparable with a witness") {
    auto up = row4(1, 2, 0, 1, 0, 1, 1, 2);
    auto flat = row4(1, 4, 1, 4, 1, 4, 1, 4);
    auto v = fosd_compare(flat, up, abcd);
    CHECK(v.relation == Dominance::Incomparable);
    CHECK(v.witness == 0);
  }
}

TEST_CASE("fosd properties on generated rows") {
  std::mt19937_64 rng(11);
  PreferenceOrder order({0, 1, 2, 3});
  for (int trial = 0; trial < 200; ++trial) {
    auto x = random_row(4, rng);
    CHECK(fosd_compare(x, x, order).relation == Dominance::Equal);
    auto y = degrade(x, order, rng);
    auto z = degrade(y, order, rng);
    // Antisymmetry on strict verdicts.
    auto xy = fosd_compare(x, y, order);
    CHECK(xy.weaklyDominates());
    if (xy.relation == Dominance::StrictlyDominates)
      CHECK(fosd_compare(y, x, order).relation == Dominance::Incomparable);
    // Transitivity of weak dominance.
    CHECK(fosd_compare(y, z, order).weaklyDominates());
    CHECK(fosd_compare(x, z, order).weaklyDominates());
  }
}

TEST_CASE("ordinal dominance aggregates per agent") {
  auto profile = make_profile({"a>b>c>d", "a>b>c>d", "a>b>d>c", "a>b>d>c"});
  // The derivable matrix at this profile and a deterministic efficient rival.
  auto x = assignment4({{R(1, 4), R(1, 4), R(1, 2), R(0)},
                        {R(1, 4), R(1, 4), R(1, 2), R(0)},
                        {R(1, 4), R(1, 4), R(0), R(1, 2)},
                        {R(1, 4), R(1, 4), R(0), R(1, 2)}});
  CHECK(ordinal_dominance(x, x, profile).relation == Dominance::Equal);
  auto vertex = assignment4({{R(1), R(0), R(0), R(0)},
                             {R(0), R(1), R(0), R(0)},
                             {R(0), R(0), R(0), R(1)},
                             {R(0), R(0), R(1), R(0)}});
  CHECK(ordinal_dominance(vertex, x, profile).relation == Dominance::Incomparable);
  CHECK(ordinal_dominance(x, vertex, profile).relation == Dominance::Incomparable);
}

TEST_CASE("object relabeling and agent swaps") {
  auto iPrime = make_profile({"b>a>d>c", "b>a>d>c", "a>b>c>d", "a>b>c>d"});
  auto target = make_profile({"a>b>c>d", "a>b>c>d", "b>a>d>c", "b>a>d>c"});
  SUBCASE("renaming a<->b and c<->d maps the exchanged profile back") {
    auto renamed = relabel_objects(relabel_objects(iPrime, 0, 1), 2, 3);
    CHECK(renamed == target);
  }
  SUBCASE("relabeling twice is the identity") {
    CHECK(relabel_objects(relabel_objects(iPrime, 0, 2), 0, 2) == iPrime);
  }
  SUBCASE("relabeling needs two distinct objects") {
    CHECK_THROWS_AS(relabel_objects(iPrime, 1, 1), InputError);
  }
  SUBCASE("swapping agents twice is the identity, equal orders are a fixpoint") {
    auto once = swap_agents(target, 0, 2);
    CHECK_FALSE(once == target);
    CHECK(swap_agents(once, 0, 2) == target);
    CHECK(swap_agents(target, 0, 1) == target);  // agents 1,2 share an order
    CHECK_THROWS_AS(swap_agents(target, 1, 1), InputError);
  }
  SUBCASE("exchanging both index pairs yields the paper's exchanged profile") {
    CHECK(swap_agents(swap_agents(target, 0, 2), 1, 3) == iPrime);
  }
}

TEST_CASE("profile text codec") {
  const std::string text = "1: a>b>c>d\n2: a>b>c>d\n3: b>a>d>c\n4: b>a>d>c\n";
  auto p = parse_profile(text);
  CHECK(format_profile(p) == text);
  CHECK(p.order(2) == PreferenceOrder({1, 0, 3, 2}));
  CHECK_THROWS_AS(parse_profile("1: a>b>b>d\n2: a>b>c>d\n3: a>b>c>d\n4: a>b>c>d\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_profile("1: a>b\n2: a>b>c\n"), ParseError);
  try {
    parse_profile("1: a>a\n2: a>b\n");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::MalformedRanking);
  }
}

TEST_CASE("matrix text codec and bistochastic validation") {
  const std::string text =
      "a b c d\n"
      "1/4 1/4 1/3 1/6\n"
      "1/4 1/4 1/3 1/6\n"
      "1/4 1/4 1/3 1/6\n"
      "1/4 1/4 0 1/2\n";
  auto parsed = parse_matrix(text);
  CHECK(parsed.entries(0, 2) == R(1, 3));
  CHECK(format_matrix(parsed.objects, parsed.entries) == text);

  const std::string overfull =
      "a b c d\n"
      "1/4 1/4 1/3 1/6\n"
      "1/4 1/4 1/3 1/6\n"
      "1/4 1/4 1/3 1/6\n"
      "0 0 1/4 1\n";
  try {
    parse_matrix(overfull);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::NotBistochastic);
  }
  try {
    parse_matrix("a b\n1/2 0.5\n1/2 1/2\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::MalformedRational);
  }
}

TEST_CASE("json codec round trips") {
  auto p = parse_profile("1: a>b>c>d\n2: a>b>c>d\n3: a>b>c>d\n4: a>b>d>c\n");
  CHECK(profile_from_json(profile_to_json(p)) == p);
  auto a = assignment4({{R(1, 4), R(1, 4), R(1, 3), R(1, 6)},
                        {R(1, 4), R(1, 4), R(1, 3), R(1, 6)},
                        {R(1, 4), R(1, 4), R(1, 3), R(1, 6)},
                        {R(1, 4), R(1, 4), R(0), R(1, 2)}});
  CHECK(assignment_from_json(assignment_to_json(p, a), p) == a);
}

TEST_CASE("table codec round trips") {
  auto p1 = parse_profile("1: a>b>c\n2: a>b>c\n3: a>b>c\n");
  auto p2 = parse_profile("1: a>b>c\n2: b>a>c\n3: c>b>a\n");
  RatMatrix u(3, 3);
  u.setConstant(R(1, 3));
  std::vector<std::pair<PreferenceProfile, Assignment>> rows = {
      {p1, Assignment(u)}, {p2, permutation_assignment({0, 1, 2})}};
  auto parsed = parse_table(format_table(rows));
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].first == p1);
  CHECK(parsed[1].second == rows[1].second);
}

TEST_CASE("assignment construction enforces bistochasticity") {
  RatMatrix bad(2, 2);
  bad << R(1, 2), R(1, 2), R(1, 2), R(1, 4);
  CHECK_THROWS_AS(Assignment{bad}, ParseError);
  RatMatrix negative(2, 2);
  negative << R(3, 2), R(-1, 2), R(-1, 2), R(3, 2);
  CHECK_THROWS_AS(Assignment{negative}, ParseError);
}
