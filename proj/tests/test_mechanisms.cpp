#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "axiomlab/axioms.hpp"
#include "axiomlab/errors.hpp"
#include "axiomlab/mechanisms.hpp"
#include "axiomlab/proofkit.hpp"

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

}  // namespace

TEST_CASE("rsd on unanimous preferences is uniform") {
  auto p = make_profile({"a>b>c>d", "a>b>c>d", "a>b>c>d", "a>b>c>d"});
  auto a = rsd(p);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(a.at(i, j) == R(1, 4));
}

TEST_CASE("rsd matches the brute-force values at the two-block profile") {
  auto p = make_profile({"a>b>c>d", "a>b>c>d", "b>a>d>c", "b>a>d>c"});
  auto expected = grid4({{R(5, 12), R(1, 12), R(5, 12), R(1, 12)},
                         {R(5, 12), R(1, 12), R(5, 12), R(1, 12)},
                         {R(1, 12), R(5, 12), R(1, 12), R(5, 12)},
                         {R(1, 12), R(5, 12), R(1, 12), R(5, 12)}});
  CHECK(rsd(p) == expected);
}

TEST_CASE("rsd corner cases") {
  auto single = PreferenceProfile({"1"}, {"a"}, {PreferenceOrder({0})});
  CHECK(rsd(single).at(0, 0) == R(1));
  std::vector<std::string> big(7, "a>b>c>d>e>f>g");
  CHECK_THROWS_AS(rsd(make_profile(big)), CapacityError);
}

TEST_CASE("rsd is symmetric at every three-agent profile") {
  for (const auto& p : all_profiles(3)) {
    auto a = rsd(p);
    for (int i = 0; i < 3; ++i)
      for (int k = i + 1; k < 3; ++k)
        if (p.order(i) == p.order(k)) CHECK(a.row(i) == a.row(k));
  }
}

TEST_CASE("ps reproduces the derivation matrices exactly") {
  SUBCASE("unanimous profile eats into the uniform matrix") {
    auto p = make_profile({"a>b>c>d", "a>b>c>d", "a>b>c>d", "a>b>c>d"});
    auto a = ps(p);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(a.at(i, j) == R(1, 4));
  }
  SUBCASE("one deviating agent") {
    auto p = make_profile({"a>b>c>d", "a>b>c>d", "a>b>c>d", "a>b>d>c"});
    auto expected = grid4({{R(1, 4), R(1, 4), R(1, 3), R(1, 6)},
                           {R(1, 4), R(1, 4), R(1, 3), R(1, 6)},
                           {R(1, 4), R(1, 4), R(1, 3), R(1, 6)},
                           {R(1, 4), R(1, 4), R(0), R(1, 2)}});
    CHECK(ps(p) == expected);
  }
  SUBCASE("two opposed blocks") {
    auto p = make_profile({"a>b>c>d", "a>b>c>d", "b>a>d>c", "b>a>d>c"});
    auto expected = grid4({{R(1, 2), R(0), R(1, 2), R(0)},
                           {R(1, 2), R(0), R(1, 2), R(0)},
                           {R(0), R(1, 2), R(0), R(1, 2)},
                           {R(0), R(1, 2), R(0), R(1, 2)}});
    CHECK(ps(p) == expected);
  }
}

TEST_CASE("ps output is ordinally efficient at every three-agent profile") {
  for (const auto& p : all_profiles(3)) {
    CHECK(is_ordinally_efficient(ps(p), p).efficient);
  }
}

TEST_CASE("rsd and ps agree with the uniform matrix under unanimity") {
  auto p = make_profile({"c>a>b", "c>a>b", "c>a>b"});
  CHECK(rsd(p) == ps(p));
  CHECK(rsd(p).at(0, 2) == R(1, 3));
}

TEST_CASE("table mechanisms evaluate stored matrices verbatim") {
  auto p1 = make_profile({"a>b", "b>a"});
  auto stored = permutation_assignment({0, 1});
  TableMechanism table({{p1, stored}});
  CHECK(table.evaluate(p1) == stored);
  CHECK(table.contains(p1));
  auto outside = make_profile({"b>a", "a>b"});
  CHECK_FALSE(table.contains(outside));
  CHECK_THROWS_AS(table.evaluate(outside), DomainError);
}

TEST_CASE("the derivation-table fixture answers profile V") {
  // All eight concrete matrices of the first derivation, the parametric node
  // instantiated at its lower endpoint.
  namespace pk = axiomlab::proofkit;
  auto script = pk::builtin_script(1);
  std::vector<std::pair<PreferenceProfile, Assignment>> rows;
  for (const auto& node : script.nodes) {
    if (node.auxiliary) continue;
    RatMatrix m(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const auto& e = node.expected[static_cast<size_t>(i)][static_cast<size_t>(j)];
        REQUIRE_FALSE(e.unknown);
        m(i, j) = e.c + e.k * (node.paramRange ? node.paramRange->first : R(0));
      }
    rows.emplace_back(node.profile, Assignment(std::move(m)));
  }
  REQUIRE(rows.size() == 8);
  TableMechanism table(std::move(rows));
  auto profileV = make_profile({"a>b>c>d", "a>b>c>d", "a>b>d>c", "a>d>b>c"});
  auto expectedV = grid4({{R(1, 4), R(1, 3), R(5, 12), R(0)},
                          {R(1, 4), R(1, 3), R(5, 12), R(0)},
                          {R(1, 4), R(1, 3), R(1, 6), R(1, 4)},
                          {R(1, 4), R(0), R(0), R(3, 4)}});
  CHECK(table.evaluate(profileV) == expectedV);
}

TEST_CASE("random tables are deterministic in the seed and bistochastic") {
  auto profiles = all_profiles(3);
  profiles.resize(20);
  auto t1 = random_table(3, profiles, 42);
  auto t2 = random_table(3, profiles, 42);
  auto t3 = random_table(3, profiles, 43);
  bool anyDiff = false;
  for (const auto& p : profiles) {
    CHECK(t1.evaluate(p) == t2.evaluate(p));  // construction validates bistochasticity
    if (!(t1.evaluate(p) == t3.evaluate(p))) anyDiff = true;
  }
  CHECK(anyDiff);
}

TEST_CASE("half weights over two permutations give a half-integer matrix") {
  auto a = convex_combination({{0, 1, 2}, {1, 0, 2}}, {R(1, 2), R(1, 2)});
  CHECK(a.at(0, 0) == R(1, 2));
  CHECK(a.at(0, 1) == R(1, 2));
  CHECK(a.at(2, 2) == R(1));
  CHECK_THROWS_AS(convex_combination({{0, 1}}, {R(1, 2)}), InputError);
}
