#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "axiomlab/errors.hpp"
#include "axiomlab/mechanisms.hpp"
#include "axiomlab/polytope.hpp"

using namespace axiomlab;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

int var4(int i, int j) { return i * 4 + j; }

void add_bistochastic_rows(LinearSystem& sys, int n) {
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, Rational>> row;
    for (int j = 0; j < n; ++j) row.emplace_back(i * n + j, R(1));
    sys.addTerms(row, LinearSystem::Rel::Eq, R(1));
  }
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<int, Rational>> col;
    for (int i = 0; i < n; ++i) col.emplace_back(i * n + j, R(1));
    sys.addTerms(col, LinearSystem::Rel::Eq, R(1));
  }
}

bool satisfies(const LinearSystem& sys, const RatVector& x) {
  for (const auto& row : sys.rows()) {
    Rational lhs(0);
    for (int j = 0; j < sys.numVars(); ++j) lhs += row.coeffs(j) * x(j);
    switch (row.rel) {
      case LinearSystem::Rel::Eq:
        if (lhs != row.rhs) return false;
        break;
      case LinearSystem::Rel::Le:
        if (lhs > row.rhs) return false;
        break;
      case LinearSystem::Rel::Ge:
        if (lhs < row.rhs) return false;
        break;
    }
  }
  for (int j = 0; j < sys.numVars(); ++j)
    if (x(j).sign() < 0) return false;
  return true;
}

}  // namespace

TEST_CASE("lp solves box problems exactly") {
  SUBCASE("bounded maximum") {
    LinearSystem sys(1);
    sys.addTerms({{0, R(1)}}, LinearSystem::Rel::Le, R(1));
    sys.setObjectiveTerms({{0, R(1)}});
    auto res = lp_solve(sys);
    REQUIRE(res.status == LpResult::Status::Optimal);
    CHECK(res.value == R(1));
    CHECK(res.point(0) == R(1));
  }
  SUBCASE("empty box is infeasible with a checked certificate") {
    LinearSystem sys(1);
    sys.addTerms({{0, R(1)}}, LinearSystem::Rel::Ge, R(1));
    sys.addTerms({{0, R(1)}}, LinearSystem::Rel::Le, R(0));
    auto res = lp_solve(sys);
    CHECK(res.status == LpResult::Status::Infeasible);
    CHECK(res.farkas.size() == 2);
  }
  SUBCASE("unbounded direction detected") {
    LinearSystem sys(1);
    sys.addTerms({{0, R(1)}}, LinearSystem::Rel::Ge, R(0));
    sys.setObjectiveTerms({{0, R(1)}});
    CHECK(lp_solve(sys).status == LpResult::Status::Unbounded);
  }
}

TEST_CASE("lp pins the forced entry of the partially fixed matrix") {
  // Bistochasticity plus every a/b/d entry of the profile-V matrix leaves
  // exactly one completion; the free entry maxes out at its forced value.
  LinearSystem sys(16);
  add_bistochastic_rows(sys, 4);
  const Rational grid[4][4] = {{R(1, 4), R(1, 3), R(-1), R(0)},
                               {R(1, 4), R(1, 3), R(-1), R(0)},
                               {R(1, 4), R(1, 3), R(-1), R(1, 4)},
                               {R(1, 4), R(0), R(-1), R(3, 4)}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (grid[i][j].sign() >= 0) sys.addEquality(var4(i, j), grid[i][j]);
  sys.setObjectiveTerms({{var4(2, 2), R(1)}});
  auto res = lp_solve(sys);
  REQUIRE(res.status == LpResult::Status::Optimal);
  CHECK(res.value == R(1, 6));
  CHECK(satisfies(sys, res.point));
}

TEST_CASE("vertex enumeration on small Birkhoff polytopes") {
  SUBCASE("n=2 has the two permutation matrices") {
    LinearSystem sys(4);
    add_bistochastic_rows(sys, 2);
    auto verts = enumerate_vertices(sys);
    CHECK(verts.size() == 2);
    for (const auto& v : verts) CHECK(satisfies(sys, v));
  }
  SUBCASE("n=3 has six vertices") {
    LinearSystem sys(9);
    add_bistochastic_rows(sys, 3);
    CHECK(enumerate_vertices(sys).size() == 6);
  }
}

TEST_CASE("vertices of the one-parameter family realize both endpoints") {
  // Rows 1,2 and the a/b entries of rows 3,4 follow the derived profile-VIII
  // matrix; the c column keeps one degree of freedom.
  LinearSystem sys(16);
  add_bistochastic_rows(sys, 4);
  const Rational row12[4] = {R(1, 3), R(5, 24), R(11, 24), R(0)};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 4; ++j) sys.addEquality(var4(i, j), row12[j]);
  sys.addEquality(var4(2, 0), R(0));
  sys.addEquality(var4(2, 1), R(7, 12));
  sys.addEquality(var4(3, 0), R(1, 3));
  sys.addEquality(var4(3, 1), R(0));
  auto verts = enumerate_vertices(sys);
  REQUIRE(verts.size() == 2);
  std::set<std::string> xs;
  for (const auto& v : verts) {
    CHECK(satisfies(sys, v));
    xs.insert(v(var4(2, 2)).str());
  }
  CHECK(xs == std::set<std::string>{"0", "1/12"});

  SUBCASE("lp optimum over the family equals the best vertex") {
    LinearSystem withObj = sys;
    withObj.setObjectiveTerms({{var4(2, 2), R(1)}});
    auto res = lp_solve(withObj);
    REQUIRE(res.status == LpResult::Status::Optimal);
    CHECK(res.value == R(1, 12));
  }
}

TEST_CASE("vertex enumeration respects the dimension cap") {
  LinearSystem sys(16);
  add_bistochastic_rows(sys, 4);
  CHECK_THROWS_AS(enumerate_vertices(sys, 3), CapacityError);
}

TEST_CASE("bvn decomposes exactly") {
  SUBCASE("a permutation matrix is its own decomposition") {
    auto perm = permutation_assignment({2, 0, 1, 3});
    auto d = bvn_decompose(perm);
    REQUIRE(d.components.size() == 1);
    CHECK(d.components[0].weight == R(1));
    CHECK(d.components[0].permutation == std::vector<int>{2, 0, 1, 3});
  }
  SUBCASE("the uniform matrix reconstructs with few components") {
    RatMatrix u(4, 4);
    u.setConstant(R(1, 4));
    Assignment x(u);
    auto d = bvn_decompose(x);
    CHECK(d.components.size() <= 10);
    CHECK(d.reconstruct(4) == x.matrix());
    Rational total(0);
    for (const auto& c : d.components) total += c.weight;
    CHECK(total == R(1));
  }
  SUBCASE("the profile-VII matrix reconstructs exactly") {
    RatMatrix m(4, 4);
    m << R(1, 3), R(5, 24), R(1, 3), R(1, 8),
         R(1, 3), R(5, 24), R(1, 3), R(1, 8),
         R(0), R(7, 12), R(1, 3), R(1, 12),
         R(1, 3), R(0), R(0), R(2, 3);
    Assignment x(m);
    auto d = bvn_decompose(x);
    CHECK(d.reconstruct(4) == m);
    CHECK(d.components.size() <= 10);
  }
  SUBCASE("random convex combinations terminate within the component bound") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 3 + static_cast<int>(rng() % 3);
      std::vector<std::vector<int>> perms;
      std::vector<long> raw;
      long total = 0;
      const int k = 1 + static_cast<int>(rng() % 5);
      for (int t = 0; t < k; ++t) {
        std::vector<int> p(static_cast<size_t>(n));
        std::iota(p.begin(), p.end(), 0);
        for (int i = n - 1; i > 0; --i)
          std::swap(p[static_cast<size_t>(i)], p[rng() % (static_cast<std::uint64_t>(i) + 1)]);
        perms.push_back(std::move(p));
        raw.push_back(1 + static_cast<long>(rng() % 9));
        total += raw.back();
      }
      std::vector<Rational> weights;
      for (long w : raw) weights.emplace_back(w, total);
      Assignment x = convex_combination(perms, weights);
      auto d = bvn_decompose(x);
      CHECK(d.reconstruct(n) == x.matrix());
      CHECK(static_cast<int>(d.components.size()) <= n * n - 2 * n + 2);
    }
  }
}
