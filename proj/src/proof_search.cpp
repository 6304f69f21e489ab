#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "axiomlab/axioms.hpp"
#include "axiomlab/errors.hpp"
#include "axiomlab/polytope.hpp"
#include "axiomlab/proofkit.hpp"

namespace axiomlab::proofkit {

std::vector<PreferenceProfile> search_profiles(int theorem) {
  ProofScript script = builtin_script(theorem);
  std::vector<PreferenceProfile> out;
  std::set<std::string> seen;
  for (const auto& nd : script.nodes)
    if (seen.insert(nd.profile.key()).second) out.push_back(nd.profile);
  return out;
}

namespace {

std::vector<std::vector<int>> permutations_of(int n) {
  std::vector<int> base(static_cast<size_t>(n));
  std::iota(base.begin(), base.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

struct SwapEdge {
  int p = -1, q = -1;  // q = p with agent's pair (j above j') transposed
  int agent = -1;
  int j = -1, jp = -1;
};

struct Problem {
  int theorem = 0;
  int n = 0;
  std::vector<PreferenceProfile> profiles;
  std::vector<std::pair<int, int>> equalities;  // variable index pairs
  std::vector<SwapEdge> edges;
  bool useSwapMono = false;
  bool useNonBossy = false;
  bool useOE = false;

  int var(int p, int i, int j) const { return (p * n + i) * n + j; }
  int vars() const { return static_cast<int>(profiles.size()) * n * n; }
};

Problem build_problem(int theorem, const SearchOptions& options) {
  ProofScript script = builtin_script(theorem);
  std::vector<AxiomFamily> families = script.axioms;
  if (options.addSwapMonotonicity &&
      std::find(families.begin(), families.end(), AxiomFamily::SwapMonotonicity) ==
          families.end())
    families.push_back(AxiomFamily::SwapMonotonicity);
  if (options.drop) {
    auto it = std::find(families.begin(), families.end(), *options.drop);
    if (it == families.end())
      throw InputError("axiom '" + family_name(*options.drop) +
                       "' is not part of theorem " + std::to_string(theorem) + "'s set");
    families.erase(it);
  }
  auto has = [&](AxiomFamily f) {
    return std::find(families.begin(), families.end(), f) != families.end();
  };

  Problem prob;
  prob.theorem = theorem;
  prob.profiles = search_profiles(theorem);
  prob.n = prob.profiles.front().size();
  prob.useSwapMono = has(AxiomFamily::SwapMonotonicity);
  prob.useNonBossy = has(AxiomFamily::NonBossiness);
  prob.useOE = has(AxiomFamily::OrdinalEfficiency);
  const int n = prob.n;
  const int count = static_cast<int>(prob.profiles.size());

  std::map<std::string, int> byKey;
  for (int p = 0; p < count; ++p) byKey[prob.profiles[static_cast<size_t>(p)].key()] = p;

  // Equal treatment of equals inside every profile. Anonymity implies
  // symmetry, so either family activates these rows.
  if (has(AxiomFamily::Symmetry) || has(AxiomFamily::Anonymity)) {
    for (int p = 0; p < count; ++p) {
      const auto& prof = prob.profiles[static_cast<size_t>(p)];
      for (int i = 0; i < n; ++i)
        for (int ip = i + 1; ip < n; ++ip) {
          if (!(prof.order(i) == prof.order(ip))) continue;
          for (int j = 0; j < n; ++j)
            prob.equalities.emplace_back(prob.var(p, i, j), prob.var(p, ip, j));
        }
    }
  }

  // Adjacent-swap edges inside the profile set, with the invariance
  // equalities they license.
  for (int p = 0; p < count; ++p)
    for (int q = p + 1; q < count; ++q) {
      const auto& P = prob.profiles[static_cast<size_t>(p)];
      const auto& Q = prob.profiles[static_cast<size_t>(q)];
      int agent = -1;
      for (int i = 0; i < n; ++i)
        if (!(P.order(i) == Q.order(i))) {
          if (agent >= 0) {
            agent = -2;
            break;
          }
          agent = i;
        }
      if (agent < 0 || agent == -2) continue;
      int rank = -1;
      for (int r = 0; r + 1 < n; ++r)
        if (P.order(agent).withAdjacentSwap(r) == Q.order(agent)) {
          rank = r;
          break;
        }
      if (rank < 0) continue;
      SwapEdge e;
      e.p = p;
      e.q = q;
      e.agent = agent;
      e.j = P.order(agent).at(rank);
      e.jp = P.order(agent).at(rank + 1);
      prob.edges.push_back(e);
      if (has(AxiomFamily::UpperInvariance))
        for (int u : contour_sets(P.order(agent), e.j).upper)
          prob.equalities.emplace_back(prob.var(p, agent, u), prob.var(q, agent, u));
      if (has(AxiomFamily::LowerInvariance))
        for (int l : contour_sets(P.order(agent), e.jp).lower)
          prob.equalities.emplace_back(prob.var(p, agent, l), prob.var(q, agent, l));
    }

  // Anonymity and neutrality equalities: assignments travel with agent
  // permutations and object renamings whenever the image profile is also in
  // the set. Composites of the two are entailed through the full domain.
  const bool anon = has(AxiomFamily::Anonymity);
  const bool neut = has(AxiomFamily::Neutrality);
  if (anon || neut) {
    auto perms = permutations_of(n);
    for (int p = 0; p < count; ++p) {
      const auto& P = prob.profiles[static_cast<size_t>(p)];
      for (const auto& rho : perms) {
        const bool rhoId = std::is_sorted(rho.begin(), rho.end());
        if (rhoId && !neut) continue;
        if (!rhoId && !anon) continue;
        PreferenceProfile moved = rhoId ? P : permute_agents(P, rho);
        for (const auto& pi : perms) {
          const bool piId = std::is_sorted(pi.begin(), pi.end());
          if (rhoId && piId) continue;
          if (!piId && !neut) continue;
          PreferenceProfile image = piId ? moved : relabel_objects(moved, pi);
          auto it = byKey.find(image.key());
          if (it == byKey.end()) continue;
          const int q = it->second;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              prob.equalities.emplace_back(
                  prob.var(p, i, j),
                  prob.var(q, rho[static_cast<size_t>(i)], pi[static_cast<size_t>(j)]));
        }
      }
    }
  }
  return prob;
}

// Union-find over problem variables.
struct Classes {
  std::vector<int> parent;
  explicit Classes(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

struct Branch {
  std::vector<char> zero;                        // per variable
  std::vector<std::pair<int, int>> rowEqual;     // extra equalities (var pairs)
  std::vector<std::pair<int, int>> stricts;      // v[first] - v[second] > 0
  std::set<int> decidedEdges;
};

struct Solver {
  const Problem& prob;
  long branchLimit;
  long explored = 0;
  bool limitHit = false;

  explicit Solver(const Problem& p, long limit) : prob(p), branchLimit(limit) {}

  // Solves the branch relaxation. Returns nullopt when infeasible (or when a
  // strict inequality cannot hold strictly).
  std::optional<RatVector> solveRelaxation(const Branch& br) {
    Classes cls(prob.vars());
    for (auto [a, b] : prob.equalities) cls.unite(a, b);
    for (auto [a, b] : br.rowEqual) cls.unite(a, b);

    std::vector<char> zeroClass(static_cast<size_t>(prob.vars()), 0);
    for (int v = 0; v < prob.vars(); ++v)
      if (br.zero[static_cast<size_t>(v)]) zeroClass[static_cast<size_t>(cls.find(v))] = 1;

    // Compact variable ids for nonzero class roots.
    std::vector<int> id(static_cast<size_t>(prob.vars()), -1);
    int next = 0;
    for (int v = 0; v < prob.vars(); ++v) {
      int r = cls.find(v);
      if (zeroClass[static_cast<size_t>(r)]) continue;
      if (id[static_cast<size_t>(r)] < 0) id[static_cast<size_t>(r)] = next++;
    }
    const bool strict = !br.stricts.empty();
    const int tVar = next;  // strictness margin, maximized
    LinearSystem sys(strict ? next + 1 : next);

    const int n = prob.n;
    for (int p = 0; p < static_cast<int>(prob.profiles.size()); ++p) {
      for (int i = 0; i < n; ++i) {
        std::map<int, long> mult;
        for (int j = 0; j < n; ++j) {
          int r = cls.find(prob.var(p, i, j));
          if (!zeroClass[static_cast<size_t>(r)]) ++mult[id[static_cast<size_t>(r)]];
        }
        std::vector<std::pair<int, Rational>> terms;
        for (auto [v, m] : mult) terms.emplace_back(v, Rational(m));
        sys.addTerms(terms, LinearSystem::Rel::Eq, Rational(1));
      }
      for (int j = 0; j < n; ++j) {
        std::map<int, long> mult;
        for (int i = 0; i < n; ++i) {
          int r = cls.find(prob.var(p, i, j));
          if (!zeroClass[static_cast<size_t>(r)]) ++mult[id[static_cast<size_t>(r)]];
        }
        std::vector<std::pair<int, Rational>> terms;
        for (auto [v, m] : mult) terms.emplace_back(v, Rational(m));
        sys.addTerms(terms, LinearSystem::Rel::Eq, Rational(1));
      }
    }
    for (auto [a, b] : br.stricts) {
      int ra = cls.find(a), rb = cls.find(b);
      const bool za = zeroClass[static_cast<size_t>(ra)], zb = zeroClass[static_cast<size_t>(rb)];
      if (ra == rb || (za && zb)) return std::nullopt;  // cannot be strict
      std::vector<std::pair<int, Rational>> terms;
      if (!za) terms.emplace_back(id[static_cast<size_t>(ra)], Rational(1));
      if (!zb) terms.emplace_back(id[static_cast<size_t>(rb)], Rational(-1));
      terms.emplace_back(tVar, Rational(-1));
      sys.addTerms(terms, LinearSystem::Rel::Ge, Rational(0));
    }
    if (strict) {
      sys.addTerms({{tVar, Rational(1)}}, LinearSystem::Rel::Le, Rational(1));
      sys.setObjectiveTerms({{tVar, Rational(1)}});
    }
    LpResult res = lp_solve(sys);
    if (res.status != LpResult::Status::Optimal) return std::nullopt;
    if (strict && res.value.sign() <= 0) return std::nullopt;

    RatVector full(prob.vars());
    for (int v = 0; v < prob.vars(); ++v) {
      int r = cls.find(v);
      full(v) = zeroClass[static_cast<size_t>(r)] ? Rational(0)
                                                  : res.point(id[static_cast<size_t>(r)]);
    }
    return full;
  }

  Assignment matrixAt(const RatVector& x, int p) const {
    RatMatrix m(prob.n, prob.n);
    for (int i = 0; i < prob.n; ++i)
      for (int j = 0; j < prob.n; ++j) m(i, j) = x(prob.var(p, i, j));
    return Assignment(std::move(m));
  }

  SearchResult::Verdict explore(Branch& br, std::vector<std::pair<PreferenceProfile, Assignment>>* witness) {
    if (++explored > branchLimit) {
      limitHit = true;
      return SearchResult::Verdict::Inconclusive;
    }
    auto point = solveRelaxation(br);
    if (!point) return SearchResult::Verdict::Infeasible;

    const int n = prob.n;
    // Swap-monotonicity / non-bossiness clauses on the relaxation point.
    for (size_t e = 0; e < prob.edges.size(); ++e) {
      if (br.decidedEdges.count(static_cast<int>(e))) continue;
      const auto& edge = prob.edges[e];
      bool rowsEqual = true;
      for (int j = 0; j < n && rowsEqual; ++j)
        rowsEqual = (*point)(prob.var(edge.p, edge.agent, j)) ==
                    (*point)(prob.var(edge.q, edge.agent, j));
      bool violated = false;
      if (prob.useSwapMono && !rowsEqual) {
        const bool strictOk =
            (*point)(prob.var(edge.p, edge.agent, edge.j)) >
                (*point)(prob.var(edge.q, edge.agent, edge.j)) &&
            (*point)(prob.var(edge.p, edge.agent, edge.jp)) <
                (*point)(prob.var(edge.q, edge.agent, edge.jp));
        violated = !strictOk;
      }
      if (prob.useNonBossy && rowsEqual) {
        for (int i = 0; i < n && !violated; ++i)
          for (int j = 0; j < n && !violated; ++j)
            violated = (*point)(prob.var(edge.p, i, j)) != (*point)(prob.var(edge.q, i, j));
      }
      if (!violated) continue;

      // Branch A: the swapper's row is unchanged (and with non-bossiness the
      // whole matrix). Branch B: strictly shifted mass between j and j'.
      bool sawInconclusive = false;
      {
        Branch a = br;
        a.decidedEdges.insert(static_cast<int>(e));
        if (prob.useNonBossy) {
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              a.rowEqual.emplace_back(prob.var(edge.p, i, j), prob.var(edge.q, i, j));
        } else {
          for (int j = 0; j < n; ++j)
            a.rowEqual.emplace_back(prob.var(edge.p, edge.agent, j),
                                    prob.var(edge.q, edge.agent, j));
        }
        auto v = explore(a, witness);
        if (v == SearchResult::Verdict::Witness) return v;
        if (v == SearchResult::Verdict::Inconclusive) sawInconclusive = true;
      }
      if (prob.useSwapMono) {
        Branch b = br;
        b.decidedEdges.insert(static_cast<int>(e));
        b.stricts.emplace_back(prob.var(edge.p, edge.agent, edge.j),
                               prob.var(edge.q, edge.agent, edge.j));
        b.stricts.emplace_back(prob.var(edge.q, edge.agent, edge.jp),
                               prob.var(edge.p, edge.agent, edge.jp));
        auto v = explore(b, witness);
        if (v == SearchResult::Verdict::Witness) return v;
        if (v == SearchResult::Verdict::Inconclusive) sawInconclusive = true;
      } else {
        // Without swap monotonicity the complement of "row unchanged" is a
        // strict difference at some object, in one of two directions.
        for (int j = 0; j < n; ++j)
          for (int dir = 0; dir < 2; ++dir) {
            Branch b = br;
            b.decidedEdges.insert(static_cast<int>(e));
            const int vp = prob.var(edge.p, edge.agent, j);
            const int vq = prob.var(edge.q, edge.agent, j);
            b.stricts.emplace_back(dir == 0 ? vp : vq, dir == 0 ? vq : vp);
            auto v = explore(b, witness);
            if (v == SearchResult::Verdict::Witness) return v;
            if (v == SearchResult::Verdict::Inconclusive) sawInconclusive = true;
          }
      }
      return sawInconclusive ? SearchResult::Verdict::Inconclusive
                             : SearchResult::Verdict::Infeasible;
    }

    // Ordinal efficiency: branch on the shortest trading cycle found.
    if (prob.useOE) {
      int cycleProfile = -1;
      std::vector<int> cycle;
      for (int p = 0; p < static_cast<int>(prob.profiles.size()); ++p) {
        auto cert = is_ordinally_efficient(matrixAt(*point, p),
                                           prob.profiles[static_cast<size_t>(p)]);
        if (!cert.efficient &&
            (cycleProfile < 0 || cert.cycle.size() < cycle.size())) {
          cycleProfile = p;
          cycle = cert.cycle;
        }
      }
      if (cycleProfile >= 0) {
        const auto& prof = prob.profiles[static_cast<size_t>(cycleProfile)];
        bool sawInconclusive = false;
        for (size_t t = 0; t < cycle.size(); ++t) {
          const int j = cycle[t];
          const int jp = cycle[(t + 1) % cycle.size()];
          // Remove the edge j -> j': every holder of j' preferring j drops it.
          Branch b = br;
          for (int i = 0; i < prob.n; ++i)
            if (prof.order(i).prefers(j, jp))
              b.zero[static_cast<size_t>(prob.var(cycleProfile, i, jp))] = 1;
          auto v = explore(b, witness);
          if (v == SearchResult::Verdict::Witness) return v;
          if (v == SearchResult::Verdict::Inconclusive) sawInconclusive = true;
        }
        return sawInconclusive ? SearchResult::Verdict::Inconclusive
                               : SearchResult::Verdict::Infeasible;
      }
    }

    // All clauses hold: the point is a witness fragment.
    if (witness) {
      witness->clear();
      for (int p = 0; p < static_cast<int>(prob.profiles.size()); ++p)
        witness->emplace_back(prob.profiles[static_cast<size_t>(p)], matrixAt(*point, p));
    }
    return SearchResult::Verdict::Witness;
  }
};

}  // namespace

SearchResult independent_search(int theorem, const SearchOptions& options) {
  Problem prob = build_problem(theorem, options);
  Solver solver(prob, options.branchLimit);
  Branch root;
  root.zero.assign(static_cast<size_t>(prob.vars()), 0);
  SearchResult res;
  res.verdict = solver.explore(root, &res.witness);
  if (solver.limitHit) res.verdict = SearchResult::Verdict::Inconclusive;
  res.branches = solver.explored;
  if (res.verdict == SearchResult::Verdict::Witness) {
    std::string why;
    if (!satisfies_search_constraints(theorem, options, res.witness, &why))
      throw Error("internal: search witness failed validation: " + why);
    res.detail = "witness fragment over " + std::to_string(prob.profiles.size()) + " profiles";
  } else if (res.verdict == SearchResult::Verdict::Infeasible) {
    res.witness.clear();
    res.detail = "every branch's linear relaxation is infeasible";
  } else {
    res.witness.clear();
    res.detail = "branch limit exceeded";
  }
  return res;
}

bool satisfies_search_constraints(
    int theorem, const SearchOptions& options,
    const std::vector<std::pair<PreferenceProfile, Assignment>>& table, std::string* whyNot) {
  Problem prob = build_problem(theorem, options);
  auto fail = [&](const std::string& why) {
    if (whyNot) *whyNot = why;
    return false;
  };
  std::map<std::string, const Assignment*> byKey;
  for (const auto& [p, a] : table) byKey[p.key()] = &a;
  std::vector<const Assignment*> at;
  for (const auto& p : prob.profiles) {
    auto it = byKey.find(p.key());
    if (it == byKey.end()) return fail("table is missing a search profile");
    at.push_back(it->second);
  }
  auto value = [&](int v) -> const Rational& {
    const int n = prob.n;
    const int p = v / (n * n);
    return at[static_cast<size_t>(p)]->at((v / n) % n, v % n);
  };
  for (auto [a, b] : prob.equalities)
    if (!(value(a) == value(b))) return fail("a hard equality constraint fails");
  for (const auto& edge : prob.edges) {
    RatRowVector rp = at[static_cast<size_t>(edge.p)]->row(edge.agent);
    RatRowVector rq = at[static_cast<size_t>(edge.q)]->row(edge.agent);
    const bool rowsEqual = rp == rq;
    if (prob.useSwapMono && !rowsEqual &&
        !(rp(edge.j) > rq(edge.j) && rp(edge.jp) < rq(edge.jp)))
      return fail("swap monotonicity fails along an edge");
    if (prob.useNonBossy && rowsEqual &&
        !(*at[static_cast<size_t>(edge.p)] == *at[static_cast<size_t>(edge.q)]))
      return fail("non-bossiness fails along an edge");
  }
  if (prob.useOE)
    for (size_t p = 0; p < prob.profiles.size(); ++p)
      if (!is_ordinally_efficient(*at[p], prob.profiles[p]).efficient)
        return fail("a profile's matrix is ordinally dominated");
  return true;
}

}  // namespace axiomlab::proofkit
