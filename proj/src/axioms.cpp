#include "axiomlab/axioms.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <thread>

#include "axiomlab/errors.hpp"
#include "axiomlab/polytope.hpp"

namespace axiomlab {

Domain Domain::exhaustive(int n) {
  Domain d;
  d.kind_ = Kind::Exhaustive;
  d.n_ = n;
  return d;
}

Domain Domain::explicitSet(std::vector<PreferenceProfile> profiles) {
  if (profiles.empty()) throw InputError("explicit domain must not be empty");
  Domain d;
  d.kind_ = Kind::Explicit;
  d.n_ = profiles.front().size();
  for (const auto& p : profiles) d.explicitKeys_.insert(p.key());
  d.explicit_ = std::move(profiles);
  return d;
}

Domain Domain::sampled(int n, long count, std::uint64_t seed) {
  Domain d;
  d.kind_ = Kind::Sampled;
  d.n_ = n;
  d.count_ = count;
  d.seed_ = seed;
  return d;
}

std::string Domain::describe() const {
  switch (kind_) {
    case Kind::Exhaustive:
      return "exhaustive(n=" + std::to_string(n_) + ")";
    case Kind::Explicit:
      return "explicit(" + std::to_string(explicit_.size()) + " profiles)";
    case Kind::Sampled:
      return "sampled(count=" + std::to_string(count_) + ", seed=" + std::to_string(seed_) +
             ", n=" + std::to_string(n_) + ")";
  }
  return "";
}

namespace {

PreferenceProfile random_profile(int n, std::mt19937_64& rng) {
  std::vector<PreferenceOrder> orders;
  for (int i = 0; i < n; ++i) {
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = n - 1; k > 0; --k) {
      const int r = static_cast<int>(rng() % (static_cast<std::uint64_t>(k) + 1));
      std::swap(perm[static_cast<size_t>(k)], perm[static_cast<size_t>(r)]);
    }
    orders.emplace_back(std::move(perm));
  }
  return PreferenceProfile(default_agent_names(n), default_object_names(n), std::move(orders));
}

}  // namespace

std::vector<PreferenceProfile> Domain::profiles() const {
  switch (kind_) {
    case Kind::Exhaustive:
      return all_profiles(n_);
    case Kind::Explicit:
      return explicit_;
    case Kind::Sampled: {
      std::mt19937_64 rng(seed_);
      std::vector<PreferenceProfile> out;
      out.reserve(static_cast<size_t>(count_));
      for (long k = 0; k < count_; ++k) out.push_back(random_profile(n_, rng));
      return out;
    }
  }
  return {};
}

std::vector<Transition> Domain::transitions() const {
  std::vector<Transition> out;
  if (kind_ == Kind::Sampled) {
    std::mt19937_64 rng(seed_);
    out.reserve(static_cast<size_t>(count_));
    for (long k = 0; k < count_; ++k) {
      PreferenceProfile p = random_profile(n_, rng);
      const int agent = static_cast<int>(rng() % static_cast<std::uint64_t>(n_));
      const int rank = static_cast<int>(rng() % static_cast<std::uint64_t>(n_ - 1));
      const auto& order = p.order(agent);
      Transition t;
      t.swapped = {order.at(rank), order.at(rank + 1)};
      t.misreport = p.withOrder(agent, order.withAdjacentSwap(rank));
      t.profile = std::move(p);
      t.agent = agent;
      out.push_back(std::move(t));
    }
    return out;
  }
  for (const auto& p : profiles()) {
    for (int agent = 0; agent < p.size(); ++agent) {
      for (int rank = 0; rank + 1 < p.size(); ++rank) {
        const auto& order = p.order(agent);
        PreferenceProfile q = p.withOrder(agent, order.withAdjacentSwap(rank));
        // Explicit domains restrict to transitions with both endpoints inside.
        if (kind_ == Kind::Explicit && !containsProfile(q)) continue;
        Transition t;
        t.profile = p;
        t.agent = agent;
        t.swapped = {order.at(rank), order.at(rank + 1)};
        t.misreport = std::move(q);
        out.push_back(std::move(t));
      }
    }
  }
  return out;
}

bool Domain::containsProfile(const PreferenceProfile& p) const {
  if (kind_ != Kind::Explicit) return true;
  return explicitKeys_.count(p.key()) > 0;
}

std::string axiom_name(TransitionAxiom a) {
  switch (a) {
    case TransitionAxiom::LocalStrategyproofness:
      return "local-sp";
    case TransitionAxiom::SwapMonotonicity:
      return "swap-monotonicity";
    case TransitionAxiom::UpperInvariance:
      return "upper-invariance";
    case TransitionAxiom::LowerInvariance:
      return "lower-invariance";
    case TransitionAxiom::NonBossiness:
      return "non-bossiness";
  }
  return "?";
}

bool clause_local_sp(const RatRowVector& truth, const RatRowVector& misreport,
                     const PreferenceOrder& truthOrder) {
  return fosd_compare(truth, misreport, truthOrder).weaklyDominates();
}

bool clause_swap_monotonicity(const RatRowVector& truth, const RatRowVector& misreport,
                              int j, int jp) {
  if (truth == misreport) return true;
  return truth(j) > misreport(j) && truth(jp) < misreport(jp);
}

bool clause_upper_invariance(const RatRowVector& truth, const RatRowVector& misreport,
                             const PreferenceOrder& truthOrder, int j) {
  for (int u : contour_sets(truthOrder, j).upper)
    if (truth(u) != misreport(u)) return false;
  return true;
}

bool clause_lower_invariance(const RatRowVector& truth, const RatRowVector& misreport,
                             const PreferenceOrder& truthOrder, int jp) {
  for (int l : contour_sets(truthOrder, jp).lower)
    if (truth(l) != misreport(l)) return false;
  return true;
}

namespace {

// Evaluation cache shared by one sweep; mechanisms are pure, so same key
// means same matrix.
class EvalCache {
 public:
  explicit EvalCache(const Mechanism& mech) : mech_(mech) {}
  const Assignment& at(const PreferenceProfile& p) {
    auto key = p.key();
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(std::move(key), mech_.evaluate(p)).first->second;
  }

 private:
  const Mechanism& mech_;
  std::map<std::string, Assignment> cache_;
};

struct SweepPartial {
  long checked = 0;
  long violations = 0;
  std::vector<Counterexample> examples;
};

void note_violation(SweepPartial& part, const CheckOptions& options, Counterexample ce) {
  ++part.violations;
  if (static_cast<int>(part.examples.size()) < options.exampleCap)
    part.examples.push_back(std::move(ce));
}

AxiomVerdict finish(const std::string& axiom, const Domain& domain, SweepPartial part,
                    const CheckOptions& options) {
  AxiomVerdict v;
  v.axiom = axiom;
  v.domain = domain.describe();
  v.checked = part.checked;
  v.totalViolations = part.violations;
  v.holds = part.violations == 0;
  v.counterexamples = std::move(part.examples);
  if (static_cast<int>(v.counterexamples.size()) > options.exampleCap)
    v.counterexamples.resize(static_cast<size_t>(options.exampleCap));
  return v;
}

std::string cell(const PreferenceProfile& p, int agent, int object) {
  return "(" + p.agentName(agent) + "," + p.objectName(object) + ")";
}

}  // namespace

std::map<TransitionAxiom, AxiomVerdict> check_transition_axioms(
    const Mechanism& mech, const Domain& domain, const std::set<TransitionAxiom>& axioms,
    const CheckOptions& options) {
  std::vector<Transition> transitions = domain.transitions();

  // Global mode re-quantifies local-SP and non-bossiness over every
  // misreport, not just adjacent ones.
  std::vector<Transition> globalPairs;
  if (options.globalMode &&
      (axioms.count(TransitionAxiom::LocalStrategyproofness) ||
       axioms.count(TransitionAxiom::NonBossiness))) {
    auto orders = all_orders(domain.n());
    for (const auto& p : domain.profiles()) {
      for (int agent = 0; agent < p.size(); ++agent) {
        for (const auto& alt : orders) {
          if (alt == p.order(agent)) continue;
          PreferenceProfile q = p.withOrder(agent, alt);
          if (!domain.containsProfile(q)) continue;
          Transition t;
          t.profile = p;
          t.agent = agent;
          t.misreport = std::move(q);
          globalPairs.push_back(std::move(t));
        }
      }
    }
  }

  std::map<TransitionAxiom, SweepPartial> partials;
  for (auto a : axioms) partials[a] = SweepPartial{};

  // Shared partial used inside one parallel body, then split by axiom.
  struct PerAxiomPartials {
    std::map<TransitionAxiom, SweepPartial> by;
  };

  auto runAdjacent = [&](const std::set<TransitionAxiom>& which) {
    std::vector<PerAxiomPartials> chunks;
    int threads = std::max(1, options.threads);
    const long total = static_cast<long>(transitions.size());
    const long chunk = threads > 1 ? (total + threads - 1) / threads : total;
    chunks.resize(threads > 1 ? static_cast<size_t>(threads) : 1);
    auto work = [&](int t) {
      EvalCache cache(mech);
      auto& mine = chunks[static_cast<size_t>(t)];
      for (auto a : which) mine.by[a] = SweepPartial{};
      const long lo = threads > 1 ? t * chunk : 0;
      const long hi = threads > 1 ? std::min(total, lo + chunk) : total;
      for (long idx = lo; idx < hi; ++idx) {
        const Transition& tr = transitions[static_cast<size_t>(idx)];
        const Assignment& atTruth = cache.at(tr.profile);
        const Assignment& atMis = cache.at(tr.misreport);
        RatRowVector truth = atTruth.row(tr.agent);
        RatRowVector mis = atMis.row(tr.agent);
        const auto& order = tr.profile.order(tr.agent);
        const auto [j, jp] = tr.swapped;
        for (auto a : which) {
          auto& part = mine.by[a];
          ++part.checked;
          bool ok = true;
          std::string clause;
          switch (a) {
            case TransitionAxiom::LocalStrategyproofness:
              ok = clause_local_sp(truth, mis, order);
              if (!ok)
                clause = "misreport row is not first order-stochastically dominated at " +
                         cell(tr.profile, tr.agent, j);
              break;
            case TransitionAxiom::SwapMonotonicity:
              ok = clause_swap_monotonicity(truth, mis, j, jp);
              if (!ok)
                clause = "row changed without strictly shifting mass from " +
                         tr.profile.objectName(jp) + " to " + tr.profile.objectName(j);
              break;
            case TransitionAxiom::UpperInvariance:
              ok = clause_upper_invariance(truth, mis, order, j);
              if (!ok)
                clause = "upper contour entries of " + tr.profile.objectName(j) + " changed";
              break;
            case TransitionAxiom::LowerInvariance:
              ok = clause_lower_invariance(truth, mis, order, jp);
              if (!ok)
                clause = "lower contour entries of " + tr.profile.objectName(jp) + " changed";
              break;
            case TransitionAxiom::NonBossiness:
              ok = !(truth == mis) || atTruth == atMis;
              if (!ok) clause = "row unchanged but another agent's row moved";
              break;
          }
          if (!ok) {
            Counterexample ce;
            ce.profile = tr.profile;
            ce.related = tr.misreport;
            ce.agent = tr.agent;
            ce.pair = tr.swapped;
            ce.clause = std::move(clause);
            note_violation(part, options, std::move(ce));
          }
        }
      }
    };
    if (threads > 1 && total >= 2 * threads) {
      std::vector<std::thread> workers;
      for (int t = 0; t < threads; ++t) workers.emplace_back(work, t);
      for (auto& w : workers) w.join();
    } else {
      work(0);
    }
    for (auto& c : chunks)
      for (auto& [a, p] : c.by) {
        partials[a].checked += p.checked;
        partials[a].violations += p.violations;
        partials[a].examples.insert(partials[a].examples.end(), p.examples.begin(),
                                    p.examples.end());
      }
  };

  std::set<TransitionAxiom> adjacentAxioms = axioms;
  if (options.globalMode) {
    adjacentAxioms.erase(TransitionAxiom::LocalStrategyproofness);
    adjacentAxioms.erase(TransitionAxiom::NonBossiness);
  }
  if (!adjacentAxioms.empty()) runAdjacent(adjacentAxioms);

  if (options.globalMode) {
    EvalCache cache(mech);
    for (auto a : {TransitionAxiom::LocalStrategyproofness, TransitionAxiom::NonBossiness}) {
      if (!axioms.count(a)) continue;
      auto& part = partials[a];
      for (const auto& tr : globalPairs) {
        ++part.checked;
        const Assignment& atTruth = cache.at(tr.profile);
        const Assignment& atMis = cache.at(tr.misreport);
        bool ok = true;
        std::string clause;
        if (a == TransitionAxiom::LocalStrategyproofness) {
          ok = clause_local_sp(atTruth.row(tr.agent), atMis.row(tr.agent),
                               tr.profile.order(tr.agent));
          if (!ok) clause = "global misreport not dominated";
        } else {
          ok = !(atTruth.row(tr.agent) == atMis.row(tr.agent)) || atTruth == atMis;
          if (!ok) clause = "row unchanged under global misreport but matrix moved";
        }
        if (!ok) {
          Counterexample ce;
          ce.profile = tr.profile;
          ce.related = tr.misreport;
          ce.agent = tr.agent;
          ce.clause = std::move(clause);
          note_violation(part, options, std::move(ce));
        }
      }
    }
  }

  std::map<TransitionAxiom, AxiomVerdict> out;
  for (auto a : axioms) out[a] = finish(axiom_name(a), domain, std::move(partials[a]), options);
  return out;
}

AxiomVerdict check_symmetry(const Mechanism& mech, const Domain& domain,
                            const CheckOptions& options) {
  auto profiles = domain.profiles();
  EvalCache cache(mech);
  SweepPartial part;
  for (const auto& p : profiles) {
    const Assignment& a = cache.at(p);
    for (int i = 0; i < p.size(); ++i)
      for (int k = i + 1; k < p.size(); ++k) {
        if (!(p.order(i) == p.order(k))) continue;
        ++part.checked;
        if (!(a.row(i) == a.row(k))) {
          Counterexample ce;
          ce.profile = p;
          ce.agent = i;
          ce.pair = {i, k};
          ce.clause = "equal orders but rows differ for agents " + p.agentName(i) + "," +
                      p.agentName(k);
          note_violation(part, options, std::move(ce));
        }
      }
  }
  return finish("symmetry", domain, std::move(part), options);
}

AxiomVerdict check_anonymity(const Mechanism& mech, const Domain& domain,
                             const CheckOptions& options) {
  auto profiles = domain.profiles();
  EvalCache cache(mech);
  SweepPartial part;
  for (const auto& p : profiles) {
    const Assignment& a = cache.at(p);
    for (int i = 0; i < p.size(); ++i)
      for (int k = i + 1; k < p.size(); ++k) {
        PreferenceProfile q = swap_agents(p, i, k);
        if (!domain.containsProfile(q))
          throw DomainError("pair-swapped profile falls outside the checked domain");
        const Assignment& b = cache.at(q);
        ++part.checked;
        if (!(a.row(i) == b.row(k)) || !(a.row(k) == b.row(i))) {
          Counterexample ce;
          ce.profile = p;
          ce.related = q;
          ce.pair = {i, k};
          ce.clause = "rows did not travel with agents " + p.agentName(i) + "," + p.agentName(k);
          note_violation(part, options, std::move(ce));
        }
      }
  }
  return finish("anonymity", domain, std::move(part), options);
}

AxiomVerdict check_neutrality(const Mechanism& mech, const Domain& domain,
                              const CheckOptions& options) {
  auto profiles = domain.profiles();
  EvalCache cache(mech);
  SweepPartial part;
  for (const auto& p : profiles) {
    const Assignment& a = cache.at(p);
    for (int j = 0; j < p.size(); ++j)
      for (int jp = j + 1; jp < p.size(); ++jp) {
        PreferenceProfile q = relabel_objects(p, j, jp);
        if (!domain.containsProfile(q))
          throw DomainError("relabeled profile falls outside the checked domain");
        const Assignment& b = cache.at(q);
        ++part.checked;
        bool ok = true;
        for (int i = 0; i < p.size() && ok; ++i)
          ok = a.at(i, j) == b.at(i, jp) && a.at(i, jp) == b.at(i, j);
        if (!ok) {
          Counterexample ce;
          ce.profile = p;
          ce.related = q;
          ce.pair = {j, jp};
          ce.clause = "columns did not travel with objects " + p.objectName(j) + "," +
                      p.objectName(jp);
          note_violation(part, options, std::move(ce));
        }
      }
  }
  return finish("neutrality", domain, std::move(part), options);
}

AxiomVerdict check_ordinal_efficiency(const Mechanism& mech, const Domain& domain,
                                      const CheckOptions& options) {
  auto profiles = domain.profiles();
  EvalCache cache(mech);
  SweepPartial part;
  for (const auto& p : profiles) {
    ++part.checked;
    auto cert = is_ordinally_efficient(cache.at(p), p);
    if (!cert.efficient) {
      Counterexample ce;
      ce.profile = p;
      std::string cyc;
      for (int obj : cert.cycle) cyc += p.objectName(obj) + ">";
      ce.clause = "trading cycle " + cyc + "...";
      note_violation(part, options, std::move(ce));
    }
  }
  return finish("ordinal-efficiency", domain, std::move(part), options);
}

EfficiencyCertificate is_ordinally_efficient(const Assignment& x,
                                             const PreferenceProfile& profile) {
  const int n = profile.size();
  // edge j -> j' when some agent strictly prefers j to j' yet holds j'.
  std::vector<std::vector<int>> witness(static_cast<size_t>(n),
                                        std::vector<int>(static_cast<size_t>(n), -1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int jp = 0; jp < n; ++jp) {
        if (j == jp || witness[static_cast<size_t>(j)][static_cast<size_t>(jp)] >= 0) continue;
        if (profile.order(i).prefers(j, jp) && x.at(i, jp).sign() > 0)
          witness[static_cast<size_t>(j)][static_cast<size_t>(jp)] = i;
      }

  // Kahn's algorithm; full elimination means the relation is acyclic.
  std::vector<int> indeg(static_cast<size_t>(n), 0);
  for (int j = 0; j < n; ++j)
    for (int jp = 0; jp < n; ++jp)
      if (witness[static_cast<size_t>(j)][static_cast<size_t>(jp)] >= 0)
        ++indeg[static_cast<size_t>(jp)];
  std::vector<int> topo;
  std::vector<bool> removed(static_cast<size_t>(n), false);
  for (;;) {
    int pick = -1;
    for (int j = 0; j < n; ++j)
      if (!removed[static_cast<size_t>(j)] && indeg[static_cast<size_t>(j)] == 0) {
        pick = j;
        break;
      }
    if (pick < 0) break;
    removed[static_cast<size_t>(pick)] = true;
    topo.push_back(pick);
    for (int jp = 0; jp < n; ++jp)
      if (!removed[static_cast<size_t>(jp)] &&
          witness[static_cast<size_t>(pick)][static_cast<size_t>(jp)] >= 0)
        --indeg[static_cast<size_t>(jp)];
  }

  EfficiencyCertificate cert;
  if (static_cast<int>(topo.size()) == n) {
    cert.efficient = true;
    cert.topologicalOrder = std::move(topo);
    return cert;
  }

  // Extract a simple cycle among the residual vertices.
  std::vector<int> state(static_cast<size_t>(n), 0);  // 0 unseen, 1 on stack, 2 done
  std::vector<int> parent(static_cast<size_t>(n), -1);
  std::vector<int> cycle;
  std::function<bool(int)> dfs = [&](int v) -> bool {
    state[static_cast<size_t>(v)] = 1;
    for (int w = 0; w < n; ++w) {
      if (removed[static_cast<size_t>(w)] ||
          witness[static_cast<size_t>(v)][static_cast<size_t>(w)] < 0)
        continue;
      if (state[static_cast<size_t>(w)] == 1) {
        // Found a back edge; unwind v..w.
        cycle.push_back(w);
        for (int u = v; u != w; u = parent[static_cast<size_t>(u)]) cycle.push_back(u);
        std::reverse(cycle.begin(), cycle.end());
        return true;
      }
      if (state[static_cast<size_t>(w)] == 0) {
        parent[static_cast<size_t>(w)] = v;
        if (dfs(w)) return true;
      }
    }
    state[static_cast<size_t>(v)] = 2;
    return false;
  };
  for (int v = 0; v < n && cycle.empty(); ++v)
    if (!removed[static_cast<size_t>(v)] && state[static_cast<size_t>(v)] == 0) dfs(v);
  if (cycle.empty()) throw Error("internal: cyclic relation without a recoverable cycle");

  cert.efficient = false;
  cert.cycle = cycle;
  const size_t len = cycle.size();
  // Trade half the minimum positive entry around the cycle.
  Rational eps(0);
  bool firstEdge = true;
  for (size_t t = 0; t < len; ++t) {
    int j = cycle[t];
    int jp = cycle[(t + 1) % len];
    int agent = witness[static_cast<size_t>(j)][static_cast<size_t>(jp)];
    cert.cycleAgents.push_back(agent);
    const Rational& held = x.at(agent, jp);
    if (firstEdge || held < eps) {
      eps = held;
      firstEdge = false;
    }
  }
  eps /= Rational(2);
  RatMatrix y = x.matrix();
  for (size_t t = 0; t < len; ++t) {
    int j = cycle[t];
    int jp = cycle[(t + 1) % len];
    int agent = cert.cycleAgents[t];
    y(agent, jp) -= eps;
    y(agent, j) += eps;
  }
  Assignment dominator(std::move(y));
  auto verdict = ordinal_dominance(dominator, x, profile);
  if (verdict.relation != Dominance::StrictlyDominates)
    throw Error("internal: cycle trade failed to produce a strict dominator");
  cert.dominator = std::move(dominator);
  return cert;
}

std::optional<Assignment> find_strict_dominator(const Assignment& x,
                                                const PreferenceProfile& profile) {
  const int n = profile.size();
  auto var = [n](int i, int j) { return i * n + j; };
  LinearSystem sys(n * n);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, Rational>> row;
    for (int j = 0; j < n; ++j) row.emplace_back(var(i, j), Rational(1));
    sys.addTerms(row, LinearSystem::Rel::Eq, Rational(1));
  }
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<int, Rational>> col;
    for (int i = 0; i < n; ++i) col.emplace_back(var(i, j), Rational(1));
    sys.addTerms(col, LinearSystem::Rel::Eq, Rational(1));
  }
  // Weak dominance: every closed preference prefix of y at least matches x.
  for (int i = 0; i < n; ++i) {
    Rational prefix(0);
    std::vector<std::pair<int, Rational>> terms;
    for (int r = 0; r + 1 < n; ++r) {
      const int obj = profile.order(i).at(r);
      prefix += x.at(i, obj);
      terms.emplace_back(var(i, obj), Rational(1));
      sys.addTerms(terms, LinearSystem::Rel::Ge, prefix);
    }
  }
  // Total prefix slack as the objective; positive optimum <=> strict dominator.
  std::vector<std::pair<int, Rational>> objective;
  Rational offset(0);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r) {
      const int obj = profile.order(i).at(r);
      const Rational weight(n - 1 - r);
      if (weight.isZero()) continue;
      objective.emplace_back(var(i, obj), weight);
      offset += weight * x.at(i, obj);
    }
  sys.setObjectiveTerms(objective);
  LpResult res = lp_solve(sys);
  if (res.status != LpResult::Status::Optimal)
    throw Error("internal: dominator LP must be feasible and bounded");
  if (res.value <= offset) return std::nullopt;
  RatMatrix y(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y(i, j) = res.point(var(i, j));
  Assignment out(std::move(y));
  if (ordinal_dominance(out, x, profile).relation != Dominance::StrictlyDominates)
    throw Error("internal: dominator LP optimum is not a strict dominator");
  return out;
}

std::vector<std::vector<int>> pareto_efficient_permutations(const PreferenceProfile& profile) {
  const int n = profile.size();
  if (n > 5) throw CapacityError("ex-post analysis enumerates n! assignments; n <= 5 required");
  std::vector<std::vector<int>> perms;
  std::vector<int> base(static_cast<size_t>(n));
  std::iota(base.begin(), base.end(), 0);
  do {
    perms.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));

  auto dominates = [&](const std::vector<int>& a, const std::vector<int>& b) {
    bool strict = false;
    for (int i = 0; i < n; ++i) {
      const int ra = profile.order(i).rankOf(a[static_cast<size_t>(i)]);
      const int rb = profile.order(i).rankOf(b[static_cast<size_t>(i)]);
      if (ra > rb) return false;
      if (ra < rb) strict = true;
    }
    return strict;
  };

  std::vector<std::vector<int>> efficient;
  for (const auto& cand : perms) {
    bool dominated = false;
    for (const auto& other : perms) {
      if (dominates(other, cand)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) efficient.push_back(cand);
  }
  return efficient;
}

ExPostCertificate is_expost_efficient(const Assignment& x, const PreferenceProfile& profile) {
  const int n = profile.size();
  auto efficient = pareto_efficient_permutations(profile);
  const int k = static_cast<int>(efficient.size());
  LinearSystem sys(k);
  {
    std::vector<std::pair<int, Rational>> sum;
    for (int t = 0; t < k; ++t) sum.emplace_back(t, Rational(1));
    sys.addTerms(sum, LinearSystem::Rel::Eq, Rational(1));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<std::pair<int, Rational>> row;
      for (int t = 0; t < k; ++t)
        if (efficient[static_cast<size_t>(t)][static_cast<size_t>(i)] == j)
          row.emplace_back(t, Rational(1));
      sys.addTerms(row, LinearSystem::Rel::Eq, x.at(i, j));
    }
  auto point = lp_feasible_point(sys);
  ExPostCertificate cert;
  cert.efficient = point.has_value();
  if (point) {
    for (int t = 0; t < k; ++t)
      if ((*point)(t).sign() > 0)
        cert.decomposition.emplace_back((*point)(t), efficient[static_cast<size_t>(t)]);
  }
  return cert;
}

}  // namespace axiomlab
