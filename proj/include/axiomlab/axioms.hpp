#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "axiomlab/assignment.hpp"
#include "axiomlab/mechanisms.hpp"

namespace axiomlab {

/// One adjacent misreport: `profile` and `misreport` differ only in `agent`'s
/// order, by the transposition of the consecutive pair (j, j') with j ranked
/// above j' in the truthful order.
struct Transition {
  PreferenceProfile profile;
  int agent = -1;
  std::pair<int, int> swapped{-1, -1};
  PreferenceProfile misreport;
};

/// Domains a checker sweeps: every profile at size n, an explicit profile
/// set, or a seeded sample of fixed size.
class Domain {
 public:
  enum class Kind { Exhaustive, Explicit, Sampled };

  static Domain exhaustive(int n);
  static Domain explicitSet(std::vector<PreferenceProfile> profiles);
  static Domain sampled(int n, long count, std::uint64_t seed);

  Kind kind() const { return kind_; }
  int n() const { return n_; }
  long sampleCount() const { return count_; }
  std::uint64_t seed() const { return seed_; }
  std::string describe() const;

  /// Profiles swept for per-profile axioms (for Sampled: `count` seeded draws).
  std::vector<PreferenceProfile> profiles() const;
  /// Transitions swept for per-transition axioms.
  std::vector<Transition> transitions() const;
  /// Membership test used to restrict explicit domains.
  bool containsProfile(const PreferenceProfile& p) const;

 private:
  Kind kind_ = Kind::Exhaustive;
  int n_ = 0;
  long count_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<PreferenceProfile> explicit_;
  std::set<std::string> explicitKeys_;
};

enum class TransitionAxiom {
  LocalStrategyproofness,
  SwapMonotonicity,
  UpperInvariance,
  LowerInvariance,
  NonBossiness,
};

std::string axiom_name(TransitionAxiom a);

struct Counterexample {
  PreferenceProfile profile;
  std::optional<PreferenceProfile> related;  // misreport / swapped / relabeled profile
  int agent = -1;
  std::pair<int, int> pair{-1, -1};
  std::string clause;
};

struct AxiomVerdict {
  std::string axiom;
  std::string domain;
  bool holds = true;
  long checked = 0;  // transitions or profile instances examined
  long totalViolations = 0;
  std::vector<Counterexample> counterexamples;  // stored subset, capped
};

struct CheckOptions {
  bool globalMode = false;  // quantify over all misreports instead of neighborhoods
  int threads = 1;
  int exampleCap = 16;
};

/// Per-transition clause evaluations shared by the checkers and the
/// decomposition-equivalence tests. `truth`/`misreport` are the swapping
/// agent's rows at the two endpoint profiles.
bool clause_local_sp(const RatRowVector& truth, const RatRowVector& misreport,
                     const PreferenceOrder& truthOrder);
bool clause_swap_monotonicity(const RatRowVector& truth, const RatRowVector& misreport,
                              int j, int jp);
bool clause_upper_invariance(const RatRowVector& truth, const RatRowVector& misreport,
                             const PreferenceOrder& truthOrder, int j);
bool clause_lower_invariance(const RatRowVector& truth, const RatRowVector& misreport,
                             const PreferenceOrder& truthOrder, int jp);

std::map<TransitionAxiom, AxiomVerdict> check_transition_axioms(
    const Mechanism& mech, const Domain& domain, const std::set<TransitionAxiom>& axioms,
    const CheckOptions& options = {});

AxiomVerdict check_symmetry(const Mechanism& mech, const Domain& domain,
                            const CheckOptions& options = {});
AxiomVerdict check_anonymity(const Mechanism& mech, const Domain& domain,
                             const CheckOptions& options = {});
AxiomVerdict check_neutrality(const Mechanism& mech, const Domain& domain,
                              const CheckOptions& options = {});
/// Per-profile ordinal efficiency of the mechanism's output.
AxiomVerdict check_ordinal_efficiency(const Mechanism& mech, const Domain& domain,
                                      const CheckOptions& options = {});

/// Outcome of the trading-relation efficiency test. Efficient assignments
/// carry an acyclicity witness (a topological order of objects); dominated
/// ones carry the violating cycle and a verified strictly-dominating matrix.
struct EfficiencyCertificate {
  bool efficient = false;
  std::vector<int> topologicalOrder;
  std::vector<int> cycle;        // objects, in trading order
  std::vector<int> cycleAgents;  // agent witnessing each cycle edge
  std::optional<Assignment> dominator;
};

/// Decides ordinal efficiency by acyclicity of the trading relation
/// (j relates to j' when some agent strictly prefers j to j' yet holds j'
/// with positive probability). The relation depends only on the support.
EfficiencyCertificate is_ordinally_efficient(const Assignment& x,
                                             const PreferenceProfile& profile);

/// Independent definitional oracle: exact LP maximizing total prefix-sum
/// slack subject to bistochasticity and all weak-dominance inequalities.
/// Returns a strict dominator iff one exists.
std::optional<Assignment> find_strict_dominator(const Assignment& x,
                                                const PreferenceProfile& profile);

struct ExPostCertificate {
  bool efficient = false;
  /// Convex decomposition over Pareto-undominated permutations, when feasible.
  std::vector<std::pair<Rational, std::vector<int>>> decomposition;
};

/// Ex-post efficiency: x must be a convex combination of Pareto-undominated
/// deterministic assignments. Enumerates all n! permutations (n <= 5) and
/// decides membership by exact LP.
ExPostCertificate is_expost_efficient(const Assignment& x, const PreferenceProfile& profile);

/// All Pareto-undominated permutations at the profile (agent i gets perm[i]).
std::vector<std::vector<int>> pareto_efficient_permutations(const PreferenceProfile& profile);

}  // namespace axiomlab
