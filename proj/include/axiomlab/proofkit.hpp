#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "axiomlab/assignment.hpp"
#include "axiomlab/preferences.hpp"
#include "axiomlab/rational.hpp"

namespace axiomlab::proofkit {

/// Axiom families a proof may invoke. Scripts declare theirs; steps are only
/// valid when the family that licenses them is declared.
enum class AxiomFamily {
  SwapMonotonicity,
  UpperInvariance,
  LowerInvariance,
  OrdinalEfficiency,
  Symmetry,
  Anonymity,
  Neutrality,
  NonBossiness,
};

std::string family_name(AxiomFamily f);
std::optional<AxiomFamily> family_from_name(const std::string& name);

/// State of one matrix entry during replay: a closed interval [lo, hi]
/// within [0,1]. A known value k is the interval [k, k]; no information is
/// the full interval [0, 1].
struct EntryValue {
  Rational lo{0};
  Rational hi{1};

  static EntryValue known(Rational v) { return {v, v}; }
  static EntryValue interval(Rational lo, Rational hi) { return {std::move(lo), std::move(hi)}; }

  bool isKnown() const { return lo == hi; }
  bool isUnconstrained() const { return lo.isZero() && hi == Rational(1); }
  std::string str() const;

  friend bool operator==(const EntryValue&, const EntryValue&) = default;
};

/// One inference of the proof. Kinds map one-to-one onto the prose moves of
/// the source derivations; the builtin scripts are pure data, so every step
/// can be diffed against the argument it encodes.
enum class StepKind {
  UniformBySymmetry,
  UpperInvarianceLink,
  LowerInvarianceLink,
  EfficiencyZero,
  SymmetryEqualize,
  BistochasticComplete,
  SwapNullPropagation,
  AnonymityRelabel,
  NeutralityRelabel,
  IntervalTransfer,
  ContradictionCheck,
};

std::string step_kind_name(StepKind k);

struct InferenceStep {
  StepKind kind;
  std::string source;  // node name; empty for single-node steps
  std::string target;
  int agent = -1;
  std::pair<int, int> swapped{-1, -1};  // (j, j') with j above j' in the source order
  std::vector<std::pair<int, int>> entries;  // zero target / transferred entries
  std::vector<int> agentPerm;   // AnonymityRelabel
  std::vector<int> objectPerm;  // NeutralityRelabel
  bool wholeMatrix = false;     // SwapNullPropagation: propagate via non-bossiness
  std::string note;
};

/// Expected value of an entry: c + k*x for the node's free parameter x, or
/// nothing at all (auxiliary nodes leave most entries unchecked).
struct ExpectedEntry {
  bool unknown = true;
  Rational c{0};
  Rational k{0};

  static ExpectedEntry value(Rational v) { return {false, std::move(v), Rational(0)}; }
  static ExpectedEntry affine(Rational c, Rational k) { return {false, std::move(c), std::move(k)}; }
};

struct ScriptNode {
  std::string name;
  PreferenceProfile profile;
  std::vector<std::vector<ExpectedEntry>> expected;        // n x n; empty = all unknown
  std::optional<std::pair<Rational, Rational>> paramRange; // range of the free parameter x
  bool auxiliary = false;
  std::string note;
};

struct ExpectedContradiction {
  enum class Kind { EmptyEntry, LineSum };
  Kind kind = Kind::EmptyEntry;
  std::string node;
  int agent = -1;
  int object = -1;  // EmptyEntry only
};

struct ProofScript {
  int theorem = 0;
  std::vector<AxiomFamily> axioms;
  std::vector<ScriptNode> nodes;
  std::vector<InferenceStep> steps;
  ExpectedContradiction expectedContradiction;

  int nodeIndex(const std::string& name) const;
  bool hasAxiom(AxiomFamily f) const;
};

/// The two builtin scripts transcribe the impossibility derivations for four
/// agents: theorem 1 (upper invariance, lower invariance, ordinal efficiency,
/// symmetry) and theorem 2 (swap monotonicity, lower invariance, ordinal
/// efficiency, anonymity, neutrality, non-bossiness).
ProofScript builtin_script(int theorem);

/// Appends k fresh agents, each topping a distinct fresh object that every
/// old agent ranks last. New agents receive their top object with certainty
/// (certified zeros), and the original derivation replays unchanged.
ProofScript pad_script(const ProofScript& script, int extraAgents);

nlohmann::json script_to_json(const ProofScript& script);
ProofScript script_from_json(const nlohmann::json& j);

struct Contradiction {
  ExpectedContradiction::Kind kind = ExpectedContradiction::Kind::EmptyEntry;
  std::string node;
  int agent = -1;
  int object = -1;
  std::string description;
};

/// Replay state: per-node entry grids linked into global equality classes
/// (a union-find across all (node, agent, object) slots), with one interval
/// per class. Bistochastic propagation runs to a fixpoint after every
/// mutation; the contradiction flag is raised the moment an interval empties
/// or a line's sum leaves 1.
class ProofState {
 public:
  explicit ProofState(const ProofScript& script);

  const ProofScript& script() const { return *script_; }
  int n() const { return n_; }

  EntryValue entry(int node, int agent, int object) const;
  /// Grid snapshot for one node.
  std::vector<std::vector<EntryValue>> grid(int node) const;

  /// Intersects the entry's class with `v`; raises a contradiction when the
  /// intersection is empty. Returns false once contradicted.
  bool restrictEntry(int node, int agent, int object, const EntryValue& v,
                     const std::string& context);
  /// Merges two entries into one class (their intervals intersect).
  bool uniteEntries(int nodeA, int agentA, int objectA, int nodeB, int agentB, int objectB,
                    const std::string& context);

  /// Row/column interval propagation to a fixpoint, columns first. Derived
  /// forced values keep their class provenance via the shared intervals.
  void propagate();

  bool contradicted() const { return contradiction_.has_value(); }
  const std::optional<Contradiction>& contradiction() const { return contradiction_; }
  /// Used by steps that detect the contradiction themselves.
  void raise(Contradiction c);

  /// True when two entries of one node share an equality class.
  bool sameClass(int node, int agentA, int objectA, int agentB, int objectB) const;

 private:
  int find(int slot) const;
  int slot(int node, int agent, int object) const;
  bool forceLine(int node, bool column, int index);
  bool tightenLine(int node, bool column, int index);

  const ProofScript* script_;
  int n_ = 0;
  mutable std::vector<int> parent_;
  std::vector<EntryValue> value_;  // indexed by class root
  std::optional<Contradiction> contradiction_;
};

/// Vertex-level certificate for an EfficiencyZero step: the polytope of
/// matrices consistent with the node's current constraints is enumerated and
/// every vertex with the entry positive must carry a trading cycle. Support
/// monotonicity lifts the cycle to every feasible point, so the mechanism's
/// (efficient) matrix must put zero there.
struct ZeroCertificate {
  bool certified = false;
  long vertexCount = 0;
  long positiveVertexCount = 0;
  std::string failure;  // set when some positive vertex is efficient
};

ZeroCertificate certify_efficiency_zero(const ProofState& state, int node, int agent,
                                        int object);

struct StepRecord {
  int index = -1;
  std::string summary;
  bool applied = false;
  std::string failure;
  std::optional<ZeroCertificate> certificate;
};

struct NodeComparison {
  std::string node;
  bool auxiliary = false;
  bool compared = false;
  bool matched = false;
  std::string mismatch;
  std::vector<std::vector<EntryValue>> derived;
};

struct ProofReport {
  bool success = false;
  std::string failure;  // first failure, empty on success
  std::vector<StepRecord> steps;
  std::vector<NodeComparison> nodes;  // in script node order
  std::optional<Contradiction> contradiction;
  bool contradictionMatched = false;
  long long wallMicros = 0;
};

/// Runs every step in script order, compares each node against its expected
/// matrix after the node's last touching step, and requires the script's
/// expected contradiction to fire. Deterministic.
ProofReport replay(const ProofScript& script);

/// Independent re-proof by branch-and-propagate over the script's profile
/// set (paper nodes plus the auxiliary profiles its derivation walks
/// through): hard linear axiom constraints plus support-pattern branching
/// for ordinal efficiency and the swap-monotonicity disjunction.
struct SearchOptions {
  std::optional<AxiomFamily> drop;
  bool addSwapMonotonicity = false;  // corollary run on top of theorem 1's set
  long branchLimit = 1'000'000;
};

struct SearchResult {
  enum class Verdict { Infeasible, Witness, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  long branches = 0;
  std::vector<std::pair<PreferenceProfile, Assignment>> witness;  // per profile
  std::string detail;
};

SearchResult independent_search(int theorem, const SearchOptions& options = {});

/// Checks a full table of per-profile matrices against the search's
/// constraint system (hard equalities, ordinal efficiency, and the
/// disjunctive clauses). Used to validate witnesses, including external ones.
bool satisfies_search_constraints(int theorem, const SearchOptions& options,
                                  const std::vector<std::pair<PreferenceProfile, Assignment>>& table,
                                  std::string* whyNot = nullptr);

/// The deduplicated profile set the search quantifies over.
std::vector<PreferenceProfile> search_profiles(int theorem);

}  // namespace axiomlab::proofkit
