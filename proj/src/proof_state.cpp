#include <algorithm>
#include <numeric>

#include "axiomlab/axioms.hpp"
#include "axiomlab/errors.hpp"
#include "axiomlab/polytope.hpp"
#include "axiomlab/proofkit.hpp"

namespace axiomlab::proofkit {

std::string EntryValue::str() const {
  if (isKnown()) return lo.str();
  return "[" + lo.str() + "," + hi.str() + "]";
}

std::string family_name(AxiomFamily f) {
  switch (f) {
    case AxiomFamily::SwapMonotonicity: return "swap-monotonicity";
    case AxiomFamily::UpperInvariance: return "upper-invariance";
    case AxiomFamily::LowerInvariance: return "lower-invariance";
    case AxiomFamily::OrdinalEfficiency: return "ordinal-efficiency";
    case AxiomFamily::Symmetry: return "symmetry";
    case AxiomFamily::Anonymity: return "anonymity";
    case AxiomFamily::Neutrality: return "neutrality";
    case AxiomFamily::NonBossiness: return "non-bossiness";
  }
  return "?";
}

std::optional<AxiomFamily> family_from_name(const std::string& name) {
  for (auto f : {AxiomFamily::SwapMonotonicity, AxiomFamily::UpperInvariance,
                 AxiomFamily::LowerInvariance, AxiomFamily::OrdinalEfficiency,
                 AxiomFamily::Symmetry, AxiomFamily::Anonymity, AxiomFamily::Neutrality,
                 AxiomFamily::NonBossiness})
    if (family_name(f) == name) return f;
  return std::nullopt;
}

std::string step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::UniformBySymmetry: return "UniformBySymmetry";
    case StepKind::UpperInvarianceLink: return "UpperInvarianceLink";
    case StepKind::LowerInvarianceLink: return "LowerInvarianceLink";
    case StepKind::EfficiencyZero: return "EfficiencyZero";
    case StepKind::SymmetryEqualize: return "SymmetryEqualize";
    case StepKind::BistochasticComplete: return "BistochasticComplete";
    case StepKind::SwapNullPropagation: return "SwapNullPropagation";
    case StepKind::AnonymityRelabel: return "AnonymityRelabel";
    case StepKind::NeutralityRelabel: return "NeutralityRelabel";
    case StepKind::IntervalTransfer: return "IntervalTransfer";
    case StepKind::ContradictionCheck: return "ContradictionCheck";
  }
  return "?";
}

int ProofScript::nodeIndex(const std::string& name) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].name == name) return static_cast<int>(i);
  throw InputError("unknown proof node '" + name + "'");
}

bool ProofScript::hasAxiom(AxiomFamily f) const {
  return std::find(axioms.begin(), axioms.end(), f) != axioms.end();
}

ProofState::ProofState(const ProofScript& script) : script_(&script) {
  if (script.nodes.empty()) throw InputError("proof script has no nodes");
  n_ = script.nodes.front().profile.size();
  for (const auto& node : script.nodes)
    if (node.profile.size() != n_)
      throw InputError("proof nodes must share one market size");
  const int slots = static_cast<int>(script.nodes.size()) * n_ * n_;
  parent_.resize(static_cast<size_t>(slots));
  std::iota(parent_.begin(), parent_.end(), 0);
  value_.assign(static_cast<size_t>(slots), EntryValue{});
}

int ProofState::slot(int node, int agent, int object) const {
  return (node * n_ + agent) * n_ + object;
}

int ProofState::find(int s) const {
  while (parent_[static_cast<size_t>(s)] != s) {
    parent_[static_cast<size_t>(s)] = parent_[static_cast<size_t>(parent_[static_cast<size_t>(s)])];
    s = parent_[static_cast<size_t>(s)];
  }
  return s;
}

EntryValue ProofState::entry(int node, int agent, int object) const {
  return value_[static_cast<size_t>(find(slot(node, agent, object)))];
}

std::vector<std::vector<EntryValue>> ProofState::grid(int node) const {
  std::vector<std::vector<EntryValue>> g(static_cast<size_t>(n_),
                                         std::vector<EntryValue>(static_cast<size_t>(n_)));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) g[static_cast<size_t>(i)][static_cast<size_t>(j)] = entry(node, i, j);
  return g;
}

bool ProofState::sameClass(int node, int agentA, int objectA, int agentB, int objectB) const {
  return find(slot(node, agentA, objectA)) == find(slot(node, agentB, objectB));
}

void ProofState::raise(Contradiction c) {
  if (!contradiction_) contradiction_ = std::move(c);
}

bool ProofState::restrictEntry(int node, int agent, int object, const EntryValue& v,
                               const std::string& context) {
  if (contradiction_) return false;
  const int root = find(slot(node, agent, object));
  EntryValue& cur = value_[static_cast<size_t>(root)];
  Rational lo = max(cur.lo, v.lo);
  Rational hi = min(cur.hi, v.hi);
  if (lo > hi) {
    Contradiction c;
    c.kind = ExpectedContradiction::Kind::EmptyEntry;
    c.node = script_->nodes[static_cast<size_t>(node)].name;
    c.agent = agent;
    c.object = object;
    const auto& p = script_->nodes[static_cast<size_t>(node)].profile;
    c.description = "entry (" + p.agentName(agent) + "," + p.objectName(object) +
                    ") at profile " + c.node + ": derived " + cur.str() +
                    ", required " + v.str() + (context.empty() ? "" : " (" + context + ")");
    raise(std::move(c));
    return false;
  }
  cur.lo = std::move(lo);
  cur.hi = std::move(hi);
  return true;
}

bool ProofState::uniteEntries(int nodeA, int agentA, int objectA, int nodeB, int agentB,
                              int objectB, const std::string& context) {
  if (contradiction_) return false;
  int ra = find(slot(nodeA, agentA, objectA));
  int rb = find(slot(nodeB, agentB, objectB));
  if (ra == rb) return true;
  const EntryValue& a = value_[static_cast<size_t>(ra)];
  const EntryValue& b = value_[static_cast<size_t>(rb)];
  Rational lo = max(a.lo, b.lo);
  Rational hi = min(a.hi, b.hi);
  if (lo > hi) {
    // Report from the side being written into (B is the transfer target).
    Contradiction c;
    c.kind = ExpectedContradiction::Kind::EmptyEntry;
    c.node = script_->nodes[static_cast<size_t>(nodeB)].name;
    c.agent = agentB;
    c.object = objectB;
    const auto& p = script_->nodes[static_cast<size_t>(nodeB)].profile;
    c.description = "entry (" + p.agentName(agentB) + "," + p.objectName(objectB) +
                    ") at profile " + c.node + ": derived " + b.str() +
                    ", transferred bound " + a.str() +
                    (context.empty() ? "" : " (" + context + ")");
    raise(std::move(c));
    return false;
  }
  parent_[static_cast<size_t>(ra)] = rb;
  value_[static_cast<size_t>(rb)] = EntryValue{std::move(lo), std::move(hi)};
  return true;
}

bool ProofState::forceLine(int node, bool column, int index) {
  // Known-part bookkeeping: the sums of known entries may never leave 1, and
  // a line with a single unknown class is completed outright.
  std::vector<int> roots;
  std::vector<int> mult;
  std::vector<std::pair<int, int>> cellOfRoot;
  for (int k = 0; k < n_; ++k) {
    const int agent = column ? k : index;
    const int object = column ? index : k;
    const int r = find(slot(node, agent, object));
    bool seen = false;
    for (size_t t = 0; t < roots.size(); ++t)
      if (roots[t] == r) {
        ++mult[t];
        seen = true;
        break;
      }
    if (!seen) {
      roots.push_back(r);
      mult.push_back(1);
      cellOfRoot.emplace_back(agent, object);
    }
  }
  Rational knownSum(0);
  int unknownAt = -1;
  int unknownCount = 0;
  for (size_t t = 0; t < roots.size(); ++t) {
    const EntryValue& v = value_[static_cast<size_t>(roots[t])];
    if (v.isKnown()) {
      knownSum += Rational(mult[t]) * v.lo;
    } else {
      unknownAt = static_cast<int>(t);
      ++unknownCount;
    }
  }
  const auto& nodeRef = script_->nodes[static_cast<size_t>(node)];
  const Rational one(1);
  const std::string line = column ? "column " + nodeRef.profile.objectName(index)
                                  : "row of agent " + nodeRef.profile.agentName(index);
  if (knownSum > one || (unknownCount == 0 && knownSum != one)) {
    Contradiction c;
    c.kind = ExpectedContradiction::Kind::LineSum;
    c.node = nodeRef.name;
    c.agent = column ? -1 : index;
    c.object = column ? index : -1;
    c.description = knownSum > one
                        ? line + " at profile " + nodeRef.name + ": entries total at least " +
                              knownSum.str() + " > 1"
                        : line + " at profile " + nodeRef.name + ": entries total " +
                              knownSum.str() + " < 1";
    raise(std::move(c));
    return false;
  }
  if (unknownCount != 1) return false;
  const Rational forced = (one - knownSum) / Rational(mult[static_cast<size_t>(unknownAt)]);
  auto [agent, object] = cellOfRoot[static_cast<size_t>(unknownAt)];
  return restrictEntry(node, agent, object, EntryValue::known(forced),
                       "forced by " + line + " of " + nodeRef.name);
}

bool ProofState::tightenLine(int node, bool column, int index) {
  // Group the line's slots by class; the class intervals must satisfy
  // sum over classes of multiplicity * x = 1.
  std::vector<int> roots;
  std::vector<int> mult;
  std::vector<std::pair<int, int>> cellOfRoot;  // representative (agent, object)
  for (int k = 0; k < n_; ++k) {
    const int agent = column ? k : index;
    const int object = column ? index : k;
    const int r = find(slot(node, agent, object));
    bool seen = false;
    for (size_t t = 0; t < roots.size(); ++t)
      if (roots[t] == r) {
        ++mult[t];
        seen = true;
        break;
      }
    if (!seen) {
      roots.push_back(r);
      mult.push_back(1);
      cellOfRoot.emplace_back(agent, object);
    }
  }
  Rational sumLo(0), sumHi(0);
  for (size_t t = 0; t < roots.size(); ++t) {
    sumLo += Rational(mult[t]) * value_[static_cast<size_t>(roots[t])].lo;
    sumHi += Rational(mult[t]) * value_[static_cast<size_t>(roots[t])].hi;
  }
  const auto& nodeRef = script_->nodes[static_cast<size_t>(node)];
  const Rational one(1);
  if (sumLo > one || sumHi < one) {
    Contradiction c;
    c.kind = ExpectedContradiction::Kind::LineSum;
    c.node = nodeRef.name;
    c.agent = column ? -1 : index;
    c.object = column ? index : -1;
    std::string line = column ? "column " + nodeRef.profile.objectName(index)
                              : "row of agent " + nodeRef.profile.agentName(index);
    c.description = sumLo > one
                        ? line + " at profile " + nodeRef.name + ": entries total at least " +
                              sumLo.str() + " > 1"
                        : line + " at profile " + nodeRef.name + ": entries total at most " +
                              sumHi.str() + " < 1";
    raise(std::move(c));
    return false;
  }
  bool changed = false;
  for (size_t t = 0; t < roots.size(); ++t) {
    EntryValue& v = value_[static_cast<size_t>(roots[t])];
    const Rational m(mult[t]);
    Rational othersHi = sumHi - m * v.hi;
    Rational othersLo = sumLo - m * v.lo;
    Rational lo = max(v.lo, (one - othersHi) / m);
    Rational hi = min(v.hi, (one - othersLo) / m);
    lo = max(lo, Rational(0));
    hi = min(hi, one);
    if (lo > hi) {
      auto [agent, object] = cellOfRoot[t];
      Contradiction c;
      c.kind = ExpectedContradiction::Kind::EmptyEntry;
      c.node = nodeRef.name;
      c.agent = agent;
      c.object = object;
      c.description = "entry (" + nodeRef.profile.agentName(agent) + "," +
                      nodeRef.profile.objectName(object) + ") at profile " + nodeRef.name +
                      ": bounds emptied by bistochastic propagation";
      raise(std::move(c));
      return false;
    }
    if (lo != v.lo || hi != v.hi) {
      v.lo = std::move(lo);
      v.hi = std::move(hi);
      changed = true;
      sumLo = Rational(0);
      sumHi = Rational(0);
      for (size_t u = 0; u < roots.size(); ++u) {
        sumLo += Rational(mult[u]) * value_[static_cast<size_t>(roots[u])].lo;
        sumHi += Rational(mult[u]) * value_[static_cast<size_t>(roots[u])].hi;
      }
    }
  }
  return changed;
}

void ProofState::propagate() {
  if (contradiction_) return;
  const int nodes = static_cast<int>(script_->nodes.size());
  for (int pass = 0; pass < 500; ++pass) {
    // Forced completions and known-sum checks run to their own fixpoint
    // before any bound tightening, so a line of known entries that leaves 1
    // is what surfaces as the contradiction.
    for (int inner = 0; inner < 500; ++inner) {
      bool forcedSomething = false;
      for (int node = 0; node < nodes && !contradiction_; ++node) {
        for (int j = 0; j < n_ && !contradiction_; ++j)
          forcedSomething |= forceLine(node, true, j);
        for (int i = 0; i < n_ && !contradiction_; ++i)
          forcedSomething |= forceLine(node, false, i);
      }
      if (!forcedSomething || contradiction_) break;
    }
    if (contradiction_) return;
    bool changed = false;
    for (int node = 0; node < nodes && !contradiction_; ++node) {
      for (int j = 0; j < n_ && !contradiction_; ++j) changed |= tightenLine(node, true, j);
      for (int i = 0; i < n_ && !contradiction_; ++i) changed |= tightenLine(node, false, i);
    }
    if (!changed || contradiction_) return;
  }
  throw Error("internal: interval propagation failed to reach a fixpoint");
}

ZeroCertificate certify_efficiency_zero(const ProofState& state, int node, int agent,
                                        int object) {
  const int n = state.n();
  const auto& profile = state.script().nodes[static_cast<size_t>(node)].profile;
  ZeroCertificate cert;

  auto inspect = [&](const Assignment& vertex) -> bool {
    ++cert.vertexCount;
    if (vertex.at(agent, object).sign() <= 0) return true;
    ++cert.positiveVertexCount;
    auto eff = is_ordinally_efficient(vertex, profile);
    if (eff.efficient) {
      cert.failure = "vertex with (" + profile.agentName(agent) + "," +
                     profile.objectName(object) + ") > 0 is ordinally efficient";
      return false;
    }
    return true;
  };

  // Fast path: when the node pins entries only to 0 or 1 and has no
  // within-node equality classes, the polytope is a face of the Birkhoff
  // polytope and its vertices are exactly the permutation matrices it
  // contains.
  const Rational one(1);
  bool facePath = true;
  for (int i = 0; i < n && facePath; ++i)
    for (int j = 0; j < n && facePath; ++j) {
      EntryValue v = state.entry(node, i, j);
      if (!(v.isUnconstrained() || (v.isKnown() && (v.lo.isZero() || v.lo == one))))
        facePath = false;
      for (int ip = 0; ip <= i && facePath; ++ip)
        for (int jp = 0; jp < n && facePath; ++jp) {
          if (ip == i && jp >= j) break;
          if (state.sameClass(node, i, j, ip, jp)) facePath = false;
        }
    }
  if (facePath) {
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    bool ok = true;
    do {
      bool allowed = true;
      for (int i = 0; i < n && allowed; ++i) {
        for (int j = 0; j < n && allowed; ++j) {
          EntryValue v = state.entry(node, i, j);
          if (!v.isKnown()) continue;
          const bool used = perm[static_cast<size_t>(i)] == j;
          if (v.lo.isZero() ? used : !used) allowed = false;
        }
      }
      if (allowed && !inspect(permutation_assignment(perm))) ok = false;
    } while (ok && std::next_permutation(perm.begin(), perm.end()));
    // No positive vertex means the zero is already forced linearly; the
    // certificate holds vacuously.
    cert.certified = ok;
    return cert;
  }

  // General path: bistochasticity plus the node's class equalities and
  // interval bounds, vertex-enumerated exactly.
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
  // Known values and equality classes only: interval bounds are derived
  // information, and dropping them keeps the polytope a sound relaxation
  // while avoiding slack columns in the basis enumeration.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      EntryValue v = state.entry(node, i, j);
      if (v.isKnown()) sys.addEquality(var(i, j), v.lo);
      // Chain equalities within each class; later cells link to the first.
      for (int ip = 0; ip <= i; ++ip) {
        bool done = false;
        for (int jp = 0; jp < n; ++jp) {
          if (ip == i && jp >= j) break;
          if (state.sameClass(node, i, j, ip, jp)) {
            sys.addTerms({{var(i, j), Rational(1)}, {var(ip, jp), Rational(-1)}},
                       LinearSystem::Rel::Eq, Rational(0));
            done = true;
            break;
          }
        }
        if (done) break;
      }
    }

  auto vertices = enumerate_vertices(sys, 10);
  if (vertices.empty()) {
    cert.failure = "constraint polytope is empty";
    return cert;
  }
  bool ok = true;
  for (const auto& v : vertices) {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = v(var(i, j));
    if (!inspect(Assignment(std::move(m)))) {
      ok = false;
      break;
    }
  }
  cert.certified = ok;
  return cert;
}

}  // namespace axiomlab::proofkit
