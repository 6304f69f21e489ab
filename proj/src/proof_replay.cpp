#include <chrono>
#include <nlohmann/json.hpp>

#include "axiomlab/codec.hpp"
#include "axiomlab/errors.hpp"
#include "axiomlab/proofkit.hpp"

namespace axiomlab::proofkit {

namespace {

// Checks that `target` equals `source` with `agent`'s consecutive pair
// (j, j') transposed, j ranked directly above j' in the source order.
// Returns the rank of j.
int validate_adjacency(const PreferenceProfile& source, const PreferenceProfile& target,
                       int agent, std::pair<int, int> pair) {
  const auto [j, jp] = pair;
  const auto& order = source.order(agent);
  const int rj = order.rankOf(j);
  if (rj + 1 >= order.size() || order.at(rj + 1) != jp)
    throw InputError("step pair is not consecutive in the source order");
  for (int i = 0; i < source.size(); ++i) {
    if (i == agent) {
      if (!(target.order(i) == order.withAdjacentSwap(rj)))
        throw InputError("target order is not the declared adjacent swap");
    } else if (!(target.order(i) == source.order(i))) {
      throw InputError("agents other than the swapper changed between nodes");
    }
  }
  return rj;
}

struct Replayer {
  const ProofScript& script;
  ProofState state;
  ProofReport report;

  explicit Replayer(const ProofScript& s) : script(s), state(s) {}

  std::string nodeName(int idx) const { return script.nodes[static_cast<size_t>(idx)].name; }

  void apply(const InferenceStep& s, StepRecord& rec) {
    switch (s.kind) {
      case StepKind::UniformBySymmetry: {
        const int t = script.nodeIndex(s.target);
        const auto& profile = script.nodes[static_cast<size_t>(t)].profile;
        for (int i = 1; i < profile.size(); ++i)
          if (!(profile.order(i) == profile.order(0)))
            throw InputError("UniformBySymmetry requires a unanimous profile");
        requireAxiom(AxiomFamily::Symmetry, s);
        const Rational share(1, static_cast<long>(profile.size()));
        for (int i = 0; i < profile.size(); ++i)
          for (int j = 0; j < profile.size(); ++j)
            state.restrictEntry(t, i, j, EntryValue::known(share), "uniform by symmetry");
        break;
      }
      case StepKind::UpperInvarianceLink:
      case StepKind::LowerInvarianceLink: {
        const bool upper = s.kind == StepKind::UpperInvarianceLink;
        requireAxiom(upper ? AxiomFamily::UpperInvariance : AxiomFamily::LowerInvariance, s);
        const int src = script.nodeIndex(s.source);
        const int tgt = script.nodeIndex(s.target);
        const auto& sp = script.nodes[static_cast<size_t>(src)].profile;
        validate_adjacency(sp, script.nodes[static_cast<size_t>(tgt)].profile, s.agent,
                           s.swapped);
        auto cs = contour_sets(sp.order(s.agent), upper ? s.swapped.first : s.swapped.second);
        const auto& protects = upper ? cs.upper : cs.lower;
        for (int obj : protects)
          state.uniteEntries(src, s.agent, obj, tgt, s.agent, obj,
                             (upper ? std::string("upper") : std::string("lower")) +
                                 " invariance across " + s.source + "->" + s.target);
        break;
      }
      case StepKind::IntervalTransfer: {
        // An invariance link whose payload is an interval; the entries must
        // sit in a contour set the declared swap protects.
        const int src = script.nodeIndex(s.source);
        const int tgt = script.nodeIndex(s.target);
        const auto& sp = script.nodes[static_cast<size_t>(src)].profile;
        validate_adjacency(sp, script.nodes[static_cast<size_t>(tgt)].profile, s.agent,
                           s.swapped);
        auto up = contour_sets(sp.order(s.agent), s.swapped.first).upper;
        auto low = contour_sets(sp.order(s.agent), s.swapped.second).lower;
        for (auto [agent, obj] : s.entries) {
          if (agent != s.agent) throw InputError("IntervalTransfer entries must be the swapper's");
          const bool inUpper = std::find(up.begin(), up.end(), obj) != up.end();
          const bool inLower = std::find(low.begin(), low.end(), obj) != low.end();
          if (inUpper)
            requireAxiom(AxiomFamily::UpperInvariance, s);
          else if (inLower)
            requireAxiom(AxiomFamily::LowerInvariance, s);
          else
            throw InputError("IntervalTransfer entry lies in neither protected contour set");
          state.uniteEntries(src, agent, obj, tgt, agent, obj,
                             "invariance transfer from " + s.source);
          if (state.contradicted()) break;
        }
        break;
      }
      case StepKind::EfficiencyZero: {
        requireAxiom(AxiomFamily::OrdinalEfficiency, s);
        const int t = script.nodeIndex(s.target);
        for (auto [agent, obj] : s.entries) {
          ZeroCertificate cert = certify_efficiency_zero(state, t, agent, obj);
          rec.certificate = cert;
          if (!cert.certified)
            throw InputError("EfficiencyZero certification failed at " + s.target + ": " +
                             cert.failure);
          state.restrictEntry(t, agent, obj, EntryValue::known(Rational(0)),
                              "certified efficiency zero");
        }
        break;
      }
      case StepKind::SymmetryEqualize: {
        requireAxiom(script.hasAxiom(AxiomFamily::Symmetry) ? AxiomFamily::Symmetry
                                                            : AxiomFamily::Anonymity,
                     s);
        const int t = script.nodeIndex(s.target);
        const auto& profile = script.nodes[static_cast<size_t>(t)].profile;
        for (int i = 0; i < profile.size(); ++i)
          for (int ip = i + 1; ip < profile.size(); ++ip) {
            if (!(profile.order(i) == profile.order(ip))) continue;
            for (int j = 0; j < profile.size(); ++j)
              state.uniteEntries(t, i, j, t, ip, j, "symmetry at " + s.target);
          }
        break;
      }
      case StepKind::BistochasticComplete: {
        const int t = script.nodeIndex(s.target);
        state.propagate();
        if (state.contradicted()) break;
        for (int i = 0; i < state.n(); ++i)
          for (int j = 0; j < state.n(); ++j)
            if (state.entry(t, i, j).isUnconstrained())
              throw InputError("BistochasticComplete left entry (" + std::to_string(i) + "," +
                               std::to_string(j) + ") of " + s.target + " unconstrained");
        break;
      }
      case StepKind::SwapNullPropagation: {
        requireAxiom(AxiomFamily::SwapMonotonicity, s);
        if (s.wholeMatrix) requireAxiom(AxiomFamily::NonBossiness, s);
        const int src = script.nodeIndex(s.source);
        const int tgt = script.nodeIndex(s.target);
        const auto& sp = script.nodes[static_cast<size_t>(src)].profile;
        validate_adjacency(sp, script.nodes[static_cast<size_t>(tgt)].profile, s.agent,
                           s.swapped);
        const auto [j, jp] = s.swapped;
        // The strict clause needs a rise of j for the source report or a drop
        // of j'; both must be refutable from the current bounds.
        EntryValue srcJ = state.entry(src, s.agent, j);
        EntryValue tgtJ = state.entry(tgt, s.agent, j);
        EntryValue srcJp = state.entry(src, s.agent, jp);
        EntryValue tgtJp = state.entry(tgt, s.agent, jp);
        const bool upperRefuted = srcJ.hi <= tgtJ.lo;    // source j cannot exceed target j
        const bool lowerRefuted = srcJp.lo >= tgtJp.hi;  // source j' cannot fall short
        if (!upperRefuted && !lowerRefuted)
          throw InputError("SwapNullPropagation: the strict clause is not refuted at " +
                           s.source + "->" + s.target);
        for (int obj = 0; obj < state.n(); ++obj)
          state.uniteEntries(src, s.agent, obj, tgt, s.agent, obj,
                             "swap monotonicity null move");
        if (s.wholeMatrix)
          for (int i = 0; i < state.n(); ++i)
            for (int obj = 0; obj < state.n(); ++obj)
              state.uniteEntries(src, i, obj, tgt, i, obj, "non-bossiness");
        break;
      }
      case StepKind::AnonymityRelabel: {
        requireAxiom(AxiomFamily::Anonymity, s);
        const int src = script.nodeIndex(s.source);
        const int tgt = script.nodeIndex(s.target);
        const auto& sp = script.nodes[static_cast<size_t>(src)].profile;
        if (!(permute_agents(sp, s.agentPerm) ==
              script.nodes[static_cast<size_t>(tgt)].profile))
          throw InputError("AnonymityRelabel: target is not the permuted source profile");
        for (int i = 0; i < state.n(); ++i)
          for (int j = 0; j < state.n(); ++j)
            state.uniteEntries(src, i, j, tgt, s.agentPerm[static_cast<size_t>(i)], j,
                               "anonymity");
        break;
      }
      case StepKind::NeutralityRelabel: {
        requireAxiom(AxiomFamily::Neutrality, s);
        const int src = script.nodeIndex(s.source);
        const int tgt = script.nodeIndex(s.target);
        const auto& sp = script.nodes[static_cast<size_t>(src)].profile;
        if (!(relabel_objects(sp, s.objectPerm) ==
              script.nodes[static_cast<size_t>(tgt)].profile))
          throw InputError("NeutralityRelabel: target is not the relabeled source profile");
        for (int i = 0; i < state.n(); ++i)
          for (int j = 0; j < state.n(); ++j)
            state.uniteEntries(src, i, j, tgt, i, s.objectPerm[static_cast<size_t>(j)],
                               "neutrality");
        break;
      }
      case StepKind::ContradictionCheck: {
        state.propagate();
        if (!state.contradicted())
          throw InputError("ContradictionCheck: no contradiction has been derived");
        const auto& got = *state.contradiction();
        const auto& want = script.expectedContradiction;
        const bool match = got.kind == want.kind && got.node == want.node &&
                           (want.agent < 0 || got.agent == want.agent) &&
                           (want.object < 0 || got.object == want.object);
        if (!match)
          throw InputError("ContradictionCheck: derived contradiction does not match: " +
                           got.description);
        report.contradictionMatched = true;
        break;
      }
    }
    if (!state.contradicted()) state.propagate();
  }

  void requireAxiom(AxiomFamily f, const InferenceStep& s) {
    if (!script.hasAxiom(f))
      throw InputError("step " + step_kind_name(s.kind) + " needs undeclared axiom " +
                       family_name(f));
  }

  NodeComparison compareNode(int idx) {
    const auto& nd = script.nodes[static_cast<size_t>(idx)];
    NodeComparison cmp;
    cmp.node = nd.name;
    cmp.auxiliary = nd.auxiliary;
    cmp.derived = state.grid(idx);
    cmp.compared = !nd.expected.empty();
    cmp.matched = true;
    if (cmp.compared) {
      for (int i = 0; i < state.n() && cmp.matched; ++i)
        for (int j = 0; j < state.n() && cmp.matched; ++j) {
          const auto& e = nd.expected[static_cast<size_t>(i)][static_cast<size_t>(j)];
          if (e.unknown) continue;
          Rational lo = e.c, hi = e.c;
          if (!e.k.isZero()) {
            if (!nd.paramRange)
              throw InputError("affine expected entry without a parameter range");
            Rational a = e.c + e.k * nd.paramRange->first;
            Rational b = e.c + e.k * nd.paramRange->second;
            lo = min(a, b);
            hi = max(a, b);
          }
          const EntryValue got = cmp.derived[static_cast<size_t>(i)][static_cast<size_t>(j)];
          if (got.lo != lo || got.hi != hi) {
            cmp.matched = false;
            cmp.mismatch = "entry (" + nd.profile.agentName(i) + "," + nd.profile.objectName(j) +
                           "): expected " + EntryValue{lo, hi}.str() + ", derived " + got.str();
          }
        }
    }
    return cmp;
  }

  void run() {
    const auto begin = std::chrono::steady_clock::now();
    bool aborted = false;
    for (size_t k = 0; k < script.steps.size() && !aborted; ++k) {
      const auto& s = script.steps[k];
      StepRecord rec;
      rec.index = static_cast<int>(k);
      rec.summary = step_kind_name(s.kind) +
                    (s.source.empty() ? " " + s.target : " " + s.source + "->" + s.target);
      if (state.contradicted() && s.kind != StepKind::ContradictionCheck) {
        rec.applied = false;
        rec.failure = "skipped: contradiction already derived";
        report.steps.push_back(std::move(rec));
        continue;
      }
      try {
        apply(s, rec);
        rec.applied = true;
      } catch (const Error& e) {
        rec.applied = false;
        rec.failure = e.what();
        report.failure = "step " + std::to_string(k) + " (" + rec.summary + "): " + e.what();
        aborted = true;
      }
      report.steps.push_back(std::move(rec));
    }

    // Nodes are judged on their final resolved state: information keeps
    // flowing through equality classes after a node's own steps are done.
    if (!aborted)
      for (size_t nd = 0; nd < script.nodes.size(); ++nd)
        report.nodes.push_back(compareNode(static_cast<int>(nd)));

    report.contradiction = state.contradiction();
    bool nodesOk = true;
    for (const auto& c : report.nodes)
      if (c.compared && !c.matched) nodesOk = false;
    report.success = !aborted && nodesOk && report.contradictionMatched;
    if (report.success == false && report.failure.empty()) {
      for (const auto& c : report.nodes)
        if (c.compared && !c.matched) {
          report.failure = "node " + c.node + " mismatch: " + c.mismatch;
          break;
        }
      if (report.failure.empty() && !report.contradictionMatched)
        report.failure = "expected contradiction did not fire";
    }
    report.wallMicros = std::chrono::duration_cast<std::chrono::microseconds>(
                            std::chrono::steady_clock::now() - begin)
                            .count();
  }
};

}  // namespace

ProofReport replay(const ProofScript& script) {
  Replayer r(script);
  r.run();
  return std::move(r.report);
}

}  // namespace axiomlab::proofkit
