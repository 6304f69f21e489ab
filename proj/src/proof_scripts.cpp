#include <algorithm>
#include <nlohmann/json.hpp>

#include "axiomlab/codec.hpp"
#include "axiomlab/errors.hpp"
#include "axiomlab/proofkit.hpp"

namespace axiomlab::proofkit {

namespace {

Rational R(long num, long den = 1) { return Rational(num, den); }

using Row = std::vector<ExpectedEntry>;
using Grid = std::vector<Row>;

ExpectedEntry V(long num, long den = 1) { return ExpectedEntry::value(R(num, den)); }
ExpectedEntry X(long cn, long cd, long k) {  // c + k*x
  return ExpectedEntry::affine(R(cn, cd), R(k));
}
ExpectedEntry U() { return ExpectedEntry{}; }

ScriptNode node(std::string name, const std::vector<std::string>& rankings, Grid expected,
                bool auxiliary = false, std::string note = "") {
  ScriptNode out;
  out.name = std::move(name);
  out.profile = make_profile(rankings);
  out.expected = std::move(expected);
  out.auxiliary = auxiliary;
  out.note = std::move(note);
  return out;
}

InferenceStep link(StepKind kind, std::string source, std::string target, int agent, int j,
                   int jp, std::string note = "") {
  InferenceStep s;
  s.kind = kind;
  s.source = std::move(source);
  s.target = std::move(target);
  s.agent = agent;
  s.swapped = {j, jp};
  s.note = std::move(note);
  return s;
}

InferenceStep onNode(StepKind kind, std::string target, std::string note = "") {
  InferenceStep s;
  s.kind = kind;
  s.target = std::move(target);
  s.note = std::move(note);
  return s;
}

InferenceStep zero(std::string target, int agent, int object, std::string note = "") {
  InferenceStep s;
  s.kind = StepKind::EfficiencyZero;
  s.target = std::move(target);
  s.entries = {{agent, object}};
  s.note = std::move(note);
  return s;
}

//  Object indices: a=0 b=1 c=2 d=3 (e=4, ... under padding).
constexpr int A = 0, B = 1, C = 2, D = 3;

ProofScript theorem1_script() {
  ProofScript s;
  s.theorem = 1;
  s.axioms = {AxiomFamily::UpperInvariance, AxiomFamily::LowerInvariance,
              AxiomFamily::OrdinalEfficiency, AxiomFamily::Symmetry};

  s.nodes.push_back(node("I", {"a>b>c>d", "a>b>c>d", "a>b>c>d", "a>b>c>d"},
                         Grid{Row{V(1, 4), V(1, 4), V(1, 4), V(1, 4)},
                              Row{V(1, 4), V(1, 4), V(1, 4), V(1, 4)},
                              Row{V(1, 4), V(1, 4), V(1, 4), V(1, 4)},
                              Row{V(1, 4), V(1, 4), V(1, 4), V(1, 4)}}));
  s.nodes.push_back(node("II", {"a>b>c>d", "a>b>c>d", "a>b>c>d", "a>b>d>c"},
                         Grid{Row{V(1, 4), V(1, 4), V(1, 3), V(1, 6)},
                              Row{V(1, 4), V(1, 4), V(1, 3), V(1, 6)},
                              Row{V(1, 4), V(1, 4), V(1, 3), V(1, 6)},
                              Row{V(1, 4), V(1, 4), V(0, 1), V(1, 2)}}));
  s.nodes.push_back(node("III", {"a>b>c>d", "a>b>c>d", "a>b>c>d", "a>d>b>c"},
                         Grid{Row{V(1, 4), V(1, 3), V(1, 3), V(1, 12)},
                              Row{V(1, 4), V(1, 3), V(1, 3), V(1, 12)},
                              Row{V(1, 4), V(1, 3), V(1, 3), V(1, 12)},
                              Row{V(1, 4), V(0, 1), V(0, 1), V(3, 4)}}));
  s.nodes.push_back(node("IV", {"a>b>c>d", "a>b>c>d", "a>b>d>c", "a>b>d>c"},
                         Grid{Row{V(1, 4), V(1, 4), V(1, 2), V(0, 1)},
                              Row{V(1, 4), V(1, 4), V(1, 2), V(0, 1)},
                              Row{V(1, 4), V(1, 4), V(0, 1), V(1, 2)},
                              Row{V(1, 4), V(1, 4), V(0, 1), V(1, 2)}}));
  s.nodes.push_back(node("V", {"a>b>c>d", "a>b>c>d", "a>b>d>c", "a>d>b>c"},
                         Grid{Row{V(1, 4), V(1, 3), V(5, 12), V(0, 1)},
                              Row{V(1, 4), V(1, 3), V(5, 12), V(0, 1)},
                              Row{V(1, 4), V(1, 3), V(1, 6), V(1, 4)},
                              Row{V(1, 4), V(0, 1), V(0, 1), V(3, 4)}}));
  s.nodes.push_back(node("VI", {"a>b>c>d", "a>b>c>d", "b>a>c>d", "a>b>c>d"},
                         Grid{Row{V(1, 3), V(1, 6), V(1, 4), V(1, 4)},
                              Row{V(1, 3), V(1, 6), V(1, 4), V(1, 4)},
                              Row{V(0, 1), V(1, 2), V(1, 4), V(1, 4)},
                              Row{V(1, 3), V(1, 6), V(1, 4), V(1, 4)}}));
  s.nodes.push_back(node("VII", {"a>b>c>d", "a>b>c>d", "b>a>c>d", "a>d>b>c"},
                         Grid{Row{V(1, 3), V(5, 24), V(1, 3), V(1, 8)},
                              Row{V(1, 3), V(5, 24), V(1, 3), V(1, 8)},
                              Row{V(0, 1), V(7, 12), V(1, 3), V(1, 12)},
                              Row{V(1, 3), V(0, 1), V(0, 1), V(2, 3)}}));
  s.nodes.push_back(node(
      "VIIa", {"a>b>c>d", "a>b>c>d", "b>a>c>d", "a>b>d>c"},
      Grid{Row{U(), U(), U(), U()}, Row{U(), U(), U(), U()}, Row{U(), U(), U(), U()},
           Row{V(1, 3), V(1, 6), U(), U()}},
      true,
      "intermediate profile for the compressed two-swap upper-invariance move of agent 4"));
  s.nodes.push_back(node("VIIIa", {"a>b>c>d", "a>b>c>d", "b>a>d>c", "a>b>c>d"},
                         Grid{Row{V(1, 3), U(), U(), U()}, Row{V(1, 3), U(), U(), U()},
                              Row{V(0, 1), V(1, 2), U(), U()}, Row{V(1, 3), U(), U(), U()}},
                         true, "agent 3 swaps c and d starting from VI"));
  s.nodes.push_back(node(
      "VIIIb", {"a>b>c>d", "a>b>c>d", "b>a>d>c", "a>b>d>c"},
      Grid{Row{U(), U(), U(), U()}, Row{U(), U(), U(), U()}, Row{U(), U(), U(), U()},
           Row{V(1, 3), V(1, 6), U(), U()}},
      true, "agent 4 swaps c and d on the way from VIIIa to VIII"));
  {
    ScriptNode vIII = node("VIII", {"a>b>c>d", "a>b>c>d", "b>a>d>c", "a>d>b>c"},
                           Grid{Row{V(1, 3), V(5, 24), V(11, 24), V(0, 1)},
                                Row{V(1, 3), V(5, 24), V(11, 24), V(0, 1)},
                                Row{V(0, 1), V(7, 12), X(0, 1, 1), X(5, 12, -1)},
                                Row{V(1, 3), V(0, 1), X(1, 12, -1), X(7, 12, 1)}});
    vIII.paramRange = {{R(0), R(1, 12)}};
    s.nodes.push_back(std::move(vIII));
  }

  auto& st = s.steps;
  st.push_back(onNode(StepKind::UniformBySymmetry, "I"));

  st.push_back(link(StepKind::UpperInvarianceLink, "I", "II", 3, C, D,
                    "agent 4's entries for a and b carry over"));
  st.push_back(onNode(StepKind::SymmetryEqualize, "II"));
  st.push_back(zero("II", 3, C, "positive (4,c) would let 1,2,3 trade d for c"));
  st.push_back(onNode(StepKind::BistochasticComplete, "II"));

  st.push_back(link(StepKind::UpperInvarianceLink, "II", "III", 3, B, D));
  st.push_back(link(StepKind::LowerInvarianceLink, "II", "III", 3, B, D));
  st.push_back(zero("III", 3, B));
  st.push_back(onNode(StepKind::SymmetryEqualize, "III"));
  st.push_back(onNode(StepKind::BistochasticComplete, "III"));

  st.push_back(link(StepKind::UpperInvarianceLink, "II", "IV", 2, C, D));
  st.push_back(onNode(StepKind::SymmetryEqualize, "IV"));
  st.push_back(zero("IV", 2, C, "equal rows 3 and 4 make (4,c) vanish with (3,c)"));
  st.push_back(onNode(StepKind::BistochasticComplete, "IV"));

  st.push_back(link(StepKind::UpperInvarianceLink, "III", "V", 2, C, D));
  st.push_back(link(StepKind::UpperInvarianceLink, "IV", "V", 3, B, D));
  st.push_back(link(StepKind::LowerInvarianceLink, "IV", "V", 3, B, D));
  st.push_back(zero("V", 3, B));
  st.push_back(onNode(StepKind::SymmetryEqualize, "V"));
  st.push_back(zero("V", 0, D, "with (2,d) tied by symmetry"));
  st.push_back(onNode(StepKind::BistochasticComplete, "V"));

  st.push_back(link(StepKind::LowerInvarianceLink, "I", "VI", 2, A, B,
                    "top-pair swap: entries for c and d carry over"));
  st.push_back(onNode(StepKind::SymmetryEqualize, "VI"));
  st.push_back(zero("VI", 2, A));
  st.push_back(onNode(StepKind::BistochasticComplete, "VI"));

  st.push_back(link(StepKind::LowerInvarianceLink, "III", "VII", 2, A, B));
  st.push_back(zero("VII", 2, A));
  st.push_back(zero("VII", 3, B, "(3,d) stays positive, so b must leave agent 4"));
  st.push_back(zero("VII", 3, C));
  st.push_back(link(StepKind::UpperInvarianceLink, "VI", "VIIa", 3, C, D,
                    "first half of the compressed move of agent 4"));
  st.push_back(link(StepKind::UpperInvarianceLink, "VIIa", "VII", 3, B, D,
                    "second half; pins (4,a) = 1/3"));
  st.push_back(onNode(StepKind::SymmetryEqualize, "VII"));
  st.push_back(onNode(StepKind::BistochasticComplete, "VII"));

  st.push_back(link(StepKind::UpperInvarianceLink, "VII", "VIII", 2, C, D));
  st.push_back(link(StepKind::UpperInvarianceLink, "VI", "VIIIa", 2, C, D));
  st.push_back(onNode(StepKind::SymmetryEqualize, "VIIIa"));
  st.push_back(link(StepKind::UpperInvarianceLink, "VIIIa", "VIIIb", 3, C, D));
  st.push_back(link(StepKind::UpperInvarianceLink, "VIIIb", "VIII", 3, B, D,
                    "pins (4,a) = 1/3 at VIII"));
  st.push_back(zero("VIII", 3, B));
  st.push_back(onNode(StepKind::SymmetryEqualize, "VIII"));
  st.push_back(zero("VIII", 0, D, "rows 1,2 would have to absorb all of c"));
  st.push_back(onNode(StepKind::BistochasticComplete, "VIII"));

  {
    InferenceStep t = link(StepKind::IntervalTransfer, "VIII", "V", 2, B, A,
                           "lower contour of the top-pair swap carries c and d");
    t.entries = {{2, C}, {2, D}};
    st.push_back(t);
  }
  st.push_back(onNode(StepKind::ContradictionCheck, "V"));

  s.expectedContradiction = {ExpectedContradiction::Kind::EmptyEntry, "V", 2, C};
  return s;
}

ProofScript theorem2_script() {
  ProofScript s;
  s.theorem = 2;
  s.axioms = {AxiomFamily::SwapMonotonicity, AxiomFamily::LowerInvariance,
              AxiomFamily::OrdinalEfficiency, AxiomFamily::Anonymity,
              AxiomFamily::Neutrality,       AxiomFamily::NonBossiness};

  const Grid halfHalf{Row{V(1, 2), V(0, 1), V(1, 2), V(0, 1)},
                      Row{V(1, 2), V(0, 1), V(1, 2), V(0, 1)},
                      Row{V(0, 1), V(1, 2), V(0, 1), V(1, 2)},
                      Row{V(0, 1), V(1, 2), V(0, 1), V(1, 2)}};
  const Grid quarterMid{Row{V(1, 2), V(1, 4), V(1, 4), V(0, 1)},
                        Row{V(1, 2), V(1, 4), V(1, 4), V(0, 1)},
                        Row{V(0, 1), V(1, 4), V(1, 4), V(1, 2)},
                        Row{V(0, 1), V(1, 4), V(1, 4), V(1, 2)}};
  const Grid ivGrid{Row{V(1, 2), V(1, 8), V(3, 8), V(0, 1)},
                    Row{V(1, 2), V(1, 8), V(3, 8), V(0, 1)},
                    Row{V(0, 1), V(3, 4), V(1, 4), V(0, 1)},
                    Row{V(0, 1), V(0, 1), V(0, 1), V(1, 1)}};

  s.nodes.push_back(node("I", {"a>b>c>d", "a>b>c>d", "b>a>d>c", "b>a>d>c"}, halfHalf));
  s.nodes.push_back(node("I'", {"b>a>d>c", "b>a>d>c", "a>b>c>d", "a>b>c>d"},
                         Grid{Row{V(0, 1), V(1, 2), V(0, 1), V(1, 2)},
                              Row{V(0, 1), V(1, 2), V(0, 1), V(1, 2)},
                              Row{V(1, 2), V(0, 1), V(1, 2), V(0, 1)},
                              Row{V(1, 2), V(0, 1), V(1, 2), V(0, 1)}},
                         false, "agents 1,2 exchanged orders with 3,4"));
  s.nodes.push_back(node("IIa", {"a>b>c>d", "a>b>c>d", "b>d>a>c", "b>a>d>c"}, halfHalf, true,
                         "agent 3 moves a down one step"));
  s.nodes.push_back(node("IIb", {"a>b>c>d", "a>b>c>d", "b>d>c>a", "b>a>d>c"}, halfHalf, true,
                         "agent 3 moves a to the bottom"));
  s.nodes.push_back(node("IIc", {"a>b>c>d", "a>b>c>d", "b>d>c>a", "b>d>a>c"}, halfHalf, true,
                         "agent 4 moves a down one step"));
  s.nodes.push_back(node("II", {"a>b>c>d", "a>b>c>d", "b>d>c>a", "b>d>c>a"}, halfHalf));
  s.nodes.push_back(node("III", {"a>b>c>d", "a>b>c>d", "d>b>c>a", "d>b>c>a"}, quarterMid));
  s.nodes.push_back(node("III'", {"d>b>c>a", "d>b>c>a", "a>b>c>d", "a>b>c>d"},
                         Grid{Row{V(0, 1), V(1, 4), V(1, 4), V(1, 2)},
                              Row{V(0, 1), V(1, 4), V(1, 4), V(1, 2)},
                              Row{V(1, 2), V(1, 4), V(1, 4), V(0, 1)},
                              Row{V(1, 2), V(1, 4), V(1, 4), V(0, 1)}},
                         false, "agents 1,2 exchanged orders with 3,4"));
  s.nodes.push_back(node("IV", {"a>b>c>d", "a>b>c>d", "b>d>c>a", "d>b>c>a"}, ivGrid));
  s.nodes.push_back(node("Va", {"a>b>c>d", "a>b>c>d", "b>c>d>a", "d>b>c>a"}, ivGrid, true,
                         "agent 3 moves d down one step"));
  s.nodes.push_back(node("V", {"a>b>c>d", "a>b>c>d", "b>c>a>d", "d>b>c>a"}, ivGrid));
  s.nodes.push_back(node("VI", {"a>b>c>d", "a>b>c>d", "b>a>c>d", "d>b>c>a"}, ivGrid));
  s.nodes.push_back(node("VII", {"a>b>c>d", "a>b>c>d", "a>b>c>d", "d>b>c>a"},
                         Grid{Row{U(), U(), V(1, 4), V(0, 1)}, Row{U(), U(), V(1, 4), V(0, 1)},
                              Row{U(), U(), V(1, 4), V(0, 1)}, Row{U(), U(), U(), U()}},
                         false, "no bistochastic completion exists; the derivation collapses"));

  auto& st = s.steps;
  st.push_back(onNode(StepKind::SymmetryEqualize, "I", "anonymity implies symmetry"));
  {
    InferenceStep a = link(StepKind::AnonymityRelabel, "I", "I'", -1, -1, -1,
                           "agents 1,2 exchange preference orders with 3,4");
    a.agentPerm = {2, 3, 0, 1};
    st.push_back(a);
  }
  st.push_back(onNode(StepKind::SymmetryEqualize, "I'"));
  {
    InferenceStep nr = link(StepKind::NeutralityRelabel, "I'", "I", -1, -1, -1,
                            "rename a<->b and c<->d; the image is profile I again");
    nr.objectPerm = {1, 0, 3, 2};
    st.push_back(nr);
  }
  st.push_back(zero("I", 2, C, "(3,c) > 0 would force (1,d) > 0, a c/d trading cycle"));
  st.push_back(zero("I", 0, B, "(1,b) > 0 would force (3,a) > 0, an a/b trading cycle"));
  st.push_back(onNode(StepKind::BistochasticComplete, "I"));

  auto nullStep = [](std::string src, std::string tgt, int agent, int j, int jp) {
    InferenceStep s2 = link(StepKind::SwapNullPropagation, std::move(src), std::move(tgt),
                            agent, j, jp);
    s2.wholeMatrix = true;
    return s2;
  };
  st.push_back(nullStep("I", "IIa", 2, A, D));
  st.push_back(nullStep("IIa", "IIb", 2, A, C));
  st.push_back(nullStep("IIb", "IIc", 3, A, D));
  st.push_back(nullStep("IIc", "II", 3, A, C));

  st.push_back(onNode(StepKind::SymmetryEqualize, "III"));
  {
    InferenceStep a = link(StepKind::AnonymityRelabel, "III", "III'", -1, -1, -1);
    a.agentPerm = {2, 3, 0, 1};
    st.push_back(a);
  }
  st.push_back(onNode(StepKind::SymmetryEqualize, "III'"));
  {
    InferenceStep nr = link(StepKind::NeutralityRelabel, "III'", "III", -1, -1, -1,
                            "rename a<->d; the image is profile III again");
    nr.objectPerm = {3, 1, 2, 0};
    st.push_back(nr);
  }
  st.push_back(zero("III", 0, D, "(1,d) > 0 would force (3,a) > 0, an a/d trading cycle"));
  st.push_back(onNode(StepKind::BistochasticComplete, "III"));

  st.push_back(link(StepKind::LowerInvarianceLink, "III", "IV", 2, D, B,
                    "(3,a) and (3,c) carry over"));
  st.push_back(link(StepKind::LowerInvarianceLink, "II", "IV", 3, B, D,
                    "(4,a) and (4,c) carry over"));
  st.push_back(onNode(StepKind::SymmetryEqualize, "IV"));
  st.push_back(zero("IV", 0, D, "agent 3 holds c and prefers d"));
  st.push_back(zero("IV", 3, B, "(4,b) > 0 would force (4,d) = 1, infeasible together"));
  st.push_back(onNode(StepKind::BistochasticComplete, "IV"));

  st.push_back(nullStep("IV", "Va", 2, D, C));
  st.push_back(nullStep("Va", "V", 2, D, A));

  st.push_back(link(StepKind::LowerInvarianceLink, "V", "VI", 2, C, A,
                    "(3,d) = 0 carries over"));
  st.push_back(onNode(StepKind::SymmetryEqualize, "VI"));
  st.push_back(zero("VI", 0, D, "agents 1,2 could trade d with agent 4"));
  st.push_back(zero("VI", 2, A, "agent 3 could trade a for b with agents 1,2"));
  {
    InferenceStep rowCopy = link(StepKind::SwapNullPropagation, "V", "VI", 2, C, A,
                                 "the swap left (3,a) at 0, so agent 3's row is unchanged");
    rowCopy.wholeMatrix = false;
    st.push_back(rowCopy);
  }
  st.push_back(onNode(StepKind::BistochasticComplete, "VI"));

  st.push_back(link(StepKind::LowerInvarianceLink, "VI", "VII", 2, B, A,
                    "(3,c) = 1/4 and (3,d) = 0 carry over"));
  st.push_back(onNode(StepKind::SymmetryEqualize, "VII"));
  st.push_back(onNode(StepKind::BistochasticComplete, "VII",
                      "column sums force (4,c) = 1/4 and (4,d) = 1; row 4 overflows"));
  st.push_back(onNode(StepKind::ContradictionCheck, "VII"));

  s.expectedContradiction = {ExpectedContradiction::Kind::LineSum, "VII", 3, -1};
  return s;
}

}  // namespace

ProofScript builtin_script(int theorem) {
  if (theorem == 1) return theorem1_script();
  if (theorem == 2) return theorem2_script();
  throw InputError("theorem must be 1 or 2");
}

namespace {

PreferenceProfile pad_profile(const PreferenceProfile& p, int n0, int k) {
  const int n = n0 + k;
  std::vector<std::string> agents = p.agentNames();
  std::vector<std::string> objects = p.objectNames();
  for (int t = 0; t < k; ++t) {
    agents.push_back(std::to_string(n0 + t + 1));
    objects.push_back(std::string(1, static_cast<char>('a' + n0 + t)));
  }
  std::vector<PreferenceOrder> orders;
  for (int i = 0; i < n0; ++i) {
    std::vector<int> r(p.order(i).ranking().begin(), p.order(i).ranking().end());
    for (int t = 0; t < k; ++t) r.push_back(n0 + t);
    orders.emplace_back(std::move(r));
  }
  for (int t = 0; t < k; ++t) {
    std::vector<int> r;
    r.push_back(n0 + t);
    for (int u = 0; u < k; ++u)
      if (u != t) r.push_back(n0 + u);
    for (int j = 0; j < n0; ++j) r.push_back(j);
    orders.emplace_back(std::move(r));
  }
  return PreferenceProfile(std::move(agents), std::move(objects), std::move(orders));
}

Grid pad_expected(const Grid& g, int n0, int k) {
  const int n = n0 + k;
  Grid out(static_cast<size_t>(n), Row(static_cast<size_t>(n), ExpectedEntry{}));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i < n0 && j < n0) {
        if (!g.empty()) out[static_cast<size_t>(i)][static_cast<size_t>(j)] = g[static_cast<size_t>(i)][static_cast<size_t>(j)];
      } else {
        const bool diag = i >= n0 && j == n0 + (i - n0);
        out[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            ExpectedEntry::value(diag ? Rational(1) : Rational(0));
      }
    }
  return out;
}

}  // namespace

ProofScript pad_script(const ProofScript& script, int extraAgents) {
  if (extraAgents < 1) throw InputError("padding requires at least one extra agent");
  const int k = extraAgents;
  const int n0 = script.nodes.front().profile.size();

  ProofScript out;
  out.theorem = script.theorem;
  out.axioms = script.axioms;
  out.expectedContradiction = script.expectedContradiction;

  for (const auto& nd : script.nodes) {
    ScriptNode padded;
    padded.name = nd.name;
    padded.profile = pad_profile(nd.profile, n0, k);
    padded.expected = pad_expected(nd.expected, n0, k);
    padded.paramRange = nd.paramRange;
    padded.auxiliary = nd.auxiliary;
    padded.note = nd.note;
    out.nodes.push_back(std::move(padded));
  }

  // Fresh agents must receive their fresh top objects with certainty, at
  // every node: certified entry by entry, then propagation fills the block.
  for (const auto& nd : out.nodes)
    for (int t = 0; t < k; ++t)
      for (int j = 0; j < n0 + k; ++j) {
        if (j == n0 + t) continue;
        out.steps.push_back(zero(nd.name, n0 + t, j, "padding identity block"));
      }

  int auxCounter = 0;
  for (const auto& step : script.steps) {
    if (step.kind == StepKind::UniformBySymmetry) {
      // The padded profile is no longer unanimous; the same derivation runs
      // through symmetry plus completion.
      out.steps.push_back(onNode(StepKind::SymmetryEqualize, step.target,
                                 "padded form of the unanimous-profile argument"));
      out.steps.push_back(onNode(StepKind::BistochasticComplete, step.target));
      continue;
    }
    if (step.kind == StepKind::AnonymityRelabel) {
      InferenceStep padded = step;
      for (int t = 0; t < k; ++t) padded.agentPerm.push_back(n0 + t);
      out.steps.push_back(std::move(padded));
      continue;
    }
    if (step.kind == StepKind::NeutralityRelabel) {
      InferenceStep padded = step;
      for (int t = 0; t < k; ++t) padded.objectPerm.push_back(n0 + t);
      // Renaming old objects rewrites the tails of the fresh agents' orders,
      // so the relabel lands next to the intended node. Null swaps restore
      // the canonical tails: every displaced entry is a certified zero.
      // Copies: appending auxiliary nodes below reallocates out.nodes.
      const PreferenceProfile srcProfile =
          out.nodes[static_cast<size_t>(out.nodeIndex(step.source))].profile;
      const PreferenceProfile tgtProfile =
          out.nodes[static_cast<size_t>(out.nodeIndex(step.target))].profile;
      PreferenceProfile landing = relabel_objects(srcProfile, padded.objectPerm);
      if (landing == tgtProfile) {
        out.steps.push_back(std::move(padded));
        continue;
      }
      std::string current = step.target + ".r" + std::to_string(++auxCounter);
      {
        ScriptNode aux;
        aux.name = current;
        aux.profile = landing;
        aux.auxiliary = true;
        aux.note = "relabel image of " + step.source + " before tail normalization";
        out.nodes.push_back(std::move(aux));
        for (int t = 0; t < k; ++t)
          for (int j = 0; j < n0 + k; ++j) {
            if (j == n0 + t) continue;
            out.steps.push_back(zero(current, n0 + t, j, "padding identity block"));
          }
      }
      padded.target = current;
      out.steps.push_back(std::move(padded));
      // Bubble each fresh agent's tail back into canonical order.
      while (!(landing == tgtProfile)) {
        int agent = -1, rank = -1;
        for (int i = n0; i < n0 + k && agent < 0; ++i)
          if (!(landing.order(i) == tgtProfile.order(i))) agent = i;
        const auto& have = landing.order(agent);
        const auto& want = tgtProfile.order(agent);
        for (int r = 0; r < have.size(); ++r)
          if (have.at(r) != want.at(r)) {
            rank = r;
            break;
          }
        // Bubble the wanted object up by one adjacent swap.
        const int wanted = want.at(rank);
        const int at = have.rankOf(wanted);
        PreferenceProfile next = landing.withOrder(agent, have.withAdjacentSwap(at - 1));
        const int displaced = have.at(at - 1);
        std::string nextName;
        if (next == tgtProfile) {
          nextName = step.target;
        } else {
          nextName = step.target + ".r" + std::to_string(++auxCounter);
          ScriptNode aux;
          aux.name = nextName;
          aux.profile = next;
          aux.auxiliary = true;
          aux.note = "tail normalization";
          out.nodes.push_back(std::move(aux));
        }
        InferenceStep nullStep = link(StepKind::SwapNullPropagation, current, nextName, agent,
                                      displaced, wanted, "tail normalization");
        nullStep.wholeMatrix = true;
        out.steps.push_back(std::move(nullStep));
        current = nextName;
        landing = std::move(next);
      }
      continue;
    }
    out.steps.push_back(step);
  }
  return out;
}

namespace {

nlohmann::json entry_to_json(const ExpectedEntry& e) {
  if (e.unknown) return "?";
  if (e.k.isZero()) return e.c.str();
  return nlohmann::json{{"c", e.c.str()}, {"k", e.k.str()}};
}

ExpectedEntry entry_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "?") return ExpectedEntry{};
    return ExpectedEntry::value(Rational::fromString(s));
  }
  return ExpectedEntry::affine(Rational::fromString(j.at("c").get<std::string>()),
                               Rational::fromString(j.at("k").get<std::string>()));
}

StepKind step_kind_from_name(const std::string& name) {
  for (auto k : {StepKind::UniformBySymmetry, StepKind::UpperInvarianceLink,
                 StepKind::LowerInvarianceLink, StepKind::EfficiencyZero,
                 StepKind::SymmetryEqualize, StepKind::BistochasticComplete,
                 StepKind::SwapNullPropagation, StepKind::AnonymityRelabel,
                 StepKind::NeutralityRelabel, StepKind::IntervalTransfer,
                 StepKind::ContradictionCheck})
    if (step_kind_name(k) == name) return k;
  throw ParseError(ParseError::Kind::Syntax, "unknown step kind '" + name + "'");
}

}  // namespace

nlohmann::json script_to_json(const ProofScript& script) {
  nlohmann::json j;
  j["theorem"] = script.theorem;
  std::vector<std::string> ax;
  for (auto f : script.axioms) ax.push_back(family_name(f));
  j["axioms"] = ax;
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& nd : script.nodes) {
    nlohmann::json n;
    n["name"] = nd.name;
    n["profile"] = profile_to_json(nd.profile);
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& row : nd.expected) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& e : row) r.push_back(entry_to_json(e));
      grid.push_back(r);
    }
    n["expected"] = grid;
    if (nd.paramRange)
      n["param"] = {nd.paramRange->first.str(), nd.paramRange->second.str()};
    n["auxiliary"] = nd.auxiliary;
    if (!nd.note.empty()) n["note"] = nd.note;
    nodes.push_back(n);
  }
  j["nodes"] = nodes;
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : script.steps) {
    nlohmann::json st;
    st["kind"] = step_kind_name(s.kind);
    if (!s.source.empty()) st["source"] = s.source;
    st["target"] = s.target;
    if (s.agent >= 0) st["agent"] = s.agent;
    if (s.swapped.first >= 0) st["pair"] = {s.swapped.first, s.swapped.second};
    if (!s.entries.empty()) {
      nlohmann::json es = nlohmann::json::array();
      for (auto [a, o] : s.entries) es.push_back(nlohmann::json::array({a, o}));
      st["entries"] = es;
    }
    if (!s.agentPerm.empty()) st["agentPerm"] = s.agentPerm;
    if (!s.objectPerm.empty()) st["objectPerm"] = s.objectPerm;
    if (s.kind == StepKind::SwapNullPropagation) st["wholeMatrix"] = s.wholeMatrix;
    if (!s.note.empty()) st["note"] = s.note;
    steps.push_back(st);
  }
  j["steps"] = steps;
  nlohmann::json ec;
  ec["kind"] = script.expectedContradiction.kind == ExpectedContradiction::Kind::EmptyEntry
                   ? "empty-entry"
                   : "line-sum";
  ec["node"] = script.expectedContradiction.node;
  ec["agent"] = script.expectedContradiction.agent;
  ec["object"] = script.expectedContradiction.object;
  j["contradiction"] = ec;
  return j;
}

ProofScript script_from_json(const nlohmann::json& j) {
  ProofScript s;
  s.theorem = j.at("theorem").get<int>();
  for (const auto& name : j.at("axioms")) {
    auto f = family_from_name(name.get<std::string>());
    if (!f) throw ParseError(ParseError::Kind::Syntax, "unknown axiom family");
    s.axioms.push_back(*f);
  }
  for (const auto& n : j.at("nodes")) {
    ScriptNode nd;
    nd.name = n.at("name").get<std::string>();
    nd.profile = profile_from_json(n.at("profile"));
    for (const auto& row : n.at("expected")) {
      Row r;
      for (const auto& e : row) r.push_back(entry_from_json(e));
      nd.expected.push_back(std::move(r));
    }
    if (n.contains("param"))
      nd.paramRange = {{Rational::fromString(n["param"][0].get<std::string>()),
                        Rational::fromString(n["param"][1].get<std::string>())}};
    nd.auxiliary = n.value("auxiliary", false);
    nd.note = n.value("note", std::string());
    s.nodes.push_back(std::move(nd));
  }
  for (const auto& st : j.at("steps")) {
    InferenceStep step;
    step.kind = step_kind_from_name(st.at("kind").get<std::string>());
    step.source = st.value("source", std::string());
    step.target = st.at("target").get<std::string>();
    step.agent = st.value("agent", -1);
    if (st.contains("pair")) step.swapped = {st["pair"][0].get<int>(), st["pair"][1].get<int>()};
    if (st.contains("entries"))
      for (const auto& e : st["entries"])
        step.entries.emplace_back(e[0].get<int>(), e[1].get<int>());
    if (st.contains("agentPerm")) step.agentPerm = st["agentPerm"].get<std::vector<int>>();
    if (st.contains("objectPerm")) step.objectPerm = st["objectPerm"].get<std::vector<int>>();
    step.wholeMatrix = st.value("wholeMatrix", false);
    step.note = st.value("note", std::string());
    s.steps.push_back(std::move(step));
  }
  const auto& ec = j.at("contradiction");
  s.expectedContradiction.kind = ec.at("kind").get<std::string>() == "empty-entry"
                                     ? ExpectedContradiction::Kind::EmptyEntry
                                     : ExpectedContradiction::Kind::LineSum;
  s.expectedContradiction.node = ec.at("node").get<std::string>();
  s.expectedContradiction.agent = ec.at("agent").get<int>();
  s.expectedContradiction.object = ec.at("object").get<int>();
  return s;
}

}  // namespace axiomlab::proofkit
