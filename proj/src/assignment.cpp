#include "axiomlab/assignment.hpp"

namespace axiomlab {

void validate_bistochastic(const RatMatrix& m) {
  const auto n = m.rows();
  if (n == 0 || m.cols() != n)
    throw ParseError(ParseError::Kind::NotBistochastic, "assignment matrix must be square");
  const Rational one(1);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Rational& v = m(i, j);
      if (v.sign() < 0 || v > one)
        throw ParseError(ParseError::Kind::NotBistochastic,
                         "entry (" + std::to_string(i) + "," + std::to_string(j) +
                             ") = " + v.str() + " outside [0,1]");
    }
  for (Eigen::Index i = 0; i < n; ++i) {
    Rational s(0);
    for (Eigen::Index j = 0; j < n; ++j) s += m(i, j);
    if (s != one)
      throw ParseError(ParseError::Kind::NotBistochastic,
                       "row " + std::to_string(i) + " sums to " + s.str());
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    Rational s(0);
    for (Eigen::Index i = 0; i < n; ++i) s += m(i, j);
    if (s != one)
      throw ParseError(ParseError::Kind::NotBistochastic,
                       "column " + std::to_string(j) + " sums to " + s.str());
  }
}

Assignment::Assignment(RatMatrix entries) : m_(std::move(entries)) {
  validate_bistochastic(m_);
}

bool Assignment::isDeterministic() const {
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (!m_(i, j).isZero() && m_(i, j) != Rational(1)) return false;
  return true;
}

Assignment permutation_assignment(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  RatMatrix m(n, n);
  m.setConstant(Rational(0));
  for (int i = 0; i < n; ++i) m(i, perm[static_cast<size_t>(i)]) = Rational(1);
  return Assignment(std::move(m));
}

DominanceVerdict fosd_compare(const RatRowVector& x, const RatRowVector& y,
                              const PreferenceOrder& order) {
  const int n = order.size();
  if (x.cols() != n || y.cols() != n)
    throw InputError("dominance comparison over mismatched object sets");
  Rational px(0), py(0);
  std::optional<int> strictAt;
  for (int r = 0; r < n; ++r) {
    const int j = order.at(r);
    px += x(j);
    py += y(j);
    if (px < py) return {Dominance::Incomparable, j};
    if (px > py && !strictAt) strictAt = j;
  }
  if (strictAt) return {Dominance::StrictlyDominates, strictAt};
  return {Dominance::Equal, std::nullopt};
}

DominanceVerdict ordinal_dominance(const Assignment& x, const Assignment& y,
                                   const PreferenceProfile& profile) {
  const int n = profile.size();
  if (x.size() != n || y.size() != n)
    throw InputError("dominance comparison over mismatched dimensions");
  bool anyStrict = false;
  std::optional<int> witness;
  for (int i = 0; i < n; ++i) {
    auto v = fosd_compare(x.row(i), y.row(i), profile.order(i));
    if (v.relation == Dominance::Incomparable) return {Dominance::Incomparable, v.witness};
    if (v.relation == Dominance::StrictlyDominates && !anyStrict) {
      anyStrict = true;
      witness = v.witness;
    }
  }
  if (anyStrict) return {Dominance::StrictlyDominates, witness};
  return {Dominance::Equal, std::nullopt};
}

}  // namespace axiomlab
