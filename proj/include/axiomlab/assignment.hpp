#pragma once

#include <optional>

#include "axiomlab/preferences.hpp"
#include "axiomlab/rational.hpp"

namespace axiomlab {

/// A random assignment: an n-by-n bistochastic matrix of exact rationals.
/// Rows are agents, columns are objects, indexed like the owning profile.
/// Bistochasticity is validated on every construction.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(RatMatrix entries);

  int size() const { return static_cast<int>(m_.rows()); }
  const RatMatrix& matrix() const { return m_; }
  const Rational& at(int agent, int object) const { return m_(agent, object); }
  RatRowVector row(int agent) const { return m_.row(agent); }

  bool isDeterministic() const;

  friend bool operator==(const Assignment& a, const Assignment& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  RatMatrix m_;
};

/// Raises ParseError::Kind::NotBistochastic when some entry is outside [0,1]
/// or a row/column sum differs from 1.
void validate_bistochastic(const RatMatrix& m);

/// Deterministic assignment for a permutation (agent i gets perm[i]).
Assignment permutation_assignment(const std::vector<int>& perm);

enum class Dominance { Equal, WeaklyDominates, StrictlyDominates, Incomparable };

/// Outcome of a stochastic-dominance comparison. `witness` is the object at
/// which the prefix inequality is strict (for a strict verdict) or violated
/// (for Incomparable).
struct DominanceVerdict {
  Dominance relation = Dominance::Equal;
  std::optional<int> witness;

  bool weaklyDominates() const {
    return relation == Dominance::Equal || relation == Dominance::WeaklyDominates ||
           relation == Dominance::StrictlyDominates;
  }
};

/// First order-stochastic dominance of row x over row y at `order`: every
/// preference-prefix mass of x must weakly exceed y's. Prefix sums are taken
/// over closed prefixes of length 1..n; with total mass 1 this induces the
/// same relation as the open-prefix form.
DominanceVerdict fosd_compare(const RatRowVector& x, const RatRowVector& y,
                              const PreferenceOrder& order);

/// Agent-wise aggregation of fosd_compare: strict iff every agent weakly
/// dominated and at least one strictly.
DominanceVerdict ordinal_dominance(const Assignment& x, const Assignment& y,
                                   const PreferenceProfile& profile);

}  // namespace axiomlab
