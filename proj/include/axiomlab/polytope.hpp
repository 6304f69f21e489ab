#pragma once

#include <optional>
#include <vector>

#include "axiomlab/assignment.hpp"
#include "axiomlab/rational.hpp"

namespace axiomlab {

/// A linear system over nonnegative variables x_0..x_{n-1} (x >= 0 is
/// implicit), with equality/inequality rows and an optional linear objective
/// to maximize. All coefficients are exact rationals.
class LinearSystem {
 public:
  enum class Rel { Eq, Le, Ge };

  struct Row {
    RatVector coeffs;
    Rel rel;
    Rational rhs;
  };

  explicit LinearSystem(int numVars) : numVars_(numVars) {}

  int numVars() const { return numVars_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::optional<RatVector>& objective() const { return objective_; }

  void addRow(RatVector coeffs, Rel rel, Rational rhs);
  /// Sparse convenience: sum of coeff*var terms.
  void addTerms(const std::vector<std::pair<int, Rational>>& terms, Rel rel, Rational rhs);
  void addEquality(int var, Rational value) { addTerms({{var, Rational(1)}}, Rel::Eq, value); }
  void setObjective(RatVector maximize);
  void setObjectiveTerms(const std::vector<std::pair<int, Rational>>& terms);

 private:
  int numVars_;
  std::vector<Row> rows_;
  std::optional<RatVector> objective_;
};

/// Result of an exact LP solve. On Infeasible, `farkas` holds a dual vector y
/// with yᵀA <= 0 componentwise on every column and yᵀb > 0, re-checked before
/// returning. On Optimal, `point` satisfies every row exactly.
struct LpResult {
  enum class Status { Infeasible, Optimal, Unbounded };
  Status status;
  Rational value;     // objective at the optimum (0 when no objective)
  RatVector point;    // primal solution (Optimal only)
  RatVector farkas;   // infeasibility certificate (Infeasible only)
};

/// Exact rational simplex with least-index (Bland) anti-cycling pivoting.
LpResult lp_solve(const LinearSystem& system);

/// Feasibility-only convenience wrapper.
std::optional<RatVector> lp_feasible_point(const LinearSystem& system);

/// All vertices (basic feasible solutions, deduplicated) of the bounded
/// polytope described by `system`. Throws CapacityError when the dimension
/// after equality elimination exceeds `dimensionCap`.
std::vector<RatVector> enumerate_vertices(const LinearSystem& system, int dimensionCap = 10);

/// Birkhoff-von Neumann decomposition: positive weights summing to one and
/// permutation matrices whose weighted sum reconstructs the input exactly.
struct BvnDecomposition {
  struct Component {
    Rational weight;
    std::vector<int> permutation;  // agent i receives permutation[i]
  };
  std::vector<Component> components;

  RatMatrix reconstruct(int n) const;
};

BvnDecomposition bvn_decompose(const Assignment& x);

}  // namespace axiomlab
