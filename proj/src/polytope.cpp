#include "axiomlab/polytope.hpp"

#include <algorithm>
#include <map>

#include "axiomlab/errors.hpp"

namespace axiomlab {

void LinearSystem::addRow(RatVector coeffs, Rel rel, Rational rhs) {
  if (coeffs.size() != numVars_) throw InputError("constraint row has wrong arity");
  rows_.push_back({std::move(coeffs), rel, std::move(rhs)});
}

void LinearSystem::addTerms(const std::vector<std::pair<int, Rational>>& terms, Rel rel,
                          Rational rhs) {
  RatVector c(numVars_);
  c.setConstant(Rational(0));
  for (const auto& [var, coeff] : terms) {
    if (var < 0 || var >= numVars_) throw InputError("constraint references unknown variable");
    c(var) += coeff;
  }
  addRow(std::move(c), rel, std::move(rhs));
}

void LinearSystem::setObjective(RatVector maximize) {
  if (maximize.size() != numVars_) throw InputError("objective has wrong arity");
  objective_ = std::move(maximize);
}

void LinearSystem::setObjectiveTerms(const std::vector<std::pair<int, Rational>>& terms) {
  RatVector c(numVars_);
  c.setConstant(Rational(0));
  for (const auto& [var, coeff] : terms) c(var) += coeff;
  setObjective(std::move(c));  // dense form
}

namespace {

// Dense simplex tableau over equality-form data: A z = b, z >= 0, b >= 0.
// Column layout: structural vars, then slacks, then artificials.
struct Tableau {
  int rows = 0;
  int cols = 0;  // excludes rhs
  std::vector<RatVector> a;
  RatVector b;
  std::vector<int> basis;  // basic column per row

  void pivot(int r, int c) {
    Rational p = a[static_cast<size_t>(r)](c);
    a[static_cast<size_t>(r)] /= p;
    b(r) /= p;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      Rational f = a[static_cast<size_t>(i)](c);
      if (f.isZero()) continue;
      a[static_cast<size_t>(i)] -= f * a[static_cast<size_t>(r)];
      b(i) -= f * b(r);
    }
    basis[static_cast<size_t>(r)] = c;
  }
};

// Minimizes cost over the tableau with Bland's least-index rule.
// Returns false when the problem is unbounded below.
bool simplex_min(Tableau& t, const RatVector& cost, const std::vector<bool>& allowed) {
  while (true) {
    // Duals from the current basis: y = c_B B^{-1}, read through reduced costs.
    RatVector y(t.rows);
    for (int i = 0; i < t.rows; ++i) y(i) = cost(t.basis[static_cast<size_t>(i)]);
    int entering = -1;
    for (int j = 0; j < t.cols && entering < 0; ++j) {
      if (!allowed[static_cast<size_t>(j)]) continue;
      bool basic = false;
      for (int i = 0; i < t.rows; ++i)
        if (t.basis[static_cast<size_t>(i)] == j) basic = true;
      if (basic) continue;
      Rational rc = cost(j);
      for (int i = 0; i < t.rows; ++i) rc -= y(i) * t.a[static_cast<size_t>(i)](j);
      if (rc.sign() < 0) entering = j;
    }
    if (entering < 0) return true;  // optimal
    int leave = -1;
    Rational bestRatio(0);
    for (int i = 0; i < t.rows; ++i) {
      const Rational& aij = t.a[static_cast<size_t>(i)](entering);
      if (aij.sign() <= 0) continue;
      Rational ratio = t.b(i) / aij;
      if (leave < 0 || ratio < bestRatio ||
          (ratio == bestRatio &&
           t.basis[static_cast<size_t>(i)] < t.basis[static_cast<size_t>(leave)])) {
        leave = i;
        bestRatio = ratio;
      }
    }
    if (leave < 0) return false;  // unbounded
    t.pivot(leave, entering);
  }
}

struct StandardForm {
  Tableau t;
  int structural = 0;
  int slacks = 0;
  int artificials = 0;
};

StandardForm to_standard_form(const LinearSystem& sys) {
  StandardForm sf;
  const auto& rows = sys.rows();
  const int m = static_cast<int>(rows.size());
  const int n = sys.numVars();
  int slackCount = 0;
  for (const auto& r : rows)
    if (r.rel != LinearSystem::Rel::Eq) ++slackCount;
  sf.structural = n;
  sf.slacks = slackCount;
  sf.artificials = m;
  sf.t.rows = m;
  sf.t.cols = n + slackCount + m;
  sf.t.b.resize(m);
  sf.t.a.assign(static_cast<size_t>(m), RatVector());
  int slackAt = 0;
  for (int i = 0; i < m; ++i) {
    RatVector row(sf.t.cols);
    row.setConstant(Rational(0));
    for (int j = 0; j < n; ++j) row(j) = rows[static_cast<size_t>(i)].coeffs(j);
    Rational rhs = rows[static_cast<size_t>(i)].rhs;
    if (rows[static_cast<size_t>(i)].rel == LinearSystem::Rel::Le)
      row(n + slackAt++) = Rational(1);
    else if (rows[static_cast<size_t>(i)].rel == LinearSystem::Rel::Ge)
      row(n + slackAt++) = Rational(-1);
    if (rhs.sign() < 0) {
      row = -row;
      rhs = -rhs;
    }
    row(n + slackCount + i) = Rational(1);
    sf.t.a[static_cast<size_t>(i)] = std::move(row);
    sf.t.b(i) = std::move(rhs);
    sf.t.basis.push_back(n + slackCount + i);
  }
  return sf;
}

// Farkas certificate from the phase-1 optimum: y_i = 1 - reduced cost of
// artificial column i, where the phase-1 cost is one on artificials.
RatVector extract_farkas(const Tableau& t, const RatVector& cost, int firstArtificial) {
  RatVector y(t.rows);
  RatVector duals(t.rows);
  for (int i = 0; i < t.rows; ++i) duals(i) = cost(t.basis[static_cast<size_t>(i)]);
  for (int i = 0; i < t.rows; ++i) {
    Rational rc = cost(firstArtificial + i);
    for (int r = 0; r < t.rows; ++r)
      rc -= duals(r) * t.a[static_cast<size_t>(r)](firstArtificial + i);
    y(i) = Rational(1) - rc;
  }
  return y;
}

}  // namespace

LpResult lp_solve(const LinearSystem& sys) {
  StandardForm sf = to_standard_form(sys);
  Tableau& t = sf.t;
  const int n = sf.structural;
  const int firstArtificial = n + sf.slacks;

  // Phase 1: minimize the artificial mass.
  RatVector phase1(t.cols);
  phase1.setConstant(Rational(0));
  for (int j = firstArtificial; j < t.cols; ++j) phase1(j) = Rational(1);
  std::vector<bool> allowAll(static_cast<size_t>(t.cols), true);
  simplex_min(t, phase1, allowAll);  // bounded below by 0, cannot be unbounded
  Rational artificialMass(0);
  for (int i = 0; i < t.rows; ++i)
    if (t.basis[static_cast<size_t>(i)] >= firstArtificial) artificialMass += t.b(i);
  if (artificialMass.sign() > 0) {
    LpResult res;
    res.status = LpResult::Status::Infeasible;
    res.value = Rational(0);
    // Recover y in the row order of the original system; rows were negated
    // when their rhs was negative, so flip those components back.
    RatVector y = extract_farkas(t, phase1, firstArtificial);
    for (int i = 0; i < t.rows; ++i)
      if (sys.rows()[static_cast<size_t>(i)].rhs.sign() < 0) y(i) = -y(i);
    // Re-check the certificate exactly against the original rows, with the
    // sign conventions of each relation folded in.
    Rational yb(0);
    for (int i = 0; i < t.rows; ++i) yb += y(i) * sys.rows()[static_cast<size_t>(i)].rhs;
    bool ok = yb.sign() > 0;
    for (int j = 0; j < n && ok; ++j) {
      Rational col(0);
      for (int i = 0; i < t.rows; ++i) col += y(i) * sys.rows()[static_cast<size_t>(i)].coeffs(j);
      if (col.sign() > 0) ok = false;
    }
    for (int i = 0; i < t.rows && ok; ++i) {
      const auto rel = sys.rows()[static_cast<size_t>(i)].rel;
      if (rel == LinearSystem::Rel::Le && y(i).sign() > 0) ok = false;
      if (rel == LinearSystem::Rel::Ge && y(i).sign() < 0) ok = false;
    }
    if (!ok) throw Error("internal: Farkas certificate failed re-check");
    res.farkas = std::move(y);
    return res;
  }

  // Pivot any degenerate artificials out of the basis; rows that cannot be
  // cleared are redundant and may keep their zero-level artificial.
  for (int i = 0; i < t.rows; ++i) {
    if (t.basis[static_cast<size_t>(i)] < firstArtificial) continue;
    for (int j = 0; j < firstArtificial; ++j) {
      if (!t.a[static_cast<size_t>(i)](j).isZero()) {
        t.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2: maximize the requested objective (minimize its negation),
  // with artificial columns barred from re-entering.
  RatVector phase2(t.cols);
  phase2.setConstant(Rational(0));
  if (sys.objective())
    for (int j = 0; j < n; ++j) phase2(j) = -(*sys.objective())(j);
  std::vector<bool> allowed(static_cast<size_t>(t.cols), true);
  for (int j = firstArtificial; j < t.cols; ++j) allowed[static_cast<size_t>(j)] = false;
  bool bounded = simplex_min(t, phase2, allowed);

  LpResult res;
  if (!bounded) {
    res.status = LpResult::Status::Unbounded;
    res.value = Rational(0);
    return res;
  }
  res.status = LpResult::Status::Optimal;
  RatVector x(n);
  x.setConstant(Rational(0));
  for (int i = 0; i < t.rows; ++i)
    if (t.basis[static_cast<size_t>(i)] < n) x(t.basis[static_cast<size_t>(i)]) = t.b(i);
  res.value = Rational(0);
  if (sys.objective())
    for (int j = 0; j < n; ++j) res.value += (*sys.objective())(j)*x(j);
  res.point = std::move(x);
  return res;
}

std::optional<RatVector> lp_feasible_point(const LinearSystem& system) {
  LinearSystem probe = system;
  probe.setObjectiveTerms({});
  LpResult r = lp_solve(probe);
  if (r.status != LpResult::Status::Optimal) return std::nullopt;
  return r.point;
}

namespace {

struct EliminationResult {
  bool infeasible = false;
  std::vector<RatVector> rows;  // independent equality rows over kept columns
  RatVector rhs;
  std::vector<int> keptCols;            // indices into the slack-form system
  std::vector<std::pair<int, Rational>> fixed;  // presolved variables
};

// Equality form with slacks, singleton presolve, then Gaussian elimination
// to an independent row basis.
EliminationResult eliminate(const LinearSystem& sys) {
  const int n = sys.numVars();
  int slackCount = 0;
  for (const auto& r : sys.rows())
    if (r.rel != LinearSystem::Rel::Eq) ++slackCount;
  const int cols = n + slackCount;
  std::vector<RatVector> rows;
  std::vector<Rational> rhs;
  int slackAt = n;
  for (const auto& r : sys.rows()) {
    RatVector row(cols);
    row.setConstant(Rational(0));
    for (int j = 0; j < n; ++j) row(j) = r.coeffs(j);
    if (r.rel == LinearSystem::Rel::Le)
      row(slackAt++) = Rational(1);
    else if (r.rel == LinearSystem::Rel::Ge)
      row(slackAt++) = Rational(-1);
    rows.push_back(std::move(row));
    rhs.push_back(r.rhs);
  }

  EliminationResult out;
  std::vector<bool> removedRow(rows.size(), false);
  std::vector<bool> removedCol(static_cast<size_t>(cols), false);
  std::vector<Rational> fixedValue(static_cast<size_t>(cols), Rational(0));
  std::vector<bool> isFixed(static_cast<size_t>(cols), false);

  // Singleton presolve: rows with one surviving column pin that variable.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (removedRow[i]) continue;
      int nz = -1, count = 0;
      for (int j = 0; j < cols; ++j) {
        if (removedCol[static_cast<size_t>(j)]) continue;
        if (!rows[i](j).isZero()) {
          nz = j;
          if (++count > 1) break;
        }
      }
      if (count == 0) {
        if (!rhs[i].isZero()) {
          out.infeasible = true;
          return out;
        }
        removedRow[i] = true;
        changed = true;
      } else if (count == 1) {
        Rational v = rhs[i] / rows[i](nz);
        if (v.sign() < 0) {
          out.infeasible = true;
          return out;
        }
        isFixed[static_cast<size_t>(nz)] = true;
        fixedValue[static_cast<size_t>(nz)] = v;
        removedCol[static_cast<size_t>(nz)] = true;
        removedRow[i] = true;
        for (size_t k = 0; k < rows.size(); ++k) {
          if (removedRow[k] || rows[k](nz).isZero()) continue;
          rhs[k] -= rows[k](nz)*v;
          rows[k](nz) = Rational(0);
        }
        changed = true;
      }
    }
  }

  for (int j = 0; j < cols; ++j)
    if (!removedCol[static_cast<size_t>(j)]) out.keptCols.push_back(j);
  for (int j = 0; j < cols; ++j)
    if (isFixed[static_cast<size_t>(j)])
      out.fixed.emplace_back(j, fixedValue[static_cast<size_t>(j)]);

  // Gaussian elimination onto the kept columns.
  const int kc = static_cast<int>(out.keptCols.size());
  std::vector<RatVector> work;
  std::vector<Rational> workRhs;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (removedRow[i]) continue;
    RatVector compact(kc);
    for (int j = 0; j < kc; ++j) compact(j) = rows[i](out.keptCols[static_cast<size_t>(j)]);
    work.push_back(std::move(compact));
    workRhs.push_back(rhs[i]);
  }
  int rank = 0;
  for (int col = 0; col < kc && rank < static_cast<int>(work.size()); ++col) {
    int pivot = -1;
    for (int i = rank; i < static_cast<int>(work.size()); ++i)
      if (!work[static_cast<size_t>(i)](col).isZero()) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(work[static_cast<size_t>(pivot)], work[static_cast<size_t>(rank)]);
    std::swap(workRhs[static_cast<size_t>(pivot)], workRhs[static_cast<size_t>(rank)]);
    Rational p = work[static_cast<size_t>(rank)](col);
    work[static_cast<size_t>(rank)] /= p;
    workRhs[static_cast<size_t>(rank)] /= p;
    for (int i = 0; i < static_cast<int>(work.size()); ++i) {
      if (i == rank) continue;
      Rational f = work[static_cast<size_t>(i)](col);
      if (f.isZero()) continue;
      work[static_cast<size_t>(i)] -= f * work[static_cast<size_t>(rank)];
      workRhs[static_cast<size_t>(i)] -= f * workRhs[static_cast<size_t>(rank)];
    }
    ++rank;
  }
  for (int i = rank; i < static_cast<int>(work.size()); ++i)
    if (!workRhs[static_cast<size_t>(i)].isZero()) {
      out.infeasible = true;
      return out;
    }
  work.resize(static_cast<size_t>(rank));
  workRhs.resize(static_cast<size_t>(rank));
  out.rows = std::move(work);
  out.rhs.resize(rank);
  for (int i = 0; i < rank; ++i) out.rhs(i) = workRhs[static_cast<size_t>(i)];
  return out;
}

}  // namespace

std::vector<RatVector> enumerate_vertices(const LinearSystem& sys, int dimensionCap) {
  const int n = sys.numVars();
  EliminationResult el = eliminate(sys);
  if (el.infeasible) return {};

  const int r = static_cast<int>(el.rows.size());
  const int c = static_cast<int>(el.keptCols.size());
  if (c - r > dimensionCap)
    throw CapacityError("polytope dimension " + std::to_string(c - r) + " exceeds cap " +
                        std::to_string(dimensionCap));
  {
    // Basis enumeration walks C(c, r) column subsets; refuse hopeless sizes.
    const long limit = 50'000'000;
    long combos = 1;
    const int d = std::min(r, c - r);
    for (int i = 1; i <= d && combos < limit; ++i) combos = combos * (c - d + i) / i;
    if (combos >= limit)
      throw CapacityError("basis enumeration would visit too many column subsets");
  }

  std::map<std::vector<std::string>, RatVector> unique;
  auto record = [&](const RatVector& basicValues, const std::vector<int>& basisCols) {
    RatVector full(n);
    full.setConstant(Rational(0));
    for (const auto& [col, v] : el.fixed)
      if (col < n) full(col) = v;
    for (int k = 0; k < r; ++k) {
      int col = el.keptCols[static_cast<size_t>(basisCols[static_cast<size_t>(k)])];
      if (col < n) full(col) = basicValues(k);
    }
    std::vector<std::string> key;
    key.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) key.push_back(full(j).str());
    unique.emplace(std::move(key), std::move(full));
  };

  if (r == 0) {
    // Fully determined by presolve.
    record(RatVector(0), {});
    std::vector<RatVector> out;
    for (auto& [k, v] : unique) out.push_back(v);
    return out;
  }

  // Clear denominators once so each candidate basis is solved with
  // fraction-free (Bareiss) elimination over integers; a gcd per rational
  // operation would dominate the enumeration otherwise.
  const int kc = static_cast<int>(el.keptCols.size());
  std::vector<std::vector<mpz_class>> irow(static_cast<size_t>(r));
  std::vector<mpz_class> irhs(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    mpz_class scale = el.rhs(i).denominator();
    for (int j = 0; j < kc; ++j)
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(),
              el.rows[static_cast<size_t>(i)](j).denominator().get_mpz_t());
    irow[static_cast<size_t>(i)].resize(static_cast<size_t>(kc));
    for (int j = 0; j < kc; ++j) {
      const Rational& v = el.rows[static_cast<size_t>(i)](j);
      irow[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          v.numerator() * (scale / v.denominator());
    }
    irhs[static_cast<size_t>(i)] = el.rhs(i).numerator() * (scale / el.rhs(i).denominator());
  }

  // All r-subsets of the kept columns as candidate bases.
  std::vector<int> comb(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) comb[static_cast<size_t>(i)] = i;
  std::vector<std::vector<mpz_class>> g(static_cast<size_t>(r),
                                        std::vector<mpz_class>(static_cast<size_t>(r) + 1));
  while (true) {
    for (int i = 0; i < r; ++i) {
      for (int k = 0; k < r; ++k)
        g[static_cast<size_t>(i)][static_cast<size_t>(k)] =
            irow[static_cast<size_t>(i)][static_cast<size_t>(comb[static_cast<size_t>(k)])];
      g[static_cast<size_t>(i)][static_cast<size_t>(r)] = irhs[static_cast<size_t>(i)];
    }
    bool singular = false;
    mpz_class prev(1);
    for (int col = 0; col < r && !singular; ++col) {
      int pivot = -1;
      for (int i = col; i < r; ++i)
        if (g[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) {
          pivot = i;
          break;
        }
      if (pivot < 0) {
        singular = true;
        break;
      }
      if (pivot != col) std::swap(g[static_cast<size_t>(pivot)], g[static_cast<size_t>(col)]);
      for (int i = col + 1; i < r; ++i) {
        for (int j = col + 1; j <= r; ++j) {
          g[static_cast<size_t>(i)][static_cast<size_t>(j)] =
              (g[static_cast<size_t>(col)][static_cast<size_t>(col)] *
                   g[static_cast<size_t>(i)][static_cast<size_t>(j)] -
               g[static_cast<size_t>(i)][static_cast<size_t>(col)] *
                   g[static_cast<size_t>(col)][static_cast<size_t>(j)]) /
              prev;
        }
        g[static_cast<size_t>(i)][static_cast<size_t>(col)] = 0;
      }
      prev = g[static_cast<size_t>(col)][static_cast<size_t>(col)];
    }
    if (!singular) {
      // Back-substitute rationally on the triangular system.
      RatVector x(r);
      bool feasible = true;
      for (int i = r - 1; i >= 0; --i) {
        Rational acc{mpq_class(g[static_cast<size_t>(i)][static_cast<size_t>(r)])};
        for (int j = i + 1; j < r; ++j)
          acc -= Rational{mpq_class(g[static_cast<size_t>(i)][static_cast<size_t>(j)])} * x(j);
        x(i) = acc / Rational{mpq_class(g[static_cast<size_t>(i)][static_cast<size_t>(i)])};
        if (x(i).sign() < 0) {
          feasible = false;
          break;
        }
      }
      if (feasible) record(x, comb);
    }
    // Next combination.
    int pos = r - 1;
    while (pos >= 0 && comb[static_cast<size_t>(pos)] == c - r + pos) --pos;
    if (pos < 0) break;
    ++comb[static_cast<size_t>(pos)];
    for (int k = pos + 1; k < r; ++k) comb[static_cast<size_t>(k)] = comb[static_cast<size_t>(k - 1)] + 1;
  }

  std::vector<RatVector> out;
  out.reserve(unique.size());
  for (auto& [k, v] : unique) out.push_back(v);
  return out;
}

RatMatrix BvnDecomposition::reconstruct(int n) const {
  RatMatrix m(n, n);
  m.setConstant(Rational(0));
  for (const auto& comp : components)
    for (int i = 0; i < n; ++i) m(i, comp.permutation[static_cast<size_t>(i)]) += comp.weight;
  return m;
}

namespace {

// Kuhn's augmenting-path matching over the positive support.
bool try_augment(const RatMatrix& m, int row, std::vector<int>& matchOfCol,
                 std::vector<bool>& visited) {
  const int n = static_cast<int>(m.rows());
  for (int j = 0; j < n; ++j) {
    if (visited[static_cast<size_t>(j)] || m(row, j).sign() <= 0) continue;
    visited[static_cast<size_t>(j)] = true;
    if (matchOfCol[static_cast<size_t>(j)] < 0 ||
        try_augment(m, matchOfCol[static_cast<size_t>(j)], matchOfCol, visited)) {
      matchOfCol[static_cast<size_t>(j)] = row;
      return true;
    }
  }
  return false;
}

}  // namespace

BvnDecomposition bvn_decompose(const Assignment& x) {
  const int n = x.size();
  RatMatrix rem = x.matrix();
  BvnDecomposition out;
  Rational total(0);
  while (total < Rational(1)) {
    std::vector<int> matchOfCol(static_cast<size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
      std::vector<bool> visited(static_cast<size_t>(n), false);
      if (!try_augment(rem, i, matchOfCol, visited))
        throw Error("internal: bistochastic support lost its perfect matching");
    }
    std::vector<int> perm(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) perm[static_cast<size_t>(matchOfCol[static_cast<size_t>(j)])] = j;
    Rational theta = rem(0, perm[0]);
    for (int i = 1; i < n; ++i) theta = min(theta, rem(i, perm[static_cast<size_t>(i)]));
    for (int i = 0; i < n; ++i) rem(i, perm[static_cast<size_t>(i)]) -= theta;
    out.components.push_back({theta, std::move(perm)});
    total += theta;
  }
  return out;
}

}  // namespace axiomlab
