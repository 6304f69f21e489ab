#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "axiomlab/assignment.hpp"
#include "axiomlab/preferences.hpp"

namespace axiomlab {

/// A random assignment mechanism: a deterministic map from profiles to
/// bistochastic matrices, total on its declared domain.
class Mechanism {
 public:
  virtual ~Mechanism() = default;
  virtual std::string name() const = 0;
  /// Whether the profile lies in the declared domain. Closed-form mechanisms
  /// cover the full domain; table mechanisms cover their key set.
  virtual bool contains(const PreferenceProfile& /*profile*/) const { return true; }
  virtual Assignment evaluate(const PreferenceProfile& profile) const = 0;
};

/// Random Serial Dictatorship by exact enumeration: the uniform average over
/// all n! priority orders of serial-dictatorship outcomes. Enumeration keeps
/// every entry an exact rational, so n is capped at 6.
Assignment rsd(const PreferenceProfile& profile);

/// Probabilistic Serial: simultaneous eating at unit speed with exact
/// rational event times.
Assignment ps(const PreferenceProfile& profile);

class RsdMechanism final : public Mechanism {
 public:
  std::string name() const override { return "rsd"; }
  Assignment evaluate(const PreferenceProfile& p) const override { return rsd(p); }
};

class PsMechanism final : public Mechanism {
 public:
  std::string name() const override { return "ps"; }
  Assignment evaluate(const PreferenceProfile& p) const override { return ps(p); }
};

/// Finite mechanism backed by an explicit profile -> matrix table.
class TableMechanism final : public Mechanism {
 public:
  explicit TableMechanism(std::vector<std::pair<PreferenceProfile, Assignment>> rows,
                          std::string name = "table");

  std::string name() const override { return name_; }
  bool contains(const PreferenceProfile& profile) const override;
  Assignment evaluate(const PreferenceProfile& profile) const override;

  const std::vector<PreferenceProfile>& domain() const { return domain_; }

  /// Replaces one stored matrix (used to build counterexample fixtures).
  void put(const PreferenceProfile& profile, Assignment a);

 private:
  std::map<std::string, Assignment> table_;
  std::vector<PreferenceProfile> domain_;
  std::string name_;
};

/// Convex combination of permutation matrices; bistochastic by construction.
Assignment convex_combination(const std::vector<std::vector<int>>& permutations,
                              const std::vector<Rational>& weights);

/// Deterministic pseudo-random table over the given profile set: each matrix
/// is a random convex combination of permutation matrices with rational
/// weights. Identical seeds yield identical tables on any platform.
TableMechanism random_table(int n, const std::vector<PreferenceProfile>& profiles,
                            std::uint64_t seed);

}  // namespace axiomlab
