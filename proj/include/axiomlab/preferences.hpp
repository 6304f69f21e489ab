#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "axiomlab/errors.hpp"

namespace axiomlab {

/// Strict ranking of the n objects of a market, most-preferred first.
/// Objects are stored as indices into the owning profile's object list.
class PreferenceOrder {
 public:
  PreferenceOrder() = default;
  explicit PreferenceOrder(std::vector<int> ranked);

  int size() const { return static_cast<int>(ranked_.size()); }
  int at(int rank) const { return ranked_[static_cast<size_t>(rank)]; }
  int rankOf(int object) const;

  /// True when the agent strictly prefers `j` to `jp`.
  bool prefers(int j, int jp) const { return rankOf(j) < rankOf(jp); }

  std::span<const int> ranking() const { return ranked_; }

  PreferenceOrder withAdjacentSwap(int rank) const;

  friend bool operator==(const PreferenceOrder&, const PreferenceOrder&) = default;

 private:
  std::vector<int> ranked_;
  std::vector<int> rankOf_;
};

/// One preference order per agent, over a shared object set. Agent and object
/// identifiers are opaque strings canonicalized to indices at construction.
class PreferenceProfile {
 public:
  PreferenceProfile() = default;
  PreferenceProfile(std::vector<std::string> agents, std::vector<std::string> objects,
                    std::vector<PreferenceOrder> orders);

  int size() const { return static_cast<int>(orders_.size()); }
  const PreferenceOrder& order(int agent) const { return orders_[static_cast<size_t>(agent)]; }
  const std::vector<PreferenceOrder>& orders() const { return orders_; }

  const std::string& agentName(int i) const { return agents_[static_cast<size_t>(i)]; }
  const std::string& objectName(int j) const { return objects_[static_cast<size_t>(j)]; }
  const std::vector<std::string>& agentNames() const { return agents_; }
  const std::vector<std::string>& objectNames() const { return objects_; }

  std::optional<int> agentIndex(const std::string& name) const;
  std::optional<int> objectIndex(const std::string& name) const;

  /// Copy with one agent's order replaced.
  PreferenceProfile withOrder(int agent, PreferenceOrder order) const;

  /// Canonical key for maps and table-mechanism domains. Two profiles compare
  /// equal iff they have the same names and the same rankings.
  std::string key() const;

  friend bool operator==(const PreferenceProfile&, const PreferenceProfile&) = default;

 private:
  std::vector<std::string> agents_;
  std::vector<std::string> objects_;
  std::vector<PreferenceOrder> orders_;
};

/// All n-1 orders adjacent to `order`, each obtained by transposing one
/// consecutive pair. The reported pair (j, j') has j ranked above j' in the
/// input.
std::vector<std::pair<PreferenceOrder, std::pair<int, int>>> adjacent_swaps(
    const PreferenceOrder& order);

struct ContourSets {
  std::vector<int> upper;  // objects strictly preferred to j
  std::vector<int> lower;  // objects strictly less preferred than j
};

/// Upper and lower contour sets of object `j` at `order`.
ContourSets contour_sets(const PreferenceOrder& order, int j);

/// Exchanges objects j and j' in every agent's ranking (an involution).
PreferenceProfile relabel_objects(const PreferenceProfile& profile, int j, int jp);

/// Applies a full object permutation: object `j` is renamed to `perm[j]` in
/// every ranking. Equivalent to composing pairwise relabelings.
PreferenceProfile relabel_objects(const PreferenceProfile& profile,
                                  const std::vector<int>& perm);

/// Exchanges the orders of agents i and i' (an involution).
PreferenceProfile swap_agents(const PreferenceProfile& profile, int i, int ip);

/// Applies a full agent permutation: agent i's order moves to agent perm[i].
PreferenceProfile permute_agents(const PreferenceProfile& profile,
                                 const std::vector<int>& perm);

/// Default names used by generated markets: agents "1".."n", objects "a"...
std::vector<std::string> default_agent_names(int n);
std::vector<std::string> default_object_names(int n);

/// Builds a profile from rankings given as object-name strings like "a>b>c".
PreferenceProfile make_profile(const std::vector<std::string>& rankings);

/// All n! preference orders over n objects, in lexicographic order.
std::vector<PreferenceOrder> all_orders(int n);

/// All (n!)^n profiles over the default names; n <= 3 stays tractable.
std::vector<PreferenceProfile> all_profiles(int n);

}  // namespace axiomlab
