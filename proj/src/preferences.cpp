#include "axiomlab/preferences.hpp"

#include <algorithm>
#include <numeric>

namespace axiomlab {

PreferenceOrder::PreferenceOrder(std::vector<int> ranked) : ranked_(std::move(ranked)) {
  const int n = static_cast<int>(ranked_.size());
  rankOf_.assign(static_cast<size_t>(n), -1);
  for (int r = 0; r < n; ++r) {
    int obj = ranked_[static_cast<size_t>(r)];
    if (obj < 0 || obj >= n || rankOf_[static_cast<size_t>(obj)] != -1)
      throw InputError("preference order is not a permutation of the object set");
    rankOf_[static_cast<size_t>(obj)] = r;
  }
}

int PreferenceOrder::rankOf(int object) const {
  if (object < 0 || object >= size()) throw InputError("unknown object in ranking lookup");
  return rankOf_[static_cast<size_t>(object)];
}

PreferenceOrder PreferenceOrder::withAdjacentSwap(int rank) const {
  if (rank < 0 || rank + 1 >= size()) throw InputError("adjacent swap rank out of range");
  std::vector<int> r(ranked_);
  std::swap(r[static_cast<size_t>(rank)], r[static_cast<size_t>(rank) + 1]);
  return PreferenceOrder(std::move(r));
}

PreferenceProfile::PreferenceProfile(std::vector<std::string> agents,
                                     std::vector<std::string> objects,
                                     std::vector<PreferenceOrder> orders)
    : agents_(std::move(agents)), objects_(std::move(objects)), orders_(std::move(orders)) {
  const size_t n = agents_.size();
  if (objects_.size() != n)
    throw InputError("profile requires equally many agents and objects");
  if (orders_.size() != n) throw InputError("profile requires one order per agent");
  for (const auto& o : orders_)
    if (o.size() != static_cast<int>(n))
      throw InputError("every order must rank the full object set");
  for (size_t i = 0; i < n; ++i)
    for (size_t k = i + 1; k < n; ++k) {
      if (agents_[i] == agents_[k]) throw InputError("duplicate agent name: " + agents_[i]);
      if (objects_[i] == objects_[k])
        throw InputError("duplicate object name: " + objects_[i]);
    }
}

std::optional<int> PreferenceProfile::agentIndex(const std::string& name) const {
  for (size_t i = 0; i < agents_.size(); ++i)
    if (agents_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> PreferenceProfile::objectIndex(const std::string& name) const {
  for (size_t j = 0; j < objects_.size(); ++j)
    if (objects_[j] == name) return static_cast<int>(j);
  return std::nullopt;
}

PreferenceProfile PreferenceProfile::withOrder(int agent, PreferenceOrder order) const {
  if (agent < 0 || agent >= size()) throw InputError("unknown agent index");
  std::vector<PreferenceOrder> orders(orders_);
  orders[static_cast<size_t>(agent)] = std::move(order);
  return PreferenceProfile(agents_, objects_, std::move(orders));
}

std::string PreferenceProfile::key() const {
  std::string k;
  for (const auto& a : agents_) k += a + ",";
  k += ";";
  for (const auto& o : objects_) k += o + ",";
  k += ";";
  for (const auto& ord : orders_) {
    for (int r = 0; r < ord.size(); ++r) k += std::to_string(ord.at(r)) + ".";
    k += "|";
  }
  return k;
}

std::vector<std::pair<PreferenceOrder, std::pair<int, int>>> adjacent_swaps(
    const PreferenceOrder& order) {
  std::vector<std::pair<PreferenceOrder, std::pair<int, int>>> out;
  out.reserve(static_cast<size_t>(order.size()) - 1);
  for (int r = 0; r + 1 < order.size(); ++r)
    out.emplace_back(order.withAdjacentSwap(r), std::make_pair(order.at(r), order.at(r + 1)));
  return out;
}

ContourSets contour_sets(const PreferenceOrder& order, int j) {
  ContourSets cs;
  const int rj = order.rankOf(j);
  for (int r = 0; r < order.size(); ++r) {
    if (r < rj) cs.upper.push_back(order.at(r));
    if (r > rj) cs.lower.push_back(order.at(r));
  }
  return cs;
}

PreferenceProfile relabel_objects(const PreferenceProfile& profile, int j, int jp) {
  const int n = profile.size();
  if (j == jp) throw InputError("relabeling requires two distinct objects");
  if (j < 0 || j >= n || jp < 0 || jp >= n) throw InputError("unknown object in relabeling");
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[static_cast<size_t>(j)], perm[static_cast<size_t>(jp)]);
  return relabel_objects(profile, perm);
}

PreferenceProfile relabel_objects(const PreferenceProfile& profile,
                                  const std::vector<int>& perm) {
  const int n = profile.size();
  if (static_cast<int>(perm.size()) != n)
    throw InputError("object permutation has the wrong length");
  std::vector<PreferenceOrder> orders;
  orders.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<int> ranked;
    ranked.reserve(static_cast<size_t>(n));
    for (int r = 0; r < n; ++r) ranked.push_back(perm[static_cast<size_t>(profile.order(i).at(r))]);
    orders.emplace_back(std::move(ranked));
  }
  return PreferenceProfile(profile.agentNames(), profile.objectNames(), std::move(orders));
}

PreferenceProfile swap_agents(const PreferenceProfile& profile, int i, int ip) {
  const int n = profile.size();
  if (i == ip) throw InputError("agent swap requires two distinct agents");
  if (i < 0 || i >= n || ip < 0 || ip >= n) throw InputError("unknown agent in swap");
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(ip)]);
  return permute_agents(profile, perm);
}

PreferenceProfile permute_agents(const PreferenceProfile& profile,
                                 const std::vector<int>& perm) {
  const int n = profile.size();
  if (static_cast<int>(perm.size()) != n)
    throw InputError("agent permutation has the wrong length");
  std::vector<PreferenceOrder> orders(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) orders[static_cast<size_t>(perm[static_cast<size_t>(i)])] = profile.order(i);
  return PreferenceProfile(profile.agentNames(), profile.objectNames(), std::move(orders));
}

std::vector<std::string> default_agent_names(int n) {
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) names.push_back(std::to_string(i));
  return names;
}

std::vector<std::string> default_object_names(int n) {
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) names.push_back(std::string(1, static_cast<char>('a' + j)));
  return names;
}

PreferenceProfile make_profile(const std::vector<std::string>& rankings) {
  const int n = static_cast<int>(rankings.size());
  auto objects = default_object_names(n);
  auto findObject = [&](const std::string& name) {
    for (int j = 0; j < n; ++j)
      if (objects[static_cast<size_t>(j)] == name) return j;
    throw InputError("unknown object '" + name + "' in ranking");
  };
  std::vector<PreferenceOrder> orders;
  for (const auto& text : rankings) {
    std::vector<int> ranked;
    std::string token;
    for (char c : text) {
      if (c == '>') {
        ranked.push_back(findObject(token));
        token.clear();
      } else if (c != ' ') {
        token += c;
      }
    }
    if (!token.empty()) ranked.push_back(findObject(token));
    orders.emplace_back(std::move(ranked));
  }
  return PreferenceProfile(default_agent_names(n), std::move(objects), std::move(orders));
}

std::vector<PreferenceOrder> all_orders(int n) {
  std::vector<int> base(static_cast<size_t>(n));
  std::iota(base.begin(), base.end(), 0);
  std::vector<PreferenceOrder> out;
  do {
    out.emplace_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

std::vector<PreferenceProfile> all_profiles(int n) {
  auto orders = all_orders(n);
  const size_t k = orders.size();
  auto agents = default_agent_names(n);
  auto objects = default_object_names(n);
  std::vector<PreferenceProfile> out;
  std::vector<size_t> idx(static_cast<size_t>(n), 0);
  while (true) {
    std::vector<PreferenceOrder> chosen;
    chosen.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) chosen.push_back(orders[idx[static_cast<size_t>(i)]]);
    out.emplace_back(agents, objects, std::move(chosen));
    int pos = n - 1;
    while (pos >= 0) {
      if (++idx[static_cast<size_t>(pos)] < k) break;
      idx[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

}  // namespace axiomlab
