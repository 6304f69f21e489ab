#include "axiomlab/mechanisms.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "axiomlab/errors.hpp"

namespace axiomlab {

Assignment rsd(const PreferenceProfile& profile) {
  const int n = profile.size();
  if (n > 6) throw CapacityError("rsd enumerates n! priority orders; n <= 6 required");
  std::vector<int> priority(static_cast<size_t>(n));
  std::iota(priority.begin(), priority.end(), 0);
  // Integer counts per cell; dividing by n! at the end keeps everything exact.
  std::vector<std::vector<long>> counts(static_cast<size_t>(n),
                                        std::vector<long>(static_cast<size_t>(n), 0));
  long orders = 0;
  do {
    ++orders;
    std::vector<bool> taken(static_cast<size_t>(n), false);
    for (int turn = 0; turn < n; ++turn) {
      const int agent = priority[static_cast<size_t>(turn)];
      for (int r = 0; r < n; ++r) {
        const int obj = profile.order(agent).at(r);
        if (!taken[static_cast<size_t>(obj)]) {
          taken[static_cast<size_t>(obj)] = true;
          ++counts[static_cast<size_t>(agent)][static_cast<size_t>(obj)];
          break;
        }
      }
    }
  } while (std::next_permutation(priority.begin(), priority.end()));
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = Rational(counts[static_cast<size_t>(i)][static_cast<size_t>(j)], orders);
  return Assignment(std::move(m));
}

Assignment ps(const PreferenceProfile& profile) {
  const int n = profile.size();
  std::vector<Rational> supply(static_cast<size_t>(n), Rational(1));
  RatMatrix eaten(n, n);
  eaten.setConstant(Rational(0));
  Rational clock(0);
  const Rational one(1);
  while (clock < one) {
    // Every agent eats its favorite object that still has supply.
    std::vector<int> eating(static_cast<size_t>(n), -1);
    std::vector<int> eaters(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      for (int r = 0; r < n; ++r) {
        const int obj = profile.order(i).at(r);
        if (supply[static_cast<size_t>(obj)].sign() > 0) {
          eating[static_cast<size_t>(i)] = obj;
          ++eaters[static_cast<size_t>(obj)];
          break;
        }
      }
    }
    // Advance to the earliest exhaustion; total rate n over total supply
    // n*(1-t) guarantees this lands no later than time 1.
    Rational delta(0);
    bool first = true;
    for (int j = 0; j < n; ++j) {
      if (eaters[static_cast<size_t>(j)] == 0) continue;
      Rational d = supply[static_cast<size_t>(j)] / Rational(eaters[static_cast<size_t>(j)]);
      if (first || d < delta) {
        delta = d;
        first = false;
      }
    }
    if (first) throw Error("internal: eating stalled before time 1");
    for (int i = 0; i < n; ++i) {
      const int obj = eating[static_cast<size_t>(i)];
      eaten(i, obj) += delta;
      supply[static_cast<size_t>(obj)] -= delta;
    }
    clock += delta;
  }
  return Assignment(std::move(eaten));
}

TableMechanism::TableMechanism(std::vector<std::pair<PreferenceProfile, Assignment>> rows,
                               std::string name)
    : name_(std::move(name)) {
  for (auto& [p, a] : rows) {
    if (a.size() != p.size()) throw InputError("table matrix size does not match its profile");
    auto [it, inserted] = table_.emplace(p.key(), std::move(a));
    (void)it;
    if (!inserted) throw InputError("duplicate profile in table");
    domain_.push_back(std::move(p));
  }
}

bool TableMechanism::contains(const PreferenceProfile& profile) const {
  return table_.count(profile.key()) > 0;
}

Assignment TableMechanism::evaluate(const PreferenceProfile& profile) const {
  auto it = table_.find(profile.key());
  if (it == table_.end())
    throw DomainError("profile outside the table mechanism's domain");
  return it->second;
}

void TableMechanism::put(const PreferenceProfile& profile, Assignment a) {
  auto it = table_.find(profile.key());
  if (it == table_.end()) throw DomainError("profile outside the table mechanism's domain");
  it->second = std::move(a);
}

Assignment convex_combination(const std::vector<std::vector<int>>& permutations,
                              const std::vector<Rational>& weights) {
  if (permutations.empty() || permutations.size() != weights.size())
    throw InputError("convex combination needs matching permutations and weights");
  const int n = static_cast<int>(permutations.front().size());
  Rational total(0);
  for (const auto& w : weights) {
    if (w.sign() <= 0) throw InputError("convex combination weights must be positive");
    total += w;
  }
  if (total != Rational(1)) throw InputError("convex combination weights must sum to 1");
  RatMatrix m(n, n);
  m.setConstant(Rational(0));
  for (size_t k = 0; k < permutations.size(); ++k)
    for (int i = 0; i < n; ++i)
      m(i, permutations[k][static_cast<size_t>(i)]) += weights[k];
  return Assignment(std::move(m));
}

TableMechanism random_table(int n, const std::vector<PreferenceProfile>& profiles,
                            std::uint64_t seed) {
  if (n < 2) throw InputError("random_table requires n >= 2");
  std::mt19937_64 rng(seed);
  // Explicit modulo reduction and Fisher-Yates keep the stream identical
  // across standard libraries.
  auto below = [&rng](std::uint64_t bound) { return rng() % bound; };
  std::vector<std::pair<PreferenceProfile, Assignment>> rows;
  rows.reserve(profiles.size());
  for (const auto& p : profiles) {
    if (p.size() != n) throw InputError("random_table profile of the wrong size");
    const int k = 1 + static_cast<int>(below(static_cast<std::uint64_t>(n) + 1));
    std::vector<std::vector<int>> perms;
    std::vector<long> rawWeights;
    long total = 0;
    for (int t = 0; t < k; ++t) {
      std::vector<int> perm(static_cast<size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = n - 1; i > 0; --i) {
        const int r = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(r)]);
      }
      perms.push_back(std::move(perm));
      const long w = 1 + static_cast<long>(below(12));
      rawWeights.push_back(w);
      total += w;
    }
    std::vector<Rational> weights;
    weights.reserve(rawWeights.size());
    for (long w : rawWeights) weights.emplace_back(w, total);
    rows.emplace_back(p, convex_combination(perms, weights));
  }
  return TableMechanism(std::move(rows), "random-table");
}

}  // namespace axiomlab
