// Copyright 2026 The gamehard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Two-player Bayesian games, pure Bayes-Nash search, and the SET-COVER
// reduction with its brute-force oracle.

#ifndef GAMEHARD_BAYESIAN_HPP_
#define GAMEHARD_BAYESIAN_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gamehard/errors.hpp"
#include "gamehard/parallel.hpp"
#include "gamehard/rational.hpp"

namespace gamehard {

inline constexpr std::uint64_t kDefaultBneBound = 10'000'000;

class BayesianGame {
 public:
  // utilities[player][own type][a1][a2]; prior[t1][t2].
  BayesianGame(std::vector<std::vector<std::string>> types,
               std::vector<std::vector<Rational>> prior,
               std::vector<std::vector<std::string>> actions,
               std::vector<std::vector<std::vector<std::vector<Rational>>>>
                   utilities)
      : types_(std::move(types)),
        prior_(std::move(prior)),
        actions_(std::move(actions)),
        utilities_(std::move(utilities)) {
    if (types_.size() != 2 || actions_.size() != 2 || utilities_.size() != 2) {
      throw StructuralError("Bayesian games here have exactly 2 players");
    }
    for (std::size_t p = 0; p < 2; ++p) {
      if (types_[p].empty()) throw StructuralError("player without types");
      if (actions_[p].empty()) throw StructuralError("player without actions");
      if (utilities_[p].size() != types_[p].size()) {
        throw StructuralError("utility table type count");
      }
      for (const auto& by_type : utilities_[p]) {
        if (by_type.size() != actions_[0].size()) {
          throw StructuralError("utility table row count");
        }
        for (const auto& row : by_type) {
          if (row.size() != actions_[1].size()) {
            throw StructuralError("utility table column count");
          }
        }
      }
    }
    if (prior_.size() != types_[0].size()) throw StructuralError("prior rows");
    Rational total(0);
    for (const auto& row : prior_) {
      if (row.size() != types_[1].size()) throw StructuralError("prior columns");
      for (const auto& q : row) {
        if (q.sign() < 0) throw DomainError("negative prior probability");
        total += q;
      }
    }
    if (total != Rational(1)) throw DomainError("prior does not sum to 1");
  }

  std::size_t num_types(std::size_t p) const { return types_.at(p).size(); }
  std::size_t num_actions(std::size_t p) const { return actions_.at(p).size(); }
  const std::vector<std::vector<std::string>>& types() const { return types_; }
  const std::vector<std::vector<std::string>>& actions() const {
    return actions_;
  }
  const std::vector<std::vector<Rational>>& prior() const { return prior_; }
  const Rational& prior(std::size_t t1, std::size_t t2) const {
    return prior_[t1][t2];
  }
  const Rational& utility(std::size_t player, std::size_t type, std::size_t a1,
                          std::size_t a2) const {
    return utilities_[player][type][a1][a2];
  }
  const std::vector<std::vector<std::vector<std::vector<Rational>>>>&
  utilities() const {
    return utilities_;
  }

 private:
  std::vector<std::vector<std::string>> types_;
  std::vector<std::vector<Rational>> prior_;
  std::vector<std::vector<std::string>> actions_;
  std::vector<std::vector<std::vector<std::vector<Rational>>>> utilities_;
};

// actions[player][type] = action index.
struct PureBayesianProfile {
  std::vector<std::vector<std::size_t>> actions;

  friend bool operator==(const PureBayesianProfile&,
                         const PureBayesianProfile&) = default;
};

namespace internal {
inline void check_profile(const BayesianGame& g, const PureBayesianProfile& p) {
  if (p.actions.size() != 2) throw StructuralError("profile player count");
  for (std::size_t pl = 0; pl < 2; ++pl) {
    if (p.actions[pl].size() != g.num_types(pl)) {
      throw StructuralError("profile must map every type");
    }
    for (auto a : p.actions[pl]) {
      if (a >= g.num_actions(pl)) throw StructuralError("action index");
    }
  }
}
}  // namespace internal

// Expected utility of `player` of type `type`, conditional on that type, when
// it plays `action` (default: its profile action) and the opponent follows
// the profile.
inline Rational interim_utility(const BayesianGame& g,
                                const PureBayesianProfile& p,
                                std::size_t player, std::size_t type,
                                std::optional<std::size_t> action = {}) {
  internal::check_profile(g, p);
  if (player > 1 || type >= g.num_types(player)) {
    throw StructuralError("player or type out of range");
  }
  const std::size_t own = action ? *action : p.actions[player][type];
  if (own >= g.num_actions(player)) throw StructuralError("action index");
  const std::size_t other = 1 - player;
  Rational mass(0), total(0);
  for (std::size_t t = 0; t < g.num_types(other); ++t) {
    const Rational& q = player == 0 ? g.prior(type, t) : g.prior(t, type);
    if (q.is_zero()) continue;
    const std::size_t opp = p.actions[other][t];
    const std::size_t a1 = player == 0 ? own : opp;
    const std::size_t a2 = player == 0 ? opp : own;
    mass += q;
    total += q * g.utility(player, type, a1, a2);
  }
  if (mass.is_zero()) {
    throw DomainError("type " + g.types()[player][type] +
                      " has zero probability");
  }
  return total / mass;
}

// True iff no (player, type) with positive probability has a strictly better
// action against the opponent's type-contingent play.
inline bool is_pure_bne(const BayesianGame& g, const PureBayesianProfile& p) {
  internal::check_profile(g, p);
  for (std::size_t pl = 0; pl < 2; ++pl) {
    for (std::size_t t = 0; t < g.num_types(pl); ++t) {
      Rational mass(0);
      for (std::size_t o = 0; o < g.num_types(1 - pl); ++o) {
        mass += pl == 0 ? g.prior(t, o) : g.prior(o, t);
      }
      if (mass.is_zero()) continue;
      const Rational cur = interim_utility(g, p, pl, t);
      for (std::size_t a = 0; a < g.num_actions(pl); ++a) {
        if (interim_utility(g, p, pl, t, a) > cur) return false;
      }
    }
  }
  return true;
}

// Exhaustive scan in canonical order: player 1's types first, then player
// 2's, each digit an action index, the last type varying fastest.
inline std::optional<PureBayesianProfile> find_pure_bne(
    const BayesianGame& g, std::uint64_t bound = kDefaultBneBound,
    int jobs = 1) {
  std::vector<std::size_t> radix;
  for (std::size_t pl = 0; pl < 2; ++pl) {
    for (std::size_t t = 0; t < g.num_types(pl); ++t) {
      radix.push_back(g.num_actions(pl));
    }
  }
  std::uint64_t count = 1;
  for (auto r : radix) {
    if (count > bound / r) {
      throw CapacityError("pure profile space exceeds bound " +
                          std::to_string(bound));
    }
    count *= r;
  }
  auto decode = [&](std::uint64_t idx) {
    PureBayesianProfile p;
    p.actions.resize(2);
    std::vector<std::size_t> digits(radix.size());
    for (std::size_t i = radix.size(); i-- > 0;) {
      digits[i] = idx % radix[i];
      idx /= radix[i];
    }
    std::size_t k = 0;
    for (std::size_t pl = 0; pl < 2; ++pl) {
      for (std::size_t t = 0; t < g.num_types(pl); ++t) {
        p.actions[pl].push_back(digits[k++]);
      }
    }
    return p;
  };
  auto hit = parallel_find_first(count, resolve_jobs(jobs), [&](std::uint64_t i) {
    return is_pure_bne(g, decode(i));
  });
  if (!hit) return std::nullopt;
  return decode(*hit);
}

struct SetCoverInstance {
  int n = 0;                             // ground set {1..n}
  std::vector<std::vector<int>> subsets; // 1-based elements
  int k = 0;
};

inline void validate(const SetCoverInstance& inst) {
  if (inst.n < 1) throw DomainError("ground set must be non-empty");
  const int m = static_cast<int>(inst.subsets.size());
  if (inst.k < 1 || inst.k > m) {
    throw DomainError("budget k must satisfy 1 <= k <= m");
  }
  std::vector<bool> covered(static_cast<std::size_t>(inst.n), false);
  for (const auto& s : inst.subsets) {
    for (int e : s) {
      if (e < 1 || e > inst.n) {
        throw DomainError("element " + std::to_string(e) + " out of range");
      }
      covered[static_cast<std::size_t>(e - 1)] = true;
    }
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
    throw DomainError("subsets do not cover the ground set");
  }
}

inline bool subset_contains(const std::vector<int>& s, int e) {
  return std::find(s.begin(), s.end(), e) != s.end();
}

// Actions S1..Sm then s1..sn, k types per player, uniform prior. Row
// player's payoffs (the column player's mirror them):
//   (Si, Sj) 1;  (Si, sj) 2 if sj in Si else 1;  (si, sj) -3k;
//   (sj, Si) -3k if sj in Si else 3.
inline BayesianGame build_setcover_game(const SetCoverInstance& inst) {
  validate(inst);
  const std::size_t m = inst.subsets.size();
  const auto n = static_cast<std::size_t>(inst.n);
  const auto k = static_cast<std::size_t>(inst.k);
  std::vector<std::string> actions, types;
  for (std::size_t i = 1; i <= m; ++i) actions.push_back("S" + std::to_string(i));
  for (std::size_t j = 1; j <= n; ++j) actions.push_back("s" + std::to_string(j));
  for (std::size_t t = 1; t <= k; ++t) types.push_back("t" + std::to_string(t));

  const long big = -3 * static_cast<long>(k);
  auto u = [&](std::size_t a, std::size_t b) -> Rational {
    const bool a_set = a < m, b_set = b < m;
    if (a_set && b_set) return Rational(1);
    if (a_set) {
      int elem = static_cast<int>(b - m + 1);
      return Rational(subset_contains(inst.subsets[a], elem) ? 2 : 1);
    }
    if (!b_set) return Rational(big);
    int elem = static_cast<int>(a - m + 1);
    return subset_contains(inst.subsets[b], elem) ? Rational(big) : Rational(3);
  };
  const std::size_t na = m + n;
  std::vector<std::vector<Rational>> u1(na, std::vector<Rational>(na));
  std::vector<std::vector<Rational>> u2(na, std::vector<Rational>(na));
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < na; ++b) {
      u1[a][b] = u(a, b);
      u2[a][b] = u(b, a);
    }
  }
  const Rational cell(1, static_cast<long>(k * k));
  std::vector<std::vector<Rational>> prior(k, std::vector<Rational>(k, cell));
  return BayesianGame({types, types}, std::move(prior), {actions, actions},
                      {std::vector(k, u1), std::vector(k, u2)});
}

// Type t_i plays S_{cover[i]} (cover is 1-based); unused types repeat the
// last chosen set.
inline PureBayesianProfile cover_to_profile(const SetCoverInstance& inst,
                                            const std::vector<int>& cover) {
  if (cover.empty()) throw DomainError("empty cover");
  PureBayesianProfile p;
  p.actions.resize(2);
  for (int t = 0; t < inst.k; ++t) {
    std::size_t c = static_cast<std::size_t>(
        cover[std::min<std::size_t>(static_cast<std::size_t>(t), cover.size() - 1)] - 1);
    p.actions[0].push_back(c);
    p.actions[1].push_back(c);
  }
  return p;
}

// Lexicographically first cover of size at most k, as sorted 1-based indices.
inline std::optional<std::vector<int>> solve_set_cover_bruteforce(
    const SetCoverInstance& inst, std::uint64_t bound = kDefaultBneBound) {
  validate(inst);
  const int m = static_cast<int>(inst.subsets.size());
  if (m > 62) throw CapacityError("too many subsets");
  // Sum of C(m, s) for s <= k.
  std::uint64_t work = 0, c = 1;
  for (int s = 0; s <= inst.k; ++s) {
    work += c;
    if (work > bound) throw CapacityError("too many candidate covers");
    c = c * static_cast<std::uint64_t>(m - s) / static_cast<std::uint64_t>(s + 1);
  }
  std::optional<std::vector<int>> best;
  std::vector<int> pick;
  auto covers = [&] {
    std::vector<bool> seen(static_cast<std::size_t>(inst.n), false);
    for (int i : pick) {
      for (int e : inst.subsets[static_cast<std::size_t>(i - 1)]) {
        seen[static_cast<std::size_t>(e - 1)] = true;
      }
    }
    return std::find(seen.begin(), seen.end(), false) == seen.end();
  };
  // Depth-first in lexicographic order; the first hit is the answer.
  auto dfs = [&](auto&& self, int next) -> bool {
    if (!pick.empty() && covers()) {
      best = pick;
      return true;
    }
    if (static_cast<int>(pick.size()) == inst.k) return false;
    for (int i = next; i <= m; ++i) {
      pick.push_back(i);
      if (self(self, i + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  dfs(dfs, 1);
  return best;
}

}  // namespace gamehard

#endif  // GAMEHARD_BAYESIAN_HPP_
