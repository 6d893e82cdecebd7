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

// Two-player stochastic games with deterministic transitions, played with
// invisible pure strategies (fixed action sequences).

#ifndef GAMEHARD_MARKOV_HPP_
#define GAMEHARD_MARKOV_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gamehard/discounted_value.hpp"
#include "gamehard/errors.hpp"
#include "gamehard/normal_form.hpp"
#include "gamehard/parallel.hpp"
#include "gamehard/rational.hpp"

namespace gamehard {

inline constexpr std::uint64_t kDefaultSequenceBound = 10'000;

class StochasticGame {
 public:
  StochasticGame() = default;
  // Every transition starts as a self-loop and every payoff as 0.
  StochasticGame(std::vector<std::string> states,
                 std::array<std::vector<std::string>, 2> actions,
                 DiscountRing ring)
      : states_(std::move(states)), actions_(std::move(actions)), ring_(ring) {
    if (states_.empty()) throw StructuralError("game needs a state");
    if (actions_[0].empty() || actions_[1].empty()) {
      throw StructuralError("each player needs an action");
    }
    const std::size_t cells = states_.size() * actions_[0].size() *
                              actions_[1].size();
    next_.resize(cells);
    for (std::size_t s = 0; s < states_.size(); ++s) {
      for (std::size_t k = 0; k < cells_per_state(); ++k) {
        next_[s * cells_per_state() + k] = s;
      }
    }
    payoff_.assign(cells, {DiscountedValue(ring_), DiscountedValue(ring_)});
  }

  std::size_t num_states() const { return states_.size(); }
  std::size_t num_actions(std::size_t p) const { return actions_.at(p).size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::array<std::vector<std::string>, 2>& actions() const {
    return actions_;
  }
  const DiscountRing& ring() const { return ring_; }
  const std::optional<std::size_t>& horizon() const { return horizon_; }
  void set_horizon(std::optional<std::size_t> t) { horizon_ = t; }

  std::size_t next(std::size_t s, std::size_t a1, std::size_t a2) const {
    return next_[index(s, a1, a2)];
  }
  const DiscountedValue& payoff(std::size_t player, std::size_t s,
                                std::size_t a1, std::size_t a2) const {
    return payoff_[index(s, a1, a2)][player];
  }
  void set_next(std::size_t s, std::size_t a1, std::size_t a2, std::size_t t) {
    if (t >= states_.size()) throw StructuralError("successor out of range");
    next_[index(s, a1, a2)] = t;
  }
  void set_payoff(std::size_t s, std::size_t a1, std::size_t a2,
                  DiscountedValue u1, DiscountedValue u2) {
    if (!(u1.ring() == ring_) || !(u2.ring() == ring_)) {
      throw StructuralError("payoff over a different discount ring");
    }
    payoff_[index(s, a1, a2)] = {std::move(u1), std::move(u2)};
  }

  std::optional<std::size_t> find_state(const std::string& s) const {
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i] == s) return i;
    }
    return std::nullopt;
  }
  std::optional<std::size_t> find_action(std::size_t p,
                                         const std::string& a) const {
    for (std::size_t i = 0; i < actions_[p].size(); ++i) {
      if (actions_[p][i] == a) return i;
    }
    return std::nullopt;
  }

  // The one-shot game played in state s.
  NormalFormGame stage_game(std::size_t s) const {
    std::vector<std::vector<Rational>> a(num_actions(0)), b(num_actions(0));
    for (std::size_t i = 0; i < num_actions(0); ++i) {
      for (std::size_t j = 0; j < num_actions(1); ++j) {
        const auto& u1 = payoff(0, s, i, j);
        const auto& u2 = payoff(1, s, i, j);
        if (!u1.is_constant() || !u2.is_constant()) {
          throw DomainError("stage payoffs depend on the discount factor");
        }
        a[i].push_back(u1.constant_term());
        b[i].push_back(u2.constant_term());
      }
    }
    return NormalFormGame::bimatrix(actions_[0], actions_[1], a, b);
  }

 private:
  std::size_t cells_per_state() const {
    return actions_[0].size() * actions_[1].size();
  }
  std::size_t index(std::size_t s, std::size_t a1, std::size_t a2) const {
    if (s >= states_.size() || a1 >= actions_[0].size() ||
        a2 >= actions_[1].size()) {
      throw StructuralError("state or action out of range");
    }
    return (s * actions_[0].size() + a1) * actions_[1].size() + a2;
  }

  std::vector<std::string> states_;
  std::array<std::vector<std::string>, 2> actions_;
  DiscountRing ring_;
  std::optional<std::size_t> horizon_;
  std::vector<std::size_t> next_;
  std::vector<std::array<DiscountedValue, 2>> payoff_;
};

// An eventually periodic action sequence: preamble, then the cycle repeated
// forever. Without a cycle it is a finite sequence.
struct ActionSequence {
  std::vector<std::size_t> preamble;
  std::vector<std::size_t> cycle;

  std::size_t at(std::size_t k) const {
    if (k < preamble.size()) return preamble[k];
    if (cycle.empty()) throw DomainError("finite sequence too short");
    return cycle[(k - preamble.size()) % cycle.size()];
  }
  // Position in the sequence's own finite description.
  std::size_t position(std::size_t k) const {
    if (k < preamble.size() || cycle.empty()) return k;
    return preamble.size() + (k - preamble.size()) % cycle.size();
  }
  bool covers(std::size_t t) const {
    return !cycle.empty() || preamble.size() >= t;
  }

  friend bool operator==(const ActionSequence&,
                         const ActionSequence&) = default;
};

using SequencePair = std::array<ActionSequence, 2>;
using ValuePair = std::array<DiscountedValue, 2>;

// Symmetric zero-sum cyclic tournament scaled by epsilon: u1(a_i, a_j) is
// +eps when (j - i) mod a > a/2, -eps when it is in (0, a/2), and for the
// antipodal pair of an even a, +eps iff i < j. Every action is beaten by some
// action, so there is no pure equilibrium.
inline std::vector<std::vector<int>> rps_signs(std::size_t a) {
  if (a < 3) throw DomainError("the tournament needs at least 3 actions");
  std::vector<std::vector<int>> s(a, std::vector<int>(a, 0));
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < a; ++j) {
      if (i == j) continue;
      const std::size_t d = (j + a - i) % a;
      if (2 * d > a) {
        s[i][j] = 1;
      } else if (2 * d < a) {
        s[i][j] = -1;
      } else {
        s[i][j] = i < j ? 1 : -1;
      }
    }
  }
  return s;
}

inline NormalFormGame rps_gadget(std::size_t a, const Rational& eps) {
  if (eps.sign() <= 0) throw DomainError("epsilon must be positive");
  auto s = rps_signs(a);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < a; ++i) labels.push_back("a" + std::to_string(i + 1));
  std::vector<std::vector<Rational>> u1(a), u2(a);
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < a; ++j) {
      u1[i].push_back(eps * Rational(s[i][j]));
      u2[i].push_back(-u1[i].back());
    }
  }
  return NormalFormGame::bimatrix(labels, labels, u1, u2);
}

namespace internal {
inline void check_sequence(const StochasticGame& g, std::size_t p,
                           const ActionSequence& s) {
  for (auto a : s.preamble) {
    if (a >= g.num_actions(p)) throw StructuralError("action index");
  }
  for (auto a : s.cycle) {
    if (a >= g.num_actions(p)) throw StructuralError("action index");
  }
}
}  // namespace internal

// Exact infinite discounted values. Simulates until the joint configuration
// (state, position in each sequence) repeats, then sums the geometric tail.
inline ValuePair evaluate_discounted(const StochasticGame& g,
                                     const SequencePair& seq,
                                     std::size_t start = 0) {
  if (seq[0].cycle.empty() || seq[1].cycle.empty()) {
    throw DomainError("infinite evaluation needs eventually periodic play");
  }
  internal::check_sequence(g, 0, seq[0]);
  internal::check_sequence(g, 1, seq[1]);
  const auto& ring = g.ring();
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t>
      seen;
  std::vector<ValuePair> stage;  // undiscounted payoffs per stage
  std::size_t s = start, k = 0;
  while (true) {
    auto key = std::make_tuple(s, seq[0].position(k), seq[1].position(k));
    if (seen.count(key)) break;
    seen.emplace(key, k);
    const auto a1 = seq[0].at(k), a2 = seq[1].at(k);
    stage.push_back({g.payoff(0, s, a1, a2), g.payoff(1, s, a1, a2)});
    s = g.next(s, a1, a2);
    ++k;
  }
  const std::size_t loop_start =
      seen.at({s, seq[0].position(k), seq[1].position(k)});
  const std::size_t loop_len = k - loop_start;
  const DiscountedValue delta = DiscountedValue::delta(ring);
  ValuePair prefix{DiscountedValue(ring), DiscountedValue(ring)};
  ValuePair loop = prefix;
  DiscountedValue w(ring, Rational(1));
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t p = 0; p < 2; ++p) {
      if (t < loop_start) {
        prefix[p] += stage[t][p] * w;
      } else {
        loop[p] += stage[t][p] * w;
      }
    }
    w *= delta;
  }
  // loop holds delta^a * (cycle sum); divide by 1 - delta^L.
  DiscountedValue denom =
      DiscountedValue(ring, Rational(1)) -
      DiscountedValue::delta_pow(ring, loop_len);
  bool loop_zero = loop[0].is_zero() && loop[1].is_zero();
  if (loop_zero) return prefix;
  DiscountedValue inv = denom.inverse();
  return {prefix[0] + loop[0] * inv, prefix[1] + loop[1] * inv};
}

// Sum over the first T stages of delta^t * u_t.
inline ValuePair evaluate_finite(const StochasticGame& g,
                                 const SequencePair& seq, std::size_t horizon,
                                 std::size_t start = 0) {
  for (std::size_t p = 0; p < 2; ++p) {
    if (!seq[p].covers(horizon)) {
      throw StructuralError("sequence shorter than the horizon");
    }
    internal::check_sequence(g, p, seq[p]);
  }
  const auto& ring = g.ring();
  const DiscountedValue delta = DiscountedValue::delta(ring);
  ValuePair total{DiscountedValue(ring), DiscountedValue(ring)};
  DiscountedValue w(ring, Rational(1));
  std::size_t s = start;
  for (std::size_t t = 0; t < horizon; ++t) {
    const auto a1 = seq[0].at(t), a2 = seq[1].at(t);
    total[0] += g.payoff(0, s, a1, a2) * w;
    total[1] += g.payoff(1, s, a1, a2) * w;
    s = g.next(s, a1, a2);
    w *= delta;
  }
  return total;
}

namespace internal {

// Best-response table for `deviator` against the opponent's fixed sequence
// over stages [from, to): V[t - from][s] = best discounted payoff from stage
// t in state s, with V at `to` given by `terminal`.
inline std::vector<std::vector<DiscountedValue>> best_response_table(
    const StochasticGame& g, const ActionSequence& opp, std::size_t deviator,
    std::size_t from, std::size_t to,
    const std::vector<DiscountedValue>& terminal) {
  const auto& ring = g.ring();
  const std::size_t S = g.num_states();
  std::vector<std::vector<DiscountedValue>> v(
      to - from + 1, std::vector<DiscountedValue>(S, DiscountedValue(ring)));
  v[to - from] = terminal;
  DiscountedValue w = DiscountedValue::delta_pow(ring, to);
  const DiscountedValue delta = DiscountedValue::delta(ring);
  const bool unit = ring.is_rational() && ring.constant == Rational(1);
  const DiscountedValue inv_delta = unit ? delta : delta.inverse();
  for (std::size_t t = to; t-- > from;) {
    w *= inv_delta;
    const std::size_t b = opp.at(t);
    for (std::size_t s = 0; s < S; ++s) {
      std::optional<DiscountedValue> best;
      for (std::size_t a = 0; a < g.num_actions(deviator); ++a) {
        const std::size_t a1 = deviator == 0 ? a : b;
        const std::size_t a2 = deviator == 0 ? b : a;
        DiscountedValue val = g.payoff(deviator, s, a1, a2) * w +
                              v[t + 1 - from][g.next(s, a1, a2)];
        if (!best || val > *best) best = std::move(val);
      }
      v[t - from][s] = std::move(*best);
    }
  }
  return v;
}

}  // namespace internal

// Best finite-horizon response value of `deviator` against the opponent's
// sequence minus its realized value; zero iff no profitable deviation.
inline DiscountedValue check_deviation_finite(const StochasticGame& g,
                                              const SequencePair& profile,
                                              std::size_t horizon,
                                              std::size_t deviator,
                                              std::size_t start = 0) {
  if (deviator > 1) throw StructuralError("deviator must be 0 or 1");
  const auto realized = evaluate_finite(g, profile, horizon, start);
  std::vector<DiscountedValue> zero(g.num_states(), DiscountedValue(g.ring()));
  auto table = internal::best_response_table(g, profile[1 - deviator],
                                             deviator, 0, horizon, zero);
  return table[0][start] - realized[deviator];
}

namespace internal {

// Stage payoffs times delta^t, scaled to integers by a common denominator.
struct ScaledTables {
  std::size_t horizon = 0, states = 0, n1 = 0, n2 = 0;
  std::vector<std::int64_t> pay[2];  // [(t * states + s) * n1 + a1) * n2 + a2]
  std::vector<std::size_t> next;     // [(s * n1 + a1) * n2 + a2]

  std::int64_t at(std::size_t p, std::size_t t, std::size_t s, std::size_t a1,
                  std::size_t a2) const {
    return pay[p][((t * states + s) * n1 + a1) * n2 + a2];
  }
  std::size_t step(std::size_t s, std::size_t a1, std::size_t a2) const {
    return next[(s * n1 + a1) * n2 + a2];
  }
};

inline ScaledTables scale_tables(const StochasticGame& g, std::size_t horizon) {
  if (!g.ring().is_rational()) {
    throw DomainError("finite search needs a rational discount");
  }
  ScaledTables t;
  t.horizon = horizon;
  t.states = g.num_states();
  t.n1 = g.num_actions(0);
  t.n2 = g.num_actions(1);
  const Rational q = g.ring().constant;
  std::vector<Rational> raw[2];
  mpz_class den = 1;
  Rational w(1);
  for (std::size_t k = 0; k < horizon; ++k) {
    for (std::size_t s = 0; s < t.states; ++s) {
      for (std::size_t a1 = 0; a1 < t.n1; ++a1) {
        for (std::size_t a2 = 0; a2 < t.n2; ++a2) {
          for (std::size_t p = 0; p < 2; ++p) {
            Rational v = g.payoff(p, s, a1, a2).constant_term() * w;
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(),
                    v.denominator().get_mpz_t());
            raw[p].push_back(std::move(v));
          }
        }
      }
    }
    w *= q;
  }
  // Keep every partial sum far from overflow.
  const mpz_class limit = mpz_class(1) << 40;
  for (std::size_t p = 0; p < 2; ++p) {
    for (const auto& v : raw[p]) {
      mpz_class x = v.numerator() * (den / v.denominator());
      if (abs(x) * static_cast<long>(horizon + 1) > limit) {
        throw CapacityError("payoffs too large for the finite search");
      }
      t.pay[p].push_back(x.get_si());
    }
  }
  for (std::size_t s = 0; s < t.states; ++s) {
    for (std::size_t a1 = 0; a1 < t.n1; ++a1) {
      for (std::size_t a2 = 0; a2 < t.n2; ++a2) {
        t.next.push_back(g.next(s, a1, a2));
      }
    }
  }
  return t;
}

inline std::vector<std::size_t> decode_sequence(std::uint64_t idx,
                                                std::size_t radix,
                                                std::size_t horizon) {
  std::vector<std::size_t> s(horizon);
  for (std::size_t t = horizon; t-- > 0;) {
    s[t] = idx % radix;
    idx /= radix;
  }
  return s;
}

}  // namespace internal

// Exhaustive pure-equilibrium search over all pairs of length-T sequences.
// Sequences are ordered lexicographically (stage 0 most significant) and the
// first equilibrium pair in (player 1, player 2) order is returned.
//
// For each player-1 sequence the player-2 best-response table is computed;
// only sequences that follow its argmax edges can be part of an
// equilibrium, and these are walked in lexicographic order and tested
// against player 1's precomputed best-response values.
inline std::optional<SequencePair> find_pure_ne_finite(
    const StochasticGame& g, std::size_t horizon,
    std::uint64_t bound = kDefaultSequenceBound, int jobs = 1,
    std::size_t start = 0) {
  std::uint64_t count[2] = {1, 1};
  for (std::size_t p = 0; p < 2; ++p) {
    for (std::size_t t = 0; t < horizon; ++t) {
      count[p] *= g.num_actions(p);
      if (count[p] > bound) {
        throw CapacityError("more than " + std::to_string(bound) +
                            " sequences per player");
      }
    }
  }
  const auto tab = internal::scale_tables(g, horizon);
  const std::size_t S = tab.states;
  using V = std::int64_t;

  // Best-response value of `dev` against opponent sequence `opp`, filling the
  // per-(stage, state) table.
  auto br_table = [&](std::size_t dev, const std::vector<std::size_t>& opp,
                      std::vector<V>& v) {
    const std::size_t na = dev == 0 ? tab.n1 : tab.n2;
    v.assign((horizon + 1) * S, 0);
    for (std::size_t t = horizon; t-- > 0;) {
      for (std::size_t s = 0; s < S; ++s) {
        V best = 0;
        for (std::size_t a = 0; a < na; ++a) {
          const std::size_t a1 = dev == 0 ? a : opp[t];
          const std::size_t a2 = dev == 0 ? opp[t] : a;
          V val = tab.at(dev, t, s, a1, a2) +
                  v[(t + 1) * S + tab.step(s, a1, a2)];
          if (a == 0 || val > best) best = val;
        }
        v[t * S + s] = best;
      }
    }
  };

  const unsigned workers = resolve_jobs(jobs);
  // Player 1's best value against each player-2 sequence.
  std::vector<V> br1(count[1]);
  parallel_chunks(count[1], workers,
                  [&](unsigned, std::uint64_t b, std::uint64_t e) {
                    std::vector<V> v;
                    for (std::uint64_t i = b; i < e; ++i) {
                      br_table(0, internal::decode_sequence(i, tab.n2, horizon),
                               v);
                      br1[i] = v[start];
                    }
                  });

  std::vector<std::optional<std::uint64_t>> partner(count[0]);
  auto hit = parallel_find_first(count[0], workers, [&](std::uint64_t i) {
    const auto s1 = internal::decode_sequence(i, tab.n1, horizon);
    std::vector<V> v;
    br_table(1, s1, v);
    // Depth-first over player-2 sequences that stay on argmax edges.
    std::optional<std::uint64_t> found;
    auto dfs = [&](auto&& self, std::size_t t, std::size_t s, V u1,
                   std::uint64_t idx) -> bool {
      if (t == horizon) {
        if (u1 == br1[idx]) {
          found = idx;
          return true;
        }
        return false;
      }
      for (std::size_t a2 = 0; a2 < tab.n2; ++a2) {
        const std::size_t ns = tab.step(s, s1[t], a2);
        if (tab.at(1, t, s, s1[t], a2) + v[(t + 1) * S + ns] != v[t * S + s]) {
          continue;
        }
        if (self(self, t + 1, ns, u1 + tab.at(0, t, s, s1[t], a2),
                 idx * tab.n2 + a2)) {
          return true;
        }
      }
      return false;
    };
    dfs(dfs, 0, start, 0, 0);
    partner[i] = found;
    return found.has_value();
  });
  if (!hit) return std::nullopt;
  SequencePair out;
  out[0].preamble = internal::decode_sequence(*hit, tab.n1, horizon);
  out[1].preamble = internal::decode_sequence(*partner[*hit], tab.n2, horizon);
  // Independent exact confirmation of the witness.
  for (std::size_t p = 0; p < 2; ++p) {
    if (!check_deviation_finite(g, out, horizon, p, start).is_zero()) {
      throw InconsistencyError("finite search returned a non-equilibrium");
    }
  }
  return out;
}

// Largest payoff (or largest loss, for `lower`) `player` can meet in any
// state reachable from each state, clipped at 0.
inline std::vector<DiscountedValue> reachable_payoff_bound(
    const StochasticGame& g, std::size_t player, bool lower) {
  const std::size_t S = g.num_states();
  std::vector<DiscountedValue> local(S, DiscountedValue(g.ring()));
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a1 = 0; a1 < g.num_actions(0); ++a1) {
      for (std::size_t a2 = 0; a2 < g.num_actions(1); ++a2) {
        DiscountedValue u = g.payoff(player, s, a1, a2);
        if (lower) u = -u;
        if (u > local[s]) local[s] = u;
      }
    }
  }
  std::vector<DiscountedValue> out(S, DiscountedValue(g.ring()));
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<bool> seen(S, false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      if (local[x] > out[s]) out[s] = local[x];
      for (std::size_t a1 = 0; a1 < g.num_actions(0); ++a1) {
        for (std::size_t a2 = 0; a2 < g.num_actions(1); ++a2) {
          std::size_t y = g.next(x, a1, a2);
          if (!seen[y]) {
            seen[y] = true;
            stack.push_back(y);
          }
        }
      }
    }
  }
  return out;
}

struct InfiniteCheck {
  bool certified = false;
  std::size_t window = 0, horizon = 0;
  std::uint64_t prefixes = 0;       // deviation prefixes examined
  std::uint64_t departing = 0;      // prefixes not returning to the start
  DiscountedValue worst;            // largest certified bound on the gain
  std::vector<std::size_t> worst_prefix;
};

// Certifies that `deviator` has no profitable deviation from a profile of
// pure cycles in an infinite discounted game.
//
// Every deviation is cut into its first `window` stages and the rest. If the
// prefix brings the play back to the start state, then, since the window is
// a multiple of both cycle lengths, the remaining game is the original one
// shifted by `window` stages, so it suffices that the prefix's own gain is
// <= 0. Otherwise the deviation's value is bounded above by the prefix
// payoff, the best continuation up to `horizon` and, beyond it, the largest
// payoff reachable from the state reached, summed geometrically; that bound
// minus the realized value must be <= 0. Signs are decided exactly.
inline InfiniteCheck certify_no_deviation(const StochasticGame& g,
                                          const SequencePair& profile,
                                          std::size_t deviator,
                                          std::size_t window,
                                          std::size_t horizon,
                                          std::size_t start = 0) {
  if (deviator > 1) throw StructuralError("deviator must be 0 or 1");
  for (const auto& s : profile) {
    if (!s.preamble.empty() || s.cycle.empty()) {
      throw DomainError("certificate needs pure cycles");
    }
    if (window % s.cycle.size() != 0) {
      throw DomainError("window must be a multiple of every cycle length");
    }
  }
  if (window == 0 || horizon < window) {
    throw DomainError("need 0 < window <= horizon");
  }
  const auto& ring = g.ring();
  {
    std::size_t s = start;
    for (std::size_t t = 0; t < window; ++t) {
      s = g.next(s, profile[0].at(t), profile[1].at(t));
    }
    if (s != start) throw DomainError("profile does not return to the start");
  }
  const DiscountedValue realized = evaluate_discounted(g, profile, start)[deviator];
  const DiscountedValue tail_w =
      DiscountedValue::delta_pow(ring, horizon) *
      (DiscountedValue(ring, Rational(1)) - DiscountedValue::delta(ring))
          .inverse();
  auto ubound = reachable_payoff_bound(g, deviator, false);
  for (auto& u : ubound) u = u * tail_w;
  const auto& opp = profile[1 - deviator];
  auto table =
      internal::best_response_table(g, opp, deviator, window, horizon, ubound);

  // Profile payoff of the deviator over the window.
  DiscountedValue window_realized(ring);
  {
    std::size_t s = start;
    DiscountedValue w(ring, Rational(1));
    const DiscountedValue delta = DiscountedValue::delta(ring);
    for (std::size_t t = 0; t < window; ++t) {
      const auto a1 = profile[0].at(t), a2 = profile[1].at(t);
      window_realized += g.payoff(deviator, s, a1, a2) * w;
      s = g.next(s, a1, a2);
      w *= delta;
    }
  }

  InfiniteCheck out;
  out.window = window;
  out.horizon = horizon;
  out.certified = true;
  bool have_worst = false;
  std::vector<std::size_t> prefix;
  const DiscountedValue delta = DiscountedValue::delta(ring);
  auto dfs = [&](auto&& self, std::size_t t, std::size_t s,
                 const DiscountedValue& acc, const DiscountedValue& w) -> void {
    if (t == window) {
      ++out.prefixes;
      DiscountedValue gain(ring);
      if (s == start) {
        gain = acc - window_realized;
      } else {
        ++out.departing;
        gain = acc + table[0][s] - realized;
      }
      if (gain.sign() > 0) out.certified = false;
      if (!have_worst || gain > out.worst) {
        out.worst = gain;
        out.worst_prefix = prefix;
        have_worst = true;
      }
      return;
    }
    const std::size_t b = opp.at(t);
    for (std::size_t a = 0; a < g.num_actions(deviator); ++a) {
      const std::size_t a1 = deviator == 0 ? a : b;
      const std::size_t a2 = deviator == 0 ? b : a;
      prefix.push_back(a);
      self(self, t + 1, g.next(s, a1, a2),
           acc + g.payoff(deviator, s, a1, a2) * w, w * delta);
      prefix.pop_back();
    }
  };
  dfs(dfs, 0, start, DiscountedValue(ring), DiscountedValue(ring, Rational(1)));
  return out;
}

struct ProfitableDeviation {
  std::vector<std::size_t> prefix;  // deviator's actions up to the horizon
  DiscountedValue gain_lower_bound;
};

// Searches for a deviation by `deviator` with certified positive gain: a
// prefix of at most `window` stages, the best continuation up to `horizon`,
// and beyond it the worst reachable payoff summed geometrically. Returns the
// first such deviation in lexicographic prefix order.
inline std::optional<ProfitableDeviation> find_profitable_deviation(
    const StochasticGame& g, const SequencePair& profile, std::size_t deviator,
    std::size_t window, std::size_t horizon, std::size_t start = 0) {
  if (deviator > 1) throw StructuralError("deviator must be 0 or 1");
  if (horizon < window) throw DomainError("need window <= horizon");
  const auto& ring = g.ring();
  const DiscountedValue realized = evaluate_discounted(g, profile, start)[deviator];
  const DiscountedValue tail_w =
      DiscountedValue::delta_pow(ring, horizon) *
      (DiscountedValue(ring, Rational(1)) - DiscountedValue::delta(ring))
          .inverse();
  auto lbound = reachable_payoff_bound(g, deviator, true);
  for (auto& u : lbound) u = -(u * tail_w);
  const auto& opp = profile[1 - deviator];
  auto table =
      internal::best_response_table(g, opp, deviator, window, horizon, lbound);
  const DiscountedValue delta = DiscountedValue::delta(ring);

  std::optional<ProfitableDeviation> found;
  std::vector<std::size_t> prefix;
  auto dfs = [&](auto&& self, std::size_t t, std::size_t s,
                 const DiscountedValue& acc, const DiscountedValue& w) -> bool {
    if (t == window) {
      DiscountedValue gain = acc + table[0][s] - realized;
      if (gain.sign() <= 0) return false;
      // Extend the prefix with the continuation's argmax actions.
      ProfitableDeviation d{prefix, gain};
      std::size_t st = s;
      DiscountedValue ww = w;
      for (std::size_t k = window; k < horizon; ++k) {
        const std::size_t b = opp.at(k);
        for (std::size_t a = 0; a < g.num_actions(deviator); ++a) {
          const std::size_t a1 = deviator == 0 ? a : b;
          const std::size_t a2 = deviator == 0 ? b : a;
          const std::size_t ns = g.next(st, a1, a2);
          // Values in the ring have a unique reduced form, so ties compare
          // structurally.
          if (g.payoff(deviator, st, a1, a2) * ww + table[k + 1 - window][ns] ==
              table[k - window][st]) {
            d.prefix.push_back(a);
            st = ns;
            break;
          }
        }
        ww *= delta;
      }
      found = std::move(d);
      return true;
    }
    const std::size_t b = opp.at(t);
    for (std::size_t a = 0; a < g.num_actions(deviator); ++a) {
      const std::size_t a1 = deviator == 0 ? a : b;
      const std::size_t a2 = deviator == 0 ? b : a;
      prefix.push_back(a);
      if (self(self, t + 1, g.next(s, a1, a2),
               acc + g.payoff(deviator, s, a1, a2) * w, w * delta)) {
        return true;
      }
      prefix.pop_back();
    }
    return false;
  };
  dfs(dfs, 0, start, DiscountedValue(ring), DiscountedValue(ring, Rational(1)));
  return found;
}

}  // namespace gamehard

#endif  // GAMEHARD_MARKOV_HPP_
