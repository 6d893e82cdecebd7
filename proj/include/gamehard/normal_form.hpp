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

// Finite normal-form games with exact rational payoffs, mixed profiles and
// Nash-equilibrium verification. Every comparison here is exact.

#ifndef GAMEHARD_NORMAL_FORM_HPP_
#define GAMEHARD_NORMAL_FORM_HPP_

#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gamehard/errors.hpp"
#include "gamehard/rational.hpp"
#include "gamehard/simplex.hpp"

namespace gamehard {

using PureProfile = std::vector<std::size_t>;
using Utilities = std::vector<Rational>;

// A game with per-player strategy labels and a dense payoff tensor. Cell
// (s_0, ..., s_{P-1}) is stored at the row-major flattened index, and holds
// one utility per player.
class NormalFormGame {
 public:
  NormalFormGame() = default;

  // Builds an all-zero game.
  explicit NormalFormGame(std::vector<std::vector<std::string>> labels)
      : labels_(std::move(labels)) {
    if (labels_.size() < 2) throw StructuralError("need at least 2 players");
    std::size_t cells = 1;
    for (const auto& l : labels_) {
      if (l.empty()) throw StructuralError("player without strategies");
      cells *= l.size();
    }
    payoffs_.assign(cells, Utilities(labels_.size(), Rational(0)));
  }

  // Two-player convenience constructor from payoff matrices [i][j].
  static NormalFormGame bimatrix(
      std::vector<std::string> rows, std::vector<std::string> cols,
      const std::vector<std::vector<Rational>>& row_payoff,
      const std::vector<std::vector<Rational>>& col_payoff) {
    NormalFormGame g({std::move(rows), std::move(cols)});
    if (row_payoff.size() != g.num_strategies(0) ||
        col_payoff.size() != g.num_strategies(0)) {
      throw StructuralError("payoff matrix row count");
    }
    for (std::size_t i = 0; i < g.num_strategies(0); ++i) {
      if (row_payoff[i].size() != g.num_strategies(1) ||
          col_payoff[i].size() != g.num_strategies(1)) {
        throw StructuralError("payoff matrix column count");
      }
      for (std::size_t j = 0; j < g.num_strategies(1); ++j) {
        g.set_payoff({i, j}, {row_payoff[i][j], col_payoff[i][j]});
      }
    }
    return g;
  }

  std::size_t num_players() const { return labels_.size(); }
  std::size_t num_strategies(std::size_t player) const {
    return labels_.at(player).size();
  }
  const std::vector<std::vector<std::string>>& labels() const {
    return labels_;
  }
  const std::string& label(std::size_t player, std::size_t s) const {
    return labels_.at(player).at(s);
  }
  std::optional<std::size_t> find_strategy(std::size_t player,
                                           const std::string& label) const {
    const auto& l = labels_.at(player);
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (l[i] == label) return i;
    }
    return std::nullopt;
  }

  const Utilities& payoff(const PureProfile& p) const {
    return payoffs_[flatten(p)];
  }
  const Rational& payoff(std::size_t player, const PureProfile& p) const {
    return payoffs_[flatten(p)][player];
  }
  // Two-player fast accessor.
  const Rational& payoff2(std::size_t player, std::size_t i,
                          std::size_t j) const {
    return payoffs_[i * labels_[1].size() + j][player];
  }
  void set_payoff(const PureProfile& p, Utilities u) {
    if (u.size() != num_players()) throw StructuralError("utility width");
    payoffs_[flatten(p)] = std::move(u);
  }

  std::size_t num_cells() const { return payoffs_.size(); }
  const Utilities& cell(std::size_t flat) const { return payoffs_[flat]; }

  friend bool operator==(const NormalFormGame&,
                         const NormalFormGame&) = default;

 private:
  std::size_t flatten(const PureProfile& p) const {
    if (p.size() != labels_.size()) throw StructuralError("profile width");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] >= labels_[i].size()) throw StructuralError("strategy index");
      idx = idx * labels_[i].size() + p[i];
    }
    return idx;
  }

  std::vector<std::vector<std::string>> labels_;
  std::vector<Utilities> payoffs_;
};

// One probability vector per player.
class MixedProfile {
 public:
  MixedProfile() = default;
  explicit MixedProfile(std::vector<std::vector<Rational>> probs)
      : probs_(std::move(probs)) {
    for (const auto& p : probs_) {
      Rational total(0);
      bool positive = false;
      for (const auto& x : p) {
        if (x.sign() < 0) throw DomainError("negative probability");
        if (x.sign() > 0) positive = true;
        total += x;
      }
      if (total != Rational(1)) throw DomainError("probabilities must sum to 1");
      if (!positive) throw DomainError("empty support");
    }
  }

  static MixedProfile pure(const std::vector<std::size_t>& counts,
                           const PureProfile& choice) {
    std::vector<std::vector<Rational>> probs;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      std::vector<Rational> p(counts[i], Rational(0));
      p.at(choice.at(i)) = Rational(1);
      probs.push_back(std::move(p));
    }
    return MixedProfile(std::move(probs));
  }

  std::size_t num_players() const { return probs_.size(); }
  const std::vector<Rational>& player(std::size_t i) const {
    return probs_.at(i);
  }
  const std::vector<std::vector<Rational>>& probabilities() const {
    return probs_;
  }
  std::vector<std::size_t> support(std::size_t i) const {
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < probs_[i].size(); ++k) {
      if (probs_[i][k].sign() > 0) s.push_back(k);
    }
    return s;
  }
  bool is_pure() const {
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      if (support(i).size() != 1) return false;
    }
    return true;
  }

  friend bool operator==(const MixedProfile&, const MixedProfile&) = default;
  friend auto operator<=>(const MixedProfile& a, const MixedProfile& b) {
    return a.probs_ <=> b.probs_;
  }

 private:
  std::vector<std::vector<Rational>> probs_;
};

namespace internal {

inline void check_dims(const NormalFormGame& g, const MixedProfile& p) {
  if (p.num_players() != g.num_players()) {
    throw StructuralError("profile has " + std::to_string(p.num_players()) +
                          " players, game has " +
                          std::to_string(g.num_players()));
  }
  for (std::size_t i = 0; i < g.num_players(); ++i) {
    if (p.player(i).size() != g.num_strategies(i)) {
      throw StructuralError("profile width mismatch for player " +
                            std::to_string(i));
    }
  }
}

}  // namespace internal

// Expected utility of every player when strategies are drawn independently.
inline Utilities expected_utility(const NormalFormGame& g,
                                  const MixedProfile& p) {
  internal::check_dims(g, p);
  const std::size_t players = g.num_players();
  Utilities out(players, Rational(0));
  PureProfile cur(players, 0);
  // Odometer over pure profiles with positive probability only.
  std::vector<std::vector<std::size_t>> supp(players);
  for (std::size_t i = 0; i < players; ++i) supp[i] = p.support(i);
  std::vector<std::size_t> pos(players, 0);
  while (true) {
    Rational w(1);
    for (std::size_t i = 0; i < players; ++i) {
      cur[i] = supp[i][pos[i]];
      w *= p.player(i)[cur[i]];
    }
    const auto& u = g.payoff(cur);
    for (std::size_t i = 0; i < players; ++i) out[i] += w * u[i];
    std::size_t k = players;
    while (k > 0 && ++pos[k - 1] == supp[k - 1].size()) pos[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

// Expected utility of `player` switching to pure strategy `s` while everyone
// else keeps their mix.
inline Rational deviation_utility(const NormalFormGame& g,
                                  const MixedProfile& p, std::size_t player,
                                  std::size_t s) {
  std::vector<std::vector<Rational>> probs = p.probabilities();
  probs[player].assign(g.num_strategies(player), Rational(0));
  probs[player][s] = Rational(1);
  return expected_utility(g, MixedProfile(std::move(probs)))[player];
}

inline Rational social_welfare(const NormalFormGame& g, const MixedProfile& p) {
  Rational total(0);
  for (const auto& u : expected_utility(g, p)) total += u;
  return total;
}

struct Deviation {
  std::size_t player = 0;
  std::size_t strategy = 0;
  Rational slack;  // realized minus deviation utility; negative here
};

struct EquilibriumCertificate {
  MixedProfile profile;
  Utilities realized;
  // slack[player][s] = realized[player] - utility of pure s against the rest.
  std::vector<std::vector<Rational>> slack;
  bool accepted = false;
  // The most profitable pure deviation when rejected (first by player, then
  // lowest slack, then lowest index).
  std::optional<Deviation> witness;
};

// Checks every pure unilateral deviation exactly.
inline EquilibriumCertificate verify_nash(const NormalFormGame& g,
                                          const MixedProfile& p) {
  internal::check_dims(g, p);
  EquilibriumCertificate cert;
  cert.profile = p;
  cert.realized = expected_utility(g, p);
  cert.accepted = true;
  for (std::size_t player = 0; player < g.num_players(); ++player) {
    std::vector<Rational> slack(g.num_strategies(player));
    for (std::size_t s = 0; s < slack.size(); ++s) {
      slack[s] = cert.realized[player] - deviation_utility(g, p, player, s);
      if (slack[s].sign() < 0) {
        cert.accepted = false;
        if (!cert.witness ||
            (cert.witness->player == player && slack[s] < cert.witness->slack)) {
          cert.witness = Deviation{player, s, slack[s]};
        }
      }
    }
    cert.slack.push_back(std::move(slack));
  }
  return cert;
}

// u1(a, b) == u2(b, a) for every pure pair.
inline bool is_symmetric(const NormalFormGame& g) {
  if (g.num_players() != 2) throw StructuralError("symmetry needs 2 players");
  const std::size_t n = g.num_strategies(0);
  if (g.num_strategies(1) != n) {
    throw StructuralError("symmetry needs equal strategy counts");
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (g.payoff2(0, a, b) != g.payoff2(1, b, a)) return false;
    }
  }
  return true;
}

// True iff no distribution over outcome cells gives every player at least
// `values` with one player strictly more. Solved as
//   max total utility  s.t.  E[u_i] >= values_i,  distribution over cells;
// the vector is Pareto-optimal iff the optimum equals sum(values).
inline bool pareto_optimal(const NormalFormGame& g, const Utilities& values) {
  if (values.size() != g.num_players()) throw StructuralError("value width");
  const std::size_t cells = g.num_cells();
  std::vector<Rational> objective(cells, Rational(0));
  std::vector<lp::Constraint> cons;
  lp::Constraint simplex{std::vector<Rational>(cells, Rational(1)),
                         lp::Sense::kEqual, Rational(1)};
  cons.push_back(simplex);
  for (std::size_t i = 0; i < g.num_players(); ++i) {
    lp::Constraint c{std::vector<Rational>(cells), lp::Sense::kGreaterEqual,
                     values[i]};
    for (std::size_t k = 0; k < cells; ++k) c.coeffs[k] = g.cell(k)[i];
    cons.push_back(std::move(c));
  }
  for (std::size_t k = 0; k < cells; ++k) {
    for (const auto& u : g.cell(k)) objective[k] += u;
  }
  auto res = lp::maximize(objective, cons);
  if (res.status != lp::Status::kOptimal) {
    throw DomainError("utility vector is not achievable by any outcome mix");
  }
  Rational total(0);
  for (const auto& v : values) total += v;
  return res.value == total;
}

}  // namespace gamehard

#endif  // GAMEHARD_NORMAL_FORM_HPP_
