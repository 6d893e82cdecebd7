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

// The symmetric game G(phi) built from a CNF formula, the maps between its
// equilibria and satisfying assignments, and equilibrium queries.
//
// Strategies, for a formula over x1..xn with clauses c1..cm:
//   x1, -x1, ..., xn, -xn   literals
//   v1, ..., vn             variables
//   c1, ..., cm             clauses, in input order
//   f
// Row player's payoff u1(a, b); the column player's is u2(a, b) = u1(b, a).
//   literal l   vs literal l':   1, or -2 when l' = -l
//   variable v  vs literal l:    2, or 2-n when l is over v
//   clause c    vs literal l:    2, or 2-n when l is in c
//   any of the above vs a non-literal: -2
//   f vs f: 0;  f vs anything else: 1

#ifndef GAMEHARD_GPHI_HPP_
#define GAMEHARD_GPHI_HPP_

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gamehard/cnf.hpp"
#include "gamehard/enumerate.hpp"
#include "gamehard/errors.hpp"
#include "gamehard/normal_form.hpp"

namespace gamehard {

struct Role {
  enum class Kind { kLiteral, kVariable, kClause, kF };
  Kind kind = Kind::kF;
  // Signed literal, 1-based variable, or 0-based clause index.
  int value = 0;

  friend bool operator==(const Role&, const Role&) = default;
};

inline std::string role_name(const Role& r) {
  switch (r.kind) {
    case Role::Kind::kLiteral:
      return "literal";
    case Role::Kind::kVariable:
      return "variable";
    case Role::Kind::kClause:
      return "clause";
    case Role::Kind::kF:
      return "f";
  }
  return "f";
}

class GphiGame {
 public:
  GphiGame(NormalFormGame game, std::vector<Role> roles, CnfFormula formula)
      : game_(std::move(game)),
        roles_(std::move(roles)),
        formula_(std::move(formula)) {}

  const NormalFormGame& game() const { return game_; }
  const std::vector<Role>& roles() const { return roles_; }
  const CnfFormula& formula() const { return formula_; }
  std::size_t num_strategies() const { return roles_.size(); }

  std::size_t literal_index(Literal l) const {
    return 2 * static_cast<std::size_t>(std::abs(l) - 1) + (l < 0 ? 1 : 0);
  }
  std::size_t f_index() const { return roles_.size() - 1; }

 private:
  NormalFormGame game_;
  std::vector<Role> roles_;
  CnfFormula formula_;
};

inline std::string strategy_label(const Role& r) {
  switch (r.kind) {
    case Role::Kind::kLiteral:
      return (r.value < 0 ? "-x" : "x") + std::to_string(std::abs(r.value));
    case Role::Kind::kVariable:
      return "v" + std::to_string(r.value);
    case Role::Kind::kClause:
      return "c" + std::to_string(r.value + 1);
    case Role::Kind::kF:
      return "f";
  }
  return "f";
}

// Row player's payoff when playing `a` against `b`.
inline Rational gphi_payoff(const CnfFormula& phi, const Role& a,
                            const Role& b) {
  using K = Role::Kind;
  const int n = phi.num_variables();
  if (a.kind == K::kF) return Rational(b.kind == K::kF ? 0 : 1);
  if (b.kind != K::kLiteral) return Rational(-2);
  switch (a.kind) {
    case K::kLiteral:
      return Rational(a.value == -b.value ? -2 : 1);
    case K::kVariable:
      return Rational(std::abs(b.value) == a.value ? 2 - n : 2);
    case K::kClause: {
      const auto& c = phi.clauses()[static_cast<std::size_t>(a.value)];
      bool in = std::find(c.begin(), c.end(), b.value) != c.end();
      return Rational(in ? 2 - n : 2);
    }
    case K::kF:
      break;
  }
  return Rational(0);
}

inline std::vector<Role> gphi_roles(const CnfFormula& phi) {
  std::vector<Role> roles;
  const int n = phi.num_variables();
  for (int v = 1; v <= n; ++v) {
    roles.push_back({Role::Kind::kLiteral, v});
    roles.push_back({Role::Kind::kLiteral, -v});
  }
  for (int v = 1; v <= n; ++v) roles.push_back({Role::Kind::kVariable, v});
  for (std::size_t c = 0; c < phi.clauses().size(); ++c) {
    roles.push_back({Role::Kind::kClause, static_cast<int>(c)});
  }
  roles.push_back({Role::Kind::kF, 0});
  return roles;
}

inline GphiGame build_g_phi(const CnfFormula& phi) {
  if (phi.num_variables() < 1) {
    throw DomainError("formula needs at least one variable");
  }
  auto roles = gphi_roles(phi);
  std::vector<std::string> labels;
  for (const auto& r : roles) labels.push_back(strategy_label(r));
  NormalFormGame g({labels, labels});
  for (std::size_t i = 0; i < roles.size(); ++i) {
    for (std::size_t j = 0; j < roles.size(); ++j) {
      g.set_payoff({i, j}, {gphi_payoff(phi, roles[i], roles[j]),
                            gphi_payoff(phi, roles[j], roles[i])});
    }
  }
  return GphiGame(std::move(g), std::move(roles), phi);
}

// Both players uniform over the n literals made true by `a`.
inline MixedProfile assignment_to_profile(const GphiGame& g,
                                          const Assignment& a) {
  if (!evaluate(g.formula(), a)) {
    throw DomainError("assignment does not satisfy the formula");
  }
  const int n = g.formula().num_variables();
  std::vector<Rational> mix(g.num_strategies(), Rational(0));
  for (int v = 1; v <= n; ++v) {
    Literal l = a[static_cast<std::size_t>(v - 1)] ? v : -v;
    mix[g.literal_index(l)] = Rational(1, n);
  }
  return MixedProfile({mix, mix});
}

// Either an assignment or the (f, f) marker.
struct ProfileReading {
  bool is_f = false;
  Assignment assignment;

  friend bool operator==(const ProfileReading&,
                         const ProfileReading&) = default;
};

// Reads an equilibrium back as an assignment. Anything that is neither
// (f, f) nor a symmetric uniform mix over one literal per variable raises
// InconsistencyError.
inline ProfileReading profile_to_assignment(const GphiGame& g,
                                            const MixedProfile& p) {
  if (p.num_players() != 2 || p.player(0).size() != g.num_strategies() ||
      p.player(1).size() != g.num_strategies()) {
    throw StructuralError("profile does not match the game");
  }
  auto s0 = p.support(0), s1 = p.support(1);
  if (s0.size() == 1 && s1.size() == 1 && s0[0] == g.f_index() &&
      s1[0] == g.f_index()) {
    return {true, {}};
  }
  if (p.player(0) != p.player(1)) {
    throw InconsistencyError("equilibrium is not symmetric");
  }
  const int n = g.formula().num_variables();
  if (s0.size() != static_cast<std::size_t>(n)) {
    throw InconsistencyError("support size differs from variable count");
  }
  Assignment a(static_cast<std::size_t>(n), false);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  const Rational share(1, n);
  for (auto s : s0) {
    const Role& r = g.roles()[s];
    if (r.kind != Role::Kind::kLiteral) {
      throw InconsistencyError("support contains non-literal " +
                               strategy_label(r));
    }
    if (p.player(0)[s] != share) {
      throw InconsistencyError("literal probabilities are not uniform");
    }
    auto v = static_cast<std::size_t>(std::abs(r.value) - 1);
    if (seen[v]) throw InconsistencyError("both literals of a variable played");
    seen[v] = true;
    a[v] = r.value > 0;
  }
  return {false, a};
}

enum class QueryKind {
  kWelfareAtLeast,
  kAllUtilitiesAtLeast,
  kExistsParetoOptimal,
  kPlayer1UtilityAtLeast,
  kMoreThanOne,
  kSometimesPlays,
  kNeverPlays,
};

struct Query {
  QueryKind kind = QueryKind::kMoreThanOne;
  Rational k;
  std::string strategy;
};

inline std::optional<QueryKind> parse_query_kind(const std::string& s) {
  if (s == "welfare_at_least") return QueryKind::kWelfareAtLeast;
  if (s == "all_utilities_at_least") return QueryKind::kAllUtilitiesAtLeast;
  if (s == "exists_pareto_optimal") return QueryKind::kExistsParetoOptimal;
  if (s == "player1_utility_at_least") return QueryKind::kPlayer1UtilityAtLeast;
  if (s == "more_than_one") return QueryKind::kMoreThanOne;
  if (s == "sometimes_plays") return QueryKind::kSometimesPlays;
  if (s == "never_plays") return QueryKind::kNeverPlays;
  return std::nullopt;
}

namespace internal {
inline void require_complete(const EnumerationResult& e) {
  if (!e.complete) {
    throw Refusal("equilibrium list is not a complete enumeration");
  }
}
}  // namespace internal

// Existential queries over a complete equilibrium list.
inline bool query_equilibria(const GphiGame& g, const EnumerationResult& eq,
                             const Query& q) {
  internal::require_complete(eq);
  const auto& game = g.game();
  std::optional<std::size_t> strategy;
  if (q.kind == QueryKind::kSometimesPlays ||
      q.kind == QueryKind::kNeverPlays) {
    strategy = game.find_strategy(0, q.strategy);
    if (!strategy) throw DomainError("unknown strategy " + q.strategy);
  }
  if (q.kind == QueryKind::kMoreThanOne) return eq.equilibria.size() > 1;
  return std::any_of(
      eq.equilibria.begin(), eq.equilibria.end(), [&](const MixedProfile& p) {
        switch (q.kind) {
          case QueryKind::kWelfareAtLeast:
            return social_welfare(game, p) >= q.k;
          case QueryKind::kAllUtilitiesAtLeast: {
            auto u = expected_utility(game, p);
            return std::all_of(u.begin(), u.end(),
                               [&](const Rational& x) { return x >= q.k; });
          }
          case QueryKind::kExistsParetoOptimal:
            return pareto_optimal(game, expected_utility(game, p));
          case QueryKind::kPlayer1UtilityAtLeast:
            return expected_utility(game, p)[0] >= q.k;
          case QueryKind::kSometimesPlays:
            return p.player(0)[*strategy].sign() > 0;
          case QueryKind::kNeverPlays:
            return p.player(0)[*strategy].is_zero();
          case QueryKind::kMoreThanOne:
            break;
        }
        return false;
      });
}

inline std::size_t count_equilibria(const GphiGame&,
                                    const EnumerationResult& eq) {
  internal::require_complete(eq);
  return eq.equilibria.size();
}

// With every equilibrium isolated, each one is its own maximal connected set.
inline std::size_t count_connected_sets(const GphiGame&,
                                        const EnumerationResult& eq) {
  if (eq.degenerate) {
    throw Refusal(
        "game has a continuum of equilibria; connected sets are not counted");
  }
  internal::require_complete(eq);
  return eq.equilibria.size();
}

}  // namespace gamehard

#endif  // GAMEHARD_GPHI_HPP_
