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

// JSON encodings of games, profiles and results. Rationals are "p/q"
// strings; objects use sorted keys, so dumps are canonical.

#ifndef GAMEHARD_JSON_IO_HPP_
#define GAMEHARD_JSON_IO_HPP_

#include <string>
#include <vector>

#include "json.hpp"

#include "gamehard/bayesian.hpp"
#include "gamehard/cnf.hpp"
#include "gamehard/enumerate.hpp"
#include "gamehard/errors.hpp"
#include "gamehard/gphi.hpp"
#include "gamehard/markov.hpp"
#include "gamehard/normal_form.hpp"
#include "gamehard/rational.hpp"

namespace gamehard::json_io {

using Json = nlohmann::json;

// Any shape problem in an input document.
class FormatError : public ParseError {
 public:
  explicit FormatError(const std::string& what)
      : ParseError("invalid JSON input: " + what) {}
};

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

namespace internal {
inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing \"") + key + "\"");
  }
  return j.at(key);
}
inline const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array");
  return j;
}
inline std::string string(const Json& j, const char* what) {
  if (!j.is_string()) throw FormatError(std::string(what) + " must be a string");
  return j.get<std::string>();
}
inline long integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) {
    throw FormatError(std::string(what) + " must be an integer");
  }
  return j.get<long>();
}
inline std::vector<std::string> labels(const Json& j, const char* what) {
  std::vector<std::string> out;
  for (const auto& x : array(j, what)) out.push_back(string(x, what));
  return out;
}
inline std::size_t lookup(const std::vector<std::string>& labels,
                          const std::string& s, const char* what) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == s) return i;
  }
  throw FormatError(std::string("unknown ") + what + " \"" + s + "\"");
}
}  // namespace internal

// Rationals: "p/q" or "p" strings; plain JSON integers are accepted too.
inline Json to_json(const Rational& q) { return q.str(); }
inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw FormatError("rational must be a \"p/q\" string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    throw FormatError(e.what());
  }
}
inline Json to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_json(q));
  return out;
}

// {"players": 2, "strategies": [[...], [...]], "payoffs": [i][j] = [u1, u2]}
inline Json to_json(const NormalFormGame& g) {
  if (g.num_players() != 2) throw StructuralError("game JSON is 2-player");
  Json pay = Json::array();
  for (std::size_t i = 0; i < g.num_strategies(0); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < g.num_strategies(1); ++j) {
      row.push_back({to_json(g.payoff2(0, i, j)), to_json(g.payoff2(1, i, j))});
    }
    pay.push_back(std::move(row));
  }
  return {{"players", 2}, {"strategies", g.labels()}, {"payoffs", pay}};
}

// Accepts a bare game object or a report carrying one under result.game.
inline NormalFormGame game_from_json(const Json& j) {
  using namespace internal;
  if (j.is_object() && j.contains("result") && j["result"].is_object() &&
      j["result"].contains("game")) {
    return game_from_json(j["result"]["game"]);
  }
  if (integer(field(j, "players"), "players") != 2) {
    throw FormatError("only 2-player games are supported");
  }
  const auto& st = array(field(j, "strategies"), "strategies");
  if (st.size() != 2) throw FormatError("strategies needs one list per player");
  auto rows = labels(st[0], "strategy"), cols = labels(st[1], "strategy");
  if (rows.empty() || cols.empty()) throw FormatError("empty strategy list");
  const auto& pay = array(field(j, "payoffs"), "payoffs");
  if (pay.size() != rows.size()) throw FormatError("payoff row count");
  std::vector<std::vector<Rational>> a(rows.size()), b(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!pay[i].is_array() || pay[i].size() != cols.size()) {
      throw FormatError("payoff column count");
    }
    for (const auto& cell : pay[i]) {
      if (!cell.is_array() || cell.size() != 2) {
        throw FormatError("payoff cell must be [u1, u2]");
      }
      a[i].push_back(rational_from_json(cell[0]));
      b[i].push_back(rational_from_json(cell[1]));
    }
  }
  return NormalFormGame::bimatrix(rows, cols, a, b);
}

inline Json to_json(const CnfFormula& f) {
  return {{"n", f.num_variables()}, {"clauses", f.clauses()}};
}

inline Json to_json(const Role& r) {
  Json out{{"kind", role_name(r)}};
  switch (r.kind) {
    case Role::Kind::kLiteral:
      out["literal"] = r.value;
      break;
    case Role::Kind::kVariable:
      out["variable"] = r.value;
      break;
    case Role::Kind::kClause:
      out["clause"] = r.value + 1;
      break;
    case Role::Kind::kF:
      break;
  }
  return out;
}

inline Json to_json(const GphiGame& g) {
  Json out = to_json(g.game());
  Json roles = Json::array();
  for (const auto& r : g.roles()) roles.push_back(to_json(r));
  out["roles"] = roles;
  out["formula"] = to_json(g.formula());
  return out;
}

// [[p1 probabilities], [p2 probabilities]]
inline Json to_json(const MixedProfile& p) {
  Json out = Json::array();
  for (std::size_t i = 0; i < p.num_players(); ++i) out.push_back(to_json(p.player(i)));
  return out;
}
inline MixedProfile profile_from_json(const Json& j) {
  std::vector<std::vector<Rational>> probs;
  for (const auto& row : internal::array(j, "profile")) {
    std::vector<Rational> v;
    for (const auto& q : internal::array(row, "profile row")) {
      v.push_back(rational_from_json(q));
    }
    probs.push_back(std::move(v));
  }
  try {
    return MixedProfile(std::move(probs));
  } catch (const Error& e) {
    throw FormatError(e.what());
  }
}

inline Json to_json(const NormalFormGame& g, const SupportPair& s) {
  Json rows = Json::array(), cols = Json::array();
  for (auto i : s.rows) rows.push_back(g.label(0, i));
  for (auto j : s.cols) cols.push_back(g.label(1, j));
  return {{"rows", rows}, {"cols", cols}};
}

inline Json to_json(const NormalFormGame& g, const EnumerationResult& r) {
  Json eq = Json::array();
  for (const auto& p : r.equilibria) {
    eq.push_back({{"profile", to_json(p)},
                  {"utilities", to_json(expected_utility(g, p))}});
  }
  Json wit = Json::array();
  for (const auto& w : r.degenerate_witnesses) wit.push_back(to_json(g, w));
  return {{"equilibria", eq},
          {"complete", r.complete},
          {"degenerate", r.degenerate},
          {"degenerate_witnesses", wit}};
}

inline Json to_json(const NormalFormGame& g, const EquilibriumCertificate& c) {
  Json slack = Json::array();
  for (const auto& s : c.slack) slack.push_back(to_json(s));
  Json out{{"verdict", c.accepted ? "accepted" : "rejected"},
           {"realized", to_json(c.realized)},
           {"slack", slack},
           {"witness", nullptr}};
  if (c.witness) {
    out["witness"] = {{"player", c.witness->player + 1},
                      {"strategy", g.label(c.witness->player, c.witness->strategy)},
                      {"slack", to_json(c.witness->slack)}};
  }
  return out;
}

// {"n": 3, "subsets": [[1, 2], [3]], "k": 2}
inline SetCoverInstance setcover_from_json(const Json& j) {
  using namespace internal;
  SetCoverInstance inst;
  inst.n = static_cast<int>(integer(field(j, "n"), "n"));
  inst.k = static_cast<int>(integer(field(j, "k"), "k"));
  for (const auto& s : array(field(j, "subsets"), "subsets")) {
    std::vector<int> sub;
    for (const auto& e : array(s, "subset")) {
      sub.push_back(static_cast<int>(integer(e, "element")));
    }
    inst.subsets.push_back(std::move(sub));
  }
  validate(inst);
  return inst;
}
inline Json to_json(const SetCoverInstance& inst) {
  return {{"n", inst.n}, {"subsets", inst.subsets}, {"k", inst.k}};
}

inline Json to_json(const BayesianGame& g) {
  Json prior = Json::array();
  for (const auto& row : g.prior()) prior.push_back(to_json(row));
  Json util = Json::array();
  for (const auto& by_player : g.utilities()) {
    Json p = Json::array();
    for (const auto& by_type : by_player) {
      Json t = Json::array();
      for (const auto& row : by_type) t.push_back(to_json(row));
      p.push_back(std::move(t));
    }
    util.push_back(std::move(p));
  }
  return {{"players", 2},
          {"types", g.types()},
          {"actions", g.actions()},
          {"prior", prior},
          {"utilities", util}};
}

inline BayesianGame bayesian_from_json(const Json& j) {
  using namespace internal;
  if (j.is_object() && j.contains("result") && j["result"].is_object() &&
      j["result"].contains("game")) {
    return bayesian_from_json(j["result"]["game"]);
  }
  std::vector<std::vector<std::string>> types, actions;
  for (const auto& t : array(field(j, "types"), "types")) {
    types.push_back(labels(t, "type"));
  }
  for (const auto& a : array(field(j, "actions"), "actions")) {
    actions.push_back(labels(a, "action"));
  }
  std::vector<std::vector<Rational>> prior;
  for (const auto& row : array(field(j, "prior"), "prior")) {
    std::vector<Rational> r;
    for (const auto& q : array(row, "prior row")) r.push_back(rational_from_json(q));
    prior.push_back(std::move(r));
  }
  std::vector<std::vector<std::vector<std::vector<Rational>>>> util;
  for (const auto& p : array(field(j, "utilities"), "utilities")) {
    auto& up = util.emplace_back();
    for (const auto& t : array(p, "utilities")) {
      auto& ut = up.emplace_back();
      for (const auto& row : array(t, "utilities")) {
        auto& ur = ut.emplace_back();
        for (const auto& q : array(row, "utilities")) ur.push_back(rational_from_json(q));
      }
    }
  }
  try {
    return BayesianGame(types, prior, actions, util);
  } catch (const StructuralError& e) {
    throw FormatError(e.what());
  }
}

// {"player1": {"t1": "S1", ...}, "player2": {...}}
inline Json to_json(const BayesianGame& g, const PureBayesianProfile& p) {
  Json out = Json::object();
  for (std::size_t pl = 0; pl < 2; ++pl) {
    Json m = Json::object();
    for (std::size_t t = 0; t < g.num_types(pl); ++t) {
      m[g.types()[pl][t]] = g.actions()[pl][p.actions[pl][t]];
    }
    out["player" + std::to_string(pl + 1)] = m;
  }
  return out;
}

// Constant values are "p/q"; others list the coefficients of 1, delta, ...
inline Json to_json(const DiscountedValue& v) {
  if (v.is_constant()) return to_json(v.constant_term());
  return to_json(v.coefficients());
}
inline DiscountedValue discounted_from_json(const Json& j,
                                            const DiscountRing& ring) {
  if (j.is_array()) {
    std::vector<Rational> c;
    for (const auto& q : j) c.push_back(rational_from_json(q));
    if (c.size() != static_cast<std::size_t>(ring.degree)) {
      throw FormatError("coefficient count must equal the ring degree");
    }
    return DiscountedValue(ring, std::move(c));
  }
  return DiscountedValue(ring, rational_from_json(j));
}

inline Json to_json(const DiscountRing& r) {
  if (r.is_rational()) return {{"kind", "rational"}, {"value", to_json(r.constant)}};
  if (r.constant != Rational(1, 2) || r.degree % 2 == 0) {
    throw StructuralError("ring has no JSON encoding");
  }
  return {{"kind", "algebraic"}, {"n", (r.degree - 1) / 2}};
}
inline DiscountRing ring_from_json(const Json& j) {
  using namespace internal;
  auto kind = string(field(j, "kind"), "discount kind");
  try {
    if (kind == "rational") {
      return DiscountRing::rational(rational_from_json(field(j, "value")));
    }
    if (kind == "algebraic") {
      return DiscountRing::algebraic(static_cast<int>(integer(field(j, "n"), "n")));
    }
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
  throw FormatError("discount kind must be \"rational\" or \"algebraic\"");
}

inline Json to_json(const StochasticGame& g) {
  const auto& st = g.states();
  const auto& ac = g.actions();
  Json trans = Json::array(), pay = Json::array();
  for (std::size_t s = 0; s < g.num_states(); ++s) {
    for (std::size_t a1 = 0; a1 < g.num_actions(0); ++a1) {
      for (std::size_t a2 = 0; a2 < g.num_actions(1); ++a2) {
        trans.push_back({st[s], ac[0][a1], ac[1][a2], st[g.next(s, a1, a2)]});
        const auto& u1 = g.payoff(0, s, a1, a2);
        const auto& u2 = g.payoff(1, s, a1, a2);
        if (u1.is_zero() && u2.is_zero()) continue;
        pay.push_back({st[s], ac[0][a1], ac[1][a2], to_json(u1), to_json(u2)});
      }
    }
  }
  Json out{{"states", st},
           {"actions", Json::array({ac[0], ac[1]})},
           {"transitions", trans},
           {"payoffs", pay},
           {"discount", to_json(g.ring())}};
  if (g.horizon()) out["horizon"] = *g.horizon();
  return out;
}

// Every (state, a1, a2) needs exactly one transition; payoffs not listed
// are 0. "actions" is either one shared list or one list per player.
inline StochasticGame stochastic_from_json(const Json& j) {
  using namespace internal;
  if (j.is_object() && j.contains("result") && j["result"].is_object() &&
      j["result"].contains("game")) {
    return stochastic_from_json(j["result"]["game"]);
  }
  auto states = labels(field(j, "states"), "state");
  const auto& ac = array(field(j, "actions"), "actions");
  std::array<std::vector<std::string>, 2> actions;
  if (!ac.empty() && ac[0].is_array()) {
    if (ac.size() != 2) throw FormatError("actions needs one list per player");
    actions = {labels(ac[0], "action"), labels(ac[1], "action")};
  } else {
    actions = {labels(ac, "action"), labels(ac, "action")};
  }
  const DiscountRing ring = ring_from_json(field(j, "discount"));
  StochasticGame g;
  try {
    g = StochasticGame(states, actions, ring);
  } catch (const StructuralError& e) {
    throw FormatError(e.what());
  }
  std::vector<bool> seen(states.size() * actions[0].size() * actions[1].size());
  for (const auto& t : array(field(j, "transitions"), "transitions")) {
    if (!t.is_array() || t.size() != 4) {
      throw FormatError("transition must be [state, a1, a2, next]");
    }
    const auto s = lookup(states, string(t[0], "state"), "state");
    const auto a1 = lookup(actions[0], string(t[1], "action"), "action");
    const auto a2 = lookup(actions[1], string(t[2], "action"), "action");
    const auto nx = lookup(states, string(t[3], "state"), "state");
    auto idx = (s * actions[0].size() + a1) * actions[1].size() + a2;
    if (seen[idx]) throw FormatError("duplicate transition");
    seen[idx] = true;
    g.set_next(s, a1, a2, nx);
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw FormatError("transition table is not total");
  }
  if (j.contains("payoffs")) {
    for (const auto& p : array(j["payoffs"], "payoffs")) {
      if (!p.is_array() || p.size() != 5) {
        throw FormatError("payoff must be [state, a1, a2, u1, u2]");
      }
      g.set_payoff(lookup(states, string(p[0], "state"), "state"),
                   lookup(actions[0], string(p[1], "action"), "action"),
                   lookup(actions[1], string(p[2], "action"), "action"),
                   discounted_from_json(p[3], ring),
                   discounted_from_json(p[4], ring));
    }
  }
  if (j.contains("horizon") && !j["horizon"].is_null()) {
    long h = integer(j["horizon"], "horizon");
    if (h < 0) throw FormatError("horizon must be non-negative");
    g.set_horizon(static_cast<std::size_t>(h));
  }
  return g;
}

inline Json to_json(const StochasticGame& g, std::size_t player,
                    const ActionSequence& s) {
  Json pre = Json::array(), cyc = Json::array();
  for (auto a : s.preamble) pre.push_back(g.actions()[player][a]);
  for (auto a : s.cycle) cyc.push_back(g.actions()[player][a]);
  return {{"preamble", pre}, {"cycle", cyc}};
}

inline Json to_json(const StochasticGame& g, const SequencePair& p) {
  return {{"player1", to_json(g, 0, p[0])}, {"player2", to_json(g, 1, p[1])}};
}

// {"player1": {"preamble": [...], "cycle": [...]}, "player2": {...}};
// either list may be omitted.
inline SequencePair sequences_from_json(const StochasticGame& g, const Json& j) {
  using namespace internal;
  SequencePair out;
  for (std::size_t p = 0; p < 2; ++p) {
    const auto& s = field(j, p == 0 ? "player1" : "player2");
    if (!s.is_object()) throw FormatError("sequence must be an object");
    for (const char* key : {"preamble", "cycle"}) {
      if (!s.contains(key)) continue;
      auto& dst = std::string(key) == "preamble" ? out[p].preamble : out[p].cycle;
      for (const auto& a : array(s[key], key)) {
        dst.push_back(lookup(g.actions()[p], string(a, "action"), "action"));
      }
    }
  }
  return out;
}

}  // namespace gamehard::json_io

#endif  // GAMEHARD_JSON_IO_HPP_
