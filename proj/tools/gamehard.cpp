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

// gamehard: build the reduction games and run the exact solvers on them.
//
// Every successful run prints one JSON report on stdout. Exit codes:
//   0  success, including negative answers
//   1  refusal or internal inconsistency
//   2  usage, parse or input error
//   3  input exceeds a brute-force bound

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gamehard/bayesian.hpp"
#include "gamehard/cnf.hpp"
#include "gamehard/enumerate.hpp"
#include "gamehard/errors.hpp"
#include "gamehard/gphi.hpp"
#include "gamehard/json_io.hpp"
#include "gamehard/markov.hpp"
#include "gamehard/normal_form.hpp"
#include "gamehard/periodic.hpp"

namespace {

using gamehard::json_io::Json;
namespace jio = gamehard::json_io;

constexpr const char* kVersion = "0.1.0";
constexpr std::size_t kDefaultCheckHorizon = 12;

class UsageError : public gamehard::Error {
 public:
  using gamehard::Error::Error;
};

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw gamehard::Error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

struct Options {
  std::string cnf, game, instance, profile, query, k, strategy;
  std::optional<std::size_t> horizon;
  std::optional<int> max_period;
  bool finite = false;
  int jobs = 0;
  bool no_timing = false;
};

class Run {
 public:
  Run(std::string command, const Options& o) : command_(std::move(command)), o_(o) {}

  // Reads an input file and records its digest.
  std::string read(const std::string& flag, const std::string& path) {
    if (path.empty()) throw UsageError(command_ + " needs --" + flag);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    inputs_[flag] = {{"path", path}, {"sha256", sha256_hex(ss.str())}};
    return ss.str();
  }
  void option(const std::string& key, Json v) { options_[key] = std::move(v); }

  Json report(Json result, double seconds) const {
    Json r{{"command", command_},
           {"inputs", inputs_},
           {"options", options_},
           {"result", std::move(result)},
           {"tool", {{"name", "gamehard"}, {"version", kVersion}}}};
    if (!o_.no_timing) r["timing"] = {{"seconds", seconds}};
    return r;
  }

  const Options& opts() const { return o_; }
  const std::string& command() const { return command_; }

 private:
  std::string command_;
  const Options& o_;
  Json inputs_ = Json::object();
  Json options_ = Json::object();
};

gamehard::CnfFormula load_cnf(Run& run) {
  std::vector<std::string> warnings;
  auto f = gamehard::parse_dimacs(run.read("cnf", run.opts().cnf), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return f;
}

Json assignment_json(const gamehard::Assignment& a) {
  Json out = Json::array();
  for (bool b : a) out.push_back(b);
  return out;
}

Json gphi_build(Run& run) {
  return {{"game", jio::to_json(gamehard::build_g_phi(load_cnf(run)))}};
}

Json gphi_analyze(Run& run) {
  using gamehard::QueryKind;
  const auto phi = load_cnf(run);
  const auto g = gamehard::build_g_phi(phi);
  gamehard::EnumerationOptions eo;
  eo.jobs = run.opts().jobs;
  const auto eq = gamehard::enumerate_equilibria(g.game(), eo);
  const std::string& q = run.opts().query;
  if (q.empty()) {
    Json readings = Json::array();
    if (eq.complete) {
      for (const auto& p : eq.equilibria) {
        auto r = gamehard::profile_to_assignment(g, p);
        readings.push_back(r.is_f ? Json("f") : assignment_json(r.assignment));
      }
    }
    Json out = jio::to_json(g.game(), eq);
    out["readings"] = readings;
    out["count_satisfying"] = gamehard::count_satisfying(phi);
    return out;
  }
  run.option("query", q);
  if (q == "count") {
    return {{"query", q}, {"count", gamehard::count_equilibria(g, eq)}};
  }
  if (q == "connected_sets") {
    return {{"query", q}, {"connected_sets", gamehard::count_connected_sets(g, eq)}};
  }
  auto kind = gamehard::parse_query_kind(q);
  if (!kind) throw UsageError("unknown query \"" + q + "\"");
  gamehard::Query query;
  query.kind = *kind;
  if (*kind == QueryKind::kWelfareAtLeast ||
      *kind == QueryKind::kAllUtilitiesAtLeast ||
      *kind == QueryKind::kPlayer1UtilityAtLeast) {
    if (run.opts().k.empty()) throw UsageError("query " + q + " needs --k");
    query.k = gamehard::Rational::parse(run.opts().k);
    run.option("k", query.k.str());
  }
  if (*kind == QueryKind::kSometimesPlays || *kind == QueryKind::kNeverPlays) {
    if (run.opts().strategy.empty()) {
      throw UsageError("query " + q + " needs --strategy");
    }
    query.strategy = run.opts().strategy;
    run.option("strategy", query.strategy);
  }
  return {{"query", q}, {"answer", gamehard::query_equilibria(g, eq, query)}};
}

Json enumerate_cmd(Run& run) {
  const auto g = jio::game_from_json(jio::parse(run.read("game", run.opts().game)));
  gamehard::EnumerationOptions eo;
  eo.jobs = run.opts().jobs;
  return jio::to_json(g, gamehard::enumerate_equilibria(g, eo));
}

Json verify_cmd(Run& run) {
  const auto g = jio::game_from_json(jio::parse(run.read("game", run.opts().game)));
  const auto p =
      jio::profile_from_json(jio::parse(run.read("profile", run.opts().profile)));
  return jio::to_json(g, gamehard::verify_nash(g, p));
}

gamehard::SetCoverInstance load_instance(Run& run) {
  return jio::setcover_from_json(
      jio::parse(run.read("instance", run.opts().instance)));
}

Json bne_build(Run& run) {
  return {{"game", jio::to_json(gamehard::build_setcover_game(load_instance(run)))}};
}

Json bne_solve(Run& run) {
  std::optional<gamehard::BayesianGame> g;
  if (!run.opts().instance.empty()) {
    g = gamehard::build_setcover_game(load_instance(run));
  } else if (!run.opts().game.empty()) {
    g = jio::bayesian_from_json(jio::parse(run.read("game", run.opts().game)));
  } else {
    throw UsageError("bne solve needs --instance or --game");
  }
  auto p = gamehard::find_pure_bne(*g, gamehard::kDefaultBneBound, run.opts().jobs);
  return {{"profile", p ? jio::to_json(*g, *p) : Json(nullptr)}};
}

Json setcover_solve(Run& run) {
  auto cover = gamehard::solve_set_cover_bruteforce(load_instance(run));
  return {{"cover", cover ? Json(*cover) : Json(nullptr)}};
}

gamehard::PeriodicFormula load_periodic(Run& run) {
  return gamehard::PeriodicFormula::from_cnf(load_cnf(run));
}

Json markov_build(Run& run) {
  const auto f = load_periodic(run);
  if (run.opts().finite || run.opts().horizon) {
    std::size_t t = run.opts().horizon ? *run.opts().horizon
                                       : gamehard::default_finite_horizon(f);
    run.option("horizon", t);
    return {{"game", jio::to_json(gamehard::build_periodic_game(
                         f, gamehard::Variant::kFinite, t))}};
  }
  return {{"game", jio::to_json(gamehard::build_periodic_game(f))}};
}

Json values_json(const gamehard::ValuePair& v) {
  return Json::array({jio::to_json(v[0]), jio::to_json(v[1])});
}

// Certificates for an infinite-horizon profile of pure cycles: the window
// is the largest multiple of both cycle lengths that fits in half the
// horizon (at least one such multiple).
Json infinite_check(const gamehard::StochasticGame& g,
                    const gamehard::SequencePair& p, std::size_t horizon) {
  const auto values = gamehard::evaluate_discounted(g, p);
  Json out{{"mode", "infinite"}, {"values", values_json(values)}};
  const bool cycles = p[0].preamble.empty() && p[1].preamble.empty();
  if (!cycles) {
    out["deviations"] = nullptr;
    return out;
  }
  const std::size_t l = std::lcm(p[0].cycle.size(), p[1].cycle.size());
  const std::size_t window = std::max<std::size_t>(1, horizon / 2 / l) * l;
  if (window > horizon) throw gamehard::DomainError("horizon shorter than the cycles");
  Json devs = Json::array();
  bool all = true;
  for (std::size_t d = 0; d < 2; ++d) {
    auto c = gamehard::certify_no_deviation(g, p, d, window, horizon);
    all = all && c.certified;
    Json prefix = Json::array();
    for (auto a : c.worst_prefix) prefix.push_back(g.actions()[d][a]);
    devs.push_back({{"player", d + 1},
                    {"certified", c.certified},
                    {"window", c.window},
                    {"horizon", c.horizon},
                    {"prefixes", c.prefixes},
                    {"departing", c.departing},
                    {"worst_bound", jio::to_json(c.worst)},
                    {"worst_prefix", prefix}});
  }
  out["deviations"] = devs;
  out["certified_equilibrium"] = all;
  Json profitable = nullptr;
  for (std::size_t d = 0; d < 2 && !all; ++d) {
    auto dev = gamehard::find_profitable_deviation(g, p, d, window, horizon);
    if (!dev) continue;
    Json prefix = Json::array();
    for (auto a : dev->prefix) prefix.push_back(g.actions()[d][a]);
    profitable = {{"player", d + 1},
                  {"prefix", prefix},
                  {"gain_lower_bound", jio::to_json(dev->gain_lower_bound)}};
    break;
  }
  out["profitable_deviation"] = profitable;
  return out;
}

Json finite_check(const gamehard::StochasticGame& g,
                  const gamehard::SequencePair& p, std::size_t t) {
  Json gains = Json::array();
  bool eq = true;
  for (std::size_t d = 0; d < 2; ++d) {
    auto gain = gamehard::check_deviation_finite(g, p, t, d);
    eq = eq && gain.is_zero();
    gains.push_back(jio::to_json(gain));
  }
  return {{"mode", "finite"},
          {"horizon", t},
          {"values", values_json(gamehard::evaluate_finite(g, p, t))},
          {"gains", gains},
          {"equilibrium", eq}};
}

Json markov_check(Run& run) {
  const auto g =
      jio::stochastic_from_json(jio::parse(run.read("game", run.opts().game)));
  const auto p = jio::sequences_from_json(
      g, jio::parse(run.read("profile", run.opts().profile)));
  if (g.horizon()) {
    if (run.opts().horizon && *run.opts().horizon != *g.horizon()) {
      throw UsageError("--horizon differs from the game's horizon");
    }
    return finite_check(g, p, *g.horizon());
  }
  const std::size_t h = run.opts().horizon.value_or(kDefaultCheckHorizon);
  run.option("horizon", h);
  return infinite_check(g, p, h);
}

Json markov_solve(Run& run) {
  const auto& o = run.opts();
  if (!o.game.empty()) {
    const auto g = jio::stochastic_from_json(jio::parse(run.read("game", o.game)));
    auto t = o.horizon ? o.horizon : g.horizon();
    if (!t) throw UsageError("markov solve on a game needs a horizon");
    run.option("horizon", *t);
    auto w = gamehard::find_pure_ne_finite(g, *t, gamehard::kDefaultSequenceBound,
                                           o.jobs);
    return {{"horizon", *t}, {"witness", w ? jio::to_json(g, *w) : Json(nullptr)}};
  }
  const auto f = load_periodic(run);
  if (o.max_period) {
    run.option("max_period", *o.max_period);
    auto a = gamehard::periodic_sat_oracle(f, *o.max_period,
                                           gamehard::kDefaultMaxPeriodBits, o.jobs);
    if (!a) return {{"periodic_assignment", nullptr}, {"profile", nullptr}};
    Json blocks = Json::array();
    for (const auto& b : a->blocks) blocks.push_back(assignment_json(b));
    const auto g = gamehard::build_periodic_game(f);
    const auto s = gamehard::assignment_to_strategies(f, *a);
    const gamehard::SequencePair p{s, s};
    const std::size_t h = o.horizon.value_or(kDefaultCheckHorizon);
    run.option("horizon", h);
    return {{"periodic_assignment", blocks},
            {"profile", jio::to_json(g, p)},
            {"check", infinite_check(g, p, h)}};
  }
  const std::size_t t = o.horizon ? *o.horizon : gamehard::default_finite_horizon(f);
  run.option("horizon", t);
  const auto g = gamehard::build_periodic_game(f, gamehard::Variant::kFinite, t);
  auto w = gamehard::find_pure_ne_finite(g, t, gamehard::kDefaultSequenceBound, o.jobs);
  const int blocks = static_cast<int>(t) / f.n();
  const bool sat =
      gamehard::count_satisfying(gamehard::windowed_formula(f, blocks)) > 0;
  return {{"horizon", t},
          {"witness", w ? jio::to_json(g, *w) : Json(nullptr)},
          {"windowed_satisfiable", sat}};
}

int fail(int code, const std::string& kind, const std::string& msg) {
  std::cerr << "gamehard: " << kind << ": " << msg << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact equilibrium tools for hardness-reduction games", "gamehard"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--jobs", o.jobs, "Worker threads (default: all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--no-timing", o.no_timing, "Omit the timing field");

  std::string command;
  std::function<Json(Run&)> action;
  auto leaf = [&](CLI::App* sub, const std::string& name,
                  std::function<Json(Run&)> fn) {
    sub->callback([&command, &action, name, fn] {
      command = name;
      action = fn;
    });
    return sub;
  };
  auto add_cnf = [&](CLI::App* s) { s->add_option("--cnf", o.cnf, "DIMACS CNF file"); };
  auto add_game = [&](CLI::App* s) { s->add_option("--game", o.game, "Game JSON file"); };
  auto add_inst = [&](CLI::App* s) {
    s->add_option("--instance", o.instance, "Set-cover instance JSON file");
  };

  auto* gphi = app.add_subcommand("gphi", "Game built from a CNF formula");
  gphi->require_subcommand(1);
  auto* gb = leaf(gphi->add_subcommand("build", "Emit G(phi)"), "gphi build", gphi_build);
  add_cnf(gb);
  auto* ga = leaf(gphi->add_subcommand("analyze", "Enumerate and query equilibria"),
                  "gphi analyze", gphi_analyze);
  add_cnf(ga);
  ga->add_option("--query", o.query, "Query name");
  ga->add_option("--k", o.k, "Rational threshold");
  ga->add_option("--strategy", o.strategy, "Strategy label");

  auto* en = leaf(app.add_subcommand("enumerate", "All equilibria of a bimatrix game"),
                  "enumerate", enumerate_cmd);
  add_game(en);
  auto* ve = leaf(app.add_subcommand("verify", "Check a mixed profile"), "verify",
                  verify_cmd);
  add_game(ve);
  ve->add_option("--profile", o.profile, "Profile JSON file");

  auto* bne = app.add_subcommand("bne", "Bayesian game from a set-cover instance");
  bne->require_subcommand(1);
  add_inst(leaf(bne->add_subcommand("build", "Emit the Bayesian game"), "bne build",
                bne_build));
  auto* bs = leaf(bne->add_subcommand("solve", "Search pure Bayes-Nash equilibria"),
                  "bne solve", bne_solve);
  add_inst(bs);
  add_game(bs);

  auto* sc = app.add_subcommand("setcover", "Set-cover oracle");
  sc->require_subcommand(1);
  add_inst(leaf(sc->add_subcommand("solve", "Smallest-index cover within budget"),
                "setcover solve", setcover_solve));

  auto* mk = app.add_subcommand("markov", "Invisible Markov games");
  mk->require_subcommand(1);
  auto* mb = leaf(mk->add_subcommand("build", "Game from a periodic formula"),
                  "markov build", markov_build);
  add_cnf(mb);
  mb->add_option("--horizon", o.horizon, "Finite horizon");
  mb->add_flag("--finite", o.finite, "Finite variant with the default horizon");
  auto* mc = leaf(mk->add_subcommand("check", "Deviation check for a profile"),
                  "markov check", markov_check);
  add_game(mc);
  mc->add_option("--profile", o.profile, "Sequence pair JSON file");
  mc->add_option("--horizon", o.horizon, "Look-ahead horizon (infinite games)");
  auto* ms = leaf(mk->add_subcommand("solve", "Pure equilibrium search"),
                  "markov solve", markov_solve);
  add_cnf(ms);
  add_game(ms);
  ms->add_option("--horizon", o.horizon, "Horizon");
  ms->add_option("--max-period", o.max_period, "Period bound for the oracle")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    Run run(command, o);
    Json result = action(run);
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    std::cout << run.report(std::move(result), secs).dump(2) << '\n';
    return 0;
  } catch (const gamehard::CapacityError& e) {
    return fail(3, "capacity", e.what());
  } catch (const UsageError& e) {
    return fail(2, "usage", e.what());
  } catch (const gamehard::ParseError& e) {
    return fail(2, "parse", e.what());
  } catch (const gamehard::StructuralError& e) {
    return fail(2, "input", e.what());
  } catch (const gamehard::DomainError& e) {
    return fail(2, "input", e.what());
  } catch (const gamehard::Refusal& e) {
    return fail(1, "refused", e.what());
  } catch (const std::exception& e) {
    return fail(1, "error", e.what());
  }
}
