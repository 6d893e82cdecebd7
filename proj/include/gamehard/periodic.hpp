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

// Periodic formulas over two blocks of variables and the invisible Markov
// game built from them.
//
// A periodic formula phi over x_i^0, x_i^1 (1 <= i <= n) stands for the
// infinite conjunction of phi(k), k >= 0, where phi(k) renames x_i^0 to
// x_i^k and x_i^1 to x_i^(k+1). In DIMACS form it has 2n variables:
// variable v <= n is x_v^0 and variable n + v is x_v^1.
//
// The game. States s1..sn, t(j, i, c) for player j in {1, 2}, 2 <= i <= 2n
// and clause c, and an absorbing state r. Actions t, f, c1..cm for both
// players. Stage kn + i (0-based stage kn + i - 1) is meant to carry x_i^k.
//   s_i, i > 1       -> s_(i mod n)+1, payoff 0
//   s1, (b, b')      -> s_(1 mod n)+1, payoff 0
//   s1, (c, b)       -> t(1, 2, c); u1 = +1 if x_1^0 = b leaves c
//                       unsatisfied, -1 if it satisfies c
//   s1, (b, c)       -> t(2, 2, c); u2 likewise
//   s1, (c, c')      -> r; u1 = u2 = -1
//   t(j, i, c)       -> t(j, i+1, c), or r from i = 2n
//   t(1, kn+i, c), (x, b): u1 = -4 if x_i^k = b satisfies c, else 0
//   t(2, kn+i, c), (b, x): u2 likewise
//   r                -> r, tournament payoffs scaled by eps
// Cells not listed pay 0.
//
// The infinite variant discounts by delta = (1/2)^(1/(2n+1)) with
// eps = (1 - delta) / 2. The finite variant sums T stages undiscounted,
// eps = 1/(4T), pays 0 instead of +1 and -2 instead of -1 at s1 for a
// clause against a boolean, and pays +1 to the deviating player on entering
// the last t state. A clause deviation at an s1 visit is then worth exactly
// +1 when the opponent's next 2n booleans falsify the clause and at most -1
// otherwise, and only if the whole gadget fits in the horizon, which makes
// the game's pure equilibria match the clauses windowed by the horizon.

#ifndef GAMEHARD_PERIODIC_HPP_
#define GAMEHARD_PERIODIC_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gamehard/cnf.hpp"
#include "gamehard/discounted_value.hpp"
#include "gamehard/errors.hpp"
#include "gamehard/markov.hpp"
#include "gamehard/parallel.hpp"

namespace gamehard {

inline constexpr int kDefaultMaxPeriodBits = 20;

class PeriodicFormula {
 public:
  PeriodicFormula() = default;
  PeriodicFormula(int n, std::vector<Clause> clauses) : n_(n) {
    if (n < 1) throw DomainError("periodic formula needs n >= 1");
    formula_ = CnfFormula(2 * n, std::move(clauses));
  }
  // Reads a 2n-variable CNF; the block size is half the variable count.
  static PeriodicFormula from_cnf(const CnfFormula& f) {
    if (f.num_variables() % 2 != 0) {
      throw DomainError("periodic formula needs an even variable count");
    }
    return PeriodicFormula(f.num_variables() / 2, f.clauses());
  }

  int n() const { return n_; }
  const std::vector<Clause>& clauses() const { return formula_.clauses(); }
  const CnfFormula& as_cnf() const { return formula_; }

  // Block (0 or 1) and 1-based index of a literal's variable.
  int block(Literal l) const { return std::abs(l) > n_ ? 1 : 0; }
  int index(Literal l) const {
    return std::abs(l) > n_ ? std::abs(l) - n_ : std::abs(l);
  }

  // Whether x_i^k = b makes clause c true (k in {0, 1}).
  bool satisfies(std::size_t c, int k, int i, bool b) const {
    for (Literal l : clauses().at(c)) {
      if (block(l) == k && index(l) == i && (l > 0) == b) return true;
    }
    return false;
  }

 private:
  int n_ = 0;
  CnfFormula formula_;
};

// x[k][i-1] = x_i^k, for blocks k = 0..p-1, repeated with period p.
struct PeriodicAssignment {
  std::vector<std::vector<bool>> blocks;
  std::size_t period() const { return blocks.size(); }
};

// Whether the periodic extension satisfies every phi(k).
inline bool satisfies_periodically(const PeriodicFormula& f,
                                   const PeriodicAssignment& a) {
  const std::size_t p = a.period();
  if (p == 0) throw DomainError("empty periodic assignment");
  for (const auto& b : a.blocks) {
    if (b.size() != static_cast<std::size_t>(f.n())) {
      throw StructuralError("block size differs from n");
    }
  }
  for (std::size_t k = 0; k < p; ++k) {
    for (const auto& c : f.clauses()) {
      bool sat = false;
      for (Literal l : c) {
        const auto& blk = a.blocks[(k + f.block(l)) % p];
        if (blk[f.index(l) - 1] == (l > 0)) {
          sat = true;
          break;
        }
      }
      if (!sat) return false;
    }
  }
  return true;
}

// Tries periods 1..max_period in turn and, within a period, assignments in
// counting order (bit kn + i - 1 is x_i^k).
inline std::optional<PeriodicAssignment> periodic_sat_oracle(
    const PeriodicFormula& f, int max_period,
    int max_bits = kDefaultMaxPeriodBits, int jobs = 1) {
  if (max_period < 1) throw DomainError("max period must be >= 1");
  if (static_cast<long>(f.n()) * max_period > max_bits) {
    throw CapacityError("n * max_period exceeds " + std::to_string(max_bits) +
                        " assignment bits");
  }
  const std::size_t n = static_cast<std::size_t>(f.n());
  auto decode = [&](std::uint64_t mask, std::size_t p) {
    PeriodicAssignment a;
    a.blocks.assign(p, std::vector<bool>(n));
    for (std::size_t k = 0; k < p; ++k) {
      for (std::size_t i = 0; i < n; ++i) a.blocks[k][i] = (mask >> (k * n + i)) & 1;
    }
    return a;
  };
  for (std::size_t p = 1; p <= static_cast<std::size_t>(max_period); ++p) {
    const std::uint64_t total = std::uint64_t{1} << (n * p);
    auto hit = parallel_find_first(total, resolve_jobs(jobs), [&](std::uint64_t m) {
      return satisfies_periodically(f, decode(m, p));
    });
    if (hit) return decode(*hit, p);
  }
  return std::nullopt;
}

// Cycle of length n * p whose stage kn + i - 1 plays x_i^k.
inline ActionSequence assignment_to_strategies(const PeriodicFormula& f,
                                               const PeriodicAssignment& a) {
  ActionSequence s;
  for (const auto& blk : a.blocks) {
    if (blk.size() != static_cast<std::size_t>(f.n())) {
      throw StructuralError("block size differs from n");
    }
    for (bool b : blk) s.cycle.push_back(b ? 0 : 1);
  }
  if (s.cycle.empty()) throw DomainError("empty periodic assignment");
  return s;
}

// phi(0) and ... and phi(blocks - 2) over the variables x_i^k,
// k < blocks, numbered kn + i.
inline CnfFormula windowed_formula(const PeriodicFormula& f, int blocks) {
  if (blocks < 2) throw DomainError("window needs at least two blocks");
  std::vector<Clause> out;
  for (int k = 0; k + 1 < blocks; ++k) {
    for (const auto& c : f.clauses()) {
      Clause d;
      for (Literal l : c) {
        const int v = (k + f.block(l)) * f.n() + f.index(l);
        d.push_back(l > 0 ? v : -v);
      }
      out.push_back(std::move(d));
    }
  }
  return CnfFormula(blocks * f.n(), std::move(out));
}

enum class Variant { kInfinite, kFinite };

namespace internal {
inline std::uint64_t saturating_pow(std::uint64_t b, std::size_t e,
                                    std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (r > cap / b) return cap + 1;
    r *= b;
  }
  return r;
}
}  // namespace internal

// 3(2n+1) stages, reduced by whole blocks until |actions|^T fits `bound`.
inline std::size_t default_finite_horizon(
    const PeriodicFormula& f, std::uint64_t bound = kDefaultSequenceBound) {
  const std::size_t n = static_cast<std::size_t>(f.n());
  const std::size_t min_t = ((2 * n + 1 + n - 1) / n) * n;
  std::size_t t = ((3 * (2 * n + 1) + n - 1) / n) * n;
  const std::uint64_t actions = 2 + f.clauses().size();
  while (t >= min_t && internal::saturating_pow(actions, t, bound) > bound) {
    t -= n;
  }
  if (t < min_t) {
    throw CapacityError("no horizon of at least " + std::to_string(min_t) +
                        " stages fits the sequence bound");
  }
  return t;
}

inline std::string t_state_name(int j, int i, std::size_t c) {
  return "t" + std::to_string(j) + "_" + std::to_string(i) + "_c" +
         std::to_string(c + 1);
}

// Builds the game. `horizon` is used by the finite variant only.
inline StochasticGame build_periodic_game(const PeriodicFormula& f,
                                          Variant variant = Variant::kInfinite,
                                          std::size_t horizon = 0) {
  const int n = f.n();
  const std::size_t m = f.clauses().size();
  if (n < 1) throw DomainError("periodic formula needs n >= 1");
  if (m < 1) throw DomainError("periodic formula needs a clause");
  const bool finite = variant == Variant::kFinite;
  if (finite) {
    if (horizon == 0) horizon = default_finite_horizon(f);
    if (horizon % static_cast<std::size_t>(n) != 0 ||
        horizon < static_cast<std::size_t>(2 * n + 1)) {
      throw DomainError("horizon must be a multiple of n and at least 2n+1");
    }
  }

  std::vector<std::string> states;
  for (int i = 1; i <= n; ++i) states.push_back("s" + std::to_string(i));
  // t(j, i, c) at index n + ((j-1) * m + c) * (2n-1) + (i-2)
  auto t_index = [&](int j, int i, std::size_t c) {
    return static_cast<std::size_t>(n) +
           ((static_cast<std::size_t>(j - 1) * m + c) * (2 * n - 1)) +
           static_cast<std::size_t>(i - 2);
  };
  for (int j = 1; j <= 2; ++j) {
    for (std::size_t c = 0; c < m; ++c) {
      for (int i = 2; i <= 2 * n; ++i) states.push_back(t_state_name(j, i, c));
    }
  }
  states.push_back("r");
  const std::size_t r = states.size() - 1;

  std::vector<std::string> actions{"t", "f"};
  for (std::size_t c = 0; c < m; ++c) actions.push_back("c" + std::to_string(c + 1));
  const std::size_t A = actions.size();
  auto is_bool = [](std::size_t a) { return a < 2; };
  auto bool_of = [](std::size_t a) { return a == 0; };

  const DiscountRing ring = finite ? DiscountRing::rational(Rational(1))
                                   : DiscountRing::algebraic(n);
  StochasticGame g(states, {actions, actions}, ring);
  if (finite) g.set_horizon(horizon);
  auto val = [&](long q) { return DiscountedValue(ring, Rational(q)); };
  const DiscountedValue eps =
      finite ? DiscountedValue(ring, Rational(1, static_cast<long>(4 * horizon)))
             : (DiscountedValue(ring, Rational(1)) - DiscountedValue::delta(ring)) *
                   Rational(1, 2);

  // s_i, i > 1, and the boolean/boolean cells of s1 advance the phase.
  for (int i = 1; i <= n; ++i) {
    const std::size_t s = static_cast<std::size_t>(i - 1);
    const std::size_t succ = static_cast<std::size_t>(i % n);
    for (std::size_t a1 = 0; a1 < A; ++a1) {
      for (std::size_t a2 = 0; a2 < A; ++a2) {
        if (i == 1 && !(is_bool(a1) && is_bool(a2))) continue;
        g.set_next(s, a1, a2, succ);
      }
    }
  }
  // Clause actions at s1.
  const long win = finite ? 0 : 1, lose = finite ? -2 : -1;
  for (std::size_t a1 = 0; a1 < A; ++a1) {
    for (std::size_t a2 = 0; a2 < A; ++a2) {
      if (is_bool(a1) && is_bool(a2)) continue;
      if (!is_bool(a1) && !is_bool(a2)) {
        g.set_next(0, a1, a2, r);
        g.set_payoff(0, a1, a2, val(-1), val(-1));
      } else if (!is_bool(a1)) {
        const std::size_t c = a1 - 2;
        g.set_next(0, a1, a2, t_index(1, 2, c));
        g.set_payoff(0, a1, a2,
                     val(f.satisfies(c, 0, 1, bool_of(a2)) ? lose : win),
                     val(0));
      } else {
        const std::size_t c = a2 - 2;
        g.set_next(0, a1, a2, t_index(2, 2, c));
        g.set_payoff(0, a1, a2, val(0),
                     val(f.satisfies(c, 0, 1, bool_of(a1)) ? lose : win));
      }
    }
  }
  // Verification chains.
  for (int j = 1; j <= 2; ++j) {
    for (std::size_t c = 0; c < m; ++c) {
      for (int idx = 2; idx <= 2 * n; ++idx) {
        const std::size_t s = t_index(j, idx, c);
        const std::size_t nxt = idx < 2 * n ? t_index(j, idx + 1, c) : r;
        const int k = (idx - 1) / n, i = (idx - 1) % n + 1;
        const long bonus = finite && idx == 2 * n ? 1 : 0;
        for (std::size_t a1 = 0; a1 < A; ++a1) {
          for (std::size_t a2 = 0; a2 < A; ++a2) {
            g.set_next(s, a1, a2, nxt);
            const std::size_t other = j == 1 ? a2 : a1;
            long u = bonus;
            if (is_bool(other) && f.satisfies(c, k, i, bool_of(other))) u -= 4;
            if (j == 1) {
              g.set_payoff(s, a1, a2, val(u), val(0));
            } else {
              g.set_payoff(s, a1, a2, val(0), val(u));
            }
          }
        }
      }
    }
  }
  // Absorbing tournament.
  const auto signs = rps_signs(A);
  for (std::size_t a1 = 0; a1 < A; ++a1) {
    for (std::size_t a2 = 0; a2 < A; ++a2) {
      g.set_next(r, a1, a2, r);
      DiscountedValue u = eps * DiscountedValue(ring, Rational(signs[a1][a2]));
      g.set_payoff(r, a1, a2, u, -u);
    }
  }
  return g;
}

}  // namespace gamehard

#endif  // GAMEHARD_PERIODIC_HPP_
