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

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gamehard/discounted_value.hpp"
#include "gamehard/markov.hpp"
#include "gamehard/periodic.hpp"

namespace gamehard {
namespace {

using R = Rational;
using DV = DiscountedValue;

DV one(const DiscountRing& r) { return DV(r, R(1)); }

// ---- rps gadget

bool has_pure_equilibrium(const NormalFormGame& g) {
  for (std::size_t i = 0; i < g.num_strategies(0); ++i) {
    for (std::size_t j = 0; j < g.num_strategies(1); ++j) {
      bool ok = true;
      for (std::size_t k = 0; k < g.num_strategies(0); ++k) {
        ok = ok && g.payoff2(0, k, j) <= g.payoff2(0, i, j);
      }
      for (std::size_t k = 0; k < g.num_strategies(1); ++k) {
        ok = ok && g.payoff2(1, i, k) <= g.payoff2(1, i, j);
      }
      if (ok) return true;
    }
  }
  return false;
}

TEST(RpsGadget, ThreeIsRockPaperScissors) {
  auto g = rps_gadget(3, R(1, 5));
  // a1 loses to a2, a2 to a3, a3 to a1.
  EXPECT_EQ(g.payoff2(0, 0, 1), R(-1, 5));
  EXPECT_EQ(g.payoff2(0, 1, 2), R(-1, 5));
  EXPECT_EQ(g.payoff2(0, 2, 0), R(-1, 5));
  EXPECT_EQ(g.payoff2(0, 1, 0), R(1, 5));
  EXPECT_EQ(g.payoff2(0, 0, 0), R(0));
}

TEST(RpsGadget, SizesThreeToSevenHaveNoPureEquilibrium) {
  for (std::size_t a = 3; a <= 7; ++a) {
    auto g = rps_gadget(a, R(1, 3));
    EXPECT_TRUE(is_symmetric(g)) << a;
    EXPECT_FALSE(has_pure_equilibrium(g)) << a;
    for (std::size_t i = 0; i < a; ++i) {
      EXPECT_TRUE(g.payoff2(0, i, i).is_zero());
      for (std::size_t j = 0; j < a; ++j) {
        EXPECT_TRUE((g.payoff2(0, i, j) + g.payoff2(1, i, j)).is_zero());
        if (i != j) EXPECT_EQ(abs(g.payoff2(0, i, j)), R(1, 3));
      }
    }
  }
}

TEST(RpsGadget, DomainErrors) {
  EXPECT_THROW(rps_gadget(2, R(1)), DomainError);
  EXPECT_THROW(rps_gadget(3, R(0)), DomainError);
  EXPECT_THROW(rps_gadget(3, R(-1)), DomainError);
}

// ---- discounted values

TEST(DiscountedValue, DefiningRelation) {
  for (int n = 1; n <= 3; ++n) {
    auto r = DiscountRing::algebraic(n);
    EXPECT_EQ(DV::delta_pow(r, 2 * n + 1), DV(r, R(1, 2)));
    EXPECT_FALSE(DV::delta_pow(r, 2 * n).is_constant());
  }
}

TEST(DiscountedValue, GeometricIdentity) {
  for (int n = 1; n <= 3; ++n) {
    auto r = DiscountRing::algebraic(n);
    const DV d = DV::delta(r);
    for (std::uint64_t K = 0; K <= 10; ++K) {
      DV sum(r);
      for (std::uint64_t k = 0; k < K; ++k) sum += DV::delta_pow(r, k);
      EXPECT_EQ((one(r) - d) * sum + DV::delta_pow(r, K), one(r));
    }
  }
}

TEST(DiscountedValue, DeltaSquaredExceedsHalfForNOne) {
  auto r = DiscountRing::algebraic(1);
  EXPECT_GT(DV::delta_pow(r, 2), DV(r, R(1, 2)));
  EXPECT_LT(DV::delta(r), one(r));
  EXPECT_GT(DV::delta(r), DV(r, R(0)));
}

TEST(DiscountedValue, InverseAndDivision) {
  auto r = DiscountRing::algebraic(2);
  DV x = one(r) - DV::delta(r) * R(3) + DV::delta_pow(r, 4);
  EXPECT_EQ(x * x.inverse(), one(r));
  EXPECT_EQ((x / x), one(r));
  EXPECT_THROW(DV(r).inverse(), DomainError);
}

TEST(DiscountedValue, SignAgreesWithFloatingPoint) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> c(-20, 20);
  for (int n = 1; n <= 3; ++n) {
    auto r = DiscountRing::algebraic(n);
    const double d = std::pow(0.5, 1.0 / (2 * n + 1));
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<R> co;
      double approx = 0, p = 1;
      for (int i = 0; i < 2 * n + 1; ++i) {
        co.emplace_back(c(rng), 7);
        approx += co.back().to_double() * p;
        p *= d;
      }
      DV v(r, co);
      if (std::fabs(approx) < 1e-9) continue;
      EXPECT_EQ(v.sign(), approx > 0 ? 1 : -1);
    }
  }
}

TEST(DiscountedValue, RationalRing) {
  auto r = DiscountRing::rational(R(3, 4));
  EXPECT_EQ(DV::delta_pow(r, 2), DV(r, R(9, 16)));
  EXPECT_EQ((one(r) - DV::delta(r)).inverse(), DV(r, R(4)));
  EXPECT_THROW(DiscountRing::rational(R(0)), DomainError);
}

// ---- evaluation

StochasticGame self_loop(const DiscountRing& r, const R& u) {
  StochasticGame g({"s"}, {std::vector<std::string>{"a"}, {"b"}}, r);
  g.set_payoff(0, 0, 0, DV(r, u), DV(r, u));
  return g;
}

TEST(EvaluateDiscounted, ZeroPayoffs) {
  auto r = DiscountRing::algebraic(1);
  auto v = evaluate_discounted(self_loop(r, R(0)), {ActionSequence{{}, {0}},
                                                    ActionSequence{{}, {0}}});
  EXPECT_TRUE(v[0].is_zero());
}

TEST(EvaluateDiscounted, ConstantPayoffIsGeometricSeries) {
  for (int n = 1; n <= 2; ++n) {
    auto r = DiscountRing::algebraic(n);
    // A preamble longer than one stage exercises the prefix part too.
    auto v = evaluate_discounted(self_loop(r, R(1)),
                                 {ActionSequence{{0, 0}, {0}}, ActionSequence{{}, {0}}});
    EXPECT_EQ(v[0] * (one(r) - DV::delta(r)), one(r));
  }
}

TEST(EvaluateDiscounted, NeedsCycles) {
  auto r = DiscountRing::algebraic(1);
  EXPECT_THROW(evaluate_discounted(self_loop(r, R(1)),
                                   {ActionSequence{{0}, {}}, ActionSequence{{}, {0}}}),
               DomainError);
}

TEST(Property, TruncationWithinTailBound) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> pay(-3, 3);
  auto r = DiscountRing::algebraic(1);
  for (int trial = 0; trial < 20; ++trial) {
    // Three states, two actions each, random transitions and payoffs.
    StochasticGame g({"a", "b", "c"},
                     {std::vector<std::string>{"x", "y"}, {"x", "y"}}, r);
    std::uniform_int_distribution<std::size_t> st(0, 2);
    for (std::size_t s = 0; s < 3; ++s) {
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
          g.set_next(s, a, b, st(rng));
          g.set_payoff(s, a, b, DV(r, R(pay(rng))), DV(r, R(pay(rng))));
        }
      }
    }
    SequencePair p{ActionSequence{{1}, {0, 1, 1}}, ActionSequence{{}, {1, 0}}};
    auto exact = evaluate_discounted(g, p);
    for (std::size_t T : {3u, 8u, 12u}) {
      auto trunc = evaluate_finite(g, p, T);
      DV bound = DV::delta_pow(r, T) * R(3) * (one(r) - DV::delta(r)).inverse();
      for (std::size_t pl = 0; pl < 2; ++pl) {
        DV diff = exact[pl] - trunc[pl];
        EXPECT_LE(diff, bound);
        EXPECT_GE(diff, -bound);
      }
    }
  }
}

// ---- periodic formulas and the built game

PeriodicFormula pf(int n, std::vector<Clause> c) { return PeriodicFormula(n, c); }

TEST(AssignmentToStrategies, Examples) {
  auto f1 = pf(1, {{1}});
  EXPECT_EQ(assignment_to_strategies(f1, {{{true}}}).cycle,
            (std::vector<std::size_t>{0}));
  EXPECT_EQ(assignment_to_strategies(f1, {{{true}, {false}}}).cycle,
            (std::vector<std::size_t>{0, 1}));
  auto f2 = pf(2, {{1}});
  EXPECT_EQ(assignment_to_strategies(f2, {{{true, false}}}).cycle,
            (std::vector<std::size_t>{0, 1}));
}

TEST(PeriodicSatOracle, Examples) {
  auto a = periodic_sat_oracle(pf(1, {{1}}), 3);
  ASSERT_TRUE(a.has_value());
  EXPECT_EQ(a->blocks, (std::vector<std::vector<bool>>{{true}}));

  auto b = periodic_sat_oracle(pf(1, {{1, 2}, {-1, -2}}), 3);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->period(), 2u);
  EXPECT_TRUE(satisfies_periodically(pf(1, {{1, 2}, {-1, -2}}), *b));

  EXPECT_FALSE(periodic_sat_oracle(pf(1, {{1}, {-2}}), 4).has_value());
  EXPECT_THROW(periodic_sat_oracle(pf(2, {{1}}), 11), CapacityError);
}

TEST(WindowedFormula, RenamesBlocks) {
  auto f = pf(1, {{1, -2}});
  auto w = windowed_formula(f, 4);
  EXPECT_EQ(w.num_variables(), 4);
  EXPECT_EQ(w.clauses(), (std::vector<Clause>{{1, -2}, {2, -3}, {3, -4}}));
}

TEST(BuildPeriodicGame, StateCount) {
  auto g = build_periodic_game(pf(1, {{1}}));
  EXPECT_EQ(g.num_states(), 4u);
  EXPECT_EQ(g.states(), (std::vector<std::string>{"s1", "t1_2_c1", "t2_2_c1", "r"}));
  for (int n = 1; n <= 3; ++n) {
    for (std::size_t m = 1; m <= 3; ++m) {
      auto h = build_periodic_game(pf(n, std::vector<Clause>(m, Clause{1})));
      EXPECT_EQ(h.num_states(), static_cast<std::size_t>(n) + 2 * (2 * n - 1) * m + 1);
    }
  }
  EXPECT_THROW(build_periodic_game(pf(1, {})), DomainError);
}

TEST(BuildPeriodicGame, StagePayoffs) {
  // Clause c1 = (x1^0), clause c2 = (-x1^1).
  auto g = build_periodic_game(pf(1, {{1}, {-2}}));
  auto r = g.ring();
  const auto s1 = *g.find_state("s1");
  const auto t = *g.find_action(0, "t"), f = *g.find_action(0, "f");
  const auto c1 = *g.find_action(0, "c1"), c2 = *g.find_action(0, "c2");
  EXPECT_EQ(g.payoff(0, s1, c1, t), DV(r, R(-1)));
  EXPECT_EQ(g.payoff(0, s1, c1, f), DV(r, R(1)));
  EXPECT_EQ(g.payoff(1, s1, f, c1), DV(r, R(1)));
  EXPECT_EQ(g.payoff(0, s1, c1, c2), DV(r, R(-1)));
  EXPECT_EQ(g.next(s1, c1, t), *g.find_state("t1_2_c1"));
  EXPECT_EQ(g.next(s1, t, c2), *g.find_state("t2_2_c2"));
  EXPECT_EQ(g.next(s1, c1, c1), *g.find_state("r"));
  EXPECT_EQ(g.next(s1, t, f), s1);
  const auto t12 = *g.find_state("t1_2_c2");
  EXPECT_EQ(g.payoff(0, t12, t, f), DV(r, R(-4)));
  EXPECT_EQ(g.payoff(0, t12, t, t), DV(r, R(0)));
  EXPECT_EQ(g.payoff(0, t12, t, c1), DV(r, R(0)));
  EXPECT_EQ(g.next(t12, t, t), *g.find_state("r"));
  const auto rs = *g.find_state("r");
  const DV eps = (one(r) - DV::delta(r)) * R(1, 2);
  EXPECT_EQ(g.payoff(0, rs, t, f), -eps);
  EXPECT_EQ(g.payoff(1, rs, t, f), eps);
}

TEST(BuildPeriodicGame, PhaseStatesCycle) {
  auto g = build_periodic_game(pf(3, {{1, 4}}));
  EXPECT_EQ(g.next(*g.find_state("s2"), 2, 0), *g.find_state("s3"));
  EXPECT_EQ(g.next(*g.find_state("s3"), 0, 2), *g.find_state("s1"));
  EXPECT_EQ(g.next(*g.find_state("s1"), 1, 0), *g.find_state("s2"));
  EXPECT_EQ(g.next(*g.find_state("t1_5_c1"), 0, 0), *g.find_state("t1_6_c1"));
  EXPECT_EQ(g.next(*g.find_state("t1_6_c1"), 0, 0), *g.find_state("r"));
}

TEST(Property, TransitionsAreTotal) {
  auto g = build_periodic_game(pf(2, {{1, -3}, {2}}));
  for (std::size_t s = 0; s < g.num_states(); ++s) {
    for (std::size_t a = 0; a < g.num_actions(0); ++a) {
      for (std::size_t b = 0; b < g.num_actions(1); ++b) {
        EXPECT_LT(g.next(s, a, b), g.num_states());
      }
    }
  }
}

TEST(EvaluateDiscounted, SatisfyingProfileIsWorthZero) {
  for (auto f : {pf(1, {{1}}), pf(1, {{1, 2}, {-1, -2}}), pf(2, {{1, -4}, {2, 3}})}) {
    auto a = periodic_sat_oracle(f, 4);
    ASSERT_TRUE(a.has_value());
    auto s = assignment_to_strategies(f, *a);
    auto v = evaluate_discounted(build_periodic_game(f), {s, s});
    EXPECT_TRUE(v[0].is_zero());
    EXPECT_TRUE(v[1].is_zero());
  }
}

TEST(CertifyNoDeviation, SatisfyingProfile) {
  auto f = pf(1, {{1, 2}, {-1, -2}});
  auto g = build_periodic_game(f);
  auto s = assignment_to_strategies(f, *periodic_sat_oracle(f, 2));
  for (std::size_t d = 0; d < 2; ++d) {
    auto c = certify_no_deviation(g, {s, s}, d, 6, 12);
    EXPECT_TRUE(c.certified);
    EXPECT_EQ(c.prefixes, 4096u);
    EXPECT_GT(c.departing, 0u);
  }
}

TEST(CertifyNoDeviation, FalsifyingProfileHasProfitableClause) {
  // All-true falsifies (-x1^0 or -x1^1).
  auto f = pf(1, {{-1, -2}});
  auto g = build_periodic_game(f);
  ActionSequence tt{{}, {0}};
  EXPECT_FALSE(certify_no_deviation(g, {tt, tt}, 0, 6, 12).certified);
  auto dev = find_profitable_deviation(g, {tt, tt}, 0, 6, 12);
  ASSERT_TRUE(dev.has_value());
  EXPECT_GT(dev->gain_lower_bound.sign(), 0);
  EXPECT_EQ(dev->prefix.size(), 12u);
  EXPECT_TRUE(std::any_of(dev->prefix.begin(), dev->prefix.end(),
                          [](std::size_t a) { return a >= 2; }));
}

TEST(CertifyNoDeviation, Preconditions) {
  auto f = pf(1, {{1}});
  auto g = build_periodic_game(f);
  ActionSequence t{{}, {0}}, tf{{}, {0, 1}}, pre{{0}, {0}};
  EXPECT_THROW(certify_no_deviation(g, {t, tf}, 0, 5, 12), DomainError);
  EXPECT_THROW(certify_no_deviation(g, {pre, t}, 0, 6, 12), DomainError);
  EXPECT_THROW(certify_no_deviation(g, {t, t}, 0, 6, 4), DomainError);
}

// ---- finite horizon

TEST(CheckDeviationFinite, ZeroHorizon) {
  auto g = build_periodic_game(pf(1, {{1}}), Variant::kFinite, 3);
  SequencePair p{ActionSequence{}, ActionSequence{}};
  EXPECT_TRUE(check_deviation_finite(g, p, 0, 0).is_zero());
}

TEST(CheckDeviationFinite, SatisfyingWindow) {
  auto f = pf(1, {{1, 2}, {-1, -2}});
  auto g = build_periodic_game(f, Variant::kFinite, 6);
  ActionSequence s{{0, 1, 0, 1, 0, 1}, {}};
  EXPECT_TRUE(check_deviation_finite(g, {s, s}, 6, 0).is_zero());
  EXPECT_TRUE(check_deviation_finite(g, {s, s}, 6, 1).is_zero());
}

TEST(CheckDeviationFinite, UnsatisfiableWindowGivesUnitGain) {
  auto f = pf(1, {{1}, {-2}});
  auto g = build_periodic_game(f, Variant::kFinite, 6);
  for (std::uint32_t m1 = 0; m1 < 64; ++m1) {
    for (std::uint32_t m2 = 0; m2 < 64; m2 += 9) {
      ActionSequence a, b;
      for (int k = 5; k >= 0; --k) {
        a.preamble.push_back(m1 >> k & 1);
        b.preamble.push_back(m2 >> k & 1);
      }
      DV best = check_deviation_finite(g, {a, b}, 6, 0);
      DV other = check_deviation_finite(g, {a, b}, 6, 1);
      if (other > best) best = other;
      EXPECT_GE(best, DV(g.ring(), R(1)));
    }
  }
}

TEST(CheckDeviationFinite, ShortSequence) {
  auto g = build_periodic_game(pf(1, {{1}}), Variant::kFinite, 3);
  ActionSequence s{{0, 0}, {}};
  EXPECT_THROW(check_deviation_finite(g, {s, s}, 3, 0), StructuralError);
}

TEST(FindPureNeFinite, SatisfiableWindow) {
  auto f = pf(1, {{1, 2}, {-1, -2}});
  auto g = build_periodic_game(f, Variant::kFinite, 6);
  auto w = find_pure_ne_finite(g, 6);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(check_deviation_finite(g, *w, 6, 0).is_zero());
  EXPECT_TRUE(check_deviation_finite(g, *w, 6, 1).is_zero());
}

TEST(FindPureNeFinite, UnsatisfiableWindow) {
  auto g = build_periodic_game(pf(1, {{1}, {-2}}), Variant::kFinite, 6);
  EXPECT_FALSE(find_pure_ne_finite(g, 6).has_value());
}

TEST(FindPureNeFinite, ConstantSingleStateGame) {
  auto r = DiscountRing::rational(R(1));
  StochasticGame g({"s"}, {std::vector<std::string>{"a", "b"}, {"a", "b"}}, r);
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) g.set_payoff(0, a, b, DV(r, R(1)), DV(r, R(1)));
  }
  auto w = find_pure_ne_finite(g, 3);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ((*w)[0].preamble, (std::vector<std::size_t>{0, 0, 0}));
  EXPECT_EQ((*w)[1].preamble, (std::vector<std::size_t>{0, 0, 0}));
}

// Exhaustive pair scan through check_deviation_finite, used as an oracle.
std::optional<SequencePair> pair_scan(const StochasticGame& g, std::size_t T) {
  std::uint64_t count = 1;
  for (std::size_t t = 0; t < T; ++t) count *= g.num_actions(0);
  auto decode = [&](std::uint64_t i) {
    ActionSequence s;
    s.preamble.assign(T, 0);
    for (std::size_t t = T; t-- > 0;) {
      s.preamble[t] = i % g.num_actions(0);
      i /= g.num_actions(0);
    }
    return s;
  };
  for (std::uint64_t i = 0; i < count; ++i) {
    for (std::uint64_t j = 0; j < count; ++j) {
      SequencePair p{decode(i), decode(j)};
      if (check_deviation_finite(g, p, T, 0).is_zero() &&
          check_deviation_finite(g, p, T, 1).is_zero()) {
        return p;
      }
    }
  }
  return std::nullopt;
}

TEST(Property, FiniteSearchMatchesPairScan) {
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> pay(-2, 2);
  std::uniform_int_distribution<std::size_t> st(0, 2);
  for (int trial = 0; trial < 15; ++trial) {
    auto r = DiscountRing::rational(trial % 2 ? R(1) : R(2, 3));
    StochasticGame g({"a", "b", "c"},
                     {std::vector<std::string>{"x", "y"}, {"x", "y"}}, r);
    for (std::size_t s = 0; s < 3; ++s) {
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
          g.set_next(s, a, b, st(rng));
          g.set_payoff(s, a, b, DV(r, R(pay(rng))), DV(r, R(pay(rng))));
        }
      }
    }
    EXPECT_EQ(find_pure_ne_finite(g, 3), pair_scan(g, 3));
    EXPECT_EQ(find_pure_ne_finite(g, 3, kDefaultSequenceBound, 1),
              find_pure_ne_finite(g, 3, kDefaultSequenceBound, 3));
  }
}

TEST(FindPureNeFinite, CapacityBound) {
  auto g = build_periodic_game(pf(1, {{1}, {2}}), Variant::kFinite, 9);
  EXPECT_THROW(find_pure_ne_finite(g, 9), CapacityError);
}

TEST(DefaultFiniteHorizon, FitsTheBound) {
  EXPECT_EQ(default_finite_horizon(pf(1, {{1}})), 8u);
  EXPECT_EQ(default_finite_horizon(pf(1, {{1}, {2}})), 6u);
  EXPECT_THROW(default_finite_horizon(pf(2, {{1}, {2}, {3}})), CapacityError);
  EXPECT_THROW(build_periodic_game(pf(2, {{1}}), Variant::kFinite, 5), DomainError);
}

}  // namespace
}  // namespace gamehard
