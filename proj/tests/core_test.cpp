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

#include <random>

#include <gtest/gtest.h>

#include "gamehard/gphi.hpp"
#include "gamehard/normal_form.hpp"
#include "gamehard/rational.hpp"
#include "test_util.hpp"

namespace gamehard {
namespace {

NormalFormGame zero_game() {
  return NormalFormGame({{"a", "b"}, {"a", "b"}});
}

MixedProfile uniform_on(const GphiGame& g, std::vector<Literal> lits) {
  std::vector<Rational> mix(g.num_strategies(), Rational(0));
  for (Literal l : lits) {
    mix[g.literal_index(l)] = Rational(1, static_cast<long>(lits.size()));
  }
  return MixedProfile({mix, mix});
}

MixedProfile pure_pair(const NormalFormGame& g, std::size_t a, std::size_t b) {
  return MixedProfile::pure({g.num_strategies(0), g.num_strategies(1)}, {a, b});
}

TEST(Rational, CanonicalForm) {
  Rational q(6, -4);
  EXPECT_EQ(q.str(), "-3/2");
  EXPECT_EQ(q.denominator(), 2);
  EXPECT_EQ(Rational(0, 5).str(), "0/1");
  EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
  EXPECT_EQ(Rational::parse("-7"), Rational(-7));
  EXPECT_THROW(Rational::parse("1/0"), ParseError);
  EXPECT_THROW(Rational::parse("0.5"), ParseError);
  EXPECT_THROW(Rational::parse(""), ParseError);
}

TEST(Rational, ParsePrintRoundTrip) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> d(-1000, 1000), e(1, 1000);
  for (int i = 0; i < 200; ++i) {
    Rational q(d(rng), e(rng));
    EXPECT_EQ(Rational::parse(q.str()), q);
  }
}

TEST(ExpectedUtility, ZeroGame) {
  auto g = zero_game();
  MixedProfile p({{Rational(1, 3), Rational(2, 3)}, {Rational(1), Rational(0)}});
  EXPECT_EQ(expected_utility(g, p), (Utilities{Rational(0), Rational(0)}));
}

TEST(ExpectedUtility, FfInGphi) {
  auto g = build_g_phi(CnfFormula(1, {{1}}));
  auto p = pure_pair(g.game(), g.f_index(), g.f_index());
  EXPECT_EQ(expected_utility(g.game(), p), (Utilities{Rational(0), Rational(0)}));
}

TEST(ExpectedUtility, SatisfyingProfileEarnsOne) {
  auto g = build_g_phi(CnfFormula(2, {{1, 2}, {-1, 2}}));
  auto p = uniform_on(g, {-1, 2});
  EXPECT_EQ(expected_utility(g.game(), p), (Utilities{Rational(1), Rational(1)}));
}

TEST(ExpectedUtility, DimensionMismatch) {
  auto g = zero_game();
  MixedProfile p({{Rational(1)}, {Rational(1), Rational(0)}});
  EXPECT_THROW(expected_utility(g, p), StructuralError);
}

TEST(VerifyNash, FfAccepted) {
  auto g = build_g_phi(CnfFormula(1, {{1}}));
  auto cert = verify_nash(g.game(), pure_pair(g.game(), g.f_index(), g.f_index()));
  EXPECT_TRUE(cert.accepted);
  EXPECT_FALSE(cert.witness.has_value());
}

TEST(VerifyNash, ZeroGameAcceptsAnything) {
  auto g = zero_game();
  MixedProfile p({{Rational(1, 4), Rational(3, 4)}, {Rational(1, 2), Rational(1, 2)}});
  EXPECT_TRUE(verify_nash(g, p).accepted);
}

TEST(VerifyNash, FalsifyingLiteralRejectedByClause) {
  auto g = build_g_phi(CnfFormula(1, {{1}}));
  const auto neg = g.literal_index(-1);
  auto cert = verify_nash(g.game(), pure_pair(g.game(), neg, neg));
  EXPECT_FALSE(cert.accepted);
  ASSERT_TRUE(cert.witness.has_value());
  EXPECT_EQ(cert.witness->player, 0u);
  EXPECT_EQ(g.game().label(0, cert.witness->strategy), "c1");
  EXPECT_EQ(cert.witness->slack, Rational(-1));
}

TEST(SocialWelfare, Examples) {
  auto g = build_g_phi(CnfFormula(1, {{1}}));
  EXPECT_EQ(social_welfare(g.game(), pure_pair(g.game(), g.f_index(), g.f_index())),
            Rational(0));
  EXPECT_EQ(social_welfare(g.game(), uniform_on(g, {1})), Rational(2));
  auto z = zero_game();
  EXPECT_EQ(social_welfare(z, pure_pair(z, 1, 0)), Rational(0));
}

TEST(IsSymmetric, Examples) {
  EXPECT_TRUE(is_symmetric(build_g_phi(CnfFormula(2, {{1, -2}})).game()));
  EXPECT_TRUE(is_symmetric(zero_game()));
  auto id = NormalFormGame::bimatrix(
      {"a", "b"}, {"a", "b"}, {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}},
      {{Rational(0), Rational(0)}, {Rational(0), Rational(0)}});
  EXPECT_FALSE(is_symmetric(id));
  NormalFormGame uneven({{"a", "b"}, {"a"}});
  EXPECT_THROW(is_symmetric(uneven), StructuralError);
}

TEST(IsSymmetric, WholeCorpus) {
  for (const auto& phi : testing::small_cnf_corpus()) {
    EXPECT_TRUE(is_symmetric(build_g_phi(phi).game())) << to_dimacs(phi);
  }
}

// Largest u1 + u2 over all cells, scanned directly.
Rational max_cell_welfare(const NormalFormGame& g) {
  Rational best = g.payoff2(0, 0, 0) + g.payoff2(1, 0, 0);
  for (std::size_t i = 0; i < g.num_strategies(0); ++i) {
    for (std::size_t j = 0; j < g.num_strategies(1); ++j) {
      best = std::max(best, g.payoff2(0, i, j) + g.payoff2(1, i, j));
    }
  }
  return best;
}

TEST(ParetoOptimal, GphiVectors) {
  auto g = build_g_phi(CnfFormula(2, {{1, 2}}));
  ASSERT_EQ(max_cell_welfare(g.game()), Rational(2));
  EXPECT_TRUE(pareto_optimal(g.game(), {Rational(1), Rational(1)}));
  EXPECT_FALSE(pareto_optimal(g.game(), {Rational(0), Rational(0)}));
}

TEST(ParetoOptimal, SingleOutcome) {
  auto g = NormalFormGame::bimatrix({"a"}, {"b"}, {{Rational(3)}}, {{Rational(-1)}});
  EXPECT_TRUE(pareto_optimal(g, {Rational(3), Rational(-1)}));
}

TEST(ParetoOptimal, UnachievableVectorThrows) {
  auto g = NormalFormGame::bimatrix({"a"}, {"b"}, {{Rational(3)}}, {{Rational(-1)}});
  EXPECT_THROW(pareto_optimal(g, {Rational(4), Rational(0)}), DomainError);
}

// Random convex combination of two mixes of one player.
TEST(Property, ExpectedUtilityIsLinearPerPlayer) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> w(1, 9);
  auto random_mix = [&](std::size_t n) {
    std::vector<Rational> v;
    Rational total(0);
    for (std::size_t i = 0; i < n; ++i) {
      v.emplace_back(w(rng));
      total += v.back();
    }
    for (auto& x : v) x = x / total;
    return v;
  };
  for (int trial = 0; trial < 50; ++trial) {
    auto g = testing::random_game(rng, 3, 4, 9, 3);
    auto other = random_mix(4);
    auto s = random_mix(3), t = random_mix(3);
    Rational lam(w(rng), 10);
    std::vector<Rational> mix(3);
    for (std::size_t i = 0; i < 3; ++i) {
      mix[i] = lam * s[i] + (Rational(1) - lam) * t[i];
    }
    auto us = expected_utility(g, MixedProfile({s, other}));
    auto ut = expected_utility(g, MixedProfile({t, other}));
    auto um = expected_utility(g, MixedProfile({mix, other}));
    for (std::size_t p = 0; p < 2; ++p) {
      EXPECT_EQ(um[p], lam * us[p] + (Rational(1) - lam) * ut[p]);
    }
  }
}

TEST(Property, AcceptedProfilesHaveBestResponseSupports) {
  std::mt19937 rng(5);
  int accepted = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto g = testing::random_game(rng, 2, 2, 3);
    // Pure profiles and the uniform profile.
    std::vector<MixedProfile> cands;
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) cands.push_back(pure_pair(g, a, b));
    }
    cands.push_back(MixedProfile({{Rational(1, 2), Rational(1, 2)},
                                  {Rational(1, 2), Rational(1, 2)}}));
    for (const auto& p : cands) {
      auto cert = verify_nash(g, p);
      Rational sw(0);
      for (const auto& u : cert.realized) sw += u;
      EXPECT_EQ(social_welfare(g, p), sw);
      if (!cert.accepted) {
        ASSERT_TRUE(cert.witness.has_value());
        EXPECT_LT(cert.witness->slack.sign(), 0);
        continue;
      }
      ++accepted;
      for (std::size_t pl = 0; pl < 2; ++pl) {
        for (const auto& s : cert.slack[pl]) EXPECT_GE(s.sign(), 0);
        for (auto s : p.support(pl)) EXPECT_TRUE(cert.slack[pl][s].is_zero());
      }
    }
  }
  EXPECT_GT(accepted, 0);
}

}  // namespace
}  // namespace gamehard
