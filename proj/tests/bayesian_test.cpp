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

#include <gtest/gtest.h>

#include "gamehard/bayesian.hpp"
#include "test_util.hpp"

namespace gamehard {
namespace {

using R = Rational;

SetCoverInstance instance(int n, std::vector<std::vector<int>> subsets, int k) {
  SetCoverInstance i;
  i.n = n;
  i.subsets = std::move(subsets);
  i.k = k;
  return i;
}

std::size_t action(const BayesianGame& g, const std::string& label) {
  const auto& a = g.actions()[0];
  return static_cast<std::size_t>(std::find(a.begin(), a.end(), label) - a.begin());
}

TEST(BuildSetcoverGame, TablePayoffs) {
  auto g = build_setcover_game(instance(2, {{1}, {2}}, 2));
  EXPECT_EQ(g.actions()[0], (std::vector<std::string>{"S1", "S2", "s1", "s2"}));
  EXPECT_EQ(g.utility(0, 0, action(g, "S1"), action(g, "s1")), R(2));
  EXPECT_EQ(g.utility(0, 0, action(g, "s1"), action(g, "s2")), R(-6));
  EXPECT_EQ(g.utility(0, 1, action(g, "s2"), action(g, "S1")), R(3));
  EXPECT_EQ(g.utility(0, 0, action(g, "s1"), action(g, "S1")), R(-6));
  EXPECT_EQ(g.utility(0, 0, action(g, "S1"), action(g, "s2")), R(1));
  EXPECT_EQ(g.utility(0, 0, action(g, "S1"), action(g, "S2")), R(1));
}

// Row payoff from labels; mirrors the six cases.
R row_payoff(const SetCoverInstance& inst, const std::string& a,
             const std::string& b) {
  auto in = [&](int elem, int set) {
    const auto& s = inst.subsets[static_cast<std::size_t>(set - 1)];
    return std::count(s.begin(), s.end(), elem) > 0;
  };
  const bool a_set = a[0] == 'S', b_set = b[0] == 'S';
  const int ai = std::stoi(a.substr(1)), bi = std::stoi(b.substr(1));
  if (a_set && b_set) return R(1);
  if (a_set) return R(in(bi, ai) ? 2 : 1);
  if (!b_set) return R(-3 * inst.k);
  return in(ai, bi) ? R(-3 * inst.k) : R(3);
}

TEST(Property, TableMatchesLabelOracleAndPriorIsUniform) {
  for (const auto& inst : testing::small_setcover_corpus(3, 3, 2)) {
    auto g = build_setcover_game(inst);
    const auto& A = g.actions()[0];
    for (std::size_t t = 0; t < g.num_types(0); ++t) {
      for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < A.size(); ++j) {
          ASSERT_EQ(g.utility(0, t, i, j), row_payoff(inst, A[i], A[j]));
          ASSERT_EQ(g.utility(1, t, i, j), row_payoff(inst, A[j], A[i]));
        }
      }
    }
    for (const auto& row : g.prior()) {
      for (const auto& q : row) ASSERT_EQ(q, R(1, inst.k * inst.k));
    }
  }
}

TEST(InterimUtility, HandExpectation) {
  auto g = build_setcover_game(instance(2, {{1}, {2}}, 2));
  PureBayesianProfile p{{{0, 0}, {0, 1}}};
  EXPECT_EQ(interim_utility(g, p, 0, 0, action(g, "s1")), R(-3, 2));
}

TEST(InterimUtility, SubsetProfilesEarnOne) {
  auto g = build_setcover_game(instance(3, {{1, 2}, {3}, {2, 3}}, 2));
  PureBayesianProfile p{{{0, 2}, {1, 0}}};
  for (std::size_t pl = 0; pl < 2; ++pl) {
    for (std::size_t t = 0; t < 2; ++t) EXPECT_EQ(interim_utility(g, p, pl, t), R(1));
  }
}

TEST(InterimUtility, SingleTypeIsStageUtility) {
  auto g = build_setcover_game(instance(2, {{1}, {2}}, 1));
  PureBayesianProfile p{{{action(g, "S1")}, {action(g, "s2")}}};
  EXPECT_EQ(interim_utility(g, p, 0, 0), R(1));
  EXPECT_EQ(interim_utility(g, p, 1, 0), R(3));
}

TEST(InterimUtility, ZeroMassType) {
  BayesianGame g({{"a", "b"}, {"c"}}, {{R(1)}, {R(0)}}, {{"x"}, {"y"}},
                 {{{{R(0)}}, {{R(0)}}}, {{{R(0)}}}});
  PureBayesianProfile p{{{0, 0}, {0}}};
  EXPECT_THROW(interim_utility(g, p, 0, 1), DomainError);
  EXPECT_TRUE(is_pure_bne(g, p));
}

TEST(BayesianGame, PriorValidation) {
  EXPECT_THROW(BayesianGame({{"a"}, {"b"}}, {{R(1, 2)}}, {{"x"}, {"y"}},
                            {{{{R(0)}}}, {{{R(0)}}}}),
               DomainError);
  EXPECT_THROW(BayesianGame({{"a", "b"}, {"c"}}, {{R(2)}, {R(-1)}}, {{"x"}, {"y"}},
                            {{{{R(0)}}, {{R(0)}}}, {{{R(0)}}}}),
               DomainError);
}

TEST(FindPureBne, CoverExists) {
  auto g = build_setcover_game(instance(2, {{1, 2}}, 1));
  auto p = find_pure_bne(g);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->actions, (std::vector<std::vector<std::size_t>>{{0}, {0}}));
}

TEST(FindPureBne, NoCoverOfSizeOne) {
  auto g = build_setcover_game(instance(2, {{1}, {2}}, 1));
  EXPECT_FALSE(find_pure_bne(g).has_value());
}

TEST(FindPureBne, DominantAction) {
  // Action "d" pays 5 to both players whatever the types.
  std::vector<std::vector<R>> u{{R(5), R(5)}, {R(0), R(0)}};
  std::vector<std::vector<R>> v{{R(5), R(0)}, {R(5), R(0)}};
  BayesianGame g({{"a", "b"}, {"c", "d"}},
                 {{R(1, 4), R(1, 4)}, {R(1, 4), R(1, 4)}},
                 {{"d", "e"}, {"d", "e"}}, {{u, u}, {v, v}});
  auto p = find_pure_bne(g);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->actions, (std::vector<std::vector<std::size_t>>{{0, 0}, {0, 0}}));
}

TEST(FindPureBne, CapacityBound) {
  auto g = build_setcover_game(instance(3, {{1}, {2}, {3}}, 3));
  EXPECT_THROW(find_pure_bne(g, 1000), CapacityError);
}

TEST(SetCoverOracle, Examples) {
  EXPECT_EQ(solve_set_cover_bruteforce(instance(2, {{1, 2}}, 1)),
            (std::vector<int>{1}));
  EXPECT_FALSE(solve_set_cover_bruteforce(instance(2, {{1}, {2}}, 1)).has_value());
  EXPECT_EQ(solve_set_cover_bruteforce(instance(2, {{1}, {2}}, 2)),
            (std::vector<int>{1, 2}));
  EXPECT_EQ(solve_set_cover_bruteforce(instance(3, {{1}, {1, 2, 3}, {2, 3}}, 2)),
            (std::vector<int>{1, 2}));
}

TEST(SetCoverOracle, InvalidInstances) {
  EXPECT_THROW(solve_set_cover_bruteforce(instance(2, {{1}}, 1)), DomainError);
  EXPECT_THROW(solve_set_cover_bruteforce(instance(1, {{1}}, 2)), DomainError);
  EXPECT_THROW(solve_set_cover_bruteforce(instance(1, {{2}}, 1)), DomainError);
}

TEST(Property, EquivalenceOnSmallInstances) {
  for (const auto& inst : testing::small_setcover_corpus(2, 3, 2)) {
    auto g = build_setcover_game(inst);
    auto p = find_pure_bne(g);
    auto cover = solve_set_cover_bruteforce(inst);
    ASSERT_EQ(p.has_value(), cover.has_value());
    if (!cover) continue;
    const std::size_t m = inst.subsets.size();
    for (const auto& per_player : p->actions) {
      for (auto a : per_player) EXPECT_LT(a, m);
    }
    EXPECT_TRUE(is_pure_bne(g, cover_to_profile(inst, *cover)));
  }
}

TEST(Property, WorkerCountDoesNotChangeWitness) {
  for (const auto& inst : testing::small_setcover_corpus(2, 2, 2)) {
    auto g = build_setcover_game(inst);
    EXPECT_EQ(find_pure_bne(g, kDefaultBneBound, 1),
              find_pure_bne(g, kDefaultBneBound, 3));
  }
}

}  // namespace
}  // namespace gamehard
