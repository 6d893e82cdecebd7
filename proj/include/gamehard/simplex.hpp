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

#ifndef GAMEHARD_SIMPLEX_HPP_
#define GAMEHARD_SIMPLEX_HPP_

#include <optional>
#include <vector>

#include "gamehard/linalg.hpp"
#include "gamehard/rational.hpp"

namespace gamehard::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Result {
  Status status = Status::kInfeasible;
  Rational value;
  std::vector<Rational> x;
};

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Constraint {
  std::vector<Rational> coeffs;
  Sense sense = Sense::kEqual;
  Rational rhs;
};

// maximize objective . x  subject to constraints, x >= 0.
// Two-phase tableau simplex over exact rationals with Bland's rule, so it
// terminates on degenerate problems.
inline Result maximize(const std::vector<Rational>& objective,
                       const std::vector<Constraint>& constraints) {
  const std::size_t n = objective.size();
  const std::size_t m = constraints.size();

  // Column layout: original | slack/surplus (one per inequality) | artificial.
  std::size_t slack_count = 0;
  for (const auto& c : constraints) {
    if (c.sense != Sense::kEqual) ++slack_count;
  }
  const std::size_t art_begin = n + slack_count;
  const std::size_t cols = art_begin + m;  // one artificial per row
  linalg::Matrix t(m, cols + 1);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k <= cols; ++k) t(r, k) = Rational(0);
  }
  std::vector<std::size_t> basis(m);
  std::size_t slack = n;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& c = constraints[r];
    if (c.coeffs.size() != n) throw StructuralError("constraint width");
    Rational sign(c.rhs.sign() < 0 ? -1 : 1);
    for (std::size_t k = 0; k < n; ++k) t(r, k) = c.coeffs[k] * sign;
    if (c.sense == Sense::kLessEqual) t(r, slack++) = sign;
    if (c.sense == Sense::kGreaterEqual) t(r, slack++) = -sign;
    t(r, art_begin + r) = Rational(1);
    t(r, cols) = c.rhs * sign;
    basis[r] = art_begin + r;
  }

  mpq_class scratch;
  auto pivot = [&](std::size_t pr, std::size_t pc) {
    Rational inv = Rational(1) / t(pr, pc);
    for (std::size_t k = 0; k <= cols; ++k) t(pr, k) *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == pr || t(r, pc).is_zero()) continue;
      Rational f = t(r, pc);
      for (std::size_t k = 0; k <= cols; ++k) {
        if (!t(pr, k).is_zero()) sub_mul(t(r, k), f, t(pr, k), scratch);
      }
    }
    basis[pr] = pc;
  };

  // Runs simplex for the cost vector over columns [0, limit). Returns false
  // when unbounded.
  auto run = [&](const std::vector<Rational>& cost, std::size_t limit) {
    while (true) {
      // reduced cost of column k: cost[k] - sum_r cost[basis[r]] * t(r, k)
      std::optional<std::size_t> enter;
      for (std::size_t k = 0; k < limit && !enter; ++k) {
        Rational rc = cost[k];
        for (std::size_t r = 0; r < m; ++r) {
          if (!t(r, k).is_zero()) rc -= cost[basis[r]] * t(r, k);
        }
        if (rc.sign() > 0) enter = k;
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t r = 0; r < m; ++r) {
        if (t(r, *enter).sign() <= 0) continue;
        Rational ratio = t(r, cols) / t(r, *enter);
        if (!leave || ratio < best ||
            (ratio == best && basis[r] < basis[*leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  };

  // Phase 1: maximize -(sum of artificials).
  std::vector<Rational> phase1(cols, Rational(0));
  for (std::size_t k = art_begin; k < cols; ++k) phase1[k] = Rational(-1);
  run(phase1, cols);
  Rational infeas(0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] >= art_begin) infeas += t(r, cols);
  }
  Result res;
  if (!infeas.is_zero()) {
    res.status = Status::kInfeasible;
    return res;
  }
  // Drive zero-valued artificials out of the basis where possible.
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < art_begin) continue;
    for (std::size_t k = 0; k < art_begin; ++k) {
      if (!t(r, k).is_zero()) {
        pivot(r, k);
        break;
      }
    }
  }

  // Phase 2 over non-artificial columns. Rows whose artificial could not be
  // driven out are redundant and carry rhs 0.
  std::vector<Rational> phase2(cols, Rational(0));
  for (std::size_t k = 0; k < n; ++k) phase2[k] = objective[k];
  if (!run(phase2, art_begin)) {
    res.status = Status::kUnbounded;
    return res;
  }
  res.status = Status::kOptimal;
  res.x.assign(n, Rational(0));
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) res.x[basis[r]] = t(r, cols);
  }
  res.value = Rational(0);
  for (std::size_t k = 0; k < n; ++k) res.value += objective[k] * res.x[k];
  return res;
}

}  // namespace gamehard::lp

#endif  // GAMEHARD_SIMPLEX_HPP_
