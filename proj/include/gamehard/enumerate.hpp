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

// Complete Nash-equilibrium enumeration for bimatrix games by support
// enumeration over exact rationals.
//
// For a support pair (T1, T2) the equilibrium conditions split into two
// independent polytopes:
//   Px = { x on T1 : x >= 0, sum x = 1, B[.,j]x = v for j in T2,
//                    B[.,j]x <= v for j outside T2 }
//   Py = { y on T2 : the same with the row player's payoffs A }
// and every point of Px x Py is an equilibrium. When either polytope has more
// than one point while the other is non-empty the game carries a continuum of
// equilibria; we then report the vertex pairs and flag the game degenerate.

#ifndef GAMEHARD_ENUMERATE_HPP_
#define GAMEHARD_ENUMERATE_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "gamehard/errors.hpp"
#include "gamehard/linalg.hpp"
#include "gamehard/normal_form.hpp"
#include "gamehard/parallel.hpp"

namespace gamehard {

struct SupportPair {
  std::vector<std::size_t> rows;  // player 1
  std::vector<std::size_t> cols;  // player 2

  friend bool operator==(const SupportPair&, const SupportPair&) = default;
  friend auto operator<=>(const SupportPair& a, const SupportPair& b) {
    return std::tie(a.rows, a.cols) <=> std::tie(b.rows, b.cols);
  }
};

struct SupportSolution {
  std::vector<MixedProfile> candidates;
  bool degenerate = false;
};

struct EnumerationOptions {
  std::size_t max_strategies = 10;
  int jobs = 1;
};

struct EnumerationResult {
  std::vector<MixedProfile> equilibria;
  bool complete = false;
  bool degenerate = false;
  std::vector<SupportPair> degenerate_witnesses;
};

namespace internal {

// Vertices of the polytope of one player's mixes over `own` that make every
// opponent strategy in `opp` a best response, each as (mix over own, value).
// `payoff(own_idx, opp_idx)` is the *opponent's* utility.
template <typename Payoff>
std::vector<std::vector<Rational>> side_vertices(
    const Payoff& payoff, const std::vector<std::size_t>& own,
    const std::vector<std::size_t>& opp, std::size_t opp_count,
    linalg::Matrix& aug) {
  const std::size_t k = own.size();
  const std::size_t rows = opp.size() + 1;
  aug.resize(rows, k + 2);
  for (std::size_t r = 0; r < opp.size(); ++r) {
    for (std::size_t c = 0; c < k; ++c) aug(r, c) = payoff(own[c], opp[r]);
    aug(r, k) = Rational(-1);
    aug(r, k + 1) = Rational(0);
  }
  for (std::size_t c = 0; c < k; ++c) aug(opp.size(), c) = Rational(1);
  aug(opp.size(), k) = Rational(0);
  aug(opp.size(), k + 1) = Rational(1);

  auto set = linalg::solve_affine(aug);
  if (!set) return {};

  std::vector<bool> in_opp(opp_count, false);
  for (auto j : opp) in_opp[j] = true;

  if (set->dimension() == 0) {
    const auto& z = set->particular;
    for (std::size_t c = 0; c < k; ++c) {
      if (z[c].sign() < 0) return {};
    }
    mpq_class scratch;
    for (std::size_t j = 0; j < opp_count; ++j) {
      if (in_opp[j]) continue;
      Rational s(0);
      for (std::size_t c = 0; c < k; ++c) {
        if (z[c].is_zero()) continue;
        mpq_mul(scratch.get_mpq_t(), payoff(own[c], j).mpq().get_mpq_t(),
                z[c].mpq().get_mpq_t());
        mpq_add(s.mpq().get_mpq_t(), s.mpq().get_mpq_t(), scratch.get_mpq_t());
      }
      if (s > z[k]) return {};
    }
    return {z};
  }

  std::vector<linalg::Halfspace> hs;
  for (std::size_t c = 0; c < k; ++c) {
    linalg::Halfspace h{std::vector<Rational>(k + 1, Rational(0)), Rational(0)};
    h.coeffs[c] = Rational(-1);
    hs.push_back(std::move(h));
  }
  for (std::size_t j = 0; j < opp_count; ++j) {
    if (in_opp[j]) continue;
    linalg::Halfspace h{std::vector<Rational>(k + 1), Rational(0)};
    for (std::size_t c = 0; c < k; ++c) h.coeffs[c] = payoff(own[c], j);
    h.coeffs[k] = Rational(-1);
    hs.push_back(std::move(h));
  }
  return linalg::enumerate_vertices(*set, hs);
}

using Vertices = std::vector<std::vector<Rational>>;

// Integer copy of a bimatrix game, each player's payoffs scaled by a positive
// common denominator (which leaves best responses unchanged). `ok` is false
// when the scaled entries would be too large for the fast path.
struct IntGame {
  bool ok = false;
  std::size_t m = 0, n = 0;
  std::vector<std::int64_t> a, b;  // [i * n + j]
};

inline IntGame to_int_game(const NormalFormGame& g) {
  IntGame ig;
  ig.m = g.num_strategies(0);
  ig.n = g.num_strategies(1);
  constexpr long kLimit = 1L << 24;
  for (std::size_t player = 0; player < 2; ++player) {
    mpz_class den = 1;
    for (std::size_t k = 0; k < g.num_cells(); ++k) {
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(),
              g.cell(k)[player].denominator().get_mpz_t());
    }
    auto& out = player == 0 ? ig.a : ig.b;
    out.resize(g.num_cells());
    for (std::size_t k = 0; k < g.num_cells(); ++k) {
      mpz_class v = g.cell(k)[player].numerator() * den /
                    g.cell(k)[player].denominator();
      if (abs(v) > kLimit) return ig;
      out[k] = v.get_si();
    }
  }
  ig.ok = true;
  return ig;
}

enum class FastOutcome { kEmpty, kSolved, kUnknown };

namespace fast {

using I = std::int64_t;

struct Overflow {};

inline I mul(I a, I b) {
  I r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline I add(I a, I b) {
  I r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline I sub(I a, I b) {
  I r;
  if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
  return r;
}

// In-place fraction-free Gauss-Jordan over `rows` x (`unknowns` + 1). Every
// pivot row ends with the same diagonal entry, returned in `det`. Returns the
// pivot columns, or nullopt if the system is inconsistent.
inline std::optional<std::vector<std::size_t>> eliminate(
    std::vector<std::vector<I>>& mat, std::size_t unknowns, I& det) {
  const std::size_t rows = mat.size();
  I prev = 1;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < unknowns && pivots.size() < rows; ++col) {
    const std::size_t rank = pivots.size();
    std::size_t pr = rank;
    while (pr < rows && mat[pr][col] == 0) ++pr;
    if (pr == rows) continue;
    std::swap(mat[pr], mat[rank]);
    const I p = mat[rank][col];
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank) continue;
      const I f = mat[i][col];
      if (f == 0 && p == prev) continue;
      for (std::size_t j = 0; j <= unknowns; ++j) {
        I d = sub(mul(p, mat[i][j]), mul(f, mat[rank][j]));
        if (d % prev != 0) throw Overflow{};  // never expected; be safe
        mat[i][j] = d / prev;
      }
    }
    prev = p;
    pivots.push_back(col);
  }
  for (std::size_t i = pivots.size(); i < rows; ++i) {
    if (mat[i][unknowns] != 0) return std::nullopt;
  }
  det = pivots.empty() ? 1 : mat[0][pivots[0]];
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (mat[r][pivots[r]] != det) throw Overflow{};
  }
  return pivots;
}

inline I gcd(I a, I b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    I t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace fast

// Integer version of side_vertices over payoffs already scaled to integers.
// Settles the side exactly unless an intermediate overflows 64 bits, in which
// case the caller falls back to rational arithmetic.
template <typename Payoff>
FastOutcome fast_side(const Payoff& payoff, const std::vector<std::size_t>& own,
                      const std::vector<std::size_t>& opp,
                      std::size_t opp_count, Vertices& out,
                      std::uint64_t budget = linalg::kDefaultVertexBudget) {
  using fast::I;
  const std::size_t k = own.size();
  const std::size_t unknowns = k + 1;  // mix, then common value
  try {
    std::vector<std::vector<I>> mat(opp.size() + 1,
                                    std::vector<I>(unknowns + 1, 0));
    for (std::size_t r = 0; r < opp.size(); ++r) {
      for (std::size_t c = 0; c < k; ++c) mat[r][c] = payoff(own[c], opp[r]);
      mat[r][k] = -1;
    }
    for (std::size_t c = 0; c < k; ++c) mat[opp.size()][c] = 1;
    mat[opp.size()][unknowns] = 1;
    I det = 1;
    auto pivots = fast::eliminate(mat, unknowns, det);
    if (!pivots) return FastOutcome::kEmpty;

    // det * z_u = base[u] + sum_f coef[u][f] * t_f over the free unknowns t.
    std::vector<std::size_t> free;
    std::vector<int> pivot_row(unknowns, -1);
    for (std::size_t r = 0; r < pivots->size(); ++r) {
      pivot_row[(*pivots)[r]] = static_cast<int>(r);
    }
    for (std::size_t u = 0; u < unknowns; ++u) {
      if (pivot_row[u] < 0) free.push_back(u);
    }
    const std::size_t d = free.size();
    std::vector<I> base(unknowns, 0);
    std::vector<std::vector<I>> coef(unknowns, std::vector<I>(d, 0));
    for (std::size_t u = 0; u < unknowns; ++u) {
      if (pivot_row[u] >= 0) {
        const auto& row = mat[static_cast<std::size_t>(pivot_row[u])];
        base[u] = row[unknowns];
        for (std::size_t f = 0; f < d; ++f) coef[u][f] = -row[free[f]];
      }
    }
    for (std::size_t f = 0; f < d; ++f) coef[free[f]][f] = det;

    // Constraints sum_u w_u z_u <= 0, rewritten as G t <= H.
    const I s = det > 0 ? 1 : -1;
    std::vector<std::vector<I>> rows;  // each: G_0..G_{d-1}, H
    auto add_constraint = [&](const std::vector<I>& w) -> bool {
      std::vector<I> row(d + 1, 0);
      bool constant = true;
      for (std::size_t f = 0; f < d; ++f) {
        I gsum = 0;
        for (std::size_t u = 0; u < unknowns; ++u) {
          if (w[u]) gsum = fast::add(gsum, fast::mul(w[u], coef[u][f]));
        }
        row[f] = fast::mul(s, gsum);
        constant = constant && row[f] == 0;
      }
      I hsum = 0;
      for (std::size_t u = 0; u < unknowns; ++u) {
        if (w[u]) hsum = fast::add(hsum, fast::mul(w[u], base[u]));
      }
      row[d] = fast::mul(-s, hsum);
      if (constant) return row[d] >= 0;
      I g = 0;
      for (I x : row) g = fast::gcd(g, x);
      if (g > 1) {
        for (I& x : row) x /= g;
      }
      rows.push_back(std::move(row));
      return true;
    };
    std::vector<I> w(unknowns, 0);
    for (std::size_t c = 0; c < k; ++c) {
      std::fill(w.begin(), w.end(), 0);
      w[c] = -1;
      if (!add_constraint(w)) return FastOutcome::kEmpty;
    }
    std::vector<bool> in_opp(opp_count, false);
    for (auto j : opp) in_opp[j] = true;
    for (std::size_t j = 0; j < opp_count; ++j) {
      if (in_opp[j]) continue;
      for (std::size_t c = 0; c < k; ++c) w[c] = payoff(own[c], j);
      w[k] = -1;
      if (!add_constraint(w)) return FastOutcome::kEmpty;
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    const std::size_t m = rows.size();

    // Vertices: d tight constraints with a unique solution satisfying all.
    std::set<std::vector<std::pair<I, I>>> seen;
    auto emit = [&](const std::vector<I>& num, I den) {
      // z_u = (base[u] * den + sum coef[u][f] num_f) / (det * den)
      std::vector<std::pair<I, I>> z(unknowns);
      const I zden = fast::mul(det, den);
      for (std::size_t u = 0; u < unknowns; ++u) {
        I zn = fast::mul(base[u], den);
        for (std::size_t f = 0; f < d; ++f) {
          zn = fast::add(zn, fast::mul(coef[u][f], num[f]));
        }
        I dd = zden;
        if (dd < 0) {
          zn = -zn;
          dd = -dd;
        }
        I g = fast::gcd(zn, dd);
        z[u] = {zn / g, dd / g};
      }
      seen.insert(std::move(z));
    };
    if (d == 0) {
      emit({}, 1);
    } else {
      if (m < d) return FastOutcome::kUnknown;  // unbounded; not expected
      std::vector<std::size_t> pick(d);
      for (std::size_t i = 0; i < d; ++i) pick[i] = i;
      std::vector<std::vector<I>> sys(d, std::vector<I>(d + 1));
      std::uint64_t visited = 0;
      while (true) {
        if (++visited > budget) {
          throw CapacityError("vertex enumeration exceeded its subset budget");
        }
        for (std::size_t r = 0; r < d; ++r) sys[r] = rows[pick[r]];
        I sd = 1;
        auto piv = fast::eliminate(sys, d, sd);
        if (piv && piv->size() == d) {
          // t = num / sd
          std::vector<I> num(d);
          for (std::size_t r = 0; r < d; ++r) num[(*piv)[r]] = sys[r][d];
          if (sd < 0) {
            sd = -sd;
            for (I& x : num) x = -x;
          }
          bool ok = true;
          for (std::size_t i = 0; i < m && ok; ++i) {
            I lhs = 0;
            for (std::size_t f = 0; f < d; ++f) {
              lhs = fast::add(lhs, fast::mul(rows[i][f], num[f]));
            }
            ok = lhs <= fast::mul(rows[i][d], sd);
          }
          if (ok) emit(num, sd);
        }
        std::size_t i = d;
        while (i > 0 && pick[i - 1] == m - d + (i - 1)) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < d; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
    out.clear();
    for (const auto& z : seen) {
      std::vector<Rational> v;
      v.reserve(z.size());
      for (auto [zn, zd] : z) v.emplace_back(static_cast<long>(zn), static_cast<long>(zd));
      out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end());
    return out.empty() ? FastOutcome::kEmpty : FastOutcome::kSolved;
  } catch (const fast::Overflow&) {
    return FastOutcome::kUnknown;
  }
}

inline std::vector<std::size_t> mask_to_indices(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask; ++i, mask >>= 1) {
    if (mask & 1) out.push_back(i);
  }
  return out;
}

inline std::vector<Rational> embed(const std::vector<Rational>& z,
                                   const std::vector<std::size_t>& support,
                                   std::size_t count) {
  std::vector<Rational> p(count, Rational(0));
  for (std::size_t c = 0; c < support.size(); ++c) p[support[c]] = z[c];
  return p;
}

// Vertices (mix over `own` followed by the common value) of one side:
// player `mixer` mixes over `own` so that the other player is indifferent
// over `opp` and weakly prefers it to everything else.
inline Vertices solve_side(const NormalFormGame& g, const IntGame& ig,
                           std::size_t mixer,
                           const std::vector<std::size_t>& own,
                           const std::vector<std::size_t>& opp,
                           linalg::Matrix& aug) {
  const std::size_t n = g.num_strategies(1);
  const std::size_t opp_count = g.num_strategies(1 - mixer);
  Vertices pt;
  if (mixer == 0) {
    // Row mix x; column player's payoffs B[i][j].
    if (ig.ok) {
      auto bi = [&](std::size_t i, std::size_t j) { return ig.b[i * n + j]; };
      switch (fast_side(bi, own, opp, opp_count, pt)) {
        case FastOutcome::kEmpty:
          return {};
        case FastOutcome::kSolved:
          return pt;
        case FastOutcome::kUnknown:
          break;
      }
    }
    auto b = [&](std::size_t i, std::size_t j) -> const Rational& {
      return g.payoff2(1, i, j);
    };
    return side_vertices(b, own, opp, opp_count, aug);
  }
  // Column mix y; row player's payoffs A[i][j], own index j.
  if (ig.ok) {
    auto ai = [&](std::size_t j, std::size_t i) { return ig.a[i * n + j]; };
    switch (fast_side(ai, own, opp, opp_count, pt)) {
      case FastOutcome::kEmpty:
        return {};
      case FastOutcome::kSolved:
        return pt;
      case FastOutcome::kUnknown:
        break;
    }
  }
  auto a = [&](std::size_t j, std::size_t i) -> const Rational& {
    return g.payoff2(0, i, j);
  };
  return side_vertices(a, own, opp, opp_count, aug);
}

// Every vertex pair of the two side polytopes is an equilibrium.
inline SupportSolution combine(const Vertices& xs, const Vertices& ys,
                               const SupportPair& pair, std::size_t m,
                               std::size_t n) {
  SupportSolution out;
  if (xs.empty() || ys.empty()) return out;
  out.degenerate = xs.size() > 1 || ys.size() > 1;
  for (const auto& x : xs) {
    for (const auto& y : ys) {
      std::vector<Rational> xv(x.begin(), x.end() - 1);
      std::vector<Rational> yv(y.begin(), y.end() - 1);
      out.candidates.emplace_back(std::vector<std::vector<Rational>>{
          embed(xv, pair.rows, m), embed(yv, pair.cols, n)});
    }
  }
  return out;
}

inline SupportSolution solve_support(const NormalFormGame& g,
                                     const IntGame& ig,
                                     const SupportPair& pair,
                                     linalg::Matrix& aug) {
  const std::size_t m = g.num_strategies(0), n = g.num_strategies(1);
  // The side with more indifference equations is usually empty; try it first.
  Vertices xs, ys;
  if (pair.cols.size() >= pair.rows.size()) {
    xs = solve_side(g, ig, 0, pair.rows, pair.cols, aug);
    if (xs.empty()) return {};
    ys = solve_side(g, ig, 1, pair.cols, pair.rows, aug);
  } else {
    ys = solve_side(g, ig, 1, pair.cols, pair.rows, aug);
    if (ys.empty()) return {};
    xs = solve_side(g, ig, 0, pair.rows, pair.cols, aug);
  }
  return combine(xs, ys, pair, m, n);
}

// A vertex of one player's best-response polyhedron
//   { (z, v) : z >= 0, sum z = 1, payoff_opp(z, j) <= v for all j },
// labelled with the support of z and the opponent strategies that are tight
// (best responses to z).
struct LabeledVertex {
  std::vector<Rational> point;  // mix, then the common value
  std::uint32_t support = 0;
  std::uint32_t tight = 0;
};

// All vertices of the polyhedron for `mixer`, found by solving every choice
// of `own` tight inequalities. The side polytope of any support pair is a
// face of this polyhedron, so its vertices are exactly the listed vertices
// with support inside the own support and tight set covering the opponent's.
inline std::vector<LabeledVertex> polyhedron_vertices(const NormalFormGame& g,
                                                      const IntGame& ig,
                                                      std::size_t mixer,
                                                      unsigned jobs) {
  const std::size_t m = g.num_strategies(0), n = g.num_strategies(1);
  const std::size_t own = mixer == 0 ? m : n;
  const std::size_t opp = mixer == 0 ? n : m;
  const std::size_t total = own + opp;
  // Opponent's payoff when the mixer plays c and the opponent plays j.
  auto pay = [&](std::size_t c, std::size_t j) -> const Rational& {
    return mixer == 0 ? g.payoff2(1, c, j) : g.payoff2(0, j, c);
  };
  auto ipay = [&](std::size_t c, std::size_t j) -> std::int64_t {
    return mixer == 0 ? ig.b[c * n + j] : ig.a[j * n + c];
  };

  // Integer attempt for one subset; throws fast::Overflow.
  auto solve_int = [&](const std::vector<std::size_t>& pick,
                       std::vector<std::vector<fast::I>>& mat)
      -> std::optional<LabeledVertex> {
    using fast::I;
    mat.assign(own + 1, std::vector<I>(own + 2, 0));
    for (std::size_t c = 0; c < own; ++c) mat[0][c] = 1;
    mat[0][own + 1] = 1;
    for (std::size_t r = 0; r < own; ++r) {
      const std::size_t k = pick[r];
      if (k < own) {
        mat[r + 1][k] = 1;
      } else {
        for (std::size_t c = 0; c < own; ++c) mat[r + 1][c] = ipay(c, k - own);
        mat[r + 1][own] = -1;
      }
    }
    I det = 1;
    auto piv = fast::eliminate(mat, own + 1, det);
    if (!piv || piv->size() != own + 1) return std::nullopt;
    std::vector<I> num(own + 1);
    for (std::size_t r = 0; r <= own; ++r) {
      num[(*piv)[r]] = det > 0 ? mat[r][own + 1] : -mat[r][own + 1];
    }
    const I den = det > 0 ? det : -det;
    LabeledVertex v;
    for (std::size_t c = 0; c < own; ++c) {
      if (num[c] < 0) return std::nullopt;
      if (num[c] > 0) v.support |= 1u << c;
    }
    for (std::size_t j = 0; j < opp; ++j) {
      I s = 0;
      for (std::size_t c = 0; c < own; ++c) {
        if (num[c]) s = fast::add(s, fast::mul(ipay(c, j), num[c]));
      }
      if (s > num[own]) return std::nullopt;
      if (s == num[own]) v.tight |= 1u << j;
    }
    for (I x : num) v.point.emplace_back(static_cast<long>(x), static_cast<long>(den));
    return v;
  };

  auto solve_exact = [&](const std::vector<std::size_t>& pick,
                         linalg::Matrix& aug) -> std::optional<LabeledVertex> {
    aug.resize(own + 1, own + 2);
    for (std::size_t r = 0; r <= own; ++r) {
      for (std::size_t c = 0; c < own + 2; ++c) aug(r, c) = Rational(0);
    }
    for (std::size_t c = 0; c < own; ++c) aug(0, c) = Rational(1);
    aug(0, own + 1) = Rational(1);
    for (std::size_t r = 0; r < own; ++r) {
      const std::size_t k = pick[r];
      if (k < own) {
        aug(r + 1, k) = Rational(1);
      } else {
        for (std::size_t c = 0; c < own; ++c) aug(r + 1, c) = pay(c, k - own);
        aug(r + 1, own) = Rational(-1);
      }
    }
    auto sol = linalg::solve_affine(aug);
    if (!sol || sol->dimension() != 0) return std::nullopt;
    LabeledVertex v;
    v.point = std::move(sol->particular);
    for (std::size_t c = 0; c < own; ++c) {
      if (v.point[c].sign() < 0) return std::nullopt;
      if (v.point[c].sign() > 0) v.support |= 1u << c;
    }
    for (std::size_t j = 0; j < opp; ++j) {
      Rational s(0);
      for (std::size_t c = 0; c < own; ++c) {
        if (!v.point[c].is_zero()) s += pay(c, j) * v.point[c];
      }
      if (s > v.point[own]) return std::nullopt;
      if (s == v.point[own]) v.tight |= 1u << j;
    }
    return v;
  };

  // Subsets are split by their smallest element so workers stay independent.
  std::mutex mu;
  std::map<std::vector<Rational>, LabeledVertex> found;
  parallel_chunks(
      total - own + 1, jobs,
      [&](unsigned, std::uint64_t begin, std::uint64_t end) {
        std::map<std::vector<Rational>, LabeledVertex> local;
        std::vector<std::vector<fast::I>> mat;
        linalg::Matrix aug;
        bool use_int = ig.ok;
        for (std::uint64_t first = begin; first < end; ++first) {
          std::vector<std::size_t> pick(own);
          for (std::size_t i = 0; i < own; ++i) pick[i] = first + i;
          while (true) {
            std::optional<LabeledVertex> v;
            if (use_int) {
              try {
                v = solve_int(pick, mat);
              } catch (const fast::Overflow&) {
                use_int = false;
              }
            }
            if (!use_int) v = solve_exact(pick, aug);
            if (v) local.emplace(v->point, std::move(*v));
            // Next subset with the same first element.
            std::size_t i = own;
            while (i > 1 && pick[i - 1] == total - own + (i - 1)) --i;
            if (i <= 1) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < own; ++j) pick[j] = pick[j - 1] + 1;
          }
        }
        std::lock_guard<std::mutex> lock(mu);
        found.merge(local);
      });
  std::vector<LabeledVertex> out;
  for (auto& [k, v] : found) out.push_back(std::move(v));
  return out;
}

// Key for the canonical output order: total support size, then supports,
// then the probability vectors.
inline auto canonical_key(const MixedProfile& p) {
  auto s1 = p.support(0), s2 = p.support(1);
  return std::make_tuple(s1.size() + s2.size(), s1, s2, p.probabilities());
}

}  // namespace internal

// Candidates for one support pair: the indifference system is solved exactly,
// negative probabilities and profitable off-support strategies are filtered
// out. Positive-dimensional solution sets yield their vertices and set the
// degeneracy flag.
inline SupportSolution solve_support(const NormalFormGame& g,
                                     const SupportPair& pair) {
  if (g.num_players() != 2) throw StructuralError("solver needs 2 players");
  if (pair.rows.empty() || pair.cols.empty()) {
    throw StructuralError("supports must be non-empty");
  }
  for (auto i : pair.rows) {
    if (i >= g.num_strategies(0)) throw StructuralError("row index");
  }
  for (auto j : pair.cols) {
    if (j >= g.num_strategies(1)) throw StructuralError("column index");
  }
  linalg::Matrix aug;
  return internal::solve_support(g, internal::to_int_game(g), pair, aug);
}

inline EnumerationResult enumerate_equilibria(
    const NormalFormGame& g, const EnumerationOptions& opts = {}) {
  if (g.num_players() != 2) throw StructuralError("solver needs 2 players");
  const std::size_t m = g.num_strategies(0), n = g.num_strategies(1);
  if (m > opts.max_strategies || n > opts.max_strategies) {
    throw CapacityError("support enumeration is bounded to " +
                        std::to_string(opts.max_strategies) +
                        " strategies per player");
  }
  if (m > 31 || n > 31) throw CapacityError("too many strategies");

  const internal::IntGame ig = internal::to_int_game(g);
  const unsigned jobs = resolve_jobs(opts.jobs);
  const auto vx = internal::polyhedron_vertices(g, ig, 0, jobs);
  const auto vy = internal::polyhedron_vertices(g, ig, 1, jobs);

  // Each pair of vertices lying in the faces of one support pair is an
  // equilibrium; over all support pairs these are the complementary pairs.
  std::set<MixedProfile> found;
  for (const auto& x : vx) {
    for (const auto& y : vy) {
      if ((x.support & ~y.tight) || (y.support & ~x.tight)) continue;
      found.insert(MixedProfile(std::vector<std::vector<Rational>>{
          std::vector<Rational>(x.point.begin(), x.point.end() - 1),
          std::vector<Rational>(y.point.begin(), y.point.end() - 1)}));
    }
  }

  // A support pair whose two faces are both non-empty and one of them holds
  // more than one vertex carries a segment of equilibria.
  std::mutex mu;
  std::set<SupportPair> witnesses;
  const std::uint32_t full1 = (1u << m) - 1, full2 = (1u << n) - 1;
  parallel_chunks(
      full1, jobs, [&](unsigned, std::uint64_t begin, std::uint64_t end) {
        std::vector<SupportPair> local;
        std::vector<std::uint32_t> xt, ys;
        for (std::uint64_t k = begin; k < end; ++k) {
          const auto t1 = static_cast<std::uint32_t>(k + 1);
          xt.clear();
          ys.clear();
          for (const auto& x : vx) {
            if (!(x.support & ~t1)) xt.push_back(x.tight);
          }
          for (const auto& y : vy) {
            if (!(t1 & ~y.tight)) ys.push_back(y.support);
          }
          if (xt.empty() || ys.empty()) continue;
          for (std::uint32_t t2 = 1; t2 <= full2; ++t2) {
            std::size_t cx = 0, cy = 0;
            for (auto t : xt) cx += !(t2 & ~t);
            if (cx == 0) continue;
            for (auto sp : ys) cy += !(sp & ~t2);
            if (cy == 0 || (cx == 1 && cy == 1)) continue;
            local.push_back({internal::mask_to_indices(t1),
                             internal::mask_to_indices(t2)});
          }
        }
        std::lock_guard<std::mutex> lock(mu);
        witnesses.insert(local.begin(), local.end());
      });

  EnumerationResult res;
  for (const auto& p : found) {
    if (!verify_nash(g, p).accepted) {
      throw InconsistencyError("support solution failed verification");
    }
    res.equilibria.push_back(p);
  }
  std::sort(res.equilibria.begin(), res.equilibria.end(),
            [](const MixedProfile& l, const MixedProfile& r) {
              return internal::canonical_key(l) < internal::canonical_key(r);
            });
  res.degenerate = !witnesses.empty();
  res.degenerate_witnesses.assign(witnesses.begin(), witnesses.end());
  res.complete = !res.degenerate;
  return res;
}

}  // namespace gamehard

#endif  // GAMEHARD_ENUMERATE_HPP_
