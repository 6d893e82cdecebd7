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

// Exact linear algebra over the rationals: Gauss-Jordan elimination into an
// affine parametrization of the solution set, and vertex enumeration of the
// (small, bounded) polytopes cut out of such a set by linear inequalities.

#ifndef GAMEHARD_LINALG_HPP_
#define GAMEHARD_LINALG_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "gamehard/errors.hpp"
#include "gamehard/rational.hpp"

namespace gamehard::linalg {

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  void resize(std::size_t rows, std::size_t cols) {
    rows_ = rows;
    cols_ = cols;
    if (data_.size() < rows * cols) data_.resize(rows * cols);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

// Solution set {particular + sum_k t_k * directions[k]} of a linear system.
struct AffineSet {
  std::vector<Rational> particular;
  std::vector<std::vector<Rational>> directions;
  std::size_t dimension() const { return directions.size(); }
};

// Solves the system whose augmented matrix (last column = right-hand side) is
// `aug`. The matrix is reduced in place. Returns nullopt when inconsistent.
inline std::optional<AffineSet> solve_affine(Matrix& aug) {
  const std::size_t rows = aug.rows();
  const std::size_t vars = aug.cols() - 1;
  mpq_class scratch;
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < vars && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && aug(p, c).is_zero()) ++p;
    if (p == rows) continue;
    if (p != r) {
      for (std::size_t k = c; k <= vars; ++k) std::swap(aug(p, k), aug(r, k));
    }
    if (aug(r, c) != Rational(1)) {
      Rational inv = Rational(1) / aug(r, c);
      for (std::size_t k = c; k <= vars; ++k) aug(r, k) *= inv;
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || aug(i, c).is_zero()) continue;
      Rational factor = aug(i, c);
      for (std::size_t k = c; k <= vars; ++k) {
        if (!aug(r, k).is_zero()) sub_mul(aug(i, k), factor, aug(r, k), scratch);
      }
    }
    pivot_cols.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i) {
    if (!aug(i, vars).is_zero()) return std::nullopt;
  }

  AffineSet out;
  out.particular.assign(vars, Rational(0));
  std::vector<bool> is_pivot(vars, false);
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
    out.particular[pivot_cols[i]] = aug(i, vars);
    is_pivot[pivot_cols[i]] = true;
  }
  for (std::size_t free = 0; free < vars; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> dir(vars, Rational(0));
    dir[free] = Rational(1);
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
      dir[pivot_cols[i]] = -aug(i, free);
    }
    out.directions.push_back(std::move(dir));
  }
  return out;
}

// Linear inequality  coeffs . z <= bound.
struct Halfspace {
  std::vector<Rational> coeffs;
  Rational bound;
};

inline Rational dot(const std::vector<Rational>& a,
                    const std::vector<Rational>& b) {
  Rational s(0);
  mpq_class scratch;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero() || b[i].is_zero()) continue;
    mpq_mul(scratch.get_mpq_t(), a[i].mpq().get_mpq_t(), b[i].mpq().get_mpq_t());
    mpq_add(s.mpq().get_mpq_t(), s.mpq().get_mpq_t(), scratch.get_mpq_t());
  }
  return s;
}

inline bool satisfies(const std::vector<Rational>& z,
                      const std::vector<Halfspace>& hs) {
  return std::all_of(hs.begin(), hs.end(), [&](const Halfspace& h) {
    return dot(h.coeffs, z) <= h.bound;
  });
}

// Default cap on the number of tight-constraint subsets examined.
inline constexpr std::uint64_t kDefaultVertexBudget = 2'000'000;

// Vertices of {z in `set` : every halfspace holds}. The polytope must be
// bounded (callers only pass probability simplices). Vertices are returned
// sorted and without duplicates; an empty result means the polytope is empty.
inline std::vector<std::vector<Rational>> enumerate_vertices(
    const AffineSet& set, const std::vector<Halfspace>& hs,
    std::uint64_t budget = kDefaultVertexBudget) {
  std::vector<std::vector<Rational>> out;
  const std::size_t d = set.dimension();
  if (d == 0) {
    if (satisfies(set.particular, hs)) out.push_back(set.particular);
    return out;
  }
  // Project each halfspace onto the parameters t:  g . t <= h. Constant
  // constraints either empty the set or drop out; duplicates are merged.
  std::set<std::pair<std::vector<Rational>, Rational>> projected;
  for (const auto& half : hs) {
    std::vector<Rational> gi(d);
    bool constant = true;
    for (std::size_t k = 0; k < d; ++k) {
      gi[k] = dot(half.coeffs, set.directions[k]);
      constant = constant && gi[k].is_zero();
    }
    Rational hi = half.bound - dot(half.coeffs, set.particular);
    if (constant) {
      if (hi.sign() < 0) return out;
      continue;
    }
    projected.emplace(std::move(gi), std::move(hi));
  }
  const std::size_t m = projected.size();
  std::vector<std::vector<Rational>> g;
  std::vector<Rational> h;
  for (auto& [gi, hi] : projected) {
    g.push_back(gi);
    h.push_back(hi);
  }
  if (m < d) return out;  // an unbounded or empty set; never a vertex

  // Walk all d-subsets of the m constraints in lexicographic order.
  std::uint64_t visited = 0;
  std::set<std::vector<Rational>> seen;
  std::vector<std::size_t> pick(d);
  for (std::size_t i = 0; i < d; ++i) pick[i] = i;
  Matrix aug;
  while (true) {
    if (++visited > budget) {
      throw CapacityError("vertex enumeration exceeded its subset budget");
    }
    aug.resize(d, d + 1);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t k = 0; k < d; ++k) aug(r, k) = g[pick[r]][k];
      aug(r, d) = h[pick[r]];
    }
    auto sol = solve_affine(aug);
    if (sol && sol->dimension() == 0) {
      const auto& t = sol->particular;
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) ok = dot(g[i], t) <= h[i];
      if (ok) {
        std::vector<Rational> z = set.particular;
        for (std::size_t k = 0; k < d; ++k) {
          if (t[k].is_zero()) continue;
          for (std::size_t j = 0; j < z.size(); ++j) {
            z[j] += t[k] * set.directions[k][j];
          }
        }
        seen.insert(std::move(z));
      }
    }
    // next combination
    std::size_t i = d;
    while (i > 0 && pick[i - 1] == m - d + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < d; ++j) pick[j] = pick[j - 1] + 1;
  }
  out.assign(seen.begin(), seen.end());
  return out;
}

}  // namespace gamehard::linalg

#endif  // GAMEHARD_LINALG_HPP_
