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

// Exact values in Q[delta] for a discount factor delta > 0 given by
// delta^d = c. A rational discount q is the case d = 1, c = q; the irrational
// discount (1/2)^(1/(2n+1)) is d = 2n+1, c = 1/2.

#ifndef GAMEHARD_DISCOUNTED_VALUE_HPP_
#define GAMEHARD_DISCOUNTED_VALUE_HPP_

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "gamehard/errors.hpp"
#include "gamehard/linalg.hpp"
#include "gamehard/rational.hpp"

namespace gamehard {

struct DiscountRing {
  int degree = 1;      // d
  Rational constant;   // c, with delta^d = c

  static DiscountRing rational(const Rational& q) {
    if (q.sign() <= 0) throw DomainError("discount must be positive");
    return {1, q};
  }
  // delta = (1/2)^(1/(2n+1))
  static DiscountRing algebraic(int n) {
    if (n < 1) throw DomainError("algebraic discount needs n >= 1");
    return {2 * n + 1, Rational(1, 2)};
  }
  bool is_rational() const { return degree == 1; }

  friend bool operator==(const DiscountRing&, const DiscountRing&) = default;
};

namespace internal {

// Cached enclosing interval [lo, hi] of the positive real root of x^d = c,
// shared by all values over the same ring and only ever narrowed.
class RootIntervals {
 public:
  static RootIntervals& instance() {
    static RootIntervals r;
    return r;
  }
  std::pair<mpq_class, mpq_class> get(const DiscountRing& ring) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(ring.degree, ring.constant.str());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    mpq_class lo = 0, hi = 1;
    if (ring.constant.mpq() > 1) hi = ring.constant.mpq();
    std::pair<mpq_class, mpq_class> iv{lo, hi};
    for (int i = 0; i < 40; ++i) bisect(ring, iv);
    cache_.emplace(key, iv);
    return iv;
  }
  void put(const DiscountRing& ring, const std::pair<mpq_class, mpq_class>& iv) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(ring.degree, ring.constant.str());
    auto& cur = cache_[key];
    if (iv.second - iv.first < cur.second - cur.first) cur = iv;
  }
  static void bisect(const DiscountRing& ring,
                     std::pair<mpq_class, mpq_class>& iv) {
    if (iv.first == iv.second) return;
    mpq_class mid = (iv.first + iv.second) / 2;
    mpq_class p = 1;
    for (int k = 0; k < ring.degree; ++k) p *= mid;
    int c = cmp(p, ring.constant.mpq());
    if (c < 0) {
      iv.first = mid;
    } else if (c > 0) {
      iv.second = mid;
    } else {
      iv.first = iv.second = mid;
    }
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, std::string>, std::pair<mpq_class, mpq_class>>
      cache_;
};

}  // namespace internal

class DiscountedValue {
 public:
  DiscountedValue() : ring_(), coeffs_(1, Rational(0)) {}
  explicit DiscountedValue(const DiscountRing& ring, const Rational& q = 0)
      : ring_(ring), coeffs_(static_cast<std::size_t>(ring.degree), Rational(0)) {
    coeffs_[0] = q;
  }
  DiscountedValue(const DiscountRing& ring, std::vector<Rational> coeffs)
      : ring_(ring), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != static_cast<std::size_t>(ring.degree)) {
      throw StructuralError("coefficient count must equal the ring degree");
    }
  }

  // delta itself.
  static DiscountedValue delta(const DiscountRing& ring) {
    DiscountedValue v(ring);
    if (ring.degree == 1) {
      v.coeffs_[0] = ring.constant;
    } else {
      v.coeffs_[1] = Rational(1);
    }
    return v;
  }
  static DiscountedValue delta_pow(const DiscountRing& ring, std::uint64_t k) {
    DiscountedValue base = delta(ring), out(ring, Rational(1));
    while (k) {
      if (k & 1) out *= base;
      base *= base;
      k >>= 1;
    }
    return out;
  }

  const DiscountRing& ring() const { return ring_; }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  bool is_zero() const {
    for (const auto& c : coeffs_) {
      if (!c.is_zero()) return false;
    }
    return true;
  }
  bool is_constant() const {
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
      if (!coeffs_[i].is_zero()) return false;
    }
    return true;
  }
  const Rational& constant_term() const { return coeffs_[0]; }

  DiscountedValue& operator+=(const DiscountedValue& o) {
    check(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  DiscountedValue& operator-=(const DiscountedValue& o) {
    check(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  DiscountedValue& operator*=(const DiscountedValue& o) {
    check(o);
    const std::size_t d = coeffs_.size();
    std::vector<Rational> prod(2 * d - 1, Rational(0));
    for (std::size_t i = 0; i < d; ++i) {
      if (coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (!o.coeffs_[j].is_zero()) prod[i + j] += coeffs_[i] * o.coeffs_[j];
      }
    }
    for (std::size_t k = 2 * d - 1; k-- > d;) {
      if (!prod[k].is_zero()) prod[k - d] += prod[k] * ring_.constant;
    }
    prod.resize(d);
    coeffs_ = std::move(prod);
    return *this;
  }
  DiscountedValue& operator*=(const Rational& q) {
    for (auto& c : coeffs_) c *= q;
    return *this;
  }
  DiscountedValue operator-() const {
    DiscountedValue v = *this;
    for (auto& c : v.coeffs_) c = -c;
    return v;
  }
  friend DiscountedValue operator+(DiscountedValue a, const DiscountedValue& b) {
    return a += b;
  }
  friend DiscountedValue operator-(DiscountedValue a, const DiscountedValue& b) {
    return a -= b;
  }
  friend DiscountedValue operator*(DiscountedValue a, const DiscountedValue& b) {
    return a *= b;
  }
  friend DiscountedValue operator*(DiscountedValue a, const Rational& q) {
    return a *= q;
  }

  // Multiplicative inverse: solves (this * z = 1) as a d x d linear system.
  DiscountedValue inverse() const {
    const std::size_t d = coeffs_.size();
    linalg::Matrix aug(d, d + 1);
    DiscountedValue basis(ring_, Rational(1));
    const DiscountedValue x = delta_unit();
    for (std::size_t col = 0; col < d; ++col) {
      DiscountedValue p = *this * basis;
      for (std::size_t r = 0; r < d; ++r) aug(r, col) = p.coeffs_[r];
      basis *= x;
    }
    for (std::size_t r = 0; r < d; ++r) aug(r, d) = Rational(r == 0 ? 1 : 0);
    auto sol = linalg::solve_affine(aug);
    if (!sol || sol->dimension() != 0) {
      throw DomainError("value is not invertible in this ring");
    }
    return DiscountedValue(ring_, sol->particular);
  }
  friend DiscountedValue operator/(const DiscountedValue& a,
                                   const DiscountedValue& b) {
    return a * b.inverse();
  }

  // Sign of the real number this represents. Zero is decided symbolically
  // (x^d - c is irreducible for the rings used here); otherwise the root
  // interval is bisected until the interval evaluation excludes zero.
  int sign() const {
    if (is_zero()) return 0;
    if (is_constant()) return coeffs_[0].sign();
    auto& cache = internal::RootIntervals::instance();
    auto iv = cache.get(ring_);
    for (int iter = 0; iter < 4000; ++iter) {
      mpq_class lo_sum = 0, hi_sum = 0, plo = 1, phi = 1;
      for (const auto& c : coeffs_) {
        if (c.sign() > 0) {
          lo_sum += c.mpq() * plo;
          hi_sum += c.mpq() * phi;
        } else if (c.sign() < 0) {
          lo_sum += c.mpq() * phi;
          hi_sum += c.mpq() * plo;
        }
        plo *= iv.first;
        phi *= iv.second;
      }
      if (sgn(lo_sum) > 0) {
        if (iter) cache.put(ring_, iv);
        return 1;
      }
      if (sgn(hi_sum) < 0) {
        if (iter) cache.put(ring_, iv);
        return -1;
      }
      if (iv.first == iv.second) return 0;  // rational root, exact value 0
      internal::RootIntervals::bisect(ring_, iv);
    }
    throw InconsistencyError("sign refinement did not converge");
  }

  friend bool operator==(const DiscountedValue& a, const DiscountedValue& b) {
    return a.ring_ == b.ring_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator<(const DiscountedValue& a, const DiscountedValue& b) {
    return (a - b).sign() < 0;
  }
  friend bool operator>(const DiscountedValue& a, const DiscountedValue& b) {
    return b < a;
  }
  friend bool operator<=(const DiscountedValue& a, const DiscountedValue& b) {
    return !(b < a);
  }
  friend bool operator>=(const DiscountedValue& a, const DiscountedValue& b) {
    return !(a < b);
  }

  // Approximate value for display only.
  double to_double() const {
    double dl = 1.0;
    if (ring_.degree > 1) {
      auto iv = internal::RootIntervals::instance().get(ring_);
      dl = iv.first.get_d();
    } else {
      return coeffs_[0].to_double();
    }
    double s = 0, p = 1;
    for (const auto& c : coeffs_) {
      s += c.to_double() * p;
      p *= dl;
    }
    return s;
  }

  std::string str() const {
    if (is_constant()) return coeffs_[0].str();
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i].is_zero()) continue;
      if (!out.empty()) out += " + ";
      out += coeffs_[i].str();
      if (i > 0) out += "*d^" + std::to_string(i);
    }
    return out;
  }

 private:
  void check(const DiscountedValue& o) const {
    if (!(ring_ == o.ring_)) throw StructuralError("values over different rings");
  }
  // The generator x of Q[x]/(x^d - c) (for d = 1 this is c itself).
  DiscountedValue delta_unit() const { return delta(ring_); }

  DiscountRing ring_;
  std::vector<Rational> coeffs_;
};

}  // namespace gamehard

#endif  // GAMEHARD_DISCOUNTED_VALUE_HPP_
