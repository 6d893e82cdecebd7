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

#ifndef GAMEHARD_RATIONAL_HPP_
#define GAMEHARD_RATIONAL_HPP_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "gamehard/errors.hpp"

namespace gamehard {

// Exact arbitrary-precision fraction, always in lowest terms with a positive
// denominator. Backed by GMP.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : v_(value) {}  // NOLINT: implicit by design of payoffs
  Rational(int value) : v_(value) {}   // NOLINT
  Rational(long num, long den) {
    if (den == 0) throw DomainError("zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }
  explicit Rational(mpq_class&& v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "p/q", "p", with optional leading sign. Whitespace is rejected.
  static Rational parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw ParseError("empty rational");
    auto digits_ok = [](std::string_view part, bool allow_sign) {
      std::size_t i = 0;
      if (allow_sign && !part.empty() && (part[0] == '-' || part[0] == '+')) ++i;
      if (i == part.size()) return false;
      for (; i < part.size(); ++i) {
        if (part[i] < '0' || part[i] > '9') return false;
      }
      return true;
    };
    auto slash = s.find('/');
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false)) {
      throw ParseError("malformed rational \"" + s + "\"");
    }
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw ParseError("zero denominator in \"" + s + "\"");
    return Rational(mpq_class(n, d));
  }

  // Canonical "numerator/denominator", e.g. "1/2", "-3/1", "0/1".
  std::string str() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  double to_double() const { return v_.get_d(); }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  const mpz_class& numerator() const { return v_.get_num(); }
  const mpz_class& denominator() const { return v_.get_den(); }

  const mpq_class& mpq() const { return v_; }
  mpq_class& mpq() { return v_; }

  Rational operator-() const { return Rational(mpq_class(-v_), kCanonical); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.v_ == b.v_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    int c = cmp(a.v_, b.v_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  struct CanonicalTag {};
  static constexpr CanonicalTag kCanonical{};
  Rational(mpq_class&& v, CanonicalTag) : v_(std::move(v)) {}

  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

// a -= b * c without building a temporary Rational.
inline void sub_mul(Rational& a, const Rational& b, const Rational& c,
                    mpq_class& scratch) {
  mpq_mul(scratch.get_mpq_t(), b.mpq().get_mpq_t(), c.mpq().get_mpq_t());
  mpq_sub(a.mpq().get_mpq_t(), a.mpq().get_mpq_t(), scratch.get_mpq_t());
}

}  // namespace gamehard

#endif  // GAMEHARD_RATIONAL_HPP_
