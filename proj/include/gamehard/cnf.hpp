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

#ifndef GAMEHARD_CNF_HPP_
#define GAMEHARD_CNF_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gamehard/errors.hpp"

namespace gamehard {

// Signed 1-based variable index; negative means negated.
using Literal = int;
using Clause = std::vector<Literal>;
using Assignment = std::vector<bool>;

inline constexpr int kDefaultMaxBruteForceVariables = 20;

class CnfFormula {
 public:
  CnfFormula() = default;

  // Validates literal ranges and rejects tautological clauses. Duplicate
  // literals are removed; `warnings` (if given) receives one line per clause
  // that had duplicates.
  CnfFormula(int num_variables, std::vector<Clause> clauses,
             std::vector<std::string>* warnings = nullptr)
      : n_(num_variables) {
    if (n_ < 1) throw DomainError("formula needs at least one variable");
    clauses_.reserve(clauses.size());
    for (std::size_t ci = 0; ci < clauses.size(); ++ci) {
      Clause c;
      for (Literal l : clauses[ci]) {
        if (l == 0 || std::abs(l) > n_) {
          throw DomainError("literal " + std::to_string(l) +
                            " out of range 1.." + std::to_string(n_));
        }
        if (std::find(c.begin(), c.end(), -l) != c.end()) {
          throw DomainError("clause " + std::to_string(ci + 1) +
                            " contains both " + std::to_string(l) + " and " +
                            std::to_string(-l));
        }
        if (std::find(c.begin(), c.end(), l) != c.end()) {
          if (warnings) {
            warnings->push_back("clause " + std::to_string(ci + 1) +
                                ": duplicate literal " + std::to_string(l) +
                                " removed");
          }
          continue;
        }
        c.push_back(l);
      }
      clauses_.push_back(std::move(c));
    }
  }

  int num_variables() const { return n_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  bool has_empty_clause() const {
    return std::any_of(clauses_.begin(), clauses_.end(),
                       [](const Clause& c) { return c.empty(); });
  }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  int n_ = 0;
  std::vector<Clause> clauses_;
};

inline bool literal_true(Literal l, const Assignment& a) {
  bool v = a[static_cast<std::size_t>(std::abs(l) - 1)];
  return l > 0 ? v : !v;
}

inline bool evaluate(const CnfFormula& f, const Assignment& a) {
  if (a.size() != static_cast<std::size_t>(f.num_variables())) {
    throw StructuralError("assignment has " + std::to_string(a.size()) +
                          " values, formula has " +
                          std::to_string(f.num_variables()) + " variables");
  }
  for (const auto& c : f.clauses()) {
    if (std::none_of(c.begin(), c.end(),
                     [&](Literal l) { return literal_true(l, a); })) {
      return false;
    }
  }
  return true;
}

// Calls `fn` for every assignment in counting order: bit (i-1) of the counter
// is variable i, so all-false comes first.
inline void for_each_assignment(int n, int max_variables,
                                const std::function<void(const Assignment&)>& fn) {
  if (n > max_variables) {
    throw CapacityError(std::to_string(n) + " variables exceed brute-force "
                        "bound " + std::to_string(max_variables));
  }
  Assignment a(static_cast<std::size_t>(n));
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = (mask >> i) & 1;
    fn(a);
  }
}

inline std::uint64_t count_satisfying(
    const CnfFormula& f, int max_variables = kDefaultMaxBruteForceVariables) {
  std::uint64_t count = 0;
  for_each_assignment(f.num_variables(), max_variables,
                      [&](const Assignment& a) { count += evaluate(f, a); });
  return count;
}

inline std::vector<Assignment> satisfying_assignments(
    const CnfFormula& f, int max_variables = kDefaultMaxBruteForceVariables) {
  std::vector<Assignment> out;
  for_each_assignment(f.num_variables(), max_variables,
                      [&](const Assignment& a) {
                        if (evaluate(f, a)) out.push_back(a);
                      });
  return out;
}

// Standard DIMACS CNF: "c" comments, one "p cnf <vars> <clauses>" header,
// zero-terminated clauses that may span lines.
inline CnfFormula parse_dimacs(std::string_view text,
                               std::vector<std::string>* warnings = nullptr) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  int n = -1;
  long declared = -1;
  std::vector<Clause> clauses;
  Clause current;
  std::size_t clause_start_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == 'c') continue;
    if (line[first] == '%') break;  // SATLIB trailer
    std::istringstream ls(line.substr(first));
    if (line[first] == 'p') {
      if (n >= 0) throw ParseError("duplicate header", line_no);
      std::string p, fmt, extra;
      long vars = -1;
      if (!(ls >> p >> fmt >> vars >> declared) || p != "p" || fmt != "cnf" ||
          (ls >> extra)) {
        throw ParseError("malformed header, expected \"p cnf <vars> <clauses>\"",
                         line_no);
      }
      if (vars < 1) throw ParseError("variable count must be positive", line_no);
      if (declared < 0) throw ParseError("negative clause count", line_no);
      n = static_cast<int>(vars);
      continue;
    }
    if (n < 0) throw ParseError("clause before header", line_no);
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      long v = std::strtol(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0') {
        throw ParseError("bad token \"" + tok + "\"", line_no);
      }
      if (v == 0) {
        clauses.push_back(std::move(current));
        current.clear();
        clause_start_line = 0;
        continue;
      }
      if (std::labs(v) > n) {
        throw ParseError("literal " + tok + " out of range 1.." +
                             std::to_string(n),
                         line_no);
      }
      if (clause_start_line == 0) clause_start_line = line_no;
      if (std::find(current.begin(), current.end(), -v) != current.end()) {
        throw ParseError("tautological clause (contains " + tok + " and " +
                             std::to_string(-v) + ")",
                         line_no);
      }
      current.push_back(static_cast<Literal>(v));
    }
  }
  if (n < 0) throw ParseError("missing \"p cnf\" header");
  if (!current.empty()) {
    throw ParseError("clause not terminated by 0", clause_start_line);
  }
  if (static_cast<long>(clauses.size()) != declared) {
    throw ParseError("header declares " + std::to_string(declared) +
                         " clauses, found " + std::to_string(clauses.size()),
                     line_no);
  }
  return CnfFormula(n, std::move(clauses), warnings);
}

inline std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_variables() << ' ' << f.clauses().size() << '\n';
  for (const auto& c : f.clauses()) {
    for (Literal l : c) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

}  // namespace gamehard

#endif  // GAMEHARD_CNF_HPP_
