// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "quorumlens/error.hpp"

#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace quorumlens {

/// Literal: +v for x_v, -v for its negation (v >= 1).
using Literal = int;
using Clause = std::array<Literal, 3>;

struct Cnf {
  int num_vars = 0;
  std::vector<Clause> clauses;

  friend bool operator==(const Cnf&, const Cnf&) = default;
};

/// assignment[v - 1] is the value of x_v.
using Assignment = std::vector<bool>;

struct ParsedCnf {
  Cnf cnf;
  std::vector<std::string> warnings;
};

/// DIMACS reader. Short clauses are padded by repeating their last literal;
/// clauses longer than three literals are rejected.
inline ParsedCnf parse_dimacs(std::string_view text) {
  ParsedCnf out;
  std::optional<long> declared_clauses;
  bool header = false;
  std::vector<Literal> pending;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  auto fail = [&](const std::string& what) { throw InputError("dimacs line " + std::to_string(line_no) + ": " + what); };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first[0] == 'c') continue;
    if (first == "%") break;  // trailer used by some benchmark sets
    if (first == "p") {
      if (header) fail("duplicate header");
      std::string fmt;
      long vars = -1, clauses = -1;
      std::string extra;
      if (!(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0 || clauses < 0 || (ls >> extra))
        fail("malformed header, expected 'p cnf <vars> <clauses>'");
      if (vars > 1'000'000) fail("too many variables");
      out.cnf.num_vars = static_cast<int>(vars);
      declared_clauses = clauses;
      header = true;
      continue;
    }
    if (!header) fail("clause before header");
    std::istringstream toks(line);
    std::string tok;
    while (toks >> tok) {
      char* end = nullptr;
      const long lit = std::strtol(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0') fail("bad literal '" + tok + "'");
      if (lit == 0) {
        if (pending.empty()) fail("empty clause");
        if (pending.size() > 3) fail("clause has " + std::to_string(pending.size()) + " literals (at most 3 allowed)");
        while (pending.size() < 3) pending.push_back(pending.back());
        out.cnf.clauses.push_back({pending[0], pending[1], pending[2]});
        pending.clear();
        continue;
      }
      if (std::labs(lit) > out.cnf.num_vars) fail("literal " + tok + " out of range");
      pending.push_back(static_cast<Literal>(lit));
    }
  }
  if (!header) throw InputError("dimacs: missing 'p cnf' header");
  if (!pending.empty()) throw InputError("dimacs: last clause is not terminated by 0");
  if (declared_clauses && *declared_clauses != static_cast<long>(out.cnf.clauses.size()))
    out.warnings.push_back("header declares " + std::to_string(*declared_clauses) + " clauses, found " +
                           std::to_string(out.cnf.clauses.size()));
  return out;
}

inline std::string serialize_dimacs(const Cnf& f) {
  std::string s = "p cnf " + std::to_string(f.num_vars) + " " + std::to_string(f.clauses.size()) + "\n";
  for (const auto& c : f.clauses) s += std::to_string(c[0]) + " " + std::to_string(c[1]) + " " + std::to_string(c[2]) + " 0\n";
  return s;
}

inline bool literal_true(Literal l, const Assignment& a) {
  const bool v = a.at(static_cast<std::size_t>(std::abs(l)) - 1);
  return l > 0 ? v : !v;
}

inline bool evaluate(const Cnf& f, const Assignment& a) {
  if (a.size() != static_cast<std::size_t>(f.num_vars)) throw PreconditionError("assignment size does not match formula");
  for (const auto& c : f.clauses)
    if (!literal_true(c[0], a) && !literal_true(c[1], a) && !literal_true(c[2], a)) return false;
  return true;
}

inline constexpr int kMaxBruteVars = 24;

/// First model in lexicographic order (x1 most significant, false < true),
/// or nullopt when unsatisfiable.
inline std::optional<Assignment> brute_sat(const Cnf& f) {
  if (f.num_vars > kMaxBruteVars)
    throw BudgetExceeded("brute_sat: " + std::to_string(f.num_vars) + " variables (limit " + std::to_string(kMaxBruteVars) + ")");
  const int n = f.num_vars;
  // Clause masks over bit (n - v) for x_v so counting up walks lex order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> masks;  // (positive bits, negative bits)
  for (const auto& c : f.clauses) {
    std::uint32_t pos = 0, neg = 0;
    for (auto l : c) (l > 0 ? pos : neg) |= 1u << (n - std::abs(l));
    masks.emplace_back(pos, neg);
  }
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    const auto bits = static_cast<std::uint32_t>(x);
    bool ok = true;
    for (const auto& [pos, neg] : masks)
      if (!(bits & pos) && !(~bits & neg)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    Assignment a(n);
    for (int v = 1; v <= n; ++v) a[v - 1] = (bits >> (n - v)) & 1u;
    return a;
  }
  return std::nullopt;
}

/// f with x_v fixed: satisfied clauses drop out, false literals are dropped
/// (clauses are re-padded). A clause left empty becomes (x_v) when value is
/// false, or (-x_v) when true, which keeps the result unsatisfiable.
inline Cnf with_fixed(const Cnf& f, int v, bool value) {
  if (v < 1 || v > f.num_vars) throw PreconditionError("with_fixed: variable out of range");
  Cnf out{f.num_vars, {}};
  for (const auto& c : f.clauses) {
    std::vector<Literal> keep;
    bool satisfied = false;
    for (auto l : c) {
      if (std::abs(l) != v) {
        keep.push_back(l);
      } else if ((l > 0) == value) {
        satisfied = true;
      }
    }
    if (satisfied) continue;
    if (keep.empty()) keep.push_back(value ? -v : v);
    while (keep.size() < 3) keep.push_back(keep.back());
    out.clauses.push_back({keep[0], keep[1], keep[2]});
  }
  // Pin x_v so models of the result agree with the substitution.
  const Literal pin = value ? v : -v;
  out.clauses.push_back({pin, pin, pin});
  return out;
}

}  // namespace quorumlens
