// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

// Generators and brute-force references shared by the test binaries.

#pragma once

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "indset/domains.hpp"
#include "indset/query.hpp"
#include "indset/schema.hpp"
#include "indset/smt.hpp"

namespace indset::testing {

inline std::int64_t pick(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline bool coin(std::mt19937_64& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

inline SecretValue random_point(std::mt19937_64& rng, const SecretSchema& s) {
  SecretValue v;
  for (const auto& f : s.fields()) v.values.push_back(pick(rng, f.lower, f.upper));
  return v;
}

inline SecretSchema nearby_schema() {
  return SecretSchema({{"x", 0, 400}, {"y", 0, 400}});
}

// 1 to `max_arity` fields, a few values each, lower bounds possibly negative.
inline SecretSchema random_schema(std::mt19937_64& rng, int max_arity = 3, int max_width = 8) {
  std::vector<Field> f;
  int n = static_cast<int>(pick(rng, 1, max_arity));
  for (int i = 0; i < n; ++i) {
    std::int64_t lo = pick(rng, -4, 4);
    f.push_back({std::string(1, static_cast<char>('a' + i)), lo, lo + pick(rng, 0, max_width - 1)});
  }
  return SecretSchema(std::move(f));
}

// Ranged box overlapping the schema, possibly sticking out of it.
inline Box random_ranged_box(std::mt19937_64& rng, const SecretSchema& s) {
  std::vector<Interval1D> r;
  for (const auto& f : s.fields()) {
    std::int64_t a = pick(rng, f.lower - 1, f.upper + 1);
    std::int64_t b = pick(rng, f.lower - 1, f.upper + 1);
    r.emplace_back(std::min(a, b), std::max(a, b));
  }
  return Box::of(std::move(r));
}

inline Box random_box(std::mt19937_64& rng, const SecretSchema& s) {
  int roll = static_cast<int>(pick(rng, 0, 19));
  if (roll == 0) return Box::top();
  if (roll == 1) return Box::bottom();
  return random_ranged_box(rng, s);
}

// A box inside `b` (same kind family).
inline Box shrink(std::mt19937_64& rng, const Box& b, const SecretSchema& s) {
  if (b.is_bottom()) return b;
  if (b.is_top()) return coin(rng, 0.2) ? b : random_box(rng, s);
  if (coin(rng, 0.1)) return Box::bottom();
  std::vector<Interval1D> r;
  for (const auto& iv : b.ranges()) {
    std::int64_t lo = pick(rng, iv.lower, iv.upper);
    r.emplace_back(lo, pick(rng, lo, iv.upper));
  }
  return Box::of(std::move(r));
}

inline Powerset random_powerset(std::mt19937_64& rng, const SecretSchema& s) {
  std::vector<Box> inc, exc;
  int ni = static_cast<int>(pick(rng, 0, 3)), ne = static_cast<int>(pick(rng, 0, 2));
  for (int i = 0; i < ni; ++i) inc.push_back(random_box(rng, s));
  for (int i = 0; i < ne; ++i) exc.push_back(coin(rng, 0.9) ? random_ranged_box(rng, s) : Box::top());
  return Powerset(std::move(inc), std::move(exc));
}

// A powerset whose set is contained in `p`'s, built so that the sound
// subset check can see it.
inline Powerset shrink(std::mt19937_64& rng, const Powerset& p, const SecretSchema& s) {
  std::vector<Box> inc, exc = p.exclude();
  for (const auto& b : p.include())
    if (coin(rng, 0.8)) inc.push_back(shrink(rng, b, s));
  if (coin(rng, 0.5)) exc.push_back(random_ranged_box(rng, s));
  return Powerset(std::move(inc), std::move(exc));
}

// Membership of every schema point, in enumeration order.
template <class D>
std::vector<bool> extension(const D& d, const SecretSchema& s) {
  std::vector<bool> out;
  for_each_point(s, [&](std::span<const std::int64_t> p) { out.push_back(member(p, d)); });
  return out;
}

inline std::size_t count(const std::vector<bool>& v) {
  std::size_t n = 0;
  for (bool b : v) n += b;
  return n;
}

// Random query text over the schema's fields: sums of scaled fields and
// abs() terms compared against constants, combined with && || !.
class QueryGen {
 public:
  QueryGen(std::mt19937_64& rng, const SecretSchema& s) : rng_(rng), s_(s) {}

  std::string boolean(int depth = 2) {
    int roll = static_cast<int>(pick(rng_, 0, depth > 0 ? 9 : 5));
    if (roll <= 4) return comparison();
    if (roll == 5) return coin(rng_, 0.5) ? "true" : "false";
    if (roll == 6) return "!(" + boolean(depth - 1) + ")";
    if (roll <= 8) return "(" + boolean(depth - 1) + " && " + boolean(depth - 1) + ")";
    return "(" + boolean(depth - 1) + " || " + boolean(depth - 1) + ")";
  }

  std::string comparison() {
    static const char* ops[] = {"<", "<=", "==", "!=", ">=", ">"};
    const auto& f = s_.field(pick(rng_, 0, s_.arity() - 1));
    std::int64_t c = pick(rng_, f.lower - 2, f.upper + 2);
    return arith(2) + " " + ops[pick(rng_, 0, 5)] + " " + std::to_string(c);
  }

  std::string arith(int depth) {
    int roll = static_cast<int>(pick(rng_, 0, depth > 0 ? 7 : 2));
    switch (roll) {
      case 0:
      case 1: return s_.field(pick(rng_, 0, s_.arity() - 1)).name;
      case 2: return std::to_string(pick(rng_, -5, 5));
      case 3: return "abs(" + arith(depth - 1) + " - " + std::to_string(pick(rng_, -3, 3)) + ")";
      case 4: return std::to_string(pick(rng_, -3, 3)) + " * " + arith(depth - 1);
      case 5: return "-" + arith(depth - 1);
      case 6: return "(" + arith(depth - 1) + " + " + arith(depth - 1) + ")";
      default: return "(" + arith(depth - 1) + " - " + arith(depth - 1) + ")";
    }
  }

 private:
  std::mt19937_64& rng_;
  const SecretSchema& s_;
};

// The solver under test, overridable through INDSET_SOLVER.
inline std::string solver_command() { return resolve_solver_command(""); }

}  // namespace indset::testing
