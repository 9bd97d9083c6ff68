// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "indset/bigint.hpp"
#include "indset/schema.hpp"

namespace indset {

// Non-empty closed integer range. Empty ranges are never built; an empty
// coordinate collapses the whole box to Bottom.
struct Interval1D {
  std::int64_t lower;
  std::int64_t upper;

  Interval1D(std::int64_t lo, std::int64_t hi);

  bool contains(std::int64_t v) const { return lower <= v && v <= upper; }
  bool operator==(const Interval1D&) const = default;
};

// n-dimensional interval: Top (every secret), Bottom (none) or one range per
// field.
class Box {
 public:
  enum class Kind { Top, Bottom, Ranges };

  static Box top() { return Box(Kind::Top, {}); }
  static Box bottom() { return Box(Kind::Bottom, {}); }
  static Box of(std::vector<Interval1D> ranges);
  // The box spanning the full schema bounds.
  static Box of_schema(const SecretSchema& schema);

  Kind kind() const { return kind_; }
  bool is_top() const { return kind_ == Kind::Top; }
  bool is_bottom() const { return kind_ == Kind::Bottom; }
  const std::vector<Interval1D>& ranges() const { return ranges_; }
  // nullopt for Top and Bottom, which fit any arity
  std::optional<std::size_t> arity() const;

  bool operator==(const Box&) const = default;

 private:
  Box(Kind k, std::vector<Interval1D> r) : kind_(k), ranges_(std::move(r)) {}
  Kind kind_;
  std::vector<Interval1D> ranges_;
};

// Union of the include boxes minus the union of the exclude boxes.
class Powerset {
 public:
  Powerset() = default;
  // Drops Bottom boxes; a Top include absorbs the other includes.
  Powerset(std::vector<Box> include, std::vector<Box> exclude);

  static Powerset top() { return Powerset({Box::top()}, {}); }
  static Powerset bottom() { return Powerset(); }
  static Powerset of(Box b) { return Powerset({std::move(b)}, {}); }

  const std::vector<Box>& include() const { return include_; }
  const std::vector<Box>& exclude() const { return exclude_; }

  bool operator==(const Powerset&) const = default;

 private:
  std::vector<Box> include_;
  std::vector<Box> exclude_;
};

bool member(std::span<const std::int64_t> s, const Box& d);
bool member(const SecretValue& s, const Box& d);
bool subset(const Box& d1, const Box& d2);
Box intersect(const Box& d1, const Box& d2);
// Exact count of the schema points in the box.
BigInt size(const Box& d, const SecretSchema& schema);

bool member(std::span<const std::int64_t> s, const Powerset& d);
bool member(const SecretValue& s, const Powerset& d);
// Sound but incomplete: true only when d1's set is contained in d2's.
bool subset(const Powerset& d1, const Powerset& d2);
// Represents exactly the intersection of the two sets.
Powerset intersect(const Powerset& d1, const Powerset& d2);
// |union(include) \ union(exclude)| within the schema, exact.
BigInt size(const Powerset& d, const SecretSchema& schema);

template <class D>
concept AbstractDomain = requires(const D& d, const SecretValue& s, const SecretSchema& schema) {
  { D::top() } -> std::same_as<D>;
  { D::bottom() } -> std::same_as<D>;
  { member(s, d) } -> std::same_as<bool>;
  { subset(d, d) } -> std::same_as<bool>;
  { intersect(d, d) } -> std::same_as<D>;
  { size(d, schema) } -> std::same_as<BigInt>;
};

static_assert(AbstractDomain<Box>);
static_assert(AbstractDomain<Powerset>);

// Runtime-selected domain; operations on two different alternatives throw
// KindMismatch.
using Domain = std::variant<Box, Powerset>;

enum class DomainKind { Box, Powerset };

DomainKind kind_of(const Domain& d);
const char* to_string(DomainKind k);
Domain top_of(DomainKind k);
Domain bottom_of(DomainKind k);

bool member(const SecretValue& s, const Domain& d);
bool subset(const Domain& d1, const Domain& d2);
Domain intersect(const Domain& d1, const Domain& d2);
BigInt size(const Domain& d, const SecretSchema& schema);

std::string to_string(const Box& b);
std::string to_string(const Powerset& p);
std::string to_string(const Domain& d);

}  // namespace indset
