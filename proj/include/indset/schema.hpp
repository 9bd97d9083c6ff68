// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "indset/bigint.hpp"

namespace indset {

struct Field {
  std::string name;
  std::int64_t lower;
  std::int64_t upper;

  bool operator==(const Field&) const = default;
};

// Ordered integer fields with inclusive bounds. Construction validates the
// invariants (non-empty, unique names, lower <= upper), so every SecretSchema
// in circulation is well formed.
class SecretSchema {
 public:
  explicit SecretSchema(std::vector<Field> fields);

  std::size_t arity() const { return fields_.size(); }
  const std::vector<Field>& fields() const { return fields_; }
  const Field& field(std::size_t i) const { return fields_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::vector<std::string> names() const;

  bool operator==(const SecretSchema&) const = default;

 private:
  std::vector<Field> fields_;
};

// A concrete secret point. The bounds invariant is checked against a schema
// by `make_secret`; the plain constructor is for internal enumeration.
struct SecretValue {
  std::vector<std::int64_t> values;

  std::size_t arity() const { return values.size(); }
  bool operator==(const SecretValue&) const = default;
  auto operator<=>(const SecretValue&) const = default;
};

SecretValue make_secret(const SecretSchema& schema, std::vector<std::int64_t> values);
bool within_bounds(const SecretSchema& schema, const SecretValue& s);

// Product of the field widths, exact.
BigInt total_size(const SecretSchema& schema);

inline constexpr std::uint64_t kDefaultOracleCap = 100'000'000;

// Visits every grid point exactly once in lexicographic order. The span
// passed to the visitor is only valid for the duration of the call.
// Throws CapExceeded when the schema holds more than `cap` points.
void for_each_point(const SecretSchema& schema,
                    const std::function<void(std::span<const std::int64_t>)>& visit,
                    std::uint64_t cap = kDefaultOracleCap);

// Materializing form of for_each_point; only sensible for small schemas.
std::vector<SecretValue> enumerate(const SecretSchema& schema,
                                   std::uint64_t cap = kDefaultOracleCap);

std::string to_string(const SecretValue& s);

}  // namespace indset
