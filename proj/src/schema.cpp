// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#include "indset/schema.hpp"

#include <set>

#include "indset/error.hpp"

namespace indset {

SecretSchema::SecretSchema(std::vector<Field> fields) : fields_(std::move(fields)) {
  if (fields_.empty()) throw InvalidArgument("schema must have at least one field");
  std::set<std::string> seen;
  for (const auto& f : fields_) {
    if (f.name.empty()) throw InvalidArgument("schema field with empty name");
    if (f.lower > f.upper)
      throw InvalidArgument("field '" + f.name + "' has lower > upper");
    if (!seen.insert(f.name).second)
      throw InvalidArgument("duplicate field name '" + f.name + "'");
  }
}

std::optional<std::size_t> SecretSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < fields_.size(); ++i)
    if (fields_[i].name == name) return i;
  return std::nullopt;
}

std::vector<std::string> SecretSchema::names() const {
  std::vector<std::string> out;
  out.reserve(fields_.size());
  for (const auto& f : fields_) out.push_back(f.name);
  return out;
}

bool within_bounds(const SecretSchema& schema, const SecretValue& s) {
  if (s.arity() != schema.arity()) return false;
  for (std::size_t i = 0; i < s.arity(); ++i) {
    const auto& f = schema.field(i);
    if (s.values[i] < f.lower || s.values[i] > f.upper) return false;
  }
  return true;
}

SecretValue make_secret(const SecretSchema& schema, std::vector<std::int64_t> values) {
  SecretValue s{std::move(values)};
  if (s.arity() != schema.arity())
    throw ArityMismatch("secret has " + std::to_string(s.arity()) + " values, schema has " +
                        std::to_string(schema.arity()) + " fields");
  if (!within_bounds(schema, s)) throw InvalidArgument("secret " + to_string(s) + " out of bounds");
  return s;
}

BigInt total_size(const SecretSchema& schema) {
  BigInt n = 1;
  for (const auto& f : schema.fields()) n *= BigInt(f.upper) - BigInt(f.lower) + 1;
  return n;
}

void for_each_point(const SecretSchema& schema,
                    const std::function<void(std::span<const std::int64_t>)>& visit,
                    std::uint64_t cap) {
  if (total_size(schema) > cap)
    throw CapExceeded("schema has " + total_size(schema).str() + " points, cap is " +
                      std::to_string(cap));
  const auto& fields = schema.fields();
  std::vector<std::int64_t> cur;
  cur.reserve(fields.size());
  for (const auto& f : fields) cur.push_back(f.lower);
  for (;;) {
    visit(cur);
    // odometer increment, last field fastest
    std::size_t i = fields.size();
    while (i > 0) {
      --i;
      if (cur[i] < fields[i].upper) {
        ++cur[i];
        break;
      }
      cur[i] = fields[i].lower;
      if (i == 0) return;
    }
  }
}

std::vector<SecretValue> enumerate(const SecretSchema& schema, std::uint64_t cap) {
  std::vector<SecretValue> out;
  for_each_point(
      schema,
      [&](std::span<const std::int64_t> p) { out.push_back({{p.begin(), p.end()}}); }, cap);
  return out;
}

std::string to_string(const SecretValue& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.values[i]);
  }
  return out + ")";
}

}  // namespace indset
