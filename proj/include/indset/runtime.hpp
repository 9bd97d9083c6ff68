// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>

#include "indset/bigint.hpp"
#include "indset/domains.hpp"
#include "indset/schema.hpp"
#include "indset/synthesis.hpp"

namespace indset {

// Accepts a knowledge domain iff it still holds more than `threshold`
// secrets. Monotone in size, which is what makes under-approximated
// knowledge safe to check.
class Policy {
 public:
  explicit Policy(BigInt threshold);

  const BigInt& threshold() const { return threshold_; }
  bool accepts(const Domain& d, const SecretSchema& schema) const {
    return size(d, schema) > threshold_;
  }

 private:
  BigInt threshold_;
};

// Bounded-downgrade state for secrets of one schema. Tracks, per secret, an
// under-approximation of what an observer of every released answer knows,
// and refuses any release after which that knowledge could fall to the
// policy threshold or below.
//
// Not thread-safe: one writer per session. Returned domains are copies.
class Session {
 public:
  Session(SecretSchema schema, DomainKind kind, Policy policy);

  const SecretSchema& schema() const { return schema_; }
  DomainKind domain_kind() const { return kind_; }
  const Policy& policy() const { return policy_; }

  void register_secret(const std::string& id, SecretValue value);

  // Throws DuplicateName, or KindMismatch for an Over pair or a pair in the
  // wrong domain.
  void register_query(const NamedQuery& q, IndSetPair under);
  bool has_query(const std::string& name) const { return queries_.count(name) > 0; }

  // Over-approximations are tracked alongside for inspection only; they
  // never influence a decision.
  void attach_over_approximation(const std::string& query_name, IndSetPair over);

  // Checks the policy on both posteriors before looking at the secret. On
  // success stores the posterior matching the answer and returns the
  // answer; on PolicyViolation nothing changes.
  bool downgrade(const std::string& secret_id, const std::string& query_name);

  // Top until the first accepted downgrade.
  Domain knowledge_of(const std::string& secret_id) const;
  std::optional<Domain> over_knowledge_of(const std::string& secret_id) const;

 private:
  struct SecretState {
    SecretValue value;
    std::optional<Domain> knowledge;
    std::optional<Domain> over_knowledge;
  };
  struct QueryInfo {
    NamedQuery query;
    IndSetPair under;
    std::optional<IndSetPair> over;
  };

  const SecretState& secret(const std::string& id) const;

  SecretSchema schema_;
  DomainKind kind_;
  Policy policy_;
  std::map<std::string, SecretState> secrets_;
  std::map<std::string, QueryInfo> queries_;
};

}  // namespace indset
