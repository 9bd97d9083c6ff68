// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#include "indset/runtime.hpp"

#include "indset/error.hpp"

namespace indset {

Policy::Policy(BigInt threshold) : threshold_(std::move(threshold)) {
  if (threshold_ < 0) throw InvalidArgument("policy threshold must be non-negative");
}

Session::Session(SecretSchema schema, DomainKind kind, Policy policy)
    : schema_(std::move(schema)), kind_(kind), policy_(std::move(policy)) {}

void Session::register_secret(const std::string& id, SecretValue value) {
  if (secrets_.count(id)) throw DuplicateName("secret '" + id + "' already registered");
  if (value.arity() != schema_.arity()) throw ArityMismatch("secret arity != schema arity");
  if (!within_bounds(schema_, value))
    throw InvalidArgument("secret '" + id + "' outside the schema bounds");
  secrets_.emplace(id, SecretState{std::move(value), std::nullopt, std::nullopt});
}

void Session::register_query(const NamedQuery& q, IndSetPair under) {
  if (queries_.count(q.name)) throw DuplicateName("query '" + q.name + "' already registered");
  if (under.kind != ApproxKind::Under)
    throw KindMismatch("only under-approximated ind-sets can drive enforcement");
  if (kind_of(under.when_true) != kind_ || kind_of(under.when_false) != kind_)
    throw KindMismatch(std::string("session tracks ") + to_string(kind_) + " knowledge");
  if (!(q.schema == schema_)) throw ArityMismatch("query schema differs from session schema");
  queries_.emplace(q.name, QueryInfo{q, std::move(under), std::nullopt});
}

void Session::attach_over_approximation(const std::string& query_name, IndSetPair over) {
  auto it = queries_.find(query_name);
  if (it == queries_.end()) throw UnknownQuery("can't attach to unknown query " + query_name);
  if (over.kind != ApproxKind::Over) throw KindMismatch("expected an over-approximation");
  if (kind_of(over.when_true) != kind_ || kind_of(over.when_false) != kind_)
    throw KindMismatch(std::string("session tracks ") + to_string(kind_) + " knowledge");
  it->second.over = std::move(over);
}

const Session::SecretState& Session::secret(const std::string& id) const {
  auto it = secrets_.find(id);
  if (it == secrets_.end()) throw UnknownSecret("unknown secret '" + id + "'");
  return it->second;
}

bool Session::downgrade(const std::string& secret_id, const std::string& query_name) {
  auto q = queries_.find(query_name);
  if (q == queries_.end()) throw UnknownQuery("can't downgrade " + query_name);
  auto s = secrets_.find(secret_id);
  if (s == secrets_.end()) throw UnknownSecret("unknown secret '" + secret_id + "'");
  SecretState& st = s->second;

  Domain prior = st.knowledge ? *st.knowledge : top_of(kind_);
  auto [post_t, post_f] = posterior(prior, q->second.under);
  // Both branches, whatever the secret would answer: the decision itself
  // must not depend on the secret.
  if (!policy_.accepts(post_t, schema_) || !policy_.accepts(post_f, schema_))
    throw PolicyViolation("policy violation on query " + query_name);

  bool response = eval(q->second.query.ast, st.value);
  st.knowledge = response ? std::move(post_t) : std::move(post_f);
  if (const auto& over = q->second.over) {
    Domain oprior = st.over_knowledge ? *st.over_knowledge : top_of(kind_);
    auto [ot, of] = posterior(oprior, *over);
    st.over_knowledge = response ? std::move(ot) : std::move(of);
  }
  return response;
}

Domain Session::knowledge_of(const std::string& secret_id) const {
  const auto& st = secret(secret_id);
  return st.knowledge ? *st.knowledge : top_of(kind_);
}

std::optional<Domain> Session::over_knowledge_of(const std::string& secret_id) const {
  return secret(secret_id).over_knowledge;
}

}  // namespace indset
