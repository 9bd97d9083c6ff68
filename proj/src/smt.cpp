// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#include "indset/smt.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "indset/error.hpp"

namespace indset {
namespace smt {

SmtTerm sym(std::string name) { return SExpr::atom(std::move(name)); }

SmtTerm num(std::int64_t v) {
  if (v < 0) {
    // careful with INT64_MIN: negate in unsigned space
    auto mag = static_cast<std::uint64_t>(-(v + 1)) + 1;
    return SExpr::app("-", {SExpr::atom(std::to_string(mag))});
  }
  return SExpr::atom(std::to_string(v));
}

SmtTerm bool_lit(bool b) { return SExpr::atom(b ? "true" : "false"); }
SmtTerm not_(SmtTerm a) { return SExpr::app("not", {std::move(a)}); }

SmtTerm and_(std::vector<SmtTerm> conj) {
  if (conj.empty()) return bool_lit(true);
  if (conj.size() == 1) return std::move(conj.front());
  return SExpr::app("and", std::move(conj));
}

SmtTerm or_(std::vector<SmtTerm> disj) {
  if (disj.empty()) return bool_lit(false);
  if (disj.size() == 1) return std::move(disj.front());
  return SExpr::app("or", std::move(disj));
}

SmtTerm implies(SmtTerm a, SmtTerm b) { return SExpr::app("=>", {std::move(a), std::move(b)}); }

SmtTerm ite(SmtTerm c, SmtTerm t, SmtTerm e) {
  return SExpr::app("ite", {std::move(c), std::move(t), std::move(e)});
}

SmtTerm cmp(std::string op, SmtTerm a, SmtTerm b) {
  return SExpr::app(std::move(op), {std::move(a), std::move(b)});
}

SmtTerm le(SmtTerm a, SmtTerm b) { return cmp("<=", std::move(a), std::move(b)); }
SmtTerm lt(SmtTerm a, SmtTerm b) { return cmp("<", std::move(a), std::move(b)); }
SmtTerm eq(SmtTerm a, SmtTerm b) { return cmp("=", std::move(a), std::move(b)); }
SmtTerm add(SmtTerm a, SmtTerm b) { return SExpr::app("+", {std::move(a), std::move(b)}); }
SmtTerm sub(SmtTerm a, SmtTerm b) { return SExpr::app("-", {std::move(a), std::move(b)}); }
SmtTerm neg(SmtTerm a) { return SExpr::app("-", {std::move(a)}); }
SmtTerm mul(std::int64_t c, SmtTerm a) { return SExpr::app("*", {num(c), std::move(a)}); }

SmtTerm forall(const std::vector<std::string>& int_vars, SmtTerm body) {
  if (int_vars.empty()) return body;
  std::vector<SExpr> binders;
  for (const auto& v : int_vars) binders.push_back(SExpr::list({sym(v), sym("Int")}));
  return SExpr::app("forall", {SExpr::list(std::move(binders)), std::move(body)});
}

SmtTerm bounds(const SecretSchema& schema, const std::vector<std::string>& vars) {
  if (vars.size() != schema.arity()) throw ArityMismatch("bounds: variable count != schema arity");
  std::vector<SmtTerm> conj;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& f = schema.field(i);
    conj.push_back(SExpr::app("<=", {num(f.lower), sym(vars[i]), num(f.upper)}));
  }
  return and_(std::move(conj));
}

}  // namespace smt

namespace {

bool is_symbol_atom(const std::string& t) {
  if (t.empty()) return false;
  unsigned char c = static_cast<unsigned char>(t[0]);
  if (std::isdigit(c) || t[0] == ':' || t[0] == '"' || t[0] == '#') return false;
  return t != "true" && t != "false";
}

void check_symbols(const SExpr& e, std::set<std::string>& bound, const std::set<std::string>& decls) {
  if (e.is_atom()) {
    if (is_symbol_atom(e.text()) && !decls.count(e.text()) && !bound.count(e.text()))
      throw InvalidArgument("undeclared symbol '" + e.text() + "' in SMT script");
    return;
  }
  if ((e.is_app("forall") || e.is_app("exists")) && e.size() == 3) {
    std::vector<std::string> added;
    for (const auto& b : e[1].items())
      if (b.is_list() && b.size() == 2 && b[0].is_atom() && bound.insert(b[0].text()).second)
        added.push_back(b[0].text());
    check_symbols(e[2], bound, decls);
    for (const auto& a : added) bound.erase(a);
    return;
  }
  // first element of an application is an operator
  for (std::size_t i = 1; i < e.size(); ++i) check_symbols(e[i], bound, decls);
  if (e.size() > 0 && e[0].is_list()) check_symbols(e[0], bound, decls);
}

}  // namespace

void SmtScript::set_option(std::string key, std::string value) {
  if (key == ":opt.priority") throw InvalidArgument("priority is derived from the objective count");
  options_.emplace_back(std::move(key), std::move(value));
}

void SmtScript::declare_int(std::string name) {
  if (std::find(decls_.begin(), decls_.end(), name) != decls_.end())
    throw InvalidArgument("symbol '" + name + "' declared twice");
  decls_.push_back(std::move(name));
}

void SmtScript::add_assertion(SmtTerm t) { assertions_.push_back(std::move(t)); }

std::string SmtScript::render() const {
  std::set<std::string> decls(decls_.begin(), decls_.end());
  std::set<std::string> bound;
  for (const auto& a : assertions_) check_symbols(a, bound, decls);
  for (const auto& o : objectives_) check_symbols(o.term, bound, decls);

  std::string out;
  for (const auto& [k, v] : options_) out += "(set-option " + k + " " + v + ")\n";
  if (timeout_) out += "(set-option :timeout " + std::to_string(timeout_->count()) + ")\n";
  if (objectives_.size() > 1) out += "(set-option :opt.priority pareto)\n";
  for (const auto& d : decls_) out += "(declare-const " + d + " Int)\n";
  for (const auto& a : assertions_) {
    out += "(assert ";
    a.write(out);
    out += ")\n";
  }
  for (const auto& o : objectives_) {
    out += o.sense == ObjectiveSense::Maximize ? "(maximize " : "(minimize ";
    o.term.write(out);
    out += ")\n";
  }
  out += "(check-sat)\n(get-model)\n(get-info :reason-unknown)\n";
  return out;
}

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Sat: return "sat";
    case SolverStatus::Unsat: return "unsat";
    case SolverStatus::Unknown: return "unknown";
    case SolverStatus::Timeout: return "timeout";
  }
  return "?";
}

namespace {

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

bool mentions_cancel(const std::string& s) {
  return s.find("canceled") != std::string::npos || s.find("timeout") != std::string::npos;
}

void read_model(const SExpr& e, std::map<std::string, std::int64_t>& model) {
  // z3 prints `((define-fun x () Int 3) ...)`; older versions wrap it in (model ...)
  for (const auto& item : e.items()) {
    if (item.is_app("define-fun") && item.size() == 5 && item[1].is_atom() &&
        item[3].is_atom() && item[3].text() == "Int")
      model[item[1].text()] = sexpr_to_int(item[4]);
  }
}

}  // namespace

SolverResult parse_solver_output(const std::string& raw, bool killed) {
  SolverResult r;
  r.raw_output = raw;
  std::optional<SolverStatus> status;
  bool canceled = false;
  std::vector<std::string> errors;

  for (const auto& e : parse_sexprs(raw)) {
    if (e.is_atom()) {
      const auto& t = e.text();
      if (t == "sat") status = SolverStatus::Sat;
      else if (t == "unsat") status = SolverStatus::Unsat;
      else if (t == "unknown") status = SolverStatus::Unknown;
      else if (t == "timeout") status = SolverStatus::Timeout;
      else if (t == "success") continue;
      else throw ProtocolError("unexpected solver output '" + t + "'", raw);
    } else if (e.is_app("error")) {
      std::string msg = e.size() > 1 ? unquote(e[1].text()) : "";
      if (mentions_cancel(msg)) canceled = true;
      else if (msg.find("model is not available") == std::string::npos) errors.push_back(msg);
    } else if (e.size() == 2 && e[0].is_atom() && e[0].text() == ":reason-unknown") {
      r.reason = unquote(e[1].text());
      if (mentions_cancel(r.reason)) canceled = true;
    } else if (e.is_app("objectives")) {
      continue;
    } else if (e.is_app("model") || e.size() == 0 || e[0].is_app("define-fun")) {
      read_model(e, r.model);
    } else {
      throw ProtocolError("unrecognized solver reply " + e.str(), raw);
    }
  }

  if (!errors.empty() && !status) throw ProtocolError("solver error: " + errors.front(), raw);
  if (killed || canceled) {
    if (!status || *status == SolverStatus::Unknown) status = SolverStatus::Timeout;
  }
  if (!status) throw ProtocolError("solver printed no check-sat answer", raw);
  r.status = *status;
  if (r.status == SolverStatus::Unsat || r.status == SolverStatus::Unknown) r.model.clear();
  return r;
}

}  // namespace indset
