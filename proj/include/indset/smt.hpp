// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "indset/schema.hpp"
#include "indset/sexpr.hpp"

namespace indset {

using SmtTerm = SExpr;

// Builders for the handful of SMT-LIB operators the toolkit emits.
namespace smt {

SmtTerm sym(std::string name);
SmtTerm num(std::int64_t v);
SmtTerm bool_lit(bool b);
SmtTerm not_(SmtTerm a);
SmtTerm and_(std::vector<SmtTerm> conj);
SmtTerm or_(std::vector<SmtTerm> disj);
SmtTerm implies(SmtTerm a, SmtTerm b);
SmtTerm ite(SmtTerm c, SmtTerm t, SmtTerm e);
SmtTerm cmp(std::string op, SmtTerm a, SmtTerm b);
SmtTerm le(SmtTerm a, SmtTerm b);
SmtTerm lt(SmtTerm a, SmtTerm b);
SmtTerm eq(SmtTerm a, SmtTerm b);
SmtTerm add(SmtTerm a, SmtTerm b);
SmtTerm sub(SmtTerm a, SmtTerm b);
SmtTerm neg(SmtTerm a);
SmtTerm mul(std::int64_t c, SmtTerm a);
SmtTerm forall(const std::vector<std::string>& int_vars, SmtTerm body);

// lower <= var <= upper for every schema field, over the given names.
SmtTerm bounds(const SecretSchema& schema, const std::vector<std::string>& vars);

}  // namespace smt

enum class ObjectiveSense { Maximize, Minimize };

struct Objective {
  ObjectiveSense sense;
  SmtTerm term;
};

// Structured SMT-LIB v2 script with optimization directives. Rendering is
// deterministic and checks that every free symbol is declared.
class SmtScript {
 public:
  void set_option(std::string key, std::string value);
  void set_timeout(std::chrono::milliseconds t) { timeout_ = t; }
  void declare_int(std::string name);
  void add_assertion(SmtTerm t);
  void maximize(SmtTerm t) { objectives_.push_back({ObjectiveSense::Maximize, std::move(t)}); }
  void minimize(SmtTerm t) { objectives_.push_back({ObjectiveSense::Minimize, std::move(t)}); }

  const std::vector<std::string>& declarations() const { return decls_; }
  const std::vector<SmtTerm>& assertions() const { return assertions_; }
  const std::vector<Objective>& objectives() const { return objectives_; }
  std::optional<std::chrono::milliseconds> timeout() const { return timeout_; }

  // Pareto priority is emitted iff there is more than one objective.
  std::string render() const;

 private:
  std::vector<std::pair<std::string, std::string>> options_;
  std::optional<std::chrono::milliseconds> timeout_;
  std::vector<std::string> decls_;
  std::vector<SmtTerm> assertions_;
  std::vector<Objective> objectives_;
};

enum class SolverStatus { Sat, Unsat, Unknown, Timeout };

const char* to_string(SolverStatus s);

struct SolverResult {
  SolverStatus status = SolverStatus::Unknown;
  // Filled when the solver printed a model: always for Sat, possibly for a
  // Timeout that produced a best-effort model.
  std::map<std::string, std::int64_t> model;
  std::string reason;
  std::string raw_output;
  std::chrono::milliseconds wall_time{0};
  std::string script_path;  // set when the script was dumped
};

// Interprets raw solver stdout. `killed` marks a run the wrapper had to kill.
SolverResult parse_solver_output(const std::string& raw, bool killed);

struct SolverOptions {
  // Whitespace-separated command; the script path is appended. Empty means
  // $INDSET_SOLVER, falling back to "z3".
  std::string command;
  std::chrono::milliseconds timeout{10'000};
  // When non-empty every rendered script is kept here.
  std::string dump_dir;
};

std::string resolve_solver_command(const std::string& configured);

struct Validity {
  enum class Kind { Valid, CounterExample, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<SecretValue> counterexample;

  bool valid() const { return kind == Kind::Valid; }
};

// Owns nothing but configuration; every call launches and reaps its own
// solver process, so a Solver can be shared by concurrent callers.
class Solver {
 public:
  explicit Solver(SolverOptions opts = {});

  const SolverOptions& options() const { return opts_; }

  // `tag` names the dumped script file.
  SolverResult run(const SmtScript& script, const std::string& tag = "script") const;

  // Checks that `assertion`, a formula over `vars`, holds at every point of
  // the schema: asserts bounds and the negation, Unsat means Valid.
  Validity check_validity(const SmtTerm& assertion, const SecretSchema& schema,
                          const std::vector<std::string>& vars) const;

 private:
  SolverOptions opts_;
};

SolverResult run(const SmtScript& script, const std::string& solver_cmd,
                 std::chrono::milliseconds timeout);

}  // namespace indset
