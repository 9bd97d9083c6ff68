// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "indset/error.hpp"
#include "indset/query.hpp"
#include "indset/sexpr.hpp"
#include "indset/smt.hpp"
#include "indset/synthesis.hpp"
#include "support.hpp"

using namespace indset;
namespace fs = std::filesystem;
using namespace std::chrono_literals;

namespace {

// A shell script standing in for the solver.
std::string fake_solver(const std::string& name, const std::string& body) {
  fs::path p = fs::temp_directory_path() / ("indset-fake-" + std::to_string(getpid()) + "-" + name);
  std::ofstream(p) << "#!/bin/sh\n" << body << '\n';
  fs::permissions(p, fs::perms::owner_all);
  return p.string();
}

Solver z3(std::chrono::milliseconds timeout = 10s) {
  return Solver(SolverOptions{testing::solver_command(), timeout, ""});
}

SmtScript xy_script() {
  SmtScript s;
  s.declare_int("x");
  s.declare_int("y");
  return s;
}

}  // namespace

TEST_CASE("s-expression reader") {
  auto v = parse_sexprs("sat ; comment\n((define-fun h () Int (- 4)) (define-fun |a b| () Int 7))");
  REQUIRE(v.size() == 2);
  CHECK(v[0].text() == "sat");
  CHECK(v[1][0].is_app("define-fun"));
  CHECK(sexpr_to_int(v[1][0][4]) == -4);
  CHECK(v[1][1][1].text() == "|a b|");  // atoms keep their delimiters

  auto w = parse_sexprs("WARNING: optimization with quantified constraints is not supported\nunsat");
  REQUIRE(w.size() == 1);
  CHECK(w[0].text() == "unsat");
  CHECK(parse_sexprs("(error \"a ) b\")")[0].size() == 2);

  CHECK_THROWS_AS(parse_sexprs("(a (b)"), ProtocolError);
  CHECK_THROWS_AS(parse_sexprs("a)"), ProtocolError);
  CHECK_THROWS_AS(sexpr_to_int(SExpr::atom("x")), ProtocolError);
}

TEST_CASE("term builders") {
  CHECK(smt::num(-5).str() == "(- 5)");
  CHECK(smt::num(std::numeric_limits<std::int64_t>::min()).str() == "(- 9223372036854775808)");
  CHECK(smt::and_({}).str() == "true");
  CHECK(smt::or_({}).str() == "false");
  CHECK(smt::and_({smt::sym("a")}).str() == "a");
  CHECK(smt::forall({"x", "y"}, smt::le(smt::sym("x"), smt::sym("y"))).str() ==
        "(forall ((x Int) (y Int)) (<= x y))");
  CHECK(smt::bounds(SecretSchema({{"a", 0, 3}, {"b", -1, 1}}), {"p", "q"}).str() ==
        "(and (<= 0 p 3) (<= (- 1) q 1))");
}

TEST_CASE("script rendering") {
  SmtScript s = xy_script();
  s.add_assertion(smt::le(smt::sym("x"), smt::num(3)));
  s.maximize(smt::sym("x"));
  std::string one = s.render();
  CHECK(one.find("pareto") == std::string::npos);
  CHECK(one.find("(declare-const x Int)") != std::string::npos);
  CHECK(one.find("(maximize x)") != std::string::npos);
  CHECK(one.find("(check-sat)\n(get-model)") != std::string::npos);
  CHECK(s.render() == one);

  s.minimize(smt::sym("y"));
  CHECK(s.render().find("(set-option :opt.priority pareto)") != std::string::npos);

  SmtScript bad;
  bad.add_assertion(smt::le(smt::sym("zz"), smt::num(1)));
  CHECK_THROWS_AS(bad.render(), InvalidArgument);
  SmtScript bound;
  bound.add_assertion(smt::forall({"q"}, smt::le(smt::sym("q"), smt::sym("q"))));
  CHECK_NOTHROW(bound.render());
}

TEST_CASE("solver output parsing") {
  auto sat = parse_solver_output("sat\n(\n  (define-fun x () Int 3)\n  (define-fun y () Int (- 2))\n)\n", false);
  CHECK(sat.status == SolverStatus::Sat);
  CHECK(sat.model.at("x") == 3);
  CHECK(sat.model.at("y") == -2);

  auto unsat = parse_solver_output("unsat\n(error \"line 3 column 10: model is not available\")\n", false);
  CHECK(unsat.status == SolverStatus::Unsat);
  CHECK(unsat.model.empty());

  auto canceled = parse_solver_output(
      "(error \"line 8 column 10: push canceled\")\n((define-fun h () Int 4))\n"
      "(:reason-unknown \"canceled\")\n",
      false);
  CHECK(canceled.status == SolverStatus::Timeout);
  CHECK(canceled.model.at("h") == 4);

  auto unknown = parse_solver_output("unknown\n(:reason-unknown \"incomplete quantifiers\")\n", false);
  CHECK(unknown.status == SolverStatus::Unknown);
  CHECK(unknown.reason == "incomplete quantifiers");

  CHECK(parse_solver_output("", true).status == SolverStatus::Timeout);
  CHECK_THROWS_AS(parse_solver_output("(error \"unknown constant q\")\n", false), ProtocolError);
  CHECK_THROWS_AS(parse_solver_output("banana\n", false), ProtocolError);
}

TEST_CASE("solver runs") {
  Solver solver = z3();
  SmtScript s = xy_script();
  s.add_assertion(smt::and_({smt::le(smt::num(0), smt::sym("x")), smt::le(smt::sym("x"), smt::num(10)),
                             smt::eq(smt::sym("y"), smt::add(smt::sym("x"), smt::num(1)))}));
  s.maximize(smt::sym("x"));
  auto r = solver.run(s);
  REQUIRE(r.status == SolverStatus::Sat);
  CHECK(r.model.at("x") == 10);
  CHECK(r.model.at("y") == 11);

  SmtScript f;
  f.add_assertion(smt::bool_lit(false));
  CHECK(solver.run(f).status == SolverStatus::Unsat);
}

TEST_CASE("validity checks") {
  Solver solver = z3();
  auto schema = testing::nearby_schema();
  auto vars = secret_var_names(2);
  auto q = parse_query("abs(x - 200) + abs(y - 200) <= 100", schema);

  Box reference_true = Box::of({{121, 279}, {179, 221}});
  auto v = solver.check_validity(correctness_condition(q, reference_true, true, ApproxKind::Under, vars),
                                 schema, vars);
  CHECK(v.valid());

  auto cx = solver.check_validity(
      correctness_condition(q, Box::of_schema(schema), true, ApproxKind::Under, vars), schema, vars);
  REQUIRE(cx.kind == Validity::Kind::CounterExample);
  // the counterexample really falsifies the claim
  CHECK(member(*cx.counterexample, Box::of_schema(schema)));
  CHECK_FALSE(eval(q, *cx.counterexample));

  CHECK(solver.check_validity(smt::implies(smt::bool_lit(true), smt::bool_lit(true)), schema, vars)
            .valid());
}

TEST_CASE("to_smt agrees with eval on every point") {
  // One validity check per query: the translation equals the disjunction of
  // the points eval accepts.
  Solver solver = z3();
  std::mt19937_64 rng(99);
  for (int i = 0; i < 120; ++i) {
    auto s = testing::random_schema(rng, 2, 6);
    testing::QueryGen gen(rng, s);
    std::string text = gen.boolean(2);
    CAPTURE(text);
    auto q = parse_query(text, s);
    auto vars = secret_var_names(s.arity());
    std::vector<SmtTerm> accepted;
    for (const auto& p : enumerate(s)) {
      if (!eval(q, p)) continue;
      std::vector<SmtTerm> eqs;
      for (std::size_t j = 0; j < vars.size(); ++j) eqs.push_back(smt::eq(smt::sym(vars[j]), smt::num(p.values[j])));
      accepted.push_back(smt::and_(std::move(eqs)));
    }
    SmtTerm same = smt::eq(to_smt(q, vars), smt::or_(std::move(accepted)));
    auto v = solver.check_validity(same, s, vars);
    if (v.counterexample) CAPTURE(to_string(*v.counterexample));
    REQUIRE(v.valid());
  }
}

TEST_CASE("solver process failures") {
  SmtScript s;
  s.add_assertion(smt::bool_lit(true));

  CHECK_THROWS_AS(run(s, "/nonexistent/solver-binary", 1s), SolverNotFound);

  auto slow = fake_solver("slow", "sleep 30");
  auto t0 = std::chrono::steady_clock::now();
  auto r = run(s, slow, 200ms);
  CHECK(r.status == SolverStatus::Timeout);
  CHECK(std::chrono::steady_clock::now() - t0 < 10s);

  auto garbage = fake_solver("garbage", "echo 'this is not smt-lib'");
  CHECK_THROWS_AS(run(s, garbage, 1s), ProtocolError);

  auto stderr_only = fake_solver("stderr", "echo 'segfault' >&2; exit 1");
  CHECK_THROWS_AS(run(s, stderr_only, 1s), ProtocolError);

  auto echo = fake_solver("echo", "echo sat; echo '((define-fun x () Int 5))'");
  auto ok = run(s, echo, 1s);
  CHECK(ok.status == SolverStatus::Sat);
  CHECK(ok.model.at("x") == 5);

  for (const auto& p : {slow, garbage, stderr_only, echo}) fs::remove(p);
}

TEST_CASE("scripts are dumped on request") {
  fs::path dir = fs::temp_directory_path() / ("indset-dump-" + std::to_string(getpid()));
  Solver solver(SolverOptions{testing::solver_command(), 10s, dir.string()});
  SmtScript s = xy_script();
  auto r = solver.run(s, "probe");
  CHECK(r.status == SolverStatus::Sat);
  REQUIRE_FALSE(r.script_path.empty());
  CHECK(fs::exists(r.script_path));
  CHECK(fs::path(r.script_path).filename().string().rfind("probe-", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("solver command resolution") {
  CHECK(resolve_solver_command("cvc5 --lang smt2") == "cvc5 --lang smt2");
  setenv("INDSET_SOLVER", "my-solver", 1);
  CHECK(resolve_solver_command("") == "my-solver");
  unsetenv("INDSET_SOLVER");
  CHECK(resolve_solver_command("") == "z3");
}
