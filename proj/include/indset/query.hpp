// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "indset/schema.hpp"
#include "indset/smt.hpp"

namespace indset {

enum class CmpOp { Lt, Le, Eq, Ge, Gt, Ne };

const char* to_string(CmpOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace ast {
struct IntLit { std::int64_t value; };
struct FieldRef { std::size_t index; std::string name; };
struct Neg { ExprPtr e; };
struct Add { ExprPtr lhs, rhs; };
struct Sub { ExprPtr lhs, rhs; };
struct MulConst { std::int64_t coeff; ExprPtr e; };
struct Abs { ExprPtr e; };
struct Cmp { CmpOp op; ExprPtr lhs, rhs; };
struct And { ExprPtr lhs, rhs; };
struct Or { ExprPtr lhs, rhs; };
struct Not { ExprPtr e; };
struct BoolLit { bool value; };
}  // namespace ast

// One immutable node. Arithmetic nodes are affine in the field refs, with
// abs() as the only piecewise operator.
struct Expr {
  using Node = std::variant<ast::IntLit, ast::FieldRef, ast::Neg, ast::Add, ast::Sub,
                            ast::MulConst, ast::Abs, ast::Cmp, ast::And, ast::Or, ast::Not,
                            ast::BoolLit>;
  Node node;

  bool is_bool() const;
};

bool structurally_equal(const Expr& a, const Expr& b);

// A boolean query over the fields of one schema.
class QueryAst {
 public:
  QueryAst(ExprPtr root, std::size_t arity);

  const Expr& root() const { return *root_; }
  const ExprPtr& root_ptr() const { return root_; }
  std::size_t arity() const { return arity_; }

  bool operator==(const QueryAst& o) const {
    return arity_ == o.arity_ && structurally_equal(*root_, *o.root_);
  }

 private:
  ExprPtr root_;
  std::size_t arity_;
};

// Grammar, lowest precedence first:
//   query  := { "let" ident "=" expr (";" | newline) } expr
//   expr   := and { "||" and }
//   and    := not { "&&" not }
//   not    := "!" not | cmp
//   cmp    := sum [ ("<="|"<"|"=="|"!="|">="|">") sum ]
//   sum    := term { ("+"|"-") term }
//   term   := unary { "*" unary }          one side must be constant
//   unary  := "-" unary | atom
//   atom   := int | ident | "abs" "(" expr ")" | "true" | "false" | "(" expr ")"
// Helpers are inlined; a helper may only refer to helpers defined above it.
QueryAst parse_query(std::string_view text, const SecretSchema& schema);

bool eval(const QueryAst& q, std::span<const std::int64_t> secret);
bool eval(const QueryAst& q, const SecretValue& s);

// Canonical, fully parenthesized text. parse_query(to_string(q)) == q.
std::string to_string(const QueryAst& q, const SecretSchema& schema);

// Boolean SMT-LIB term over `var_names` (one per field); abs becomes ite.
SmtTerm to_smt(const QueryAst& q, const std::vector<std::string>& var_names);

struct NamedQuery {
  std::string name;
  std::string text;
  QueryAst ast;
  SecretSchema schema;

  static NamedQuery parse(std::string name, std::string text, SecretSchema schema);
};

}  // namespace indset
