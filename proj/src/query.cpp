// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#include "indset/query.hpp"

#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "indset/error.hpp"

namespace indset {

using namespace ast;

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ne: return "!=";
  }
  return "?";
}

bool Expr::is_bool() const {
  return std::holds_alternative<Cmp>(node) || std::holds_alternative<And>(node) ||
         std::holds_alternative<Or>(node) || std::holds_alternative<Not>(node) ||
         std::holds_alternative<BoolLit>(node);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ExprPtr make(Expr::Node n) { return std::make_shared<const Expr>(Expr{std::move(n)}); }

bool has_field(const Expr& e) {
  return std::visit(
      overloaded{
          [](const IntLit&) { return false; },
          [](const FieldRef&) { return true; },
          [](const BoolLit&) { return false; },
          [](const MulConst& m) { return has_field(*m.e); },
          [](const Cmp& c) { return has_field(*c.lhs) || has_field(*c.rhs); },
          [](const auto& n) {
            if constexpr (requires { n.lhs; }) return has_field(*n.lhs) || has_field(*n.rhs);
            else return has_field(*n.e);
          },
      },
      e.node);
}

using Wide = __int128;

Wide eval_int(const Expr& e, std::span<const std::int64_t> s) {
  return std::visit(
      overloaded{
          [](const IntLit& n) -> Wide { return n.value; },
          [&](const FieldRef& n) -> Wide { return s[n.index]; },
          [&](const Neg& n) -> Wide { return -eval_int(*n.e, s); },
          [&](const Add& n) -> Wide { return eval_int(*n.lhs, s) + eval_int(*n.rhs, s); },
          [&](const Sub& n) -> Wide { return eval_int(*n.lhs, s) - eval_int(*n.rhs, s); },
          [&](const MulConst& n) -> Wide { return Wide(n.coeff) * eval_int(*n.e, s); },
          [&](const Abs& n) -> Wide {
            Wide v = eval_int(*n.e, s);
            return v < 0 ? -v : v;
          },
          [](const auto&) -> Wide { throw TypeError("boolean node in arithmetic position"); },
      },
      e.node);
}

bool eval_bool(const Expr& e, std::span<const std::int64_t> s) {
  return std::visit(
      overloaded{
          [](const BoolLit& n) { return n.value; },
          [&](const Not& n) { return !eval_bool(*n.e, s); },
          [&](const And& n) { return eval_bool(*n.lhs, s) && eval_bool(*n.rhs, s); },
          [&](const Or& n) { return eval_bool(*n.lhs, s) || eval_bool(*n.rhs, s); },
          [&](const Cmp& n) {
            Wide a = eval_int(*n.lhs, s);
            Wide b = eval_int(*n.rhs, s);
            switch (n.op) {
              case CmpOp::Lt: return a < b;
              case CmpOp::Le: return a <= b;
              case CmpOp::Eq: return a == b;
              case CmpOp::Ge: return a >= b;
              case CmpOp::Gt: return a > b;
              case CmpOp::Ne: return a != b;
            }
            return false;
          },
          [](const auto&) -> bool { throw TypeError("arithmetic node in boolean position"); },
      },
      e.node);
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Int, Ident, Op, LParen, RParen, Sep, End };

struct Token {
  Tok kind;
  std::string text;
  Wide value = 0;
  std::size_t pos = 0;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (c == ';') {
      out.push_back({Tok::Sep, ";", 0, i});
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Wide v = 0;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        v = v * 10 + (src[i] - '0');
        if (v > Wide(std::numeric_limits<std::int64_t>::max()) + 1)
          throw SyntaxError(start, "integer literal out of range");
        ++i;
      }
      out.push_back({Tok::Int, std::string(src.substr(start, i - start)), v, start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        ++i;
      out.push_back({Tok::Ident, std::string(src.substr(start, i - start)), 0, start});
      continue;
    }
    if (c == '(') {
      out.push_back({Tok::LParen, "(", 0, i++});
      continue;
    }
    if (c == ')') {
      out.push_back({Tok::RParen, ")", 0, i++});
      continue;
    }
    static const char* two[] = {"&&", "||", "<=", ">=", "==", "!="};
    bool matched = false;
    for (const char* op : two) {
      if (src.substr(i, 2) == op) {
        out.push_back({Tok::Op, op, 0, i});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("<>+-*!=").find(c) != std::string_view::npos) {
      out.push_back({Tok::Op, std::string(1, c), 0, i++});
      continue;
    }
    throw SyntaxError(i, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", 0, src.size()});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

const std::set<std::string> kReserved = {"let", "abs", "true", "false"};

class Parser {
 public:
  Parser(std::vector<Token> toks, const SecretSchema& schema)
      : toks_(std::move(toks)), schema_(schema) {}

  ExprPtr parse_program() {
    collect_helper_names();
    skip_seps();
    while (peek_ident("let")) {
      std::size_t let_pos = next().pos;
      Token name = expect(Tok::Ident, "helper name");
      if (kReserved.count(name.text)) throw SyntaxError(name.pos, "reserved word as helper name");
      if (schema_.index_of(name.text))
        throw TypeError("helper '" + name.text + "' shadows a field");
      if (helpers_.count(name.text))
        throw TypeError("helper '" + name.text + "' defined twice");
      expect_op("=");
      defining_ = name.text;
      ExprPtr body = parse_expr();
      defining_.reset();
      helpers_[name.text] = body;
      ++helpers_done_;
      if (peek().kind == Tok::End)
        throw SyntaxError(peek().pos, "missing query after let at " + std::to_string(let_pos));
      skip_seps();
    }
    ExprPtr root = parse_expr();
    skip_seps();
    if (peek().kind != Tok::End) throw SyntaxError(peek().pos, "unexpected '" + peek().text + "'");
    if (!root->is_bool()) throw TypeError("query must be boolean");
    return root;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool peek_op(std::string_view op) const { return peek().kind == Tok::Op && peek().text == op; }
  bool peek_ident(std::string_view id) const {
    return peek().kind == Tok::Ident && peek().text == id;
  }

  Token expect(Tok kind, const char* what) {
    if (peek().kind != kind) throw SyntaxError(peek().pos, std::string("expected ") + what);
    return next();
  }
  void expect_op(std::string_view op) {
    if (!peek_op(op)) throw SyntaxError(peek().pos, "expected '" + std::string(op) + "'");
    next();
  }
  void skip_seps() {
    while (peek().kind == Tok::Sep) next();
  }

  void collect_helper_names() {
    for (std::size_t i = 0; i + 1 < toks_.size(); ++i)
      if (toks_[i].kind == Tok::Ident && toks_[i].text == "let" &&
          toks_[i + 1].kind == Tok::Ident)
        helper_order_.push_back(toks_[i + 1].text);
  }

  static void require_int(const ExprPtr& e, std::size_t pos) {
    if (e->is_bool()) throw TypeError("expected integer expression at " + std::to_string(pos));
  }
  static void require_bool(const ExprPtr& e, std::size_t pos) {
    if (!e->is_bool()) throw TypeError("expected boolean expression at " + std::to_string(pos));
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_and();
    while (peek_op("||")) {
      std::size_t p = next().pos;
      ExprPtr rhs = parse_and();
      require_bool(lhs, p);
      require_bool(rhs, p);
      lhs = make(Or{lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (peek_op("&&")) {
      std::size_t p = next().pos;
      ExprPtr rhs = parse_not();
      require_bool(lhs, p);
      require_bool(rhs, p);
      lhs = make(And{lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (peek_op("!")) {
      std::size_t p = next().pos;
      ExprPtr e = parse_not();
      require_bool(e, p);
      return make(Not{e});
    }
    return parse_cmp();
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_sum();
    static const std::map<std::string, CmpOp> ops = {{"<", CmpOp::Lt},  {"<=", CmpOp::Le},
                                                     {"==", CmpOp::Eq}, {">=", CmpOp::Ge},
                                                     {">", CmpOp::Gt},  {"!=", CmpOp::Ne}};
    if (peek().kind == Tok::Op) {
      auto it = ops.find(peek().text);
      if (it != ops.end()) {
        std::size_t p = next().pos;
        ExprPtr rhs = parse_sum();
        require_int(lhs, p);
        require_int(rhs, p);
        return make(Cmp{it->second, lhs, rhs});
      }
      if (peek().text == "=") throw SyntaxError(peek().pos, "use '==' for equality");
    }
    return lhs;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_term();
    while (peek_op("+") || peek_op("-")) {
      Token op = next();
      ExprPtr rhs = parse_term();
      require_int(lhs, op.pos);
      require_int(rhs, op.pos);
      lhs = op.text == "+" ? make(Add{lhs, rhs}) : make(Sub{lhs, rhs});
    }
    return lhs;
  }

  static std::int64_t fold_constant(const ExprPtr& e, std::size_t pos) {
    Wide v = eval_int(*e, {});
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min())
      throw TypeError("constant factor overflows at " + std::to_string(pos));
    return static_cast<std::int64_t>(v);
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    while (peek_op("*")) {
      std::size_t p = next().pos;
      ExprPtr rhs = parse_unary();
      require_int(lhs, p);
      require_int(rhs, p);
      if (!has_field(*lhs)) {
        lhs = make(MulConst{fold_constant(lhs, p), rhs});
      } else if (!has_field(*rhs)) {
        lhs = make(MulConst{fold_constant(rhs, p), lhs});
      } else {
        throw TypeError("non-linear product of two field-dependent terms at " +
                        std::to_string(p));
      }
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (peek_op("-")) {
      std::size_t p = next().pos;
      if (peek().kind == Tok::Int) {
        Token lit = next();
        return make(IntLit{static_cast<std::int64_t>(-lit.value)});
      }
      ExprPtr e = parse_unary();
      require_int(e, p);
      return make(Neg{e});
    }
    return parse_atom();
  }

  ExprPtr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        Token lit = next();
        if (lit.value > std::numeric_limits<std::int64_t>::max())
          throw SyntaxError(lit.pos, "integer literal out of range");
        return make(IntLit{static_cast<std::int64_t>(lit.value)});
      }
      case Tok::LParen: {
        next();
        ExprPtr e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident:
        return parse_ident();
      default:
        throw SyntaxError(t.pos, t.kind == Tok::End ? "unexpected end of query"
                                                    : "unexpected '" + t.text + "'");
    }
  }

  ExprPtr parse_ident() {
    Token id = next();
    if (id.text == "true") return make(BoolLit{true});
    if (id.text == "false") return make(BoolLit{false});
    if (id.text == "abs") {
      expect(Tok::LParen, "'(' after abs");
      ExprPtr e = parse_expr();
      expect(Tok::RParen, "')'");
      require_int(e, id.pos);
      return make(Abs{e});
    }
    if (id.text == "let") throw SyntaxError(id.pos, "let is only allowed before the query");
    if (auto idx = schema_.index_of(id.text)) return make(FieldRef{*idx, id.text});
    if (auto it = helpers_.find(id.text); it != helpers_.end()) return it->second;
    for (std::size_t i = helpers_done_; i < helper_order_.size(); ++i) {
      if (helper_order_[i] == id.text) {
        if (defining_ && *defining_ == id.text)
          throw RecursionError("helper '" + id.text + "' refers to itself");
        throw RecursionError("helper '" + id.text + "' used before its definition");
      }
    }
    throw TypeError("unknown field '" + id.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const SecretSchema& schema_;
  std::map<std::string, ExprPtr> helpers_;
  std::vector<std::string> helper_order_;
  std::size_t helpers_done_ = 0;
  std::optional<std::string> defining_;
};

// ---------------------------------------------------------------------------
// Printing and SMT translation

void print(const Expr& e, const SecretSchema& schema, std::string& out) {
  auto bin = [&](const ExprPtr& a, const char* op, const ExprPtr& b) {
    out += '(';
    print(*a, schema, out);
    out += ' ';
    out += op;
    out += ' ';
    print(*b, schema, out);
    out += ')';
  };
  std::visit(overloaded{
                 [&](const IntLit& n) { out += std::to_string(n.value); },
                 [&](const FieldRef& n) { out += schema.field(n.index).name; },
                 [&](const Neg& n) {
                   out += "-(";
                   print(*n.e, schema, out);
                   out += ')';
                 },
                 [&](const Add& n) { bin(n.lhs, "+", n.rhs); },
                 [&](const Sub& n) { bin(n.lhs, "-", n.rhs); },
                 [&](const MulConst& n) {
                   out += '(' + std::to_string(n.coeff) + " * ";
                   print(*n.e, schema, out);
                   out += ')';
                 },
                 [&](const Abs& n) {
                   out += "abs(";
                   print(*n.e, schema, out);
                   out += ')';
                 },
                 [&](const Cmp& n) { bin(n.lhs, to_string(n.op), n.rhs); },
                 [&](const And& n) { bin(n.lhs, "&&", n.rhs); },
                 [&](const Or& n) { bin(n.lhs, "||", n.rhs); },
                 [&](const Not& n) {
                   out += "!(";
                   print(*n.e, schema, out);
                   out += ')';
                 },
                 [&](const BoolLit& n) { out += n.value ? "true" : "false"; },
             },
             e.node);
}

SmtTerm translate(const Expr& e, const std::vector<std::string>& vars) {
  auto tr = [&](const ExprPtr& p) { return translate(*p, vars); };
  return std::visit(
      overloaded{
          [](const IntLit& n) { return smt::num(n.value); },
          [&](const FieldRef& n) { return smt::sym(vars.at(n.index)); },
          [&](const Neg& n) { return smt::neg(tr(n.e)); },
          [&](const Add& n) { return smt::add(tr(n.lhs), tr(n.rhs)); },
          [&](const Sub& n) { return smt::sub(tr(n.lhs), tr(n.rhs)); },
          [&](const MulConst& n) { return smt::mul(n.coeff, tr(n.e)); },
          [&](const Abs& n) {
            SmtTerm v = tr(n.e);
            return smt::ite(smt::lt(v, smt::num(0)), smt::neg(v), v);
          },
          [&](const Cmp& n) {
            SmtTerm a = tr(n.lhs), b = tr(n.rhs);
            switch (n.op) {
              case CmpOp::Lt: return smt::cmp("<", a, b);
              case CmpOp::Le: return smt::cmp("<=", a, b);
              case CmpOp::Eq: return smt::cmp("=", a, b);
              case CmpOp::Ge: return smt::cmp(">=", a, b);
              case CmpOp::Gt: return smt::cmp(">", a, b);
              case CmpOp::Ne: return smt::not_(smt::cmp("=", a, b));
            }
            return smt::bool_lit(false);
          },
          [&](const And& n) { return SExpr::app("and", {tr(n.lhs), tr(n.rhs)}); },
          [&](const Or& n) { return SExpr::app("or", {tr(n.lhs), tr(n.rhs)}); },
          [&](const Not& n) { return smt::not_(tr(n.e)); },
          [](const BoolLit& n) { return smt::bool_lit(n.value); },
      },
      e.node);
}

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  auto eq = [](const ExprPtr& x, const ExprPtr& y) { return structurally_equal(*x, *y); };
  return std::visit(
      overloaded{
          [&](const IntLit& n) { return n.value == std::get<IntLit>(b.node).value; },
          [&](const FieldRef& n) { return n.index == std::get<FieldRef>(b.node).index; },
          [&](const BoolLit& n) { return n.value == std::get<BoolLit>(b.node).value; },
          [&](const MulConst& n) {
            const auto& o = std::get<MulConst>(b.node);
            return n.coeff == o.coeff && eq(n.e, o.e);
          },
          [&](const Cmp& n) {
            const auto& o = std::get<Cmp>(b.node);
            return n.op == o.op && eq(n.lhs, o.lhs) && eq(n.rhs, o.rhs);
          },
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            const auto& o = std::get<T>(b.node);
            if constexpr (requires { n.lhs; }) return eq(n.lhs, o.lhs) && eq(n.rhs, o.rhs);
            else return eq(n.e, o.e);
          },
      },
      a.node);
}

QueryAst::QueryAst(ExprPtr root, std::size_t arity) : root_(std::move(root)), arity_(arity) {
  if (!root_ || !root_->is_bool()) throw TypeError("query root must be boolean");
}

QueryAst parse_query(std::string_view text, const SecretSchema& schema) {
  Parser p(lex(text), schema);
  return QueryAst(p.parse_program(), schema.arity());
}

bool eval(const QueryAst& q, std::span<const std::int64_t> secret) {
  if (secret.size() != q.arity()) throw ArityMismatch("eval: secret arity mismatch");
  return eval_bool(q.root(), secret);
}

bool eval(const QueryAst& q, const SecretValue& s) { return eval(q, std::span(s.values)); }

std::string to_string(const QueryAst& q, const SecretSchema& schema) {
  std::string out;
  print(q.root(), schema, out);
  return out;
}

SmtTerm to_smt(const QueryAst& q, const std::vector<std::string>& var_names) {
  if (var_names.size() != q.arity()) throw ArityMismatch("to_smt: variable count mismatch");
  return translate(q.root(), var_names);
}

NamedQuery NamedQuery::parse(std::string name, std::string text, SecretSchema schema) {
  QueryAst ast = parse_query(text, schema);
  return NamedQuery{std::move(name), std::move(text), std::move(ast), std::move(schema)};
}

}  // namespace indset
