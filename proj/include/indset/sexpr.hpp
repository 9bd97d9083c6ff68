// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace indset {

// Minimal SMT-LIB s-expression: an atom (symbol, numeral, keyword or string
// literal, stored verbatim) or a parenthesized list. Used both to build
// scripts and to read solver replies.
class SExpr {
 public:
  SExpr() = default;

  static SExpr atom(std::string text);
  static SExpr list(std::vector<SExpr> items);
  // (head args...)
  static SExpr app(std::string head, std::vector<SExpr> args);

  bool is_atom() const { return atom_; }
  bool is_list() const { return !atom_; }
  const std::string& text() const { return text_; }
  const std::vector<SExpr>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  const SExpr& operator[](std::size_t i) const { return items_.at(i); }

  // True for a list whose first element is the atom `head`.
  bool is_app(std::string_view head) const;

  std::string str() const;
  void write(std::string& out) const;

  bool operator==(const SExpr&) const = default;

 private:
  bool atom_ = true;
  std::string text_;
  std::vector<SExpr> items_;
};

// Reads every top-level s-expression in `text`. Lines starting with
// "WARNING:" are skipped (solvers print these outside the s-expr grammar).
// Throws ProtocolError on unbalanced input.
std::vector<SExpr> parse_sexprs(std::string_view text);

// Integer value of a numeral atom or (- numeral). Throws ProtocolError otherwise.
std::int64_t sexpr_to_int(const SExpr& e);

}  // namespace indset
