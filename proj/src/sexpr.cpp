// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#include "indset/sexpr.hpp"

#include <cctype>
#include <charconv>

#include "indset/error.hpp"

namespace indset {

SExpr SExpr::atom(std::string text) {
  SExpr e;
  e.atom_ = true;
  e.text_ = std::move(text);
  return e;
}

SExpr SExpr::list(std::vector<SExpr> items) {
  SExpr e;
  e.atom_ = false;
  e.items_ = std::move(items);
  return e;
}

SExpr SExpr::app(std::string head, std::vector<SExpr> args) {
  std::vector<SExpr> items;
  items.reserve(args.size() + 1);
  items.push_back(atom(std::move(head)));
  for (auto& a : args) items.push_back(std::move(a));
  return list(std::move(items));
}

bool SExpr::is_app(std::string_view head) const {
  return !atom_ && !items_.empty() && items_[0].atom_ && items_[0].text_ == head;
}

void SExpr::write(std::string& out) const {
  if (atom_) {
    out += text_;
    return;
  }
  out += '(';
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) out += ' ';
    items_[i].write(out);
  }
  out += ')';
}

std::string SExpr::str() const {
  std::string out;
  write(out);
  return out;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    for (;;) {
      skip_blank();
      if (pos_ >= text_.size()) return out;
      if (text_[pos_] == ')') fail("unexpected ')'");
      out.push_back(read_one());
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ProtocolError("malformed solver output at offset " + std::to_string(pos_) + ": " + msg,
                        std::string(text_));
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (at_line_start() && text_.substr(pos_).starts_with("WARNING:")) {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        return;
      }
    }
  }

  bool at_line_start() const { return pos_ == 0 || text_[pos_ - 1] == '\n'; }

  SExpr read_one() {
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      std::vector<SExpr> items;
      for (;;) {
        skip_blank();
        if (pos_ >= text_.size()) fail("unterminated list");
        if (text_[pos_] == ')') {
          ++pos_;
          return SExpr::list(std::move(items));
        }
        items.push_back(read_one());
      }
    }
    if (c == '"') {
      std::size_t start = pos_++;
      for (;;) {
        if (pos_ >= text_.size()) fail("unterminated string");
        if (text_[pos_] == '"') {
          // SMT-LIB escapes a quote by doubling it
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
            pos_ += 2;
            continue;
          }
          ++pos_;
          break;
        }
        ++pos_;
      }
      return SExpr::atom(std::string(text_.substr(start, pos_ - start)));
    }
    if (c == '|') {
      std::size_t start = pos_++;
      while (pos_ < text_.size() && text_[pos_] != '|') ++pos_;
      if (pos_ >= text_.size()) fail("unterminated quoted symbol");
      ++pos_;
      return SExpr::atom(std::string(text_.substr(start, pos_ - start)));
    }
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == '"') break;
      ++pos_;
    }
    return SExpr::atom(std::string(text_.substr(start, pos_ - start)));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::int64_t parse_numeral(const std::string& s, const SExpr& e) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ProtocolError("expected integer, got " + e.str(), e.str());
  return v;
}

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text) { return Reader(text).read_all(); }

std::int64_t sexpr_to_int(const SExpr& e) {
  if (e.is_atom()) return parse_numeral(e.text(), e);
  if (e.is_app("-") && e.size() == 2 && e[1].is_atom()) return -parse_numeral(e[1].text(), e);
  throw ProtocolError("expected integer, got " + e.str(), e.str());
}

}  // namespace indset
