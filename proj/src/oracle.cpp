// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#include "indset/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace indset {

namespace {
constexpr std::size_t kMaxExamples = 5;
}

std::pair<BigInt, BigInt> exact_indset_sizes(const QueryAst& q, const SecretSchema& schema,
                                             std::uint64_t cap) {
  std::uint64_t t = 0, f = 0;
  for_each_point(
      schema, [&](std::span<const std::int64_t> p) { eval(q, p) ? ++t : ++f; }, cap);
  return {BigInt(t), BigInt(f)};
}

double percent_difference(const BigInt& approx, const BigInt& exact) {
  if (exact == 0) return approx == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  BigInt diff = approx > exact ? BigInt(approx - exact) : BigInt(exact - approx);
  return diff.convert_to<double>() / exact.convert_to<double>() * 100.0;
}

ValidationReport validate(const IndSetPair& ind, const SecretSchema& schema, std::uint64_t cap) {
  ValidationReport r;
  r.kind = ind.kind;
  std::uint64_t t = 0, f = 0;
  const bool under = ind.kind == ApproxKind::Under;
  for_each_point(
      schema,
      [&](std::span<const std::int64_t> p) {
        bool answer = eval(ind.query.ast, p);
        answer ? ++t : ++f;
        SecretValue s{{p.begin(), p.end()}};
        bool in_t = member(s, ind.when_true);
        bool in_f = member(s, ind.when_false);
        // Under: membership implies the answer. Over: the answer implies membership.
        bool bad_t = under ? (in_t && !answer) : (answer && !in_t);
        bool bad_f = under ? (in_f && answer) : (!answer && !in_f);
        if (bad_t) {
          ++r.violations_true;
          if (r.examples_true.size() < kMaxExamples) r.examples_true.push_back(s);
        }
        if (bad_f) {
          ++r.violations_false;
          if (r.examples_false.size() < kMaxExamples) r.examples_false.push_back(std::move(s));
        }
      },
      cap);
  r.exact_true = t;
  r.exact_false = f;
  r.approx_true = size(ind.when_true, schema);
  r.approx_false = size(ind.when_false, schema);
  r.pct_diff_true = percent_difference(r.approx_true, r.exact_true);
  r.pct_diff_false = percent_difference(r.approx_false, r.exact_false);
  return r;
}

void write_table_header(std::ostream& out) {
  out << "query,kind,k,size_true,size_false,exact_true,exact_false,pct_diff_true,"
         "pct_diff_false,verif_time_s,synth_time_s\n";
}

namespace {

std::string fmt_double(double v, int prec) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

}  // namespace

void write_table_row(std::ostream& out, const TableRow& row) {
  out << row.query << ',' << to_string(row.kind) << ',' << row.k << ',' << row.size_true << ','
      << row.size_false << ',';
  if (row.exact_true && row.exact_false) {
    out << *row.exact_true << ',' << *row.exact_false << ','
        << fmt_double(percent_difference(row.size_true, *row.exact_true), 1) << ','
        << fmt_double(percent_difference(row.size_false, *row.exact_false), 1) << ',';
  } else {
    out << ",,,,";
  }
  out << (row.verif_time_s >= 0 ? fmt_double(row.verif_time_s, 3) : "") << ','
      << (row.synth_time_s >= 0 ? fmt_double(row.synth_time_s, 3) : "") << '\n';
}

}  // namespace indset
