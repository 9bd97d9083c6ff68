// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "indset/bigint.hpp"
#include "indset/query.hpp"
#include "indset/schema.hpp"
#include "indset/synthesis.hpp"

namespace indset {

// (#secrets answering true, #secrets answering false), by enumeration.
std::pair<BigInt, BigInt> exact_indset_sizes(const QueryAst& q, const SecretSchema& schema,
                                             std::uint64_t cap = kDefaultOracleCap);

// |approx - exact| / exact * 100. Zero when both are zero, +inf when only
// the exact size is zero.
double percent_difference(const BigInt& approx, const BigInt& exact);

struct ValidationReport {
  ApproxKind kind = ApproxKind::Under;
  BigInt exact_true, exact_false;
  BigInt approx_true, approx_false;
  double pct_diff_true = 0, pct_diff_false = 0;
  // Under: members answering the other way. Over: answering points left out.
  std::uint64_t violations_true = 0, violations_false = 0;
  // First few offending secrets per side, for diagnostics.
  std::vector<SecretValue> examples_true, examples_false;

  bool passed() const { return violations_true == 0 && violations_false == 0; }
};

ValidationReport validate(const IndSetPair& ind, const SecretSchema& schema,
                          std::uint64_t cap = kDefaultOracleCap);

// One row of the results table. Times are in seconds; negative means
// "not measured".
struct TableRow {
  std::string query;
  ApproxKind kind = ApproxKind::Under;
  int k = 1;
  BigInt size_true, size_false;
  std::optional<BigInt> exact_true, exact_false;
  double verif_time_s = -1;
  double synth_time_s = -1;
};

void write_table_header(std::ostream& out);
void write_table_row(std::ostream& out, const TableRow& row);

}  // namespace indset
