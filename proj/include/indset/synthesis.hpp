// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "indset/domains.hpp"
#include "indset/query.hpp"
#include "indset/smt.hpp"

namespace indset {

enum class ApproxKind { Under, Over };

const char* to_string(ApproxKind k);
ApproxKind approx_kind_from_string(const std::string& s);

// How universally quantified box constraints reach the solver.
enum class Encoding {
  Auto,        // quantified, falling back to Expanded for small schemas
  Quantified,  // explicit forall with schema-bound guards
  Expanded,    // one ground constraint per offending grid point
};

const char* to_string(Encoding e);
Encoding encoding_from_string(const std::string& s);

struct SynthOptions {
  Encoding encoding = Encoding::Auto;
  // One summed objective instead of one objective per dimension.
  bool sum_objectives = false;
  // Largest schema the Expanded encoding is used on.
  std::uint64_t expansion_cap = 100'000;
};

struct SynthRequest {
  NamedQuery query;
  ApproxKind kind = ApproxKind::Under;
  int k = 1;  // boxes per powerset; 1 means a single box
};

struct IterationStat {
  bool response = true;
  int iteration = 1;
  SolverStatus status = SolverStatus::Unknown;
  std::chrono::milliseconds wall_time{0};
  Encoding encoding = Encoding::Quantified;
  std::string note;
};

struct SynthStats {
  std::vector<IterationStat> iterations;
  std::vector<std::string> warnings;
};

// Approximations of the two indistinguishability sets of one query.
struct IndSetPair {
  Domain when_true;
  Domain when_false;
  ApproxKind kind = ApproxKind::Under;
  NamedQuery query;
};

class Synthesizer {
 public:
  Synthesizer(Solver solver, SynthOptions opts = {});

  const Solver& solver() const { return solver_; }
  const SynthOptions& options() const { return opts_; }

  // Optimal single box for the secrets answering `response`. Under: every
  // in-bounds point of the box answers `response`, extents maximized. Over:
  // every in-bounds point answering `response` is in the box, extents
  // minimized. Bottom when no box exists (Under) or the set is empty (Over).
  Box synth_box(const NamedQuery& q, bool response, ApproxKind kind,
                SynthStats* stats = nullptr) const;

  // Iterative powerset synthesis. Under grows the include list with boxes
  // disjoint from the earlier ones; Over keeps one include box and grows an
  // exclude list of response-free boxes inside it. Stops early on Bottom.
  Powerset iter_synth(const SynthRequest& req, bool response, SynthStats* stats = nullptr) const;

  // Both responses. Box domain requires k == 1.
  IndSetPair make_indsets(const SynthRequest& req, DomainKind domain,
                          SynthStats* stats = nullptr) const;

 private:
  struct Hole;
  Box solve_hole(const NamedQuery& q, bool response, const Hole& hole, int iteration,
                 SynthStats* stats) const;

  Solver solver_;
  SynthOptions opts_;
};

// (prior ∩ when_true, prior ∩ when_false)
std::pair<Domain, Domain> posterior(const Domain& prior, const IndSetPair& ind);

// Names used for the secret's fields inside SMT scripts: v_0, v_1, ...
std::vector<std::string> secret_var_names(std::size_t arity);

// Formula over `vars` stating that `ind` is a sound (Under) or complete
// (Over) approximation for `response`; valid iff the approximation is correct.
SmtTerm correctness_condition(const QueryAst& q, const Domain& d, bool response, ApproxKind kind,
                              const std::vector<std::string>& vars);

}  // namespace indset
