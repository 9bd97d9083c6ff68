// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "indset/bigint.hpp"
#include "indset/schema.hpp"
#include "indset/serialize.hpp"
#include "indset/synthesis.hpp"

namespace indset {

// Uniform integer in [lo, hi] from a 64-bit engine by rejection sampling.
// Unlike std::uniform_int_distribution the draw sequence is the same on
// every standard library.
std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

// One uniformly drawn point of the schema.
SecretValue random_point(std::mt19937_64& rng, const SecretSchema& schema);

// Replaces every "{field}" in `tmpl` with the matching coordinate of `point`.
std::string instantiate_template(const std::string& tmpl, const SecretSchema& schema,
                                 const SecretValue& point);

// The same pair restricted to its first k iterations: k include boxes for
// Under, the cover plus k-1 exclude boxes for Over. Iterative synthesis only
// ever appends, so this equals a fresh run with the smaller k.
IndSetPair truncate_to_k(const IndSetPair& p, int k);

// Synthesized ind-sets keyed by (schema, query text, kind, domain), stored
// with the k they were synthesized for. A request for a smaller k is served
// by truncation; a larger k triggers resynthesis. Files live under `dir` when
// it is non-empty.
class IndSetCache {
 public:
  // `synth` may be null, in which case misses throw SolverFailure.
  IndSetCache(std::filesystem::path dir, const Synthesizer* synth);

  IndSetPair get(const NamedQuery& q, ApproxKind kind, int k, DomainKind domain);

  std::size_t syntheses() const { return syntheses_; }
  static std::string key(const NamedQuery& q, ApproxKind kind, DomainKind domain);

 private:
  struct Entry {
    int k;
    IndSetPair pair;
  };
  std::filesystem::path dir_;
  const Synthesizer* synth_;
  std::map<std::string, Entry> mem_;
  std::size_t syntheses_ = 0;
};

struct SimulationResult {
  int queries = 0;
  int runs = 0;
  std::vector<SecretValue> secrets;  // one per run
  // k -> authorized query count per run
  std::map<int, std::vector<int>> authorized;

  int max_authorized(int k) const;
  int min_authorized(int k) const;
  // number of runs that got at least `i` answers
  int survivors(int k, int i) const;
};

// Sequential-downgrade experiment: each run draws one secret and replays
// the origin queries in order under the policy until the first violation.
// Origins are drawn once from the seed and shared by all runs and k values
// unless `fresh_origins` is set.
SimulationResult simulate(const SecretSchema& schema, const SimulationConfig& sim,
                          const BigInt& threshold, IndSetCache& cache);

// k,query,authorized_instances
void write_survival_csv(std::ostream& out, const SimulationResult& r);
// k,run,secret,authorized
void write_runs_csv(std::ostream& out, const SimulationResult& r);

}  // namespace indset
