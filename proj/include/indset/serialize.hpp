// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "indset/bigint.hpp"
#include "indset/domains.hpp"
#include "indset/schema.hpp"
#include "indset/synthesis.hpp"

namespace indset {

using Json = nlohmann::json;

Json to_json(const SecretSchema& s);
SecretSchema schema_from_json(const Json& j);

// Box: "top" | "bottom" | [[lo,hi],...]
Json to_json(const Box& b);
Box box_from_json(const Json& j);

// Powerset: {"include": [box...], "exclude": [box...]}
Json to_json(const Powerset& p);
Powerset powerset_from_json(const Json& j);

Json to_json(const Domain& d);
Domain domain_from_json(const Json& j, DomainKind kind);

// {"query": name, "text": dsl, "kind": "under", "domain": "powerset",
//  "when_true": ..., "when_false": ...}. The query is re-parsed against
// `schema` on load.
Json to_json(const IndSetPair& p);
IndSetPair indset_pair_from_json(const Json& j, const SecretSchema& schema);

// Accepts numbers and decimal strings; emits a number when it fits in int64.
Json to_json(const BigInt& v);
BigInt bigint_from_json(const Json& j);

struct QuerySpec {
  std::string name;
  std::string text;
};

struct SynthesisConfig {
  ApproxKind kind = ApproxKind::Under;
  int k = 1;
  DomainKind domain = DomainKind::Powerset;
  std::chrono::milliseconds timeout{10'000};
  std::string solver;  // empty: INDSET_SOLVER, then "z3"
  Encoding encoding = Encoding::Auto;
  bool sum_objectives = false;
};

struct SimulationConfig {
  std::vector<int> k_values{1, 3, 5, 7, 10};
  int runs = 20;
  int queries = 50;
  std::uint64_t seed = 1;
  // DSL text with {x}/{y}-style placeholders, one per schema field, filled
  // with the drawn origin.
  std::string query_template;
  // Draw new origins for every run and k instead of one shared set.
  bool fresh_origins = false;
  std::string cache_dir;
};

struct Config {
  std::string name;
  SecretSchema schema;
  std::vector<QuerySpec> queries;
  SynthesisConfig synthesis;
  std::optional<BigInt> policy_threshold;
  std::optional<SimulationConfig> simulation;
  std::filesystem::path base_dir;  // directory of the config file
};

// Throws ConfigError on missing or malformed sections, SyntaxError/TypeError
// on bad queries only when they are parsed by the caller.
Config config_from_json(const Json& j);
Config load_config(const std::filesystem::path& path);

std::vector<NamedQuery> parse_queries(const Config& c);

struct ResultEntry {
  IndSetPair pair;
  SynthStats stats;
  double synth_time_s = 0;
};

struct ResultFile {
  std::string config_name;
  SecretSchema schema;
  ApproxKind kind = ApproxKind::Under;
  int k = 1;
  DomainKind domain = DomainKind::Powerset;
  std::vector<ResultEntry> entries;
};

Json to_json(const ResultFile& r);
ResultFile result_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace indset
