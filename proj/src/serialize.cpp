// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#include "indset/serialize.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "indset/error.hpp"

namespace indset {

namespace {

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(std::string("missing '") + key + "'");
  return j.at(key);
}

DomainKind domain_kind_from_string(const std::string& s) {
  if (s == "box") return DomainKind::Box;
  if (s == "powerset") return DomainKind::Powerset;
  throw ConfigError("unknown domain '" + s + "' (expected box or powerset)");
}

std::string domain_kind_name(DomainKind k) { return k == DomainKind::Box ? "box" : "powerset"; }

SolverStatus status_from_string(const std::string& s) {
  for (auto st : {SolverStatus::Sat, SolverStatus::Unsat, SolverStatus::Unknown,
                  SolverStatus::Timeout})
    if (s == to_string(st)) return st;
  throw ConfigError("unknown solver status '" + s + "'");
}

std::int64_t as_int64(const Json& j) {
  if (!j.is_number_integer()) throw ConfigError("expected an integer, got " + j.dump());
  return j.get<std::int64_t>();
}

}  // namespace

Json to_json(const SecretSchema& s) {
  Json fields = Json::array();
  for (const auto& f : s.fields())
    fields.push_back({{"name", f.name}, {"lower", f.lower}, {"upper", f.upper}});
  return fields;
}

SecretSchema schema_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("schema must be an array of fields");
  std::vector<Field> fields;
  for (const auto& f : j) {
    fields.push_back(Field{require(f, "name").get<std::string>(), as_int64(require(f, "lower")),
                           as_int64(require(f, "upper"))});
  }
  try {
    return SecretSchema(std::move(fields));
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid schema: ") + e.what());
  }
}

Json to_json(const Box& b) {
  if (b.is_top()) return "top";
  if (b.is_bottom()) return "bottom";
  Json a = Json::array();
  for (const auto& r : b.ranges()) a.push_back({r.lower, r.upper});
  return a;
}

Box box_from_json(const Json& j) {
  if (j.is_string()) {
    if (j == "top") return Box::top();
    if (j == "bottom") return Box::bottom();
    throw ConfigError("bad box " + j.dump());
  }
  if (!j.is_array() || j.empty()) throw ConfigError("bad box " + j.dump());
  std::vector<Interval1D> ranges;
  for (const auto& r : j) {
    if (!r.is_array() || r.size() != 2) throw ConfigError("bad range " + r.dump());
    try {
      ranges.emplace_back(as_int64(r[0]), as_int64(r[1]));
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("bad range ") + r.dump() + ": " + e.what());
    }
  }
  return Box::of(std::move(ranges));
}

Json to_json(const Powerset& p) {
  Json inc = Json::array(), exc = Json::array();
  for (const auto& b : p.include()) inc.push_back(to_json(b));
  for (const auto& b : p.exclude()) exc.push_back(to_json(b));
  return {{"include", inc}, {"exclude", exc}};
}

Powerset powerset_from_json(const Json& j) {
  std::vector<Box> inc, exc;
  for (const auto& b : require(j, "include")) inc.push_back(box_from_json(b));
  if (j.contains("exclude"))
    for (const auto& b : j.at("exclude")) exc.push_back(box_from_json(b));
  return Powerset(std::move(inc), std::move(exc));
}

Json to_json(const Domain& d) {
  return std::visit([](const auto& x) { return to_json(x); }, d);
}

Domain domain_from_json(const Json& j, DomainKind kind) {
  if (kind == DomainKind::Box) return box_from_json(j);
  return powerset_from_json(j);
}

Json to_json(const IndSetPair& p) {
  return {{"query", p.query.name},
          {"text", p.query.text},
          {"kind", to_string(p.kind)},
          {"domain", domain_kind_name(kind_of(p.when_true))},
          {"when_true", to_json(p.when_true)},
          {"when_false", to_json(p.when_false)}};
}

IndSetPair indset_pair_from_json(const Json& j, const SecretSchema& schema) {
  auto dk = domain_kind_from_string(get_or<std::string>(j, "domain", "powerset"));
  ApproxKind kind;
  try {
    kind = approx_kind_from_string(get_or<std::string>(j, "kind", "under"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  auto q = NamedQuery::parse(require(j, "query").get<std::string>(),
                             require(j, "text").get<std::string>(), schema);
  return IndSetPair{domain_from_json(require(j, "when_true"), dk),
                    domain_from_json(require(j, "when_false"), dk), kind, std::move(q)};
}

Json to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max())
    return v.convert_to<std::int64_t>();
  return v.str();
}

BigInt bigint_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return BigInt(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("expected an integer, got " + j.dump());
}

Config config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  Config c{get_or<std::string>(j, "name", "config"), schema_from_json(require(j, "schema")),
           {}, {}, std::nullopt, std::nullopt, {}};

  if (j.contains("queries")) {
    const auto& qs = j.at("queries");
    if (!qs.is_array()) throw ConfigError("queries must be an array");
    for (const auto& q : qs)
      c.queries.push_back(
          {require(q, "name").get<std::string>(), require(q, "text").get<std::string>()});
  }

  if (j.contains("synthesis")) {
    const auto& s = j.at("synthesis");
    auto& sc = c.synthesis;
    try {
      sc.kind = approx_kind_from_string(get_or<std::string>(s, "kind", "under"));
      sc.encoding = encoding_from_string(get_or<std::string>(s, "encoding", "auto"));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    sc.k = get_or<int>(s, "k", 1);
    if (sc.k < 1) throw ConfigError("synthesis.k must be >= 1");
    sc.domain = domain_kind_from_string(get_or<std::string>(s, "domain", "powerset"));
    if (sc.domain == DomainKind::Box && sc.k != 1)
      throw ConfigError("the box domain needs k = 1");
    sc.timeout = std::chrono::milliseconds(get_or<std::int64_t>(s, "timeout_ms", 10'000));
    sc.solver = get_or<std::string>(s, "solver", "");
    sc.sum_objectives = get_or<bool>(s, "sum_objectives", false);
  }

  if (j.contains("policy")) {
    BigInt t = bigint_from_json(require(j.at("policy"), "threshold"));
    if (t < 0) throw ConfigError("policy.threshold must be non-negative");
    c.policy_threshold = t;
  }

  if (j.contains("simulation")) {
    const auto& s = j.at("simulation");
    SimulationConfig sim;
    sim.k_values = get_or<std::vector<int>>(s, "k_values", sim.k_values);
    sim.runs = get_or<int>(s, "runs", sim.runs);
    sim.queries = get_or<int>(s, "queries", sim.queries);
    sim.seed = get_or<std::uint64_t>(s, "seed", sim.seed);
    sim.query_template = require(s, "query_template").get<std::string>();
    sim.fresh_origins = get_or<bool>(s, "fresh_origins", false);
    sim.cache_dir = get_or<std::string>(s, "cache_dir", "");
    if (sim.runs < 1 || sim.queries < 1) throw ConfigError("simulation runs/queries must be >= 1");
    for (int k : sim.k_values)
      if (k < 1) throw ConfigError("simulation k values must be >= 1");
    c.simulation = std::move(sim);
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  Config c = config_from_json(read_json_file(path));
  c.base_dir = path.parent_path();
  return c;
}

std::vector<NamedQuery> parse_queries(const Config& c) {
  std::vector<NamedQuery> out;
  for (const auto& q : c.queries) {
    for (const auto& prev : out)
      if (prev.name == q.name) throw DuplicateName("query '" + q.name + "' declared twice");
    out.push_back(NamedQuery::parse(q.name, q.text, c.schema));
  }
  return out;
}

Json to_json(const ResultFile& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json iters = Json::array();
    for (const auto& it : e.stats.iterations)
      iters.push_back({{"response", it.response},
                       {"iteration", it.iteration},
                       {"status", to_string(it.status)},
                       {"wall_ms", it.wall_time.count()},
                       {"encoding", to_string(it.encoding)},
                       {"note", it.note}});
    Json entry = to_json(e.pair);
    entry["synth_time_s"] = e.synth_time_s;
    entry["stats"] = {{"iterations", iters}, {"warnings", e.stats.warnings}};
    entries.push_back(std::move(entry));
  }
  return {{"config", r.config_name},
          {"schema", to_json(r.schema)},
          {"kind", to_string(r.kind)},
          {"k", r.k},
          {"domain", domain_kind_name(r.domain)},
          {"entries", entries}};
}

ResultFile result_from_json(const Json& j) {
  ResultFile r{get_or<std::string>(j, "config", ""), schema_from_json(require(j, "schema")),
               ApproxKind::Under, get_or<int>(j, "k", 1),
               domain_kind_from_string(get_or<std::string>(j, "domain", "powerset")), {}};
  try {
    r.kind = approx_kind_from_string(get_or<std::string>(j, "kind", "under"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  for (const auto& e : require(j, "entries")) {
    ResultEntry entry{indset_pair_from_json(e, r.schema), {}, get_or<double>(e, "synth_time_s", 0)};
    if (e.contains("stats")) {
      const auto& st = e.at("stats");
      if (st.contains("iterations"))
        for (const auto& it : st.at("iterations")) {
          IterationStat s;
          s.response = get_or<bool>(it, "response", true);
          s.iteration = get_or<int>(it, "iteration", 1);
          s.status = status_from_string(get_or<std::string>(it, "status", "unknown"));
          s.wall_time = std::chrono::milliseconds(get_or<std::int64_t>(it, "wall_ms", 0));
          s.encoding = encoding_from_string(get_or<std::string>(it, "encoding", "quantified"));
          s.note = get_or<std::string>(it, "note", "");
          entry.stats.iterations.push_back(s);
        }
      entry.stats.warnings = get_or<std::vector<std::string>>(st, "warnings", {});
    }
    r.entries.push_back(std::move(entry));
  }
  return r;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace indset
