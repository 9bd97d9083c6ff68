// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#include "indset/simulate.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

#include "indset/error.hpp"
#include "indset/runtime.hpp"

namespace indset {

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw InvalidArgument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max())
    return static_cast<std::int64_t>(rng());
  const std::uint64_t n = span + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % n);
}

SecretValue random_point(std::mt19937_64& rng, const SecretSchema& schema) {
  SecretValue s;
  for (const auto& f : schema.fields()) s.values.push_back(uniform_int(rng, f.lower, f.upper));
  return s;
}

std::string instantiate_template(const std::string& tmpl, const SecretSchema& schema,
                                 const SecretValue& point) {
  std::string out = tmpl;
  for (std::size_t i = 0; i < schema.arity(); ++i) {
    const std::string pat = "{" + schema.field(i).name + "}";
    const std::string val = std::to_string(point.values.at(i));
    for (auto pos = out.find(pat); pos != std::string::npos; pos = out.find(pat, pos + val.size()))
      out.replace(pos, pat.size(), val);
  }
  return out;
}

namespace {

Powerset take(const Powerset& p, ApproxKind kind, int k) {
  if (kind == ApproxKind::Under) {
    std::vector<Box> inc(p.include().begin(),
                         p.include().begin() + std::min<std::size_t>(k, p.include().size()));
    return Powerset(std::move(inc), {});
  }
  std::vector<Box> exc(p.exclude().begin(),
                       p.exclude().begin() + std::min<std::size_t>(k - 1, p.exclude().size()));
  return Powerset(p.include(), std::move(exc));
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

IndSetPair truncate_to_k(const IndSetPair& p, int k) {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  if (kind_of(p.when_true) == DomainKind::Box) return p;
  IndSetPair out = p;
  out.when_true = take(std::get<Powerset>(p.when_true), p.kind, k);
  out.when_false = take(std::get<Powerset>(p.when_false), p.kind, k);
  return out;
}

IndSetCache::IndSetCache(std::filesystem::path dir, const Synthesizer* synth)
    : dir_(std::move(dir)), synth_(synth) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::string IndSetCache::key(const NamedQuery& q, ApproxKind kind, DomainKind domain) {
  std::string canon = to_json(q.schema).dump() + '\n' + to_string(kind) + '\n' +
                      to_string(domain) + '\n' + q.text;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canon)));
  return buf;
}

IndSetPair IndSetCache::get(const NamedQuery& q, ApproxKind kind, int k, DomainKind domain) {
  const std::string id = key(q, kind, domain);
  const auto path = dir_.empty() ? std::filesystem::path() : dir_ / (id + ".json");

  auto it = mem_.find(id);
  if (it == mem_.end() && !path.empty() && std::filesystem::exists(path)) {
    Json j = read_json_file(path);
    // guard against hash collisions
    if (j.value("text", "") == q.text) {
      Entry e{j.value("k", 1), indset_pair_from_json(j, q.schema)};
      e.pair.query = q;
      it = mem_.emplace(id, std::move(e)).first;
    }
  }
  if (it != mem_.end() && it->second.k >= k) return truncate_to_k(it->second.pair, k);

  if (!synth_)
    throw SolverFailure("no cached ind-set for query '" + q.name + "' and no solver configured");
  IndSetPair p = synth_->make_indsets(SynthRequest{q, kind, k}, domain);
  ++syntheses_;
  if (!path.empty()) {
    Json j = to_json(p);
    j["k"] = k;
    write_json_file(path, j);
  }
  mem_.insert_or_assign(id, Entry{k, p});
  return p;
}

int SimulationResult::max_authorized(int k) const {
  const auto& v = authorized.at(k);
  return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
}

int SimulationResult::min_authorized(int k) const {
  const auto& v = authorized.at(k);
  return v.empty() ? 0 : *std::min_element(v.begin(), v.end());
}

int SimulationResult::survivors(int k, int i) const {
  const auto& v = authorized.at(k);
  return static_cast<int>(std::count_if(v.begin(), v.end(), [i](int c) { return c >= i; }));
}

namespace {

std::vector<SecretValue> draw_points(std::uint64_t seed, std::initializer_list<std::uint32_t> salt,
                                     int count, const SecretSchema& schema) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32)};
  words.insert(words.end(), salt);
  std::seed_seq seq(words.begin(), words.end());
  std::mt19937_64 rng(seq);
  std::vector<SecretValue> out;
  for (int i = 0; i < count; ++i) out.push_back(random_point(rng, schema));
  return out;
}

}  // namespace

SimulationResult simulate(const SecretSchema& schema, const SimulationConfig& sim,
                          const BigInt& threshold, IndSetCache& cache) {
  if (sim.k_values.empty()) throw ConfigError("simulation needs at least one k");
  SimulationResult res;
  res.queries = sim.queries;
  res.runs = sim.runs;
  res.secrets = draw_points(sim.seed, {1}, sim.runs, schema);
  const auto shared_origins = draw_points(sim.seed, {0}, sim.queries, schema);
  // Synthesize each query once for the largest k; smaller k are prefixes.
  const int k_max = *std::max_element(sim.k_values.begin(), sim.k_values.end());

  for (int k : sim.k_values) {
    auto& counts = res.authorized[k];
    for (int run = 0; run < sim.runs; ++run) {
      const auto origins =
          sim.fresh_origins
              ? draw_points(sim.seed, {2, static_cast<std::uint32_t>(k),
                                       static_cast<std::uint32_t>(run)},
                            sim.queries, schema)
              : shared_origins;
      Session session(schema, DomainKind::Powerset, Policy(threshold));
      session.register_secret("s", res.secrets[run]);
      int answered = 0;
      for (int i = 0; i < sim.queries; ++i) {
        auto q = NamedQuery::parse(
            "q" + std::to_string(i), instantiate_template(sim.query_template, schema, origins[i]),
            schema);
        IndSetPair ind = truncate_to_k(
            cache.get(q, ApproxKind::Under, sim.fresh_origins ? k : k_max, DomainKind::Powerset),
            k);
        ind.query = q;
        session.register_query(q, std::move(ind));
        try {
          session.downgrade("s", q.name);
        } catch (const PolicyViolation&) {
          break;
        }
        ++answered;
      }
      counts.push_back(answered);
    }
  }
  return res;
}

void write_survival_csv(std::ostream& out, const SimulationResult& r) {
  out << "k,query,authorized_instances\n";
  for (const auto& [k, counts] : r.authorized)
    for (int i = 1; i <= r.queries; ++i) out << k << ',' << i << ',' << r.survivors(k, i) << '\n';
}

void write_runs_csv(std::ostream& out, const SimulationResult& r) {
  out << "k,run,secret,authorized\n";
  for (const auto& [k, counts] : r.authorized)
    for (std::size_t run = 0; run < counts.size(); ++run)
      out << k << ',' << run << ",\"" << to_string(r.secrets[run]) << "\"," << counts[run]
          << '\n';
}

}  // namespace indset
