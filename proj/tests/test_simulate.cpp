// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <map>
#include <sstream>

#include <unistd.h>

#include "indset/error.hpp"
#include "indset/simulate.hpp"
#include "support.hpp"

using namespace indset;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("indset-" + tag + "-" + std::to_string(getpid()));
  fs::remove_all(p);
  return p;
}

// Exact-by-construction under ind-sets for 1-D threshold queries, written
// straight into the cache so the simulation runs without a solver.
void seed_cache(const fs::path& dir, const SecretSchema& s, const std::string& tmpl,
                const std::vector<SecretValue>& origins) {
  for (const auto& o : origins) {
    auto q = NamedQuery::parse("q", instantiate_template(tmpl, s, o), s);
    std::int64_t c = o.values[0];
    IndSetPair p{Powerset::of(Box::of({{s.field(0).lower, c}})),
                 c < s.field(0).upper ? Powerset::of(Box::of({{c + 1, s.field(0).upper}}))
                                      : Powerset::bottom(),
                 ApproxKind::Under, q};
    Json j = to_json(p);
    j["k"] = 10;
    write_json_file(dir / (IndSetCache::key(q, ApproxKind::Under, DomainKind::Powerset) + ".json"), j);
  }
}

}  // namespace

TEST_CASE("portable uniform draws") {
  std::mt19937_64 a(1), b(1);
  std::map<std::int64_t, int> hist;
  for (int i = 0; i < 60000; ++i) {
    auto v = uniform_int(a, -2, 3);
    REQUIRE(v == uniform_int(b, -2, 3));
    ++hist[v];
  }
  CHECK(hist.size() == 6);
  for (auto [v, n] : hist) CHECK(std::abs(n - 10000) < 600);
  CHECK(uniform_int(a, 7, 7) == 7);
  CHECK_THROWS_AS(uniform_int(a, 1, 0), InvalidArgument);

  std::mt19937_64 c(2026), d(2026);
  for (int i = 0; i < 100; ++i) CHECK(uniform_int(c, 0, 400) == uniform_int(d, 0, 400));
}

TEST_CASE("template instantiation") {
  auto s = testing::nearby_schema();
  CHECK(instantiate_template("abs(x - {x}) + abs(y - {y}) <= 100", s, SecretValue{{12, 340}}) ==
        "abs(x - 12) + abs(y - 340) <= 100");
  CHECK(instantiate_template("{x}{x} {z}", s, SecretValue{{1, 2}}) == "11 {z}");
}

TEST_CASE("truncation to smaller k") {
  auto s = testing::nearby_schema();
  auto q = NamedQuery::parse("q", "x < 5", s);
  std::vector<Box> inc;
  for (int i = 0; i < 5; ++i) inc.push_back(Box::of({{i, i}, {0, 0}}));
  IndSetPair under{Powerset(inc, {}), Powerset(inc, {}), ApproxKind::Under, q};
  CHECK(std::get<Powerset>(truncate_to_k(under, 3).when_true).include().size() == 3);
  CHECK(std::get<Powerset>(truncate_to_k(under, 9).when_true).include().size() == 5);

  IndSetPair over{Powerset({Box::top()}, inc), Powerset({Box::top()}, inc), ApproxKind::Over, q};
  auto o2 = std::get<Powerset>(truncate_to_k(over, 2).when_false);
  CHECK(o2.include().size() == 1);
  CHECK(o2.exclude().size() == 1);
  CHECK_THROWS_AS(truncate_to_k(under, 0), InvalidArgument);
}

TEST_CASE("offline cache misses need a solver") {
  auto dir = temp_dir("empty-cache");
  IndSetCache cache(dir, nullptr);
  auto q = NamedQuery::parse("q", "x < 5", testing::nearby_schema());
  CHECK_THROWS_AS(cache.get(q, ApproxKind::Under, 1, DomainKind::Powerset), SolverFailure);
  fs::remove_all(dir);
}

TEST_CASE("simulation replays from the cache and is deterministic") {
  SecretSchema s({{"x", 0, 999}});
  SimulationConfig sim;
  sim.runs = 6;
  sim.queries = 8;
  sim.seed = 44;
  sim.k_values = {1, 2};
  sim.query_template = "x <= {x}";

  // recompute the origins the simulation will draw
  std::vector<std::uint32_t> w{44u, 0u, 0u};
  std::seed_seq seq(w.begin(), w.end());
  std::mt19937_64 rng(seq);
  std::vector<SecretValue> origins;
  for (int i = 0; i < sim.queries; ++i) origins.push_back(random_point(rng, s));

  auto dir = temp_dir("sim-cache");
  fs::create_directories(dir);
  seed_cache(dir, s, sim.query_template, origins);

  auto run = [&] {
    IndSetCache cache(dir, nullptr);
    auto r = simulate(s, sim, 50, cache);
    std::ostringstream a, b;
    write_survival_csv(a, r);
    write_runs_csv(b, r);
    return std::make_tuple(r, a.str(), b.str());
  };
  auto [r1, surv1, runs1] = run();
  auto [r2, surv2, runs2] = run();
  CHECK(surv1 == surv2);
  CHECK(runs1 == runs2);
  CHECK(surv1.rfind("k,query,authorized_instances\n1,1,", 0) == 0);

  // exact ind-sets: replay with an independent interval model of knowledge
  for (int run = 0; run < sim.runs; ++run) {
    std::int64_t lo = 0, hi = 999, x = r1.secrets[run].values[0];
    int expect = 0;
    for (const auto& o : origins) {
      std::int64_t c = o.values[0];
      std::int64_t t = std::max<std::int64_t>(0, std::min(hi, c) - lo + 1);
      std::int64_t f = std::max<std::int64_t>(0, hi - std::max(lo, c + 1) + 1);
      if (t <= 50 || f <= 50) break;
      if (x <= c) hi = std::min(hi, c);
      else lo = std::max(lo, c + 1);
      ++expect;
    }
    CHECK(r1.authorized.at(1)[run] == expect);
    CHECK(r1.authorized.at(2)[run] == expect);
  }
  for (int i = 2; i <= sim.queries; ++i) CHECK(r1.survivors(1, i) <= r1.survivors(1, i - 1));
  fs::remove_all(dir);
}

TEST_CASE("a threshold at the schema size refuses everything") {
  SecretSchema s({{"x", 0, 99}});
  SimulationConfig sim;
  sim.runs = 3;
  sim.queries = 4;
  sim.k_values = {1};
  sim.query_template = "x <= {x}";
  auto dir = temp_dir("refuse-cache");
  fs::create_directories(dir);
  std::vector<std::uint32_t> w{static_cast<std::uint32_t>(sim.seed), 0u, 0u};
  std::seed_seq seq(w.begin(), w.end());
  std::mt19937_64 rng(seq);
  std::vector<SecretValue> origins;
  for (int i = 0; i < sim.queries; ++i) origins.push_back(random_point(rng, s));
  seed_cache(dir, s, sim.query_template, origins);
  IndSetCache cache(dir, nullptr);
  auto r = simulate(s, sim, total_size(s), cache);
  CHECK(r.max_authorized(1) == 0);
  fs::remove_all(dir);
}
