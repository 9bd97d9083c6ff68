// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

// indset: synthesize, verify and exercise ind-sets from a JSON config.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or config error,
// 3 solver failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "indset/error.hpp"
#include "indset/oracle.hpp"
#include "indset/serialize.hpp"
#include "indset/simulate.hpp"
#include "indset/synthesis.hpp"

namespace {

using namespace indset;
using Clock = std::chrono::steady_clock;

constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

struct SolverFlags {
  std::string solver;
  std::optional<std::int64_t> timeout_ms;
  std::string dump_dir;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--solver", f.solver, "solver command (default: $INDSET_SOLVER or z3)");
  cmd->add_option("--timeout", f.timeout_ms, "per-call solver timeout in ms")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--dump-smt", f.dump_dir, "keep every SMT script in this directory");
}

Solver make_solver(const SolverFlags& f, const SynthesisConfig* sc) {
  SolverOptions o;
  o.command = !f.solver.empty() ? f.solver : (sc ? sc->solver : "");
  if (f.timeout_ms)
    o.timeout = std::chrono::milliseconds(*f.timeout_ms);
  else if (sc)
    o.timeout = sc->timeout;
  o.dump_dir = f.dump_dir;
  return Solver(o);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw ConfigError("cannot write " + path);
  return file;
}

// ---- synth ----

struct SynthArgs {
  std::string config;
  std::optional<int> k;
  std::string kind, domain, encoding;
  std::string out;
  SolverFlags solver;
};

void apply_overrides(SynthesisConfig& sc, const SynthArgs& a) {
  if (a.k) sc.k = *a.k;
  try {
    if (!a.kind.empty()) sc.kind = approx_kind_from_string(a.kind);
    if (!a.encoding.empty()) sc.encoding = encoding_from_string(a.encoding);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (a.domain == "box") sc.domain = DomainKind::Box;
  else if (a.domain == "powerset") sc.domain = DomainKind::Powerset;
  else if (!a.domain.empty()) throw ConfigError("--domain must be box or powerset");
  if (sc.domain == DomainKind::Box && sc.k != 1) throw ConfigError("the box domain needs k = 1");
}

ResultFile synthesize_all(const Config& cfg, const SynthesisConfig& sc, const Solver& solver,
                          bool verbose) {
  Synthesizer synth(solver, SynthOptions{sc.encoding, sc.sum_objectives});
  ResultFile rf{cfg.name, cfg.schema, sc.kind, sc.k, sc.domain, {}};
  for (const auto& q : parse_queries(cfg)) {
    SynthStats stats;
    auto t0 = Clock::now();
    IndSetPair p = synth.make_indsets(SynthRequest{q, sc.kind, sc.k}, sc.domain, &stats);
    double dt = seconds_since(t0);
    if (verbose) {
      std::cout << q.name << ": " << dt << " s";
      for (const auto& it : stats.iterations)
        std::cout << "  [" << (it.response ? 't' : 'f') << it.iteration << ' '
                  << to_string(it.status) << ' ' << it.wall_time.count() << "ms"
                  << (it.note.empty() ? "" : " " + it.note) << ']';
      std::cout << '\n';
      for (const auto& w : stats.warnings) std::cout << "  warning: " << w << '\n';
      std::cout << "  true:  " << to_string(p.when_true) << '\n'
                << "  false: " << to_string(p.when_false) << '\n';
    }
    rf.entries.push_back({std::move(p), std::move(stats), dt});
  }
  return rf;
}

int cmd_synth(const SynthArgs& a) {
  Config cfg = load_config(a.config);
  SynthesisConfig sc = cfg.synthesis;
  apply_overrides(sc, a);
  ResultFile rf = synthesize_all(cfg, sc, make_solver(a.solver, &sc), true);
  std::string out = !a.out.empty() ? a.out
                                   : cfg.name + "-" + to_string(sc.kind) + "-k" +
                                         std::to_string(sc.k) + ".json";
  write_json_file(out, to_json(rf));
  std::cout << "wrote " << out << '\n';
  return 0;
}

// ---- verify ----

// SMT validity of both sides, plus the oracle when the schema is small
// enough. Fills the exact sizes and verification time of `row`.
bool check_pair(const Solver& solver, const IndSetPair& p, const SecretSchema& schema,
                bool enumerable, std::uint64_t cap, TableRow& row) {
  auto t0 = Clock::now();
  bool ok = true;
  const auto vars = secret_var_names(schema.arity());
  for (bool response : {true, false}) {
    const Domain& d = response ? p.when_true : p.when_false;
    Validity v = solver.check_validity(correctness_condition(p.query.ast, d, response, p.kind, vars),
                                       schema, vars);
    if (v.kind == Validity::Kind::CounterExample) {
      ok = false;
      std::cerr << p.query.name << " (" << (response ? "true" : "false") << "): counterexample "
                << to_string(*v.counterexample) << '\n';
    } else if (v.kind == Validity::Kind::Unknown) {
      ok = false;
      std::cerr << p.query.name << " (" << (response ? "true" : "false")
                << "): solver could not decide validity\n";
    }
  }
  if (enumerable) {
    ValidationReport rep = validate(p, schema, cap);
    row.exact_true = rep.exact_true;
    row.exact_false = rep.exact_false;
    if (!rep.passed()) {
      ok = false;
      std::cerr << p.query.name << ": " << rep.violations_true << " true-side and "
                << rep.violations_false << " false-side violations";
      for (const auto& s : rep.examples_true) std::cerr << ' ' << to_string(s);
      for (const auto& s : rep.examples_false) std::cerr << ' ' << to_string(s);
      std::cerr << '\n';
    }
  }
  row.verif_time_s = seconds_since(t0);
  return ok;
}

struct VerifyArgs {
  std::string result;
  std::string config;
  std::string out;
  std::uint64_t cap = kDefaultOracleCap;
  SolverFlags solver;
};

int cmd_verify(const VerifyArgs& a) {
  ResultFile rf = result_from_json(read_json_file(a.result));
  std::optional<Config> cfg;
  if (!a.config.empty()) {
    cfg = load_config(a.config);
    if (!(cfg->schema == rf.schema)) throw ConfigError("result schema differs from config schema");
  }
  Solver solver = make_solver(a.solver, cfg ? &cfg->synthesis : nullptr);
  const bool enumerable = total_size(rf.schema) <= a.cap;
  if (!enumerable)
    std::cerr << "notice: " << total_size(rf.schema)
              << " secrets exceed the oracle cap; SMT verification only\n";

  std::ofstream file;
  std::ostream& out = open_out(a.out, file);
  write_table_header(out);
  bool ok = true;
  for (const auto& e : rf.entries) {
    const auto& p = e.pair;
    TableRow row{p.query.name, p.kind, rf.k, size(p.when_true, rf.schema),
                 size(p.when_false, rf.schema), std::nullopt, std::nullopt, -1, e.synth_time_s};
    ok = check_pair(solver, p, rf.schema, enumerable, a.cap, row) && ok;
    write_table_row(out, row);
  }
  if (!ok) {
    std::cerr << "verification FAILED\n";
    return kExitVerify;
  }
  std::cerr << "verification passed\n";
  return 0;
}

// ---- bench ----

struct BenchArgs {
  SynthArgs synth;
  std::vector<int> k_list;
  std::uint64_t cap = kDefaultOracleCap;
};

int cmd_bench(const BenchArgs& a) {
  Config cfg = load_config(a.synth.config);
  SynthesisConfig sc = cfg.synthesis;
  apply_overrides(sc, a.synth);
  Solver solver = make_solver(a.synth.solver, &sc);
  const bool enumerable = total_size(cfg.schema) <= a.cap;
  std::vector<int> ks = a.k_list.empty() ? std::vector<int>{sc.k} : a.k_list;

  for (int k : ks)
    if (sc.domain == DomainKind::Box && k != 1) throw ConfigError("the box domain needs k = 1");
  if (!enumerable)
    std::cerr << "notice: " << total_size(cfg.schema)
              << " secrets exceed the oracle cap; SMT verification only\n";

  std::ofstream file;
  std::ostream& out = open_out(a.synth.out, file);
  write_table_header(out);
  bool ok = true;
  for (int k : ks) {
    SynthesisConfig sck = sc;
    sck.k = k;
    ResultFile rf = synthesize_all(cfg, sck, solver, false);
    for (const auto& e : rf.entries) {
      const auto& p = e.pair;
      TableRow row{p.query.name, p.kind, k, size(p.when_true, cfg.schema),
                   size(p.when_false, cfg.schema), std::nullopt, std::nullopt, -1,
                   e.synth_time_s};
      if (!check_pair(solver, p, cfg.schema, enumerable, a.cap, row)) {
        ok = false;
        std::cerr << p.query.name << " k=" << k << ": verification FAILED\n";
      }
      write_table_row(out, row);
      out.flush();
    }
  }
  return ok ? 0 : kExitVerify;
}

// ---- simulate ----

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out, runs_out, cache_dir;
  bool offline = false;
  SolverFlags solver;
};

int cmd_simulate(const SimulateArgs& a) {
  Config cfg = load_config(a.config);
  if (!cfg.simulation) throw ConfigError("config has no simulation section");
  if (!cfg.policy_threshold) throw ConfigError("config has no policy section");
  SimulationConfig sim = *cfg.simulation;
  if (a.seed) sim.seed = *a.seed;
  std::filesystem::path cache_dir = !a.cache_dir.empty() ? a.cache_dir : sim.cache_dir;
  if (!cache_dir.empty() && cache_dir.is_relative() && a.cache_dir.empty())
    cache_dir = cfg.base_dir / cache_dir;

  std::optional<Synthesizer> synth;
  if (!a.offline)
    synth.emplace(make_solver(a.solver, &cfg.synthesis),
                  SynthOptions{cfg.synthesis.encoding, cfg.synthesis.sum_objectives});
  IndSetCache cache(cache_dir, synth ? &*synth : nullptr);

  SimulationResult r = simulate(cfg.schema, sim, *cfg.policy_threshold, cache);
  std::ofstream file;
  write_survival_csv(open_out(a.out, file), r);
  if (!a.runs_out.empty()) {
    std::ofstream runs(a.runs_out);
    if (!runs) throw ConfigError("cannot write " + a.runs_out);
    write_runs_csv(runs, r);
  }
  for (const auto& [k, counts] : r.authorized)
    std::cerr << "k=" << k << ": min " << r.min_authorized(k) << ", max " << r.max_authorized(k)
              << " authorized queries\n";
  std::cerr << cache.syntheses() << " ind-set syntheses\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"indset: quantitative declassification with synthesized ind-sets"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "synthesize ind-sets for every query of a config");
  synth->add_option("config", synth_args.config, "config file")->required()->check(CLI::ExistingFile);
  synth->add_option("--k", synth_args.k, "boxes per powerset")->check(CLI::PositiveNumber);
  synth->add_option("--kind", synth_args.kind, "under or over");
  synth->add_option("--domain", synth_args.domain, "box or powerset");
  synth->add_option("--encoding", synth_args.encoding, "auto, quantified or expanded");
  synth->add_option("--out", synth_args.out, "result file");
  add_solver_flags(synth, synth_args.solver);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "check a result file by SMT and by enumeration");
  verify->add_option("result", verify_args.result, "result file")->required()->check(CLI::ExistingFile);
  verify->add_option("--config", verify_args.config, "config to check the schema against");
  verify->add_option("--out", verify_args.out, "CSV table (default stdout)");
  verify->add_option("--cap", verify_args.cap, "largest schema to enumerate");
  add_solver_flags(verify, verify_args.solver);

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "synthesize for several k and tabulate");
  bench->add_option("config", bench_args.synth.config, "config file")->required()->check(CLI::ExistingFile);
  bench->add_option("--k", bench_args.k_list, "k values (repeatable, default from config)")
      ->delimiter(',');
  bench->add_option("--kind", bench_args.synth.kind, "under or over");
  bench->add_option("--domain", bench_args.synth.domain, "box or powerset");
  bench->add_option("--encoding", bench_args.synth.encoding, "auto, quantified or expanded");
  bench->add_option("--out", bench_args.synth.out, "CSV table (default stdout)");
  bench->add_option("--cap", bench_args.cap, "largest schema to enumerate");
  add_solver_flags(bench, bench_args.synth.solver);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "sequential-downgrade experiment");
  sim->add_option("config", sim_args.config, "config file")->required()->check(CLI::ExistingFile);
  sim->add_option("--seed", sim_args.seed, "RNG seed");
  sim->add_option("--out", sim_args.out, "survival CSV (default stdout)");
  sim->add_option("--runs-out", sim_args.runs_out, "per-run CSV");
  sim->add_option("--cache-dir", sim_args.cache_dir, "ind-set cache directory");
  sim->add_flag("--offline", sim_args.offline, "use cached ind-sets only");
  add_solver_flags(sim, sim_args.solver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth) return cmd_synth(synth_args);
    if (*verify) return cmd_verify(verify_args);
    if (*bench) return cmd_bench(bench_args);
    if (*sim) return cmd_simulate(sim_args);
  } catch (const SolverNotFound& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const SolverFailure& e) {
    std::cerr << "error: " << e.what();
    if (!e.script_path().empty()) std::cerr << " (scripts in " << e.script_path() << ')';
    std::cerr << '\n';
    return kExitSolver;
  } catch (const ProtocolError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error at " << e.position() << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
