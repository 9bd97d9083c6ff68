// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#include "indset/synthesis.hpp"

#include <optional>

#include "indset/error.hpp"

namespace indset {

const char* to_string(ApproxKind k) { return k == ApproxKind::Under ? "under" : "over"; }

ApproxKind approx_kind_from_string(const std::string& s) {
  if (s == "under") return ApproxKind::Under;
  if (s == "over") return ApproxKind::Over;
  throw InvalidArgument("approximation kind must be 'under' or 'over', got '" + s + "'");
}

const char* to_string(Encoding e) {
  switch (e) {
    case Encoding::Auto: return "auto";
    case Encoding::Quantified: return "quantified";
    case Encoding::Expanded: return "expanded";
  }
  return "?";
}

Encoding encoding_from_string(const std::string& s) {
  if (s == "auto") return Encoding::Auto;
  if (s == "quantified") return Encoding::Quantified;
  if (s == "expanded") return Encoding::Expanded;
  throw InvalidArgument("encoding must be auto, quantified or expanded, got '" + s + "'");
}

std::vector<std::string> secret_var_names(std::size_t arity) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < arity; ++i) v.push_back("v_" + std::to_string(i));
  return v;
}

namespace {

SmtTerm box_member(const Box& b, const std::vector<std::string>& vars) {
  if (b.is_top()) return smt::bool_lit(true);
  if (b.is_bottom()) return smt::bool_lit(false);
  if (b.ranges().size() != vars.size()) throw ArityMismatch("box arity != variable count");
  std::vector<SmtTerm> conj;
  for (std::size_t i = 0; i < vars.size(); ++i)
    conj.push_back(SExpr::app("<=", {smt::num(b.ranges()[i].lower), smt::sym(vars[i]),
                                     smt::num(b.ranges()[i].upper)}));
  return smt::and_(std::move(conj));
}

SmtTerm domain_member(const Domain& d, const std::vector<std::string>& vars) {
  if (const auto* b = std::get_if<Box>(&d)) return box_member(*b, vars);
  const auto& p = std::get<Powerset>(d);
  std::vector<SmtTerm> inc, exc;
  for (const auto& b : p.include()) inc.push_back(box_member(b, vars));
  for (const auto& b : p.exclude()) exc.push_back(box_member(b, vars));
  if (exc.empty()) return smt::or_(std::move(inc));
  return smt::and_({smt::or_(std::move(inc)), smt::not_(smt::or_(std::move(exc)))});
}

SmtTerm response_term(const QueryAst& q, bool response, const std::vector<std::string>& vars) {
  SmtTerm t = to_smt(q, vars);
  return response ? t : smt::not_(std::move(t));
}

struct HoleVars {
  std::vector<std::string> lo, hi;
};

HoleVars hole_vars(bool response, std::size_t n) {
  HoleVars h;
  const std::string prefix = response ? "h_t_" : "h_f_";
  for (std::size_t i = 0; i < n; ++i) {
    h.lo.push_back(prefix + "lo_" + std::to_string(i));
    h.hi.push_back(prefix + "hi_" + std::to_string(i));
  }
  return h;
}

// lo_i <= v_i <= hi_i over symbolic bounds
SmtTerm hole_member(const HoleVars& h, const std::vector<SmtTerm>& point) {
  std::vector<SmtTerm> conj;
  for (std::size_t i = 0; i < point.size(); ++i)
    conj.push_back(SExpr::app("<=", {smt::sym(h.lo[i]), point[i], smt::sym(h.hi[i])}));
  return smt::and_(std::move(conj));
}

bool disjoint(const Box& a, const Box& b) { return intersect(a, b).is_bottom(); }

}  // namespace

SmtTerm correctness_condition(const QueryAst& q, const Domain& d, bool response, ApproxKind kind,
                              const std::vector<std::string>& vars) {
  SmtTerm in = domain_member(d, vars);
  SmtTerm r = response_term(q, response, vars);
  return kind == ApproxKind::Under ? smt::implies(std::move(in), std::move(r))
                                   : smt::implies(std::move(r), std::move(in));
}

// A box-shaped hole. `inner` holes must lie inside the response set and are
// grown; outer holes must cover it and are shrunk.
struct Synthesizer::Hole {
  bool inner = true;
  Box container;  // the hole lies within this ranged box
  std::vector<Box> disjoint_from;
};

Synthesizer::Synthesizer(Solver solver, SynthOptions opts)
    : solver_(std::move(solver)), opts_(opts) {}

Box Synthesizer::solve_hole(const NamedQuery& q, bool response, const Hole& hole, int iteration,
                            SynthStats* stats) const {
  const SecretSchema& schema = q.schema;
  const std::size_t n = schema.arity();
  const auto vars = secret_var_names(n);
  const HoleVars hv = hole_vars(response, n);
  const std::string tag = "synth-" + q.name + (response ? "-t-" : "-f-") + std::to_string(iteration);

  auto record = [&](SolverStatus st, std::chrono::milliseconds t, Encoding enc, std::string note) {
    if (stats) stats->iterations.push_back({response, iteration, st, t, enc, std::move(note)});
  };

  // Outer holes over an empty response set are vacuous.
  if (!hole.inner) {
    SmtScript ex;
    for (const auto& v : vars) ex.declare_int(v);
    ex.add_assertion(smt::bounds(schema, vars));
    ex.add_assertion(response_term(q.ast, response, vars));
    SolverResult r = solver_.run(ex, tag + "-nonempty");
    if (r.status == SolverStatus::Unsat) {
      record(r.status, r.wall_time, Encoding::Quantified, "response set empty");
      return Box::bottom();
    }
  }

  auto base_script = [&]() {
    SmtScript s;
    for (std::size_t i = 0; i < n; ++i) {
      s.declare_int(hv.lo[i]);
      s.declare_int(hv.hi[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = hole.container.ranges()[i];
      s.add_assertion(SExpr::app("<=", {smt::num(c.lower), smt::sym(hv.lo[i]),
                                        smt::sym(hv.hi[i]), smt::num(c.upper)}));
    }
    for (const auto& prev : hole.disjoint_from) {
      std::vector<SmtTerm> sep;
      for (std::size_t i = 0; i < n; ++i) {
        sep.push_back(smt::lt(smt::sym(hv.hi[i]), smt::num(prev.ranges()[i].lower)));
        sep.push_back(smt::lt(smt::num(prev.ranges()[i].upper), smt::sym(hv.lo[i])));
      }
      s.add_assertion(smt::or_(std::move(sep)));
    }
    std::vector<SmtTerm> extents;
    for (std::size_t i = 0; i < n; ++i)
      extents.push_back(smt::sub(smt::sym(hv.hi[i]), smt::sym(hv.lo[i])));
    if (opts_.sum_objectives || n == 1) {
      SmtTerm total = extents.size() == 1 ? extents[0] : SExpr::app("+", extents);
      hole.inner ? s.maximize(total) : s.minimize(total);
    } else {
      for (auto& e : extents) hole.inner ? s.maximize(e) : s.minimize(e);
    }
    return s;
  };

  // Turns a model into a box and re-establishes every constraint on it,
  // correctness included, independently of what the solver claimed.
  auto accept = [&](const SolverResult& r) -> std::optional<Box> {
    std::vector<Interval1D> ranges;
    for (std::size_t i = 0; i < n; ++i) {
      auto lo = r.model.find(hv.lo[i]);
      auto hi = r.model.find(hv.hi[i]);
      if (lo == r.model.end() || hi == r.model.end()) return std::nullopt;
      const auto& c = hole.container.ranges()[i];
      std::int64_t l = std::max(lo->second, c.lower);
      std::int64_t u = std::min(hi->second, c.upper);
      if (l > u) return std::nullopt;
      ranges.emplace_back(l, u);
    }
    Box b = Box::of(std::move(ranges));
    for (const auto& prev : hole.disjoint_from)
      if (!disjoint(b, prev)) return std::nullopt;
    ApproxKind kind = hole.inner ? ApproxKind::Under : ApproxKind::Over;
    Validity v = solver_.check_validity(correctness_condition(q.ast, b, response, kind, vars),
                                        schema, vars);
    if (!v.valid()) return std::nullopt;
    return b;
  };

  auto attempt = [&](Encoding enc) -> std::optional<Box> {
    SmtScript s = base_script();
    if (enc == Encoding::Quantified) {
      std::vector<SmtTerm> point;
      for (const auto& v : vars) point.push_back(smt::sym(v));
      SmtTerm guard = smt::bounds(schema, vars);
      SmtTerm body =
          hole.inner
              ? smt::implies(smt::and_({guard, hole_member(hv, point)}),
                             response_term(q.ast, response, vars))
              : smt::implies(smt::and_({guard, response_term(q.ast, response, vars)}),
                             hole_member(hv, point));
      s.add_assertion(smt::forall(vars, std::move(body)));
    } else {
      bool any = false;
      for_each_point(schema, [&](std::span<const std::int64_t> p) {
        bool answers = eval(q.ast, p) == response;
        if (hole.inner == answers) return;
        if (hole.inner && !member(p, hole.container)) return;
        std::vector<SmtTerm> point;
        for (auto x : p) point.push_back(smt::num(x));
        SmtTerm in = hole_member(hv, point);
        s.add_assertion(hole.inner ? smt::not_(std::move(in)) : std::move(in));
        any = true;
      });
      if (!hole.inner && !any) {
        record(SolverStatus::Unsat, {}, enc, "response set empty");
        return Box::bottom();
      }
    }
    SolverResult r = solver_.run(s, tag);
    if (r.status == SolverStatus::Unsat) {
      record(r.status, r.wall_time, enc, "no box");
      return Box::bottom();
    }
    if (r.status == SolverStatus::Sat || (r.status == SolverStatus::Timeout && !r.model.empty())) {
      if (auto b = accept(r)) {
        record(r.status, r.wall_time, enc,
               r.status == SolverStatus::Timeout ? "partial model accepted" : "");
        return b;
      }
      record(r.status, r.wall_time, enc, "model rejected by validity check");
      return std::nullopt;
    }
    record(r.status, r.wall_time, enc, r.reason);
    return std::nullopt;
  };

  const bool expandable = total_size(schema) <= opts_.expansion_cap;
  std::optional<Box> result;
  switch (opts_.encoding) {
    case Encoding::Quantified:
      result = attempt(Encoding::Quantified);
      break;
    case Encoding::Expanded:
      if (!expandable)
        throw SolverFailure("schema too large for the expanded encoding (" +
                            total_size(schema).str() + " points)");
      result = attempt(Encoding::Expanded);
      break;
    case Encoding::Auto:
      result = attempt(Encoding::Quantified);
      if (!result && expandable) result = attempt(Encoding::Expanded);
      break;
  }
  if (!result)
    throw SolverFailure("no valid model for query '" + q.name + "' response " +
                            (response ? "true" : "false") + " iteration " +
                            std::to_string(iteration),
                        solver_.options().dump_dir.empty() ? "" : solver_.options().dump_dir);
  return *result;
}

Box Synthesizer::synth_box(const NamedQuery& q, bool response, ApproxKind kind,
                           SynthStats* stats) const {
  Hole h{kind == ApproxKind::Under, Box::of_schema(q.schema), {}};
  return solve_hole(q, response, h, 1, stats);
}

Powerset Synthesizer::iter_synth(const SynthRequest& req, bool response, SynthStats* stats) const {
  if (req.k < 1) throw InvalidArgument("k must be at least 1");
  const NamedQuery& q = req.query;

  if (req.kind == ApproxKind::Under) {
    std::vector<Box> include;
    for (int i = 1; i <= req.k; ++i) {
      Hole h{true, Box::of_schema(q.schema), include};
      Box b = Box::bottom();
      try {
        b = solve_hole(q, response, h, i, stats);
      } catch (const SolverFailure& e) {
        if (i == 1) throw;
        if (stats) stats->warnings.push_back(e.what());
        break;
      }
      if (b.is_bottom()) break;
      include.push_back(std::move(b));
    }
    return Powerset(std::move(include), {});
  }

  Box cover = synth_box(q, response, ApproxKind::Over, stats);
  if (cover.is_bottom()) return Powerset::bottom();
  std::vector<Box> exclude;
  for (int i = 2; i <= req.k; ++i) {
    // an excluded box holds no response point, i.e. it under-approximates
    // the opposite response within the cover
    Hole h{true, cover, exclude};
    Box b = Box::bottom();
    try {
      b = solve_hole(q, !response, h, i, stats);
    } catch (const SolverFailure& e) {
      if (stats) stats->warnings.push_back(e.what());
      break;
    }
    if (b.is_bottom()) break;
    exclude.push_back(std::move(b));
  }
  return Powerset({cover}, std::move(exclude));
}

IndSetPair Synthesizer::make_indsets(const SynthRequest& req, DomainKind domain,
                                     SynthStats* stats) const {
  if (domain == DomainKind::Box) {
    if (req.k != 1) throw InvalidArgument("the box domain holds a single box; use k = 1");
    return IndSetPair{synth_box(req.query, true, req.kind, stats),
                      synth_box(req.query, false, req.kind, stats), req.kind, req.query};
  }
  return IndSetPair{iter_synth(req, true, stats), iter_synth(req, false, stats), req.kind,
                    req.query};
}

std::pair<Domain, Domain> posterior(const Domain& prior, const IndSetPair& ind) {
  return {intersect(prior, ind.when_true), intersect(prior, ind.when_false)};
}

}  // namespace indset
