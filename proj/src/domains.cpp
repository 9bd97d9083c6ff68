// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#include "indset/domains.hpp"

#include <algorithm>

#include "indset/error.hpp"

namespace indset {

namespace {

using Wide = __int128;

void check_arity(const Box& a, const Box& b) {
  if (a.arity() && b.arity() && *a.arity() != *b.arity())
    throw ArityMismatch("boxes of arity " + std::to_string(*a.arity()) + " and " +
                        std::to_string(*b.arity()));
}

void check_arity(std::size_t n, const Box& b) {
  if (b.arity() && *b.arity() != n)
    throw ArityMismatch("box of arity " + std::to_string(*b.arity()) + " used with arity " +
                        std::to_string(n));
}

BigInt width(std::int64_t lo, std::int64_t hi) {
  return BigInt(static_cast<unsigned long long>(static_cast<Wide>(hi) - lo + 1));
}

}  // namespace

Interval1D::Interval1D(std::int64_t lo, std::int64_t hi) : lower(lo), upper(hi) {
  if (lo > hi)
    throw InvalidArgument("empty interval [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
}

Box Box::of(std::vector<Interval1D> ranges) {
  if (ranges.empty()) throw InvalidArgument("a ranged box needs at least one dimension");
  return Box(Kind::Ranges, std::move(ranges));
}

Box Box::of_schema(const SecretSchema& schema) {
  std::vector<Interval1D> r;
  for (const auto& f : schema.fields()) r.emplace_back(f.lower, f.upper);
  return of(std::move(r));
}

std::optional<std::size_t> Box::arity() const {
  if (kind_ != Kind::Ranges) return std::nullopt;
  return ranges_.size();
}

bool member(std::span<const std::int64_t> s, const Box& d) {
  check_arity(s.size(), d);
  switch (d.kind()) {
    case Box::Kind::Top: return true;
    case Box::Kind::Bottom: return false;
    case Box::Kind::Ranges: break;
  }
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!d.ranges()[i].contains(s[i])) return false;
  return true;
}

bool member(const SecretValue& s, const Box& d) { return member(std::span(s.values), d); }

bool subset(const Box& d1, const Box& d2) {
  check_arity(d1, d2);
  if (d1.is_bottom() || d2.is_top()) return true;
  if (d2.is_bottom() || d1.is_top()) return false;
  for (std::size_t i = 0; i < d1.ranges().size(); ++i) {
    const auto& a = d1.ranges()[i];
    const auto& b = d2.ranges()[i];
    if (a.lower < b.lower || a.upper > b.upper) return false;
  }
  return true;
}

Box intersect(const Box& d1, const Box& d2) {
  check_arity(d1, d2);
  if (d1.is_bottom() || d2.is_bottom()) return Box::bottom();
  if (d1.is_top()) return d2;
  if (d2.is_top()) return d1;
  std::vector<Interval1D> out;
  out.reserve(d1.ranges().size());
  for (std::size_t i = 0; i < d1.ranges().size(); ++i) {
    std::int64_t lo = std::max(d1.ranges()[i].lower, d2.ranges()[i].lower);
    std::int64_t hi = std::min(d1.ranges()[i].upper, d2.ranges()[i].upper);
    if (lo > hi) return Box::bottom();
    out.emplace_back(lo, hi);
  }
  return Box::of(std::move(out));
}

BigInt size(const Box& d, const SecretSchema& schema) {
  check_arity(schema.arity(), d);
  switch (d.kind()) {
    case Box::Kind::Top: return total_size(schema);
    case Box::Kind::Bottom: return 0;
    case Box::Kind::Ranges: break;
  }
  BigInt n = 1;
  for (std::size_t i = 0; i < d.ranges().size(); ++i) {
    const auto& f = schema.field(i);
    std::int64_t lo = std::max(d.ranges()[i].lower, f.lower);
    std::int64_t hi = std::min(d.ranges()[i].upper, f.upper);
    if (lo > hi) return 0;
    n *= width(lo, hi);
  }
  return n;
}

// ---------------------------------------------------------------------------
// Powerset

Powerset::Powerset(std::vector<Box> include, std::vector<Box> exclude) {
  std::optional<std::size_t> arity;
  auto note = [&](const Box& b) {
    if (!b.arity()) return;
    if (arity && *arity != *b.arity()) throw ArityMismatch("powerset boxes of mixed arity");
    arity = b.arity();
  };
  bool has_top = false;
  for (auto& b : include) {
    note(b);
    if (b.is_top()) has_top = true;
    if (!b.is_bottom()) include_.push_back(std::move(b));
  }
  if (has_top) include_ = {Box::top()};
  for (auto& b : exclude) {
    note(b);
    if (!b.is_bottom()) exclude_.push_back(std::move(b));
  }
}

bool member(std::span<const std::int64_t> s, const Powerset& d) {
  bool in = std::any_of(d.include().begin(), d.include().end(),
                        [&](const Box& b) { return member(s, b); });
  if (!in) return false;
  return std::none_of(d.exclude().begin(), d.exclude().end(),
                      [&](const Box& b) { return member(s, b); });
}

bool member(const SecretValue& s, const Powerset& d) { return member(std::span(s.values), d); }

bool subset(const Powerset& d1, const Powerset& d2) {
  // every include of d1 sits inside some include of d2 ...
  for (const auto& a : d1.include()) {
    bool covered = std::any_of(d2.include().begin(), d2.include().end(),
                               [&](const Box& b) { return subset(a, b); });
    if (!covered) return false;
  }
  // ... and whatever d2 cuts out of d1's includes, d1 cuts out as well
  for (const auto& e2 : d2.exclude()) {
    for (const auto& a : d1.include()) {
      Box cut = intersect(e2, a);
      if (cut.is_bottom()) continue;
      bool dropped = std::any_of(d1.exclude().begin(), d1.exclude().end(),
                                 [&](const Box& e1) { return subset(cut, e1); });
      if (!dropped) return false;
    }
  }
  return true;
}

Powerset intersect(const Powerset& d1, const Powerset& d2) {
  std::vector<Box> inc;
  inc.reserve(d1.include().size() * d2.include().size());
  for (const auto& a : d1.include())
    for (const auto& b : d2.include()) {
      Box c = intersect(a, b);
      if (!c.is_bottom()) inc.push_back(std::move(c));
    }
  std::vector<Box> exc;
  // exclusions that miss every include change nothing
  auto relevant = [&](const Box& e) {
    return std::any_of(inc.begin(), inc.end(),
                       [&](const Box& i) { return !intersect(e, i).is_bottom(); });
  };
  for (const auto* list : {&d1.exclude(), &d2.exclude()})
    for (const auto& e : *list)
      if (relevant(e)) exc.push_back(e);
  return Powerset(std::move(inc), std::move(exc));
}

namespace {

using Ranges = std::vector<Interval1D>;

// Counts the points covered by some include and by no exclude, restricted to
// dimensions [dim, n). Splits dimension `dim` at every box boundary and
// recurses on the boxes active in each slab.
BigInt sweep(const std::vector<const Ranges*>& inc, const std::vector<const Ranges*>& exc,
             std::size_t dim, std::size_t n) {
  if (inc.empty()) return 0;
  if (dim == n) return exc.empty() ? 1 : 0;
  if (exc.empty() && inc.size() == 1) {
    BigInt v = 1;
    for (std::size_t i = dim; i < n; ++i) v *= width((*inc[0])[i].lower, (*inc[0])[i].upper);
    return v;
  }

  std::vector<Wide> cuts;
  cuts.reserve(2 * (inc.size() + exc.size()));
  for (const auto* list : {&inc, &exc})
    for (const auto* r : *list) {
      cuts.push_back((*r)[dim].lower);
      cuts.push_back(static_cast<Wide>((*r)[dim].upper) + 1);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  BigInt total = 0;
  std::vector<const Ranges*> act_inc, act_exc, prev_inc, prev_exc;
  BigInt prev_count = 0;
  bool have_prev = false;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    Wide a = cuts[k], b = cuts[k + 1];
    auto active = [&](const std::vector<const Ranges*>& from, std::vector<const Ranges*>& to) {
      to.clear();
      for (const auto* r : from)
        if ((*r)[dim].lower <= a && static_cast<Wide>((*r)[dim].upper) + 1 >= b) to.push_back(r);
    };
    active(inc, act_inc);
    if (act_inc.empty()) {
      have_prev = false;
      continue;
    }
    active(exc, act_exc);
    BigInt sub;
    if (have_prev && act_inc == prev_inc && act_exc == prev_exc) {
      sub = prev_count;
    } else {
      sub = sweep(act_inc, act_exc, dim + 1, n);
      prev_inc = act_inc;
      prev_exc = act_exc;
      prev_count = sub;
      have_prev = true;
    }
    if (sub != 0) total += sub * BigInt(static_cast<unsigned long long>(b - a));
  }
  return total;
}

}  // namespace

BigInt size(const Powerset& d, const SecretSchema& schema) {
  const std::size_t n = schema.arity();
  Ranges full;
  for (const auto& f : schema.fields()) full.emplace_back(f.lower, f.upper);

  // includes clipped to the schema; excludes need not be
  std::vector<Ranges> clipped;
  clipped.reserve(d.include().size());
  const Box bounds = Box::of(full);
  for (const auto& b : d.include()) {
    check_arity(n, b);
    Box c = intersect(b, bounds);
    if (!c.is_bottom()) clipped.push_back(c.ranges());
  }
  std::vector<const Ranges*> inc, exc;
  for (const auto& r : clipped) inc.push_back(&r);
  for (const auto& b : d.exclude()) {
    check_arity(n, b);
    exc.push_back(b.is_top() ? &full : &b.ranges());
  }
  return sweep(inc, exc, 0, n);
}

// ---------------------------------------------------------------------------
// Domain

DomainKind kind_of(const Domain& d) {
  return std::holds_alternative<Box>(d) ? DomainKind::Box : DomainKind::Powerset;
}

const char* to_string(DomainKind k) { return k == DomainKind::Box ? "box" : "powerset"; }

Domain top_of(DomainKind k) {
  if (k == DomainKind::Box) return Box::top();
  return Powerset::top();
}

Domain bottom_of(DomainKind k) {
  if (k == DomainKind::Box) return Box::bottom();
  return Powerset::bottom();
}

namespace {

void same_kind(const Domain& a, const Domain& b) {
  if (a.index() != b.index())
    throw KindMismatch(std::string("cannot combine ") + to_string(kind_of(a)) + " with " +
                       to_string(kind_of(b)));
}

}  // namespace

bool member(const SecretValue& s, const Domain& d) {
  return std::visit([&](const auto& x) { return member(s, x); }, d);
}

bool subset(const Domain& d1, const Domain& d2) {
  same_kind(d1, d2);
  if (auto* a = std::get_if<Box>(&d1)) return subset(*a, std::get<Box>(d2));
  return subset(std::get<Powerset>(d1), std::get<Powerset>(d2));
}

Domain intersect(const Domain& d1, const Domain& d2) {
  same_kind(d1, d2);
  if (auto* a = std::get_if<Box>(&d1)) return intersect(*a, std::get<Box>(d2));
  return intersect(std::get<Powerset>(d1), std::get<Powerset>(d2));
}

BigInt size(const Domain& d, const SecretSchema& schema) {
  return std::visit([&](const auto& x) { return size(x, schema); }, d);
}

std::string to_string(const Box& b) {
  if (b.is_top()) return "top";
  if (b.is_bottom()) return "bottom";
  std::string out = "[";
  for (std::size_t i = 0; i < b.ranges().size(); ++i) {
    if (i) out += ",";
    out += "[" + std::to_string(b.ranges()[i].lower) + "," + std::to_string(b.ranges()[i].upper) +
           "]";
  }
  return out + "]";
}

std::string to_string(const Powerset& p) {
  auto list = [](const std::vector<Box>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",";
      out += to_string(v[i]);
    }
    return out + "]";
  };
  return "{include:" + list(p.include()) + ",exclude:" + list(p.exclude()) + "}";
}

std::string to_string(const Domain& d) {
  return std::visit([](const auto& x) { return to_string(x); }, d);
}

}  // namespace indset
