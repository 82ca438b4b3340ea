#include "lsc/evaluator.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace lsc {

std::string StrategyId::str() const {
  switch (kind) {
  case StrategyKind::CbN: return "cbn";
  case StrategyKind::Need: return "need";
  case StrategyKind::CbV:
    switch (policy) {
    case CbvPolicy::LeftToRight: return "cbv-ltr";
    case CbvPolicy::RightToLeft: return "cbv-rtl";
    case CbvPolicy::Exhaustive: return "cbv-all";
    }
  }
  return "?";
}

ContextTag context_tag(StrategyKind k) {
  switch (k) {
  case StrategyKind::CbN: return ContextTag::CbN;
  case StrategyKind::CbV: return ContextTag::CbV;
  case StrategyKind::Need: return ContextTag::Need;
  }
  return ContextTag::Weak;
}

const char *step_kind_name(StepKind k) {
  switch (k) {
  case StepKind::Multiplicative: return "m";
  case StepKind::Exponential: return "e";
  case StepKind::Erasing: return "gc";
  }
  return "?";
}

const char *status_name(EvalStatus s) {
  switch (s) {
  case EvalStatus::Normal: return "normal";
  case EvalStatus::Stuck: return "stuck";
  case EvalStatus::FuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

bool is_normal(const Term &t) {
  if (t.is_abs())
    return true;
  if (t.is_esub())
    return is_normal(t.as_esub().body);
  return false;
}

bool is_normal_cbv(const Term &t) {
  if (t.is_abs())
    return true;
  if (t.is_esub())
    return is_normal_cbv(t.as_esub().body) && is_normal_cbv(t.as_esub().arg);
  return false;
}

namespace {

// S<v>
bool is_answer(const Term &t) { return split_subst_context(t).second.is_abs(); }

Path extend(const Path &p, Dir d) {
  Path q = p;
  q.push_back(d);
  return q;
}

// Preorder rank of positions; children left to right or right to left.
bool precedes(const Path &a, const Path &b, bool rtl) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) {
      bool lt = a[i] < b[i];
      return rtl ? !lt : lt;
    }
  }
  return a.size() < b.size();
}

const Path &action_point(const Redex &r) {
  return r.kind == StepKind::Exponential ? r.occurrence : r.at;
}

// ---------------------------------------------------------------- grammar
// Independent enumeration of context positions per grammar.

void weak_positions(const Term &t, const Path &p, std::vector<Path> &out) {
  out.push_back(p);
  if (t.is_app()) {
    weak_positions(t.as_app().fun, extend(p, Dir::AppFun), out);
    weak_positions(t.as_app().arg, extend(p, Dir::AppArg), out);
  } else if (t.is_esub()) {
    weak_positions(t.as_esub().body, extend(p, Dir::EsBody), out);
    weak_positions(t.as_esub().arg, extend(p, Dir::EsArg), out);
  }
}

void cbn_positions(const Term &t, const Path &p, std::vector<Path> &out) {
  out.push_back(p);
  if (t.is_app())
    cbn_positions(t.as_app().fun, extend(p, Dir::AppFun), out);
  else if (t.is_esub())
    cbn_positions(t.as_esub().body, extend(p, Dir::EsBody), out);
}

void need_positions(const Term &t, const Path &p, std::vector<Path> &out);

// Keeps the positions q (relative to t, skipping the first `skip` steps)
// that hold an occurrence of x not bound inside t.
std::vector<Path> free_occurrences(const Term &t, const Variable &x,
                                   const std::vector<Path> &pos,
                                   std::size_t from = 0, std::size_t skip = 0) {
  std::vector<Path> out;
  for (std::size_t i = from; i < pos.size(); ++i) {
    Path q(pos[i].begin() + static_cast<std::ptrdiff_t>(skip), pos[i].end());
    const Term &u = subterm_at(t, q);
    if (!u.is_var() || u.as_var().name != x)
      continue;
    bool captured = false;
    const Term *cur = &t;
    for (Dir d : q) {
      if (cur->is_esub() && d == Dir::EsBody && cur->as_esub().binder == x)
        captured = true;
      cur = &subterm_at(*cur, {d});
    }
    if (!captured)
      out.push_back(std::move(q));
  }
  return out;
}

std::vector<Path> hole_vars(const Term &t, const Variable &x, ContextTag tag) {
  std::vector<Path> pos;
  if (tag == ContextTag::CbN)
    cbn_positions(t, {}, pos);
  else if (tag == ContextTag::Need)
    need_positions(t, {}, pos);
  else
    weak_positions(t, {}, pos);
  return free_occurrences(t, x, pos);
}

void need_positions(const Term &t, const Path &p, std::vector<Path> &out) {
  out.push_back(p);
  if (t.is_app()) {
    need_positions(t.as_app().fun, extend(p, Dir::AppFun), out);
  } else if (t.is_esub()) {
    const auto &e = t.as_esub();
    std::size_t from = out.size();
    need_positions(e.body, extend(p, Dir::EsBody), out);
    if (!free_occurrences(e.body, e.binder, out, from, p.size() + 1).empty())
      need_positions(e.arg, extend(p, Dir::EsArg), out);
  }
}

Path concat(const Path &a, const Path &b) {
  Path out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

} // namespace

std::vector<Redex> redexes(const Term &t, StrategyKind k) {
  std::vector<Path> pos;
  ContextTag tag = context_tag(k);
  switch (k) {
  case StrategyKind::CbN: cbn_positions(t, {}, pos); break;
  case StrategyKind::CbV: weak_positions(t, {}, pos); break;
  case StrategyKind::Need: need_positions(t, {}, pos); break;
  }
  std::vector<Redex> out;
  for (const auto &p : pos) {
    const Term &u = subterm_at(t, p);
    if (u.is_app() && is_answer(u.as_app().fun))
      out.push_back({StepKind::Multiplicative, p, {}});
    if (u.is_esub()) {
      const auto &e = u.as_esub();
      if (k != StrategyKind::CbN && !is_answer(e.arg))
        continue;
      for (const auto &q : hole_vars(e.body, e.binder, tag))
        out.push_back(
            {StepKind::Exponential, p, concat(extend(p, Dir::EsBody), q)});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Redex &a, const Redex &b) {
    return precedes(action_point(a), action_point(b), false);
  });
  return out;
}

namespace {

// Single pass over the weak positions, carrying the substitutions in scope.
// Same result as redexes(t, CbV), unsorted.
struct CbvScan {
  struct Bound {
    Path at;
    bool answer;
  };
  std::map<Variable, Bound> env;
  Path p;
  std::vector<Redex> out;

  void go(const Term &t) {
    if (t.is_var()) {
      auto it = env.find(t.as_var().name);
      if (it != env.end() && it->second.answer)
        out.push_back({StepKind::Exponential, it->second.at, p});
    } else if (t.is_app()) {
      if (is_answer(t.as_app().fun))
        out.push_back({StepKind::Multiplicative, p, {}});
      down(Dir::AppFun, t.as_app().fun);
      down(Dir::AppArg, t.as_app().arg);
    } else if (t.is_esub()) {
      const auto &e = t.as_esub();
      down(Dir::EsArg, e.arg);
      auto saved = env.find(e.binder) == env.end()
                       ? std::nullopt
                       : std::optional<Bound>(env.at(e.binder));
      env[e.binder] = Bound{p, is_answer(e.arg)};
      down(Dir::EsBody, e.body);
      if (saved)
        env[e.binder] = *saved;
      else
        env.erase(e.binder);
    }
  }

  void down(Dir d, const Term &t) {
    p.push_back(d);
    go(t);
    p.pop_back();
  }
};

std::vector<Redex> cbv_redexes(const Term &t) {
  CbvScan sc;
  sc.go(t);
  return std::move(sc.out);
}

} // namespace

namespace {

// Head search for the deterministic strategies.
struct Search {
  enum Tag { Found, Needed, Answer } tag;
  Redex redex{};
  Variable var{};
  Path occ{};
};

Search head_search(const Term &t, const Path &p, StrategyKind k) {
  if (t.is_var())
    return {Search::Needed, {}, t.as_var().name, p};
  if (t.is_abs())
    return {Search::Answer};
  if (t.is_app()) {
    Search r = head_search(t.as_app().fun, extend(p, Dir::AppFun), k);
    if (r.tag == Search::Answer)
      return {Search::Found, {StepKind::Multiplicative, p, {}}};
    return r;
  }
  const auto &e = t.as_esub();
  Search r = head_search(e.body, extend(p, Dir::EsBody), k);
  if (r.tag != Search::Needed || r.var != e.binder)
    return r;
  if (k == StrategyKind::CbN)
    return {Search::Found, {StepKind::Exponential, p, r.occ}};
  Search a = head_search(e.arg, extend(p, Dir::EsArg), k);
  if (a.tag == Search::Answer)
    return {Search::Found, {StepKind::Exponential, p, r.occ}};
  return a;
}

std::optional<Redex> choose(const Term &t, StrategyId s) {
  if (s.kind != StrategyKind::CbV) {
    Search r = head_search(t, {}, s.kind);
    if (r.tag == Search::Found)
      return r.redex;
    return std::nullopt;
  }
  if (s.policy == CbvPolicy::Exhaustive)
    throw std::invalid_argument("the exhaustive policy has no single step");
  auto all = cbv_redexes(t);
  if (all.empty())
    return std::nullopt;
  bool rtl = s.policy == CbvPolicy::RightToLeft;
  return *std::min_element(all.begin(), all.end(),
                           [rtl](const Redex &a, const Redex &b) {
                             return precedes(action_point(a), action_point(b),
                                             rtl);
                           });
}

} // namespace

std::optional<FoundRedex> find_redex(const Term &t, StrategyId s) {
  auto r = choose(t, s);
  if (!r)
    return std::nullopt;
  return FoundRedex{context_at(t, r->at, context_tag(s.kind)), *r};
}

Term apply_redex(const Term &t, const Redex &r, StrategyKind k,
                 FreshSupply &supply) {
  const Term &u = subterm_at(t, r.at);
  Term out;
  switch (r.kind) {
  case StepKind::Multiplicative: {
    auto [s, abs] = split_subst_context(u.as_app().fun);
    out = s.plug(esub(abs.as_abs().body, abs.as_abs().binder, u.as_app().arg));
    break;
  }
  case StepKind::Exponential: {
    const auto &e = u.as_esub();
    Path rel(r.occurrence.begin() + r.at.size() + 1, r.occurrence.end());
    if (k == StrategyKind::CbN) {
      out = esub(replace_at(e.body, rel, copy_fresh(e.arg, supply)), e.binder,
                 e.arg);
    } else {
      auto [s, v] = split_subst_context(e.arg);
      out = s.plug(esub(replace_at(e.body, rel, copy_fresh(v, supply)),
                        e.binder, v));
    }
    break;
  }
  case StepKind::Erasing: {
    const auto &e = u.as_esub();
    if (k == StrategyKind::CbV)
      out = split_subst_context(e.arg).first.plug(e.body);
    else
      out = e.body;
    break;
  }
  }
  return replace_at(t, r.at, out);
}

std::optional<std::pair<Term, StepKind>> step(const Term &t, StrategyId s) {
  auto r = choose(t, s);
  if (!r)
    return std::nullopt;
  FreshSupply supply(t);
  return std::pair{apply_redex(t, *r, s.kind, supply), r->kind};
}

std::optional<Redex> find_gc_redex(const Term &t, StrategyKind k) {
  std::vector<Path> pos;
  weak_positions(t, {}, pos);
  for (const auto &p : pos) {
    const Term &u = subterm_at(t, p);
    if (!u.is_esub() || is_free_in(u.as_esub().binder, u.as_esub().body))
      continue;
    if (k == StrategyKind::CbV && !is_answer(u.as_esub().arg))
      continue;
    return Redex{StepKind::Erasing, p, {}};
  }
  return std::nullopt;
}

std::optional<Term> gc_step(const Term &t, StrategyId s) {
  auto r = find_gc_redex(t, s.kind);
  if (!r)
    return std::nullopt;
  FreshSupply supply;
  return apply_redex(t, *r, s.kind, supply);
}

Term gc_normalize(const Term &t, StrategyId s) {
  Term cur = t;
  while (auto n = gc_step(cur, s))
    cur = *n;
  return cur;
}

EvalResult evaluate(const Term &t, StrategyId s, unsigned fuel,
                    EvalOptions opts) {
  EvalResult res;
  res.trace.initial = has_distinct_binders(t) ? t : rename_fresh(t);
  FreshSupply supply(res.trace.initial);
  Term cur = res.trace.initial;
  auto next = [&]() -> std::optional<Redex> {
    if (opts.gc)
      if (auto g = find_gc_redex(cur, s.kind))
        return g;
    return choose(cur, s);
  };
  for (unsigned i = 0;; ++i) {
    auto r = next();
    if (!r) {
      bool ok = s.kind == StrategyKind::CbV ? is_normal_cbv(cur) : is_normal(cur);
      res.status = ok ? EvalStatus::Normal : EvalStatus::Stuck;
      return res;
    }
    if (i == fuel) {
      res.status = EvalStatus::FuelExhausted;
      return res;
    }
    cur = apply_redex(cur, *r, s.kind, supply);
    switch (r->kind) {
    case StepKind::Multiplicative: ++res.trace.m_count; break;
    case StepKind::Exponential: ++res.trace.e_count; break;
    case StepKind::Erasing: ++res.trace.gc_count; break;
    }
    res.trace.steps.push_back({r->kind, *r, cur});
  }
}

std::vector<Successor> all_successors_cbv(const Term &t) {
  std::vector<Successor> out;
  std::set<std::pair<std::string, StepKind>> seen;
  FreshSupply supply(t);
  auto rs = cbv_redexes(t);
  std::stable_sort(rs.begin(), rs.end(), [](const Redex &a, const Redex &b) {
    return precedes(action_point(a), action_point(b), false);
  });
  for (const auto &r : rs) {
    Term u = apply_redex(t, r, StrategyKind::CbV, supply);
    if (seen.insert({alpha_key(u), r.kind}).second)
      out.push_back({u, r.kind, r});
  }
  return out;
}

std::optional<std::set<std::pair<unsigned, unsigned>>>
explore_cbv(const Term &t, std::size_t max_states, unsigned max_depth) {
  using Counts = std::set<std::pair<unsigned, unsigned>>;
  std::map<std::string, Counts> memo;
  std::set<std::string> active;
  bool overflow = false;
  std::function<Counts(const Term &, unsigned)> go = [&](const Term &u,
                                                         unsigned depth) {
    std::string key = alpha_key(u);
    if (auto it = memo.find(key); it != memo.end())
      return it->second;
    if (overflow || depth > max_depth || active.count(key) ||
        memo.size() + active.size() >= max_states) {
      overflow = true;
      return Counts{};
    }
    active.insert(key);
    Counts out;
    auto succ = all_successors_cbv(u);
    if (succ.empty())
      out.insert({0, 0});
    for (const auto &s : succ) {
      for (auto [m, e] : go(s.term, depth + 1)) {
        if (s.kind == StepKind::Multiplicative)
          ++m;
        else
          ++e;
        out.insert({m, e});
      }
      if (overflow)
        break;
    }
    active.erase(key);
    if (!overflow)
      memo.emplace(key, out);
    return out;
  };
  Counts c = go(has_distinct_binders(t) ? t : rename_fresh(t), 0);
  if (overflow)
    return std::nullopt;
  return c;
}

} // namespace lsc
