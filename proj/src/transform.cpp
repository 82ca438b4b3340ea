#include "lsc/transform.hpp"

namespace lsc {

SystemId system_for(StrategyKind k) {
  switch (k) {
  case StrategyKind::CbN: return SystemId::CbN;
  case StrategyKind::CbV: return SystemId::CbV;
  case StrategyKind::Need: return SystemId::Need;
  }
  return SystemId::CbN;
}

StrategyId strategy_for(SystemId s) {
  switch (s) {
  case SystemId::CbN: return StrategyId::cbn();
  case SystemId::CbV: return StrategyId::cbv();
  case SystemId::Need: return StrategyId::need();
  case SystemId::NeedNaive: break;
  }
  throw std::invalid_argument("the naive need system has no strategy");
}

StepWitness witness(const Trace &tr, std::size_t i, StrategyId s) {
  const TraceStep &st = tr.steps.at(i);
  const Term &before = tr.before(i);
  return StepWitness{before, st.result, st.kind, st.redex,
                     context_at(before, st.redex.at, context_tag(s.kind)), s};
}

namespace {

[[noreturn]] void fail(const std::string &msg) { throw TransformError(msg); }

std::size_t child_index(const Derivation &d, Dir dir) {
  switch (d.rule) {
  case Rule::App:
    return dir == Dir::AppFun ? 0 : 1;
  case Rule::AppGc:
    if (dir == Dir::AppFun)
      return 0;
    break;
  case Rule::Es:
    return dir == Dir::EsBody ? 0 : 1;
  case Rule::EsGc:
    if (dir == Dir::EsBody)
      return 0;
    break;
  default:
    break;
  }
  fail(std::string("cannot follow the position through a ") +
       rule_name(d.rule) + " node");
}

const Derivation &deriv_at(const Derivation &d, const Path &p) {
  const Derivation *cur = &d;
  for (Dir dir : p)
    cur = &cur->premises.at(child_index(*cur, dir));
  return *cur;
}

// Rebuilds the spine from the root to p around repl. `sub` is the new
// subject at the current node.
Derivation replace_deriv(SystemId sys, const Derivation &d, const Term &sub,
                         const Path &p, std::size_t i, Derivation repl) {
  if (i == p.size())
    return repl;
  std::size_t c = child_index(d, p[i]);
  std::vector<Derivation> ps = d.premises;
  ps[c] = replace_deriv(sys, d.premises[c], subterm_at(sub, {p[i]}), p, i + 1,
                        std::move(repl));
  return node::remake(sys, d, sub, std::move(ps));
}

Derivation replace_deriv(SystemId sys, const Derivation &d, const Term &sub,
                         const Path &p, Derivation repl) {
  return replace_deriv(sys, d, sub, p, 0, std::move(repl));
}

std::map<Variable, Variable> renaming(const Term &from, const Term &to) {
  auto r = binder_renaming(from, to);
  if (!r)
    fail("copied subterm is not a renaming of its source");
  return *r;
}

bool is_many(const Derivation &d) {
  return d.rule == Rule::Many || d.rule == Rule::ManyPos ||
         d.rule == Rule::ManyZero;
}

bool value_typed(SystemId sys) { return sys != SystemId::CbN; }

Derivation many_or_zero(SystemId sys, const Term &subject,
                        std::vector<Derivation> ps) {
  if (ps.empty() && sys == SystemId::NeedNaive)
    return node::many_zero(sys, subject);
  return node::many(sys, subject, std::move(ps));
}

// Layer terms from the outside in, with the core last.
std::vector<Term> layer_terms(const Term &t, std::size_t k) {
  std::vector<Term> out{t};
  for (std::size_t i = 0; i < k; ++i)
    out.push_back(out.back().as_esub().body);
  return out;
}

std::vector<const Derivation *> peel(const Derivation &d, std::size_t k) {
  std::vector<const Derivation *> out{&d};
  for (std::size_t i = 0; i < k; ++i) {
    const Derivation *c = out.back();
    if (c->rule != Rule::Es && c->rule != Rule::EsGc)
      fail("substitution layer typed by " + std::string(rule_name(c->rule)));
    out.push_back(&c->premises[0]);
  }
  return out;
}

// Wraps core in the layer nodes[0..k) (outermost first) using the given
// layer subjects.
Derivation rewrap(SystemId sys, const std::vector<const Derivation *> &nodes,
                  const std::vector<Term> &terms, Derivation core) {
  for (std::size_t j = nodes.size() - 1; j-- > 0;) {
    std::vector<Derivation> ps;
    ps.push_back(std::move(core));
    if (nodes[j]->rule == Rule::Es)
      ps.push_back(nodes[j]->premises[1]);
    core = node::remake(sys, *nodes[j], terms[j], std::move(ps));
  }
  return core;
}

std::size_t layer_count(const Term &t) {
  return split_subst_context(t).first.layers.size();
}

// ----------------------------------------------------------- multiplicative

Derivation m_reduce(SystemId sys, const Derivation &r, const Term &before,
                    const Term &after) {
  if (r.rule != Rule::App && r.rule != Rule::AppGc)
    fail("multiplicative redex typed by " + std::string(rule_name(r.rule)));
  std::size_t k = layer_count(before.as_app().fun);
  auto nodes = peel(r.premises[0], k);
  const Derivation *core = nodes.back();
  const Derivation *du = nullptr;
  if (core->rule == Rule::Fun) {
    du = &core->premises[0];
  } else if (is_many(*core) && core->premises.size() == 1 &&
             core->premises[0].rule == Rule::Fun) {
    du = &core->premises[0].premises[0];
  } else {
    fail("abstraction of the redex is not typed by an arrow");
  }
  auto terms = layer_terms(after, k);
  Derivation inner = r.rule == Rule::App
                         ? node::es(sys, terms.back(), *du, r.premises[1])
                         : node::es_gc(sys, terms.back(), *du);
  return rewrap(sys, nodes, terms, std::move(inner));
}

Derivation m_expand(SystemId sys, const Derivation &r, const Term &before) {
  const Term &fun = before.as_app().fun;
  std::size_t k = layer_count(fun);
  auto nodes = peel(r, k);
  const Derivation *core = nodes.back();
  if (core->rule != Rule::Es && core->rule != Rule::EsGc)
    fail("created substitution typed by " + std::string(rule_name(core->rule)));
  auto terms = layer_terms(fun, k);
  Derivation f = node::fun(sys, terms.back(), core->premises[0]);
  if (value_typed(sys)) {
    std::vector<Derivation> one;
    one.push_back(std::move(f));
    f = node::many(sys, terms.back(), std::move(one));
  }
  // the layer nodes keep their rule and argument premises
  f = rewrap(sys, nodes, terms, std::move(f));
  if (core->rule == Rule::Es)
    return node::app(sys, before, std::move(f), core->premises[1]);
  return node::app_gc(sys, before, std::move(f));
}

// -------------------------------------------------------------- exponential

// Picks, for each element of o in canonical order, the leftmost unused
// premise with that type.
std::pair<std::vector<Derivation>, std::vector<Derivation>>
partition(const std::vector<Derivation> &ps, const MultiType &o) {
  std::vector<bool> used(ps.size(), false);
  std::vector<Derivation> picked, rest;
  for (const auto &l : o.elements()) {
    bool found = false;
    for (std::size_t i = 0; i < ps.size() && !found; ++i) {
      if (!used[i] && ps[i].linear() == l) {
        used[i] = true;
        picked.push_back(ps[i]);
        found = true;
      }
    }
    if (!found)
      fail("multi type " + to_string(o) + " is not part of the argument's type");
  }
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (!used[i])
      rest.push_back(ps[i]);
  return {std::move(picked), std::move(rest)};
}

Path relative_occurrence(const Redex &r) {
  return Path(r.occurrence.begin() + r.at.size() + 1, r.occurrence.end());
}

Derivation e_reduce(SystemId sys, const Derivation &r, const Term &before,
                    const Term &after, const Path &rel) {
  if (r.rule != Rule::Es)
    fail("exponential redex typed by " + std::string(rule_name(r.rule)));
  const auto &e = before.as_esub();
  const Derivation &dbody = r.premises[0];
  const Derivation &darg = r.premises[1];
  const Derivation &hole = deriv_at(dbody, rel);
  if (hole.rule != Rule::Ax)
    fail("substituted occurrence is not typed by an axiom");

  if (!value_typed(sys)) {
    const Term &nbody = after.as_esub().body;
    auto ren = renaming(e.arg, subterm_at(nbody, rel));
    auto [picked, rest] =
        partition(darg.premises, MultiType::single(hole.linear()));
    Derivation sub = rename_derivation(picked[0], ren);
    Derivation b = replace_deriv(sys, dbody, nbody, rel, std::move(sub));
    return node::es(sys, after, std::move(b),
                    node::many(sys, e.arg, std::move(rest)));
  }

  std::size_t k = layer_count(e.arg);
  auto arg_nodes = peel(darg, k);
  const Derivation &mv = *arg_nodes.back();
  if (!is_many(mv))
    fail("substituted value is not typed by many");
  auto terms = layer_terms(after, k);
  const Term &core_term = terms.back();
  const Term &v = core_term.as_esub().arg;
  const Term &nbody = core_term.as_esub().body;
  auto ren = renaming(v, subterm_at(nbody, rel));
  auto [picked, rest] = partition(mv.premises, hole.multi());
  Derivation mo =
      rename_derivation(many_or_zero(sys, v, std::move(picked)), ren);
  Derivation b = replace_deriv(sys, dbody, nbody, rel, std::move(mo));
  Derivation inner = (rest.empty() && sys == SystemId::Need)
                         ? node::es_gc(sys, core_term, std::move(b))
                         : node::es(sys, core_term, std::move(b),
                                    many_or_zero(sys, v, std::move(rest)));
  return rewrap(sys, arg_nodes, terms, std::move(inner));
}

Derivation e_expand(SystemId sys, const Derivation &r, const Term &before,
                    const Path &rel) {
  const auto &e = before.as_esub();
  if (!value_typed(sys)) {
    if (r.rule != Rule::Es)
      fail("substitution typed by " + std::string(rule_name(r.rule)));
    const Derivation &dbody = r.premises[0];
    const Derivation &hole = deriv_at(dbody, rel);
    if (hole.has_multi_rhs())
      fail("copied occurrence does not have a linear type");
    auto ren = renaming(hole.j.subject, e.arg);
    Derivation b = replace_deriv(sys, dbody, e.body, rel,
                                 node::ax(sys, e.binder, hole.linear()));
    std::vector<Derivation> ps = r.premises[1].premises;
    ps.push_back(rename_derivation(hole, ren));
    return node::es(sys, before, std::move(b),
                    node::many(sys, e.arg, std::move(ps)));
  }

  std::size_t k = layer_count(e.arg);
  auto nodes = peel(r, k);
  const Derivation &core = *nodes.back();
  if (core.rule != Rule::Es && core.rule != Rule::EsGc)
    fail("substitution typed by " + std::string(rule_name(core.rule)));
  const Derivation &dbody = core.premises[0];
  const Derivation &hole = deriv_at(dbody, rel);
  if (!is_many(hole))
    fail("copied value is not typed by many");
  auto ren = renaming(hole.j.subject, split_subst_context(e.arg).second);
  Derivation b = replace_deriv(sys, dbody, e.body, rel,
                               node::ax(sys, e.binder, hole.j.rhs));
  std::vector<Derivation> ps;
  if (core.rule == Rule::Es)
    ps = core.premises[1].premises;
  for (const auto &p : hole.premises)
    ps.push_back(rename_derivation(p, ren));
  auto terms = layer_terms(e.arg, k);
  Derivation arg = rewrap(sys, nodes, terms,
                          many_or_zero(sys, terms.back(), std::move(ps)));
  return node::es(sys, before, std::move(b), std::move(arg));
}

bool empty_rhs(const Derivation &d) {
  return d.has_multi_rhs() && d.multi().empty();
}

void expect_subject(const Derivation &d, const Term &t) {
  if (!(d.j.subject == t))
    fail("derivation does not type the witness term");
}

} // namespace

// ----------------------------------------------------------- public transformations

std::pair<Derivation, Derivation> split_derivation(const Derivation &d,
                                                   const MultiType &n,
                                                   const MultiType &o,
                                                   SystemId sys) {
  if (!is_many(d))
    fail("only many nodes can be split");
  if (value_typed(sys) && !d.j.subject.is_abs())
    fail("splitting needs a value");
  if (!(mt_union(n, o) == d.multi()))
    fail("parts do not sum to the derivation's type");
  if (sys == SystemId::Need && (n.empty() || o.empty()))
    fail("need derivations of values cannot have the empty type");
  auto [picked, rest] = partition(d.premises, n);
  return {many_or_zero(sys, d.j.subject, std::move(picked)),
          many_or_zero(sys, d.j.subject, std::move(rest))};
}

Derivation merge_derivations(const Derivation &d1, const Derivation &d2,
                             SystemId sys) {
  if (!is_many(d1) || !is_many(d2))
    fail("only many nodes can be merged");
  if (value_typed(sys) && !d1.j.subject.is_abs())
    fail("merging needs a value");
  auto ren = binder_renaming(d2.j.subject, d1.j.subject);
  if (!ren)
    fail("merged derivations type different subjects");
  std::vector<Derivation> ps = d1.premises;
  for (const auto &p : d2.premises)
    ps.push_back(rename_derivation(p, *ren));
  Derivation out = many_or_zero(sys, d1.j.subject, std::move(ps));
  if (out.rule == Rule::Many && d1.rule == Rule::ManyPos)
    out.rule = Rule::ManyPos;
  return out;
}

Derivation linear_substitute(SystemId sys, const Derivation &d_ctx,
                             const EvalContext &occurrence,
                             const Derivation &d_arg) {
  Path p = occurrence.path();
  const Derivation &hole = deriv_at(d_ctx, p);
  if (hole.rule != Rule::Ax)
    fail("occurrence is not typed by an axiom");
  if (!(hole.j.rhs == d_arg.j.rhs))
    fail("argument type " + to_string(d_arg.j.rhs) +
         " does not match the consumed type " + to_string(hole.j.rhs));
  Term t = replace_at(d_ctx.j.subject, p, d_arg.j.subject);
  return replace_deriv(sys, d_ctx, t, p, d_arg);
}

std::pair<Derivation, Derivation> linear_remove(SystemId sys, const Derivation &d,
                                                const EvalContext &occurrence,
                                                const Term &s, const Variable &x) {
  Path p = occurrence.path();
  const Derivation &hole = deriv_at(d, p);
  if (!alpha_eq(hole.j.subject, s))
    fail("removed term is not at the occurrence");
  if (value_typed(sys) && !s.is_abs())
    fail("only values can be removed");
  Term t = replace_at(d.j.subject, p, var(x));
  Derivation rest = replace_deriv(sys, d, t, p, node::ax(sys, x, hole.j.rhs));
  return {hole, std::move(rest)};
}

Derivation subject_reduce(const Derivation &d, const StepWitness &w,
                          SystemId sys) {
  expect_subject(d, w.before);
  if (sys == SystemId::Need && empty_rhs(d))
    fail("need derivations with the empty type carry no cost information");
  const Path &at = w.redex.at;
  const Term &b = subterm_at(w.before, at);
  const Term &a = subterm_at(w.after, at);
  const Derivation &r = deriv_at(d, at);
  Derivation nr = [&] {
    switch (w.kind) {
    case StepKind::Multiplicative: return m_reduce(sys, r, b, a);
    case StepKind::Exponential:
      return e_reduce(sys, r, b, a, relative_occurrence(w.redex));
    case StepKind::Erasing: break;
    }
    fail("erasing steps are not typed");
  }();
  Derivation out = replace_deriv(sys, d, w.after, at, std::move(nr));
  bool mult = w.kind == StepKind::Multiplicative;
  if ((mult && (d.j.m == 0 || out.j.m != d.j.m - 1 || out.j.e != d.j.e)) ||
      (!mult && (d.j.e == 0 || out.j.e != d.j.e - 1 || out.j.m != d.j.m)))
    fail("subject reduction changed the wrong index");
  return out;
}

Derivation subject_expand(const Derivation &d, const StepWitness &w,
                          SystemId sys) {
  expect_subject(d, w.after);
  if (sys == SystemId::Need && empty_rhs(d))
    fail("need derivations with the empty type carry no cost information");
  const Path &at = w.redex.at;
  const Term &b = subterm_at(w.before, at);
  const Derivation &r = deriv_at(d, at);
  Derivation nr = [&] {
    switch (w.kind) {
    case StepKind::Multiplicative: return m_expand(sys, r, b);
    case StepKind::Exponential:
      return e_expand(sys, r, b, relative_occurrence(w.redex));
    case StepKind::Erasing: break;
    }
    fail("erasing steps are not typed");
  }();
  return replace_deriv(sys, d, w.before, at, std::move(nr));
}

Derivation tight_type_normal(const Term &t, SystemId sys) {
  bool ok = sys == SystemId::CbV ? is_normal_cbv(t) : is_normal(t);
  if (!ok)
    fail("term is not a normal form: " + std::to_string(t.size()) + " nodes");
  if (t.is_abs()) {
    switch (sys) {
    case SystemId::CbN: return node::normal(sys, t);
    case SystemId::CbV: return node::many(sys, t, {});
    case SystemId::Need:
    case SystemId::NeedNaive: {
      std::vector<Derivation> one;
      one.push_back(node::normal(sys, t));
      return node::many(sys, t, std::move(one));
    }
    }
  }
  const auto &e = t.as_esub();
  Derivation body = tight_type_normal(e.body, sys);
  switch (sys) {
  case SystemId::CbN:
    return node::es(sys, t, std::move(body), node::many(sys, e.arg, {}));
  case SystemId::CbV:
    return node::es(sys, t, std::move(body), tight_type_normal(e.arg, sys));
  case SystemId::Need: return node::es_gc(sys, t, std::move(body));
  case SystemId::NeedNaive:
    return node::es(sys, t, std::move(body), node::many_zero(sys, e.arg));
  }
  fail("unknown system");
}

BuildResult build_tight(const Term &t, SystemId sys, unsigned fuel) {
  StrategyId s = strategy_for(sys);
  EvalResult ev = evaluate(t, s, fuel);
  BuildResult out;
  out.trace = ev.trace;
  if (!ev.normal())
    return out;
  Derivation d = tight_type_normal(ev.final_term(), sys);
  for (std::size_t i = ev.trace.steps.size(); i-- > 0;)
    d = subject_expand(d, witness(ev.trace, i, s), sys);
  if (!(ev.trace.initial == t)) {
    auto ren = binder_renaming(ev.trace.initial, t);
    if (ren)
      d = rename_derivation(d, *ren);
  }
  out.built = true;
  out.derivation = std::move(d);
  return out;
}

} // namespace lsc
