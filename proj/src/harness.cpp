#include "lsc/harness.hpp"

#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "lsc/document.hpp"
#include "lsc/text.hpp"

namespace lsc {

using nlohmann::json;

// ---------------------------------------------------------------- generator

namespace {

class Gen {
public:
  Gen(std::uint64_t seed, const GenWeights &w, unsigned depth)
      : rng_(seed), w_(w), depth_(depth) {}

  Term term() {
    std::vector<Variable> scope;
    return go(scope, depth_);
  }

private:
  enum Kind { kVar, kAbs, kApp, kEsub };

  Variable fresh() { return Variable{"x" + std::to_string(next_++), 0}; }

  // r is the depth still available below this node.
  Term go(std::vector<Variable> &scope, unsigned r) {
    bool has_scope = !scope.empty();
    if (r == 0)
      return pick_var(scope);
    // Children of a binary node need either a variable in scope or room
    // for an abstraction.
    bool binary = has_scope || r >= 2;
    unsigned abs_w = r == depth_ ? w_.root_abs : w_.abs;
    if (abs_w + (binary ? w_.app + w_.esub : 0) == 0)
      abs_w = 1;
    unsigned weights[4] = {has_scope ? w_.var : 0, abs_w, binary ? w_.app : 0,
                           binary ? w_.esub : 0};
    std::discrete_distribution<int> d(std::begin(weights), std::end(weights));
    switch (d(rng_)) {
    case kVar: return pick_var(scope);
    case kAbs: {
      Variable x = fresh();
      scope.push_back(x);
      Term b = go(scope, r - 1);
      scope.pop_back();
      return lam(x, std::move(b));
    }
    case kApp: {
      Term f = go(scope, r - 1);
      Term a = go(scope, r - 1);
      return app(std::move(f), std::move(a));
    }
    default: {
      Variable x = fresh();
      Term a = go(scope, r - 1);
      scope.push_back(x);
      Term b = go(scope, r - 1);
      scope.pop_back();
      return esub(std::move(b), x, std::move(a));
    }
    }
  }

  Term pick_var(const std::vector<Variable> &scope) {
    std::uniform_int_distribution<std::size_t> d(0, scope.size() - 1);
    return var(scope[d(rng_)]);
  }

  std::mt19937_64 rng_;
  GenWeights w_;
  unsigned depth_;
  unsigned next_ = 0;
};

} // namespace

std::vector<Term> gen_closed_term(const GenConfig &cfg) {
  if (cfg.weights.var == 0 || cfg.weights.abs == 0)
    throw ConfigError("var and abs weights must be positive");
  if (cfg.max_depth == 0)
    throw ConfigError("max depth must be at least 1");
  Gen g(cfg.seed, cfg.weights, cfg.max_depth);
  std::vector<Term> out;
  out.reserve(cfg.count);
  for (unsigned i = 0; i < cfg.count; ++i)
    out.push_back(g.term());
  return out;
}

std::vector<Term> gen_small_cbv_terms(std::uint64_t seed, std::size_t want,
                                      std::size_t max_nodes, unsigned fuel) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.max_depth = 4;
  cfg.weights = GenWeights{3, 3, 3, 1, 1};
  cfg.count = 1;
  Gen g(seed, cfg.weights, cfg.max_depth);
  std::set<std::string> seen;
  std::vector<Term> out;
  for (std::size_t tries = 0; out.size() < want && tries < want * 400; ++tries) {
    Term t = g.term();
    if (t.size() > max_nodes || !seen.insert(alpha_key(t)).second)
      continue;
    if (evaluate(t, StrategyId::cbv(), fuel).normal())
      out.push_back(t);
  }
  return out;
}

// --------------------------------------------------------------- comparison

std::string Outcome::str() const {
  if (!normalized)
    return "diverged";
  return "(" + std::to_string(m) + "," + std::to_string(e) + ")";
}

Outcome outcome_of(const EvalResult &r) {
  if (!r.normal())
    return {};
  return {true, r.trace.m_count, r.trace.e_count};
}

namespace {

bool leq(const Outcome &a, unsigned m, unsigned e) { return a.m <= m && a.e <= e; }

} // namespace

CompareReport compare_strategies(const Term &t, unsigned fuel) {
  CompareReport r;
  r.cbn = outcome_of(evaluate(t, StrategyId::cbn(), fuel));
  r.cbv = outcome_of(evaluate(t, StrategyId::cbv(), fuel));
  r.need = outcome_of(evaluate(t, StrategyId::need(), fuel));
  r.cbn_need_termination_agree = r.cbn.normalized == r.need.normalized;
  if (r.cbv.normalized && r.need.normalized)
    r.need_leq_cbv = leq(r.need, r.cbv.m, r.cbv.e);
  if (r.cbn.normalized) {
    BuildResult b = build_tight(t, SystemId::CbN, fuel);
    if (b.built)
      r.cbn_tight = {b.derivation->j.m, b.derivation->j.e};
  }
  if (r.cbn_tight && r.need.normalized)
    r.cbn_tight_geq_need = leq(r.need, r.cbn_tight->first, r.cbn_tight->second);
  return r;
}

bool oracle_exactness(const Term &t, SystemId sys, unsigned fuel) {
  BuildResult b = build_tight(t, sys, fuel);
  EvalResult ev = evaluate(t, strategy_for(sys), fuel);
  if (!b.built)
    return !ev.normal();
  const Derivation &d = *b.derivation;
  auto [m, e] = recompute_indices(d, sys);
  return ev.normal() && check(d, sys).accepted && is_tight(d, sys) &&
         m == ev.trace.m_count && e == ev.trace.e_count &&
         d.j.m == m && d.j.e == e;
}

// ------------------------------------------------------------------ checker

namespace {

std::size_t count_rule(const Derivation &d, Rule r) {
  std::size_t n = d.rule == r;
  for (const auto &p : d.premises)
    n += count_rule(p, r);
  return n;
}

} // namespace

std::pair<unsigned, unsigned> Checker::indices(const Derivation &d,
                                               SystemId sys) const {
  auto ix = recompute_indices(d, sys);
  if (mut_ == Mutation::AxFree)
    ix.second -= static_cast<unsigned>(count_rule(d, Rule::Ax));
  return ix;
}

CheckReport Checker::check(const Derivation &d, SystemId sys) const {
  CheckReport r = lsc::check(d, sys);
  if (r.accepted && mut_ == Mutation::AxFree) {
    auto [m, e] = indices(d, sys);
    if (m != d.j.m || e != d.j.e)
      return CheckReport{false, {}, d.rule, "indices do not add up"};
  }
  return r;
}

// ----------------------------------------------------------------- analysis

namespace {

constexpr SystemId kSystems[3] = {SystemId::CbN, SystemId::CbV, SystemId::Need};

std::size_t sys_ix(SystemId s) {
  switch (s) {
  case SystemId::CbN: return 0;
  case SystemId::CbV: return 1;
  default: return 2;
  }
}

void for_each_node(const Derivation &d, const std::function<void(const Derivation &)> &f) {
  f(d);
  for (const auto &p : d.premises)
    for_each_node(p, f);
}

bool same_judgement(const Judgement &a, const Judgement &b) {
  return a.ctx == b.ctx && a.subject == b.subject && a.rhs == b.rhs &&
         a.m == b.m && a.e == b.e;
}

std::string pair_str(unsigned m, unsigned e) {
  return "(" + std::to_string(m) + "," + std::to_string(e) + ")";
}

bool normal_for(SystemId s, const Term &t) {
  return s == SystemId::CbV ? is_normal_cbv(t) : is_normal(t);
}

bool tight_rhs(SystemId s, const Rhs &r) {
  switch (s) {
  case SystemId::CbN:
    return std::holds_alternative<LinearType>(r) && std::get<LinearType>(r).is_normal();
  case SystemId::CbV:
    return std::holds_alternative<MultiType>(r) && std::get<MultiType>(r).empty();
  default: {
    if (!std::holds_alternative<MultiType>(r))
      return false;
    const auto &m = std::get<MultiType>(r);
    return m.size() == 1 && m.elements()[0].is_normal();
  }
  }
}

} // namespace

const EvalResult &TermAnalysis::eval(SystemId s) const {
  switch (s) {
  case SystemId::CbN: return cbn;
  case SystemId::CbV: return cbv;
  default: return need;
  }
}

TermAnalysis analyze(const Term &t, unsigned fuel) {
  TermAnalysis a;
  a.term = t;
  a.cbn = evaluate(t, StrategyId::cbn(), fuel);
  a.cbv = evaluate(t, StrategyId::cbv(), fuel);
  a.cbv_rtl = evaluate(t, StrategyId::cbv(CbvPolicy::RightToLeft), fuel);
  a.need = evaluate(t, StrategyId::need(), fuel);
  for (SystemId s : kSystems) {
    std::size_t i = sys_ix(s);
    try {
      BuildResult b = build_tight(t, s, fuel);
      if (b.built)
        a.tight[i] = std::move(b.derivation);
    } catch (const std::exception &e) {
      a.build_error[i] = e.what();
    }
  }
  return a;
}

// ---------------------------------------------------------------- properties

void Property::fail(const Term &t, const std::string &why) { fail(print_term(t), why); }

void Property::fail(const std::string &subject, const std::string &why) {
  ++r_.checked;
  if (r_.failed++ == 0) {
    r_.counterexample = subject;
    r_.detail = why;
  }
}

bool Property::expect(bool ok, const Term &t, const std::string &why) {
  if (ok)
    pass();
  else
    fail(t, why);
  return ok;
}

void check_exactness(const TermAnalysis &a, const Checker &c, Property &p) {
  for (SystemId s : kSystems) {
    std::size_t i = sys_ix(s);
    const EvalResult &ev = a.eval(s);
    std::string tag = std::string(system_name(s)) + ": ";
    if (!a.build_error[i].empty()) {
      p.fail(a.term, tag + a.build_error[i]);
      continue;
    }
    if (!ev.normal()) {
      p.expect(!a.tight[i], a.term, tag + "built a derivation for a diverging term");
      continue;
    }
    if (!a.tight[i]) {
      p.fail(a.term, tag + "no derivation for a normalizing term");
      continue;
    }
    const Derivation &d = *a.tight[i];
    CheckReport rep = c.check(d, s);
    auto [m, e] = c.indices(d, s);
    unsigned tm = ev.trace.m_count, te = ev.trace.e_count;
    if (!rep.accepted)
      p.fail(a.term, tag + rep.str());
    else if (!is_tight(d, s))
      p.fail(a.term, tag + "not tight");
    else if (m != tm || e != te || d.j.m != tm || d.j.e != te)
      p.fail(a.term, tag + "indices " + pair_str(m, e) + " vs trace " + pair_str(tm, te));
    else
      p.pass();
  }
}

void check_step_coherence(const TermAnalysis &a, Property &p) {
  for (SystemId s : kSystems) {
    std::size_t i = sys_ix(s);
    if (!a.tight[i])
      continue;
    std::string tag = std::string(system_name(s)) + ": ";
    try {
      // The builder hands back the input's names; a renamed input is
      // rebuilt from its renamed form so the trace terms line up.
      Trace tr = a.eval(s).trace;
      Derivation d = *a.tight[i];
      if (!(d.j.subject == tr.initial)) {
        BuildResult b = build_tight(tr.initial, s, static_cast<unsigned>(tr.steps.size()) + 1);
        if (!b.built)
          throw TransformError("rebuild on the renamed term failed");
        tr = b.trace;
        d = *b.derivation;
      }
      bool ok = true;
      for (std::size_t k = 0; k < tr.steps.size() && ok; ++k) {
        StepWitness w = witness(tr, k, strategy_for(s));
        Derivation r = subject_reduce(d, w, s);
        bool mult = w.kind == StepKind::Multiplicative;
        unsigned wm = d.j.m - (mult ? 1 : 0), we = d.j.e - (mult ? 0 : 1);
        std::string at = tag + "step " + std::to_string(k) + " (" +
                         step_kind_name(w.kind) + "): ";
        if (r.j.m != wm || r.j.e != we) {
          p.fail(a.term, at + "reduced to " + pair_str(r.j.m, r.j.e));
          ok = false;
        } else if (CheckReport rep = check(r, s); !rep.accepted) {
          p.fail(a.term, at + "reduct " + rep.str());
          ok = false;
        } else if (!same_judgement(subject_expand(r, w, s).j, d.j)) {
          p.fail(a.term, at + "expansion does not restore the judgement");
          ok = false;
        } else {
          p.pass();
        }
        d = std::move(r);
      }
      if (ok)
        p.expect(d.j.m == 0 && d.j.e == 0 && is_tight(d, s), a.term,
                 tag + "final derivation not tight at (0,0)");
    } catch (const std::exception &e) {
      p.fail(a.term, tag + e.what());
    }
  }
}

void check_cross_bounds(const TermAnalysis &a, Property &p) {
  Outcome cbn = outcome_of(a.cbn), cbv = outcome_of(a.cbv), need = outcome_of(a.need);
  // One side out of fuel while the other normalized: settle it with the
  // default fuel so a budget artifact can only turn into a skip.
  if (cbn.normalized != need.normalized) {
    if (!cbn.normalized)
      cbn = outcome_of(evaluate(a.term, StrategyId::cbn(), kDefaultFuel));
    else
      need = outcome_of(evaluate(a.term, StrategyId::need(), kDefaultFuel));
  }
  if (cbv.normalized && !need.normalized)
    need = outcome_of(evaluate(a.term, StrategyId::need(), kDefaultFuel));
  if (!p.expect(cbn.normalized == need.normalized, a.term,
                "cbn " + cbn.str() + " but need " + need.str()))
    return;
  if (cbv.normalized &&
      !p.expect(need.normalized && leq(need, cbv.m, cbv.e), a.term,
                "need " + need.str() + " exceeds cbv " + cbv.str()))
    return;
  if (const auto &d = a.tight[0]; d && need.normalized &&
      !p.expect(leq(need, d->j.m, d->j.e), a.term,
                "cbn tight " + pair_str(d->j.m, d->j.e) + " below need " + need.str()))
    return;
  if (const auto &d = a.tight[1]; d && need.normalized)
    p.expect(leq(need, d->j.m, d->j.e), a.term,
             "cbv tight " + pair_str(d->j.m, d->j.e) + " below need " + need.str());
}

void check_normal_tightness(const TermAnalysis &a, const Checker &c, Property &p) {
  for (SystemId s : kSystems) {
    const EvalResult &ev = a.eval(s);
    if (!ev.normal())
      continue;
    const Term &nf = ev.final_term();
    std::string tag = std::string(system_name(s)) + ": ";
    try {
      Derivation d = tight_type_normal(nf, s);
      CheckReport rep = c.check(d, s);
      auto [m, e] = c.indices(d, s);
      if (!rep.accepted)
        p.fail(nf, tag + rep.str());
      else
        p.expect(is_tight(d, s) && m == 0 && e == 0 && d.j.m == 0 && d.j.e == 0, nf,
                 tag + "not tight at (0,0)");
    } catch (const std::exception &e) {
      p.fail(nf, tag + e.what());
    }
  }
}

void check_diamond_counts(const Term &t, std::size_t max_states, Property &p) {
  auto counts = explore_cbv(t, max_states);
  if (!counts)
    return;
  std::string seen;
  for (auto [m, e] : *counts)
    seen += pair_str(m, e) + " ";
  p.expect(counts->size() == 1, t, "maximal sequences end with " + seen);
}

Term example_t0() {
  return parse_term("((\\x.\\y.x x) ((\\z.z) (\\w.w))) ((\\z.z) (\\w.w))");
}

// -------------------------------------------------------------- suite parts

namespace {

// plug_capture_free refuses exactly when a context binder would capture a
// free variable of s, and otherwise keeps every free variable of s.
void capture_free(const EvalContext &c, const Term &s, const Term &t, Property &p) {
  VarSet bs = c.binders(), fs = fv(s);
  bool clash = false;
  for (const auto &x : fs)
    clash = clash || bs.count(x);
  try {
    VarSet out = fv(plug_capture_free(c, s));
    bool kept = true;
    for (const auto &x : fs)
      kept = kept && out.count(x);
    p.expect(!clash && kept, t, "plugging " + print_term(s) + " lost a free variable");
  } catch (const CaptureError &e) {
    p.expect(clash && bs.count(e.variable()) && fs.count(e.variable()), t,
             "capture reported for " + e.variable().str());
  }
}

void syntax_props(const std::vector<Term> &corpus, Property &roundtrip,
                  Property &rename, Property &plug_p, Property &chain,
                  Property &capture) {
  for (const auto &t : corpus) {
    std::string s = print_term(t);
    try {
      roundtrip.expect(alpha_eq(parse_term(s), t), t, "reparse differs");
    } catch (const std::exception &e) {
      roundtrip.fail(s, e.what());
    }
    Term r = rename_fresh(t);
    rename.expect(alpha_eq(rename_fresh(r), r) && alpha_eq(r, t) &&
                      has_distinct_binders(r),
                  t, "rename_fresh not idempotent");
    auto [sc, core] = split_subst_context(t);
    chain.expect(alpha_eq(sc.plug(core), t), t, "substitution chain does not replug");
    for (StrategyKind k : {StrategyKind::CbN, StrategyKind::CbV, StrategyKind::Need}) {
      for (const auto &rx : redexes(t, k)) {
        const Path &pos = rx.kind == StepKind::Exponential ? rx.occurrence : rx.at;
        EvalContext c = context_at(t, pos, context_tag(k));
        plug_p.expect(alpha_eq(plug(c, subterm_at(t, pos)), t), t,
                      "plug after decomposition differs at " + path_str(pos));
        capture_free(c, subterm_at(t, pos), t, capture);
        capture_free(c, var(Variable{"free", 0}), t, capture);
        for (const auto &x : c.binders())
          capture_free(c, app(var(x), var(Variable{"free", 0})), t, capture);
      }
    }
  }
}

bool same_redex(const Redex &a, const Redex &b) {
  return a.kind == b.kind && a.at == b.at && a.occurrence == b.occurrence;
}

void evaluator_props(const TermAnalysis &a, Property &charac, Property &det,
                     Property &subsys, Property &gc) {
  const EvalResult *runs[] = {&a.cbn, &a.cbv, &a.cbv_rtl, &a.need};
  StrategyId ids[] = {StrategyId::cbn(), StrategyId::cbv(),
                      StrategyId::cbv(CbvPolicy::RightToLeft), StrategyId::need()};
  for (int r = 0; r < 4; ++r) {
    const Trace &tr = runs[r]->trace;
    StrategyId s = ids[r];
    for (std::size_t i = 0; i <= tr.steps.size(); ++i) {
      const Term &u = i == 0 ? tr.initial : tr.steps[i - 1].result;
      auto found = find_redex(u, s);
      bool nf = s.kind == StrategyKind::CbV ? is_normal_cbv(u) : is_normal(u);
      charac.expect(found.has_value() != nf, u,
                    s.str() + ": normal predicate disagrees with the step function");
      if (s.kind == StrategyKind::CbV) {
        if (r == 2)
          continue;
        // the scan that drives CbV agrees with the grammar enumeration
        auto all = redexes(u, s.kind);
        det.expect(all.empty() == !found && (!found || same_redex(all[0], found->redex)),
                   u, "cbv-ltr choice differs from the first grammar redex");
        continue;
      }
      auto all = redexes(u, s.kind);
      bool ok = all.size() == (found ? 1u : 0u) &&
                (!found || same_redex(all[0], found->redex));
      det.expect(ok, u, s.str() + ": " + std::to_string(all.size()) +
                            " redexes in the grammar");
      if (s.kind == StrategyKind::Need && i < tr.steps.size()) {
        const Term &next = tr.steps[i].result;
        bool in_cbv = false;
        for (const auto &succ : all_successors_cbv(u))
          in_cbv = in_cbv || (succ.kind == tr.steps[i].kind && alpha_eq(succ.term, next));
        subsys.expect(in_cbv, u, "need step is not a cbv step");
      }
    }
  }
  // gc postponement: gc at the end versus gc interleaved eagerly.
  for (int r : {0, 1, 3}) {
    if (!runs[r]->normal())
      continue;
    StrategyId s = ids[r];
    Term late = gc_normalize(runs[r]->final_term(), s);
    EvalResult eager = evaluate(a.term, s, runs[r]->trace.steps.size() * 2 + 10,
                                EvalOptions{true});
    if (!eager.normal()) {
      gc.fail(a.term, s.str() + ": eager gc run did not normalize");
      continue;
    }
    Term e = gc_normalize(eager.final_term(), s);
    gc.expect(alpha_eq(late, e), a.term,
              s.str() + ": " + print_term(late) + " vs " + print_term(e));
    // and under a coin-flip schedule, same normal form and same m/e counts
    std::mt19937_64 coin(std::hash<std::string>{}(alpha_key(a.term)) + r);
    Term u = runs[r]->trace.initial;
    unsigned m = 0, ex = 0, budget = runs[r]->trace.steps.size() * 2 + 10;
    bool stopped = false;
    while (budget-- > 0) {
      if (coin() % 2)
        if (auto g = gc_step(u, s)) {
          u = *g;
          continue;
        }
      auto st = step(u, s);
      if (!st) {
        stopped = true;
        break;
      }
      u = st->first;
      (st->second == StepKind::Multiplicative ? m : ex) += 1;
    }
    Term mixed = gc_normalize(u, s);
    gc.expect(stopped && alpha_eq(late, mixed) && m == runs[r]->trace.m_count &&
                  ex == runs[r]->trace.e_count,
              a.term,
              s.str() + ": random gc schedule ends in " + print_term(mixed) + " " +
                  pair_str(m, ex));
  }
}

void diamond_local(const Term &t, Property &p) {
  auto succ = all_successors_cbv(t);
  for (std::size_t i = 0; i < succ.size(); ++i)
    for (std::size_t j = i + 1; j < succ.size(); ++j) {
      if (alpha_eq(succ[i].term, succ[j].term))
        continue;
      auto from_i = all_successors_cbv(succ[i].term);
      auto from_j = all_successors_cbv(succ[j].term);
      bool closed = false;
      for (const auto &a : from_i)
        for (const auto &b : from_j)
          closed = closed || (a.kind == succ[j].kind && b.kind == succ[i].kind &&
                              alpha_eq(a.term, b.term));
      p.expect(closed, t, "peak " + print_term(succ[i].term) + " / " +
                              print_term(succ[j].term) + " does not close");
    }
}

// Derivations of a closed normal form other than the tight one.
std::vector<Derivation> variant_normal(const Term &nf, SystemId s) {
  if (nf.is_esub()) {
    const auto &e = nf.as_esub();
    std::vector<Derivation> out;
    for (auto &b : variant_normal(e.body, s)) {
      switch (s) {
      case SystemId::CbN:
        out.push_back(node::es(s, nf, std::move(b), node::many(s, e.arg, {})));
        break;
      case SystemId::CbV:
        out.push_back(node::es(s, nf, std::move(b), tight_type_normal(e.arg, s)));
        break;
      default: out.push_back(node::es_gc(s, nf, std::move(b))); break;
      }
    }
    return out;
  }
  const auto &ab = nf.as_abs();
  const Term &u = ab.body;
  bool id = u.is_var() && u.as_var().name == ab.binder;
  std::vector<Derivation> out;
  Family f = family_of(s);
  switch (s) {
  case SystemId::CbN:
    if (id)
      out.push_back(node::fun(s, nf, node::ax(s, ab.binder, LinearType::normal(f))));
    if (u.is_abs())
      out.push_back(node::fun(s, nf, node::normal(s, u)));
    break;
  case SystemId::CbV: {
    std::optional<Derivation> fn;
    if (id)
      fn = node::fun(s, nf, node::ax(s, ab.binder, MultiType(f)));
    else if (u.is_abs())
      fn = node::fun(s, nf, node::many(s, u, {}));
    if (fn) {
      Derivation one = node::many(s, nf, {*fn});
      out.push_back(merge_derivations(one, one, s));
      out.push_back(std::move(one));
    }
    break;
  }
  default: {
    Derivation t = tight_type_normal(nf, s);
    out.push_back(merge_derivations(t, t, s));
    if (id) {
      MultiType n1 = MultiType::single(LinearType::normal(f));
      Derivation one = node::many(s, nf, {node::fun(s, nf, node::ax(s, ab.binder, n1))});
      out.push_back(merge_derivations(t, one, s));
      out.push_back(std::move(one));
    }
    break;
  }
  }
  return out;
}

void minimality(const TermAnalysis &a, Property &p) {
  for (SystemId s : kSystems) {
    std::size_t i = sys_ix(s);
    const EvalResult &ev = a.eval(s);
    if (!a.tight[i] || !ev.normal())
      continue;
    const Trace &tr = ev.trace;
    std::string tag = std::string(system_name(s)) + ": ";
    try {
      for (Derivation d : variant_normal(tr.last(), s)) {
        for (std::size_t k = tr.steps.size(); k-- > 0;)
          d = subject_expand(d, witness(tr, k, strategy_for(s)), s);
        CheckReport rep = check(d, s);
        if (!rep.accepted) {
          p.fail(a.term, tag + "variant " + rep.str());
          continue;
        }
        const Judgement &tj = a.tight[i]->j;
        p.expect(d.j.m >= tj.m && d.j.e >= tj.e, a.term,
                 tag + "variant " + to_string(d.j.rhs) + " at " + pair_str(d.j.m, d.j.e) +
                     " below tight " + pair_str(tj.m, tj.e));
      }
    } catch (const std::exception &e) {
      p.fail(a.term, tag + e.what());
    }
  }
}

void split_merge(const TermAnalysis &a, Property &p) {
  for (SystemId s : kSystems) {
    std::size_t i = sys_ix(s);
    if (!a.tight[i])
      continue;
    std::string tag = std::string(system_name(s)) + ": ";
    for_each_node(*a.tight[i], [&](const Derivation &d) {
      if (d.rule != Rule::Many)
        return;
      std::size_t min = s == SystemId::Need ? 2 : 1;
      if (d.premises.size() < min)
        return;
      MultiType n = MultiType::single(d.premises[0].linear());
      auto o = d.multi().minus(n);
      try {
        auto [l, r] = split_derivation(d, n, *o, s);
        bool ok = check(l, s).accepted && check(r, s).accepted &&
                  l.j.m + r.j.m == d.j.m && l.j.e + r.j.e == d.j.e &&
                  same_judgement(merge_derivations(l, r, s).j, d.j);
        p.expect(ok, d.j.subject, tag + "split/merge does not restore " + to_string(d.j));
      } catch (const std::exception &e) {
        p.fail(d.j.subject, tag + e.what());
      }
    });
  }
}

void derivation_props(const TermAnalysis &a, const Checker &c, Property &recompute,
                      Property &domain, Property &needed, Property &nf_typing,
                      Property &doc) {
  for (SystemId s : kSystems) {
    std::size_t i = sys_ix(s);
    if (!a.tight[i])
      continue;
    const Derivation &root = *a.tight[i];
    for_each_node(root, [&](const Derivation &d) {
      auto [m, e] = c.indices(d, s);
      recompute.expect(m == d.j.m && e == d.j.e, d.j.subject,
                       std::string(system_name(s)) + ": annotated " +
                           pair_str(d.j.m, d.j.e) + " recomputed " + pair_str(m, e));
      VarSet fvs = fv(d.j.subject);
      bool sub = true;
      for (const auto &x : d.j.ctx.domain())
        sub = sub && fvs.count(x);
      domain.expect(sub, d.j.subject, "context mentions a variable not free in the subject");
      if (s == SystemId::Need && !(d.has_multi_rhs() && d.multi().empty())) {
        if (auto occ = needed_occurrence(d.j.subject)) {
          const Variable &x = subterm_at(d.j.subject, *occ).as_var().name;
          if (is_free_in(x, d.j.subject))
            needed.expect(d.j.ctx.contains(x), d.j.subject,
                          "needed variable " + x.str() + " is untyped");
        }
      }
      if (normal_for(s, d.j.subject) && tight_rhs(s, d.j.rhs))
        nf_typing.expect(d.j.ctx.empty() && d.j.m == 0 && d.j.e == 0, d.j.subject,
                         std::string(system_name(s)) + ": normal form typed at " +
                             pair_str(d.j.m, d.j.e));
    });
    try {
      DerivationDocument back =
          parse_document(to_json(DerivationDocument{s, root}).dump());
      bool ok = back.system == s &&
                check(back.root, s).accepted == check(root, s).accepted &&
                is_tight(back.root, s) == is_tight(root, s) &&
                recompute_indices(back.root, s) == recompute_indices(root, s) &&
                alpha_eq(back.root.j.subject, root.j.subject);
      doc.expect(ok, a.term, std::string(system_name(s)) + ": document round-trip differs");
    } catch (const std::exception &e) {
      doc.fail(a.term, e.what());
    }
  }
}

// -------------------------------------------------------------- type laws

class TypeGen {
public:
  TypeGen(std::uint64_t seed, Family f) : rng_(seed), f_(f) {}

  LinearType linear(unsigned depth) {
    bool can_normal = f_ != Family::CbV;
    std::uniform_int_distribution<int> d(0, 2);
    if (depth == 0 || (can_normal && d(rng_) == 0)) {
      if (can_normal)
        return LinearType::normal(f_);
      return LinearType::arrow(MultiType(f_), MultiType(f_));
    }
    MultiType src = multi(depth - 1);
    if (f_ == Family::CbN)
      return LinearType::arrow(src, linear(depth - 1));
    return LinearType::arrow(src, multi(depth - 1));
  }

  MultiType multi(unsigned depth) {
    std::uniform_int_distribution<int> n(0, 2);
    std::vector<LinearType> es;
    for (int k = n(rng_); k > 0; --k)
      es.push_back(linear(depth));
    return MultiType(f_, std::move(es));
  }

private:
  std::mt19937_64 rng_;
  Family f_;
};

void type_laws(std::uint64_t seed, unsigned samples, Property &p) {
  for (Family f : {Family::CbN, Family::CbV, Family::Need}) {
    TypeGen g(seed ^ (0x9e37u + static_cast<unsigned>(f)), f);
    Variable x{"x", 0}, y{"y", 0};
    for (unsigned i = 0; i < samples; ++i) {
      MultiType a = g.multi(2), b = g.multi(2), c = g.multi(2);
      std::string subj = to_string(a) + " ; " + to_string(b) + " ; " + to_string(c);
      bool ok = mt_union(a, mt_union(b, c)) == mt_union(mt_union(a, b), c) &&
                mt_union(a, b) == mt_union(b, a) && mt_union(a, MultiType(f)) == a;
      TypeContext g1(f), g2(f);
      g1.bind(x, a);
      g1.bind(y, b);
      g2.bind(x, c);
      TypeContext u = ctx_union(g1, g2);
      ok = ok && u.at(x) == mt_union(a, c) && u.at(y) == b;
      LinearType l1 = g.linear(2), l2 = g.linear(2), l3 = g.linear(2);
      auto c12 = canonical_order(l1, l2), c21 = canonical_order(l2, l1);
      ok = ok && (c12 < 0) == (c21 > 0) && (c12 == 0) == (l1 == l2);
      if (canonical_order(l1, l2) < 0 && canonical_order(l2, l3) < 0)
        ok = ok && canonical_order(l1, l3) < 0;
      if (ok)
        p.pass();
      else
        p.fail(subj, std::string(family_name(f)) + ": a union or order law fails");
    }
  }
}

// ----------------------------------------------------------- worked examples

struct Fixture {
  const char *file;
  SystemId sys;
  bool accepted;
  unsigned m, e;
};

void worked_examples(const SuiteOptions &o, const Checker &c, Property &p) {
  Term t0 = example_t0();
  struct Want {
    StrategyId s;
    unsigned m, e;
  } wants[] = {{StrategyId::cbn(), 5, 5},
               {StrategyId::cbv(), 5, 5},
               {StrategyId::cbv(CbvPolicy::RightToLeft), 5, 5},
               {StrategyId::need(), 4, 4}};
  for (const auto &w : wants) {
    EvalResult r = evaluate(t0, w.s, o.fuel);
    p.expect(r.normal() && r.trace.m_count == w.m && r.trace.e_count == w.e, t0,
             w.s.str() + " counts " + pair_str(r.trace.m_count, r.trace.e_count));
  }
  for (SystemId s : kSystems)
    p.expect(oracle_exactness(t0, s, o.fuel), t0,
             std::string(system_name(s)) + ": builder is not exact");
  if (o.fixtures_dir.empty())
    return;
  const Fixture fx[] = {
      {"theta_cbn.json", SystemId::CbN, true, 5, 5},
      {"phi_cbv.json", SystemId::CbV, true, 5, 5},
      {"phi_need.json", SystemId::Need, true, 4, 4},
      {"naive_counterexample.json", SystemId::NeedNaive, true, 2, 0},
      {"naive_counterexample.json", SystemId::Need, false, 2, 0},
  };
  for (const auto &f : fx) {
    std::string path = o.fixtures_dir + "/" + f.file;
    try {
      std::ifstream in(path);
      if (!in)
        throw DocumentError("cannot open " + path);
      std::stringstream ss;
      ss << in.rdbuf();
      DerivationDocument d = parse_document(ss.str());
      CheckReport rep = c.check(d.root, f.sys);
      auto [m, e] = c.indices(d.root, f.sys);
      bool ok = rep.accepted == f.accepted && m == f.m && e == f.e &&
                (!f.accepted || is_tight(d.root, f.sys));
      if (ok)
        p.pass();
      else
        p.fail(f.file, std::string(system_name(f.sys)) + ": " + rep.str() + " " +
                           pair_str(m, e));
    } catch (const std::exception &e) {
      p.fail(f.file, e.what());
    }
  }
}

} // namespace

// -------------------------------------------------------------------- suite

bool SuiteReport::all_passed() const {
  for (const auto &p : properties)
    if (!p.passed())
      return false;
  return true;
}

std::string SuiteReport::text() const {
  std::ostringstream os;
  os << "corpus " << corpus << " terms (seed " << config.seed << ", depth "
     << config.max_depth << ", fuel " << options.fuel << ")";
  if (options.mutation != Mutation::None)
    os << " [mutated checker]";
  os << "\nnormalizing: cbn " << normalizing[0] << ", cbv " << normalizing[1]
     << ", need " << normalizing[2] << "; diamond corpus " << diamond_corpus << "\n";
  std::size_t bad = 0;
  for (const auto &p : properties) {
    os << (p.passed() ? "pass " : "FAIL ") << p.name << "  " << (p.checked - p.failed)
       << "/" << p.checked << "\n";
    if (!p.passed()) {
      ++bad;
      os << "     counterexample: " << p.counterexample << "\n"
         << "     " << p.detail << "\n";
    }
  }
  os << (properties.size() - bad) << " of " << properties.size()
     << " properties passed\n";
  return os.str();
}

json SuiteReport::json() const {
  nlohmann::json props = nlohmann::json::array();
  for (const auto &p : properties) {
    nlohmann::json j{{"name", p.name},
                     {"checked", p.checked},
                     {"failed", p.failed},
                     {"passed", p.passed()}};
    if (!p.passed()) {
      j["counterexample"] = p.counterexample;
      j["detail"] = p.detail;
    }
    props.push_back(std::move(j));
  }
  return nlohmann::json{
      {"seed", config.seed},
      {"count", config.count},
      {"max_depth", config.max_depth},
      {"fuel", options.fuel},
      {"mutation", options.mutation != Mutation::None},
      {"corpus", corpus},
      {"normalizing", {{"cbn", normalizing[0]}, {"cbv", normalizing[1]}, {"need", normalizing[2]}}},
      {"diamond_corpus", diamond_corpus},
      {"all_passed", all_passed()},
      {"properties", std::move(props)}};
}

SuiteReport run_property_suite(const GenConfig &cfg, const SuiteOptions &opts) {
  SuiteReport rep;
  rep.config = cfg;
  rep.options = opts;
  Checker c(opts.mutation);
  std::vector<Term> corpus = gen_closed_term(cfg);
  // Fixed terms ride along with the generated ones.
  corpus.push_back(example_t0());
  corpus.push_back(parse_term("\\x.x"));
  corpus.push_back(parse_term("(\\x.x) (\\y.y)"));
  corpus.push_back(parse_term("(\\x.\\z.z) ((\\a.a a) (\\a.a a))"));
  corpus.push_back(parse_term("(\\y.y)[x<-(\\a.a a) (\\a.a a)]"));
  corpus.push_back(parse_term("(\\z.z)[x<-\\w.w]"));
  rep.corpus = corpus.size();

  Property worked("worked examples"), roundtrip("parse/print round-trip"),
      rename("rename idempotence"), plugp("plug after decomposition"),
      chain("substitution chain replug"), capture("capture-free plugging"), charac("closed normal forms"),
      det("determinism and dual route"), subsys("need steps are cbv steps"),
      gc("gc postponement"), diamond("cbv local diamond"),
      counts("cbv unique counts"), laws("type laws"), exact("exactness"),
      coherence("step coherence"), cross("cross-strategy bounds"),
      nft("normal forms tightly typed"), recompute("indices recompute"),
      domain("context domain within free variables"),
      needed("needed variable typed"), nftyping("normal form typing"),
      minimal("minimality"), splitp("split and merge inverse"),
      doc("document round-trip");

  worked_examples(opts, c, worked);
  syntax_props(corpus, roundtrip, rename, plugp, chain, capture);
  for (const auto &t : corpus) {
    TermAnalysis a = analyze(t, opts.fuel);
    for (SystemId s : kSystems)
      rep.normalizing[sys_ix(s)] += a.eval(s).normal();
    evaluator_props(a, charac, det, subsys, gc);
    check_exactness(a, c, exact);
    check_step_coherence(a, coherence);
    check_cross_bounds(a, cross);
    check_normal_tightness(a, c, nft);
    derivation_props(a, c, recompute, domain, needed, nftyping, doc);
    minimality(a, minimal);
    split_merge(a, splitp);
  }
  if (cfg.count > 0) {
    std::vector<Term> small = gen_small_cbv_terms(cfg.seed, opts.diamond_terms,
                                                  opts.diamond_max_nodes, opts.fuel);
    rep.diamond_corpus = small.size();
    for (const auto &t : small) {
      check_diamond_counts(t, opts.diamond_max_states, counts);
      diamond_local(t, diamond);
      for (const auto &st : evaluate(t, StrategyId::cbv(), opts.fuel).trace.steps)
        diamond_local(st.result, diamond);
    }
  }
  type_laws(cfg.seed, opts.type_law_samples, laws);

  for (const Property *p : {&worked, &roundtrip, &rename, &plugp, &chain, &capture, &charac, &det,
                            &subsys, &gc, &diamond, &counts, &laws, &exact, &coherence,
                            &cross, &nft, &recompute, &domain, &needed, &nftyping,
                            &minimal, &splitp, &doc})
    rep.properties.push_back(p->result());
  return rep;
}

} // namespace lsc
