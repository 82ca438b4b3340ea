#include "lsc/derivation.hpp"

#include <functional>

#include "lsc/text.hpp"

namespace lsc {

Family family_of(SystemId s) {
  switch (s) {
  case SystemId::CbN: return Family::CbN;
  case SystemId::CbV: return Family::CbV;
  case SystemId::Need:
  case SystemId::NeedNaive: return Family::Need;
  }
  return Family::CbN;
}

const char *system_name(SystemId s) {
  switch (s) {
  case SystemId::CbN: return "cbn";
  case SystemId::CbV: return "cbv";
  case SystemId::Need: return "need";
  case SystemId::NeedNaive: return "need-naive";
  }
  return "?";
}

std::optional<SystemId> parse_system(const std::string &s) {
  if (s == "cbn") return SystemId::CbN;
  if (s == "cbv") return SystemId::CbV;
  if (s == "need") return SystemId::Need;
  if (s == "need-naive") return SystemId::NeedNaive;
  return std::nullopt;
}

namespace {
const std::pair<Rule, const char *> kRuleNames[] = {
    {Rule::Ax, "ax"},          {Rule::Normal, "normal"}, {Rule::Fun, "fun"},
    {Rule::Many, "many"},      {Rule::App, "app"},       {Rule::AppGc, "app_gc"},
    {Rule::Es, "es"},          {Rule::EsGc, "es_gc"},    {Rule::ManyZero, "many0"},
    {Rule::ManyPos, "many_pos"}};
} // namespace

const char *rule_name(Rule r) {
  for (const auto &[k, n] : kRuleNames)
    if (k == r)
      return n;
  return "?";
}

std::optional<Rule> parse_rule(const std::string &s) {
  for (const auto &[k, n] : kRuleNames)
    if (s == n)
      return k;
  return std::nullopt;
}

std::string to_string(const Rhs &r) {
  return std::visit([](const auto &t) { return to_string(t); }, r);
}

std::size_t Derivation::node_count() const {
  std::size_t n = 1;
  for (const auto &p : premises)
    n += p.node_count();
  return n;
}

std::string deriv_path_str(const DerivPath &p) {
  if (p.empty())
    return "root";
  std::string out;
  for (std::size_t i : p) {
    if (!out.empty())
      out += '.';
    out += std::to_string(i);
  }
  return out;
}

std::string CheckReport::str() const {
  if (accepted)
    return "Accepted";
  return "Rejected at " + deriv_path_str(at) + " (" + rule_name(rule) +
         "): " + clause;
}

const Judgement &conclusion(const Derivation &d) { return d.j; }

// ------------------------------------------------------------------ checking

namespace {

struct Reject {
  std::string clause;
};

bool rule_in(Rule r, SystemId sys) {
  switch (r) {
  case Rule::Ax:
  case Rule::Fun:
  case Rule::App:
  case Rule::Es: return true;
  case Rule::Many: return true;
  case Rule::Normal: return sys != SystemId::CbV;
  case Rule::AppGc:
  case Rule::EsGc: return sys == SystemId::Need;
  case Rule::ManyZero:
  case Rule::ManyPos: return sys == SystemId::NeedNaive;
  }
  return false;
}

std::size_t arity(Rule r) {
  switch (r) {
  case Rule::Ax:
  case Rule::Normal:
  case Rule::ManyZero: return 0;
  case Rule::Fun:
  case Rule::AppGc:
  case Rule::EsGc: return 1;
  case Rule::App:
  case Rule::Es: return 2;
  case Rule::Many:
  case Rule::ManyPos: return SIZE_MAX;
  }
  return 0;
}

void need(bool ok, const std::string &clause) {
  if (!ok)
    throw Reject{clause};
}

bool families_ok(const Rhs &r, Family f) {
  return std::visit([&](const auto &t) { return t.family() == f; }, r);
}

void check_node(const Derivation &d, SystemId sys) {
  Family fam = family_of(sys);
  const Judgement &j = d.j;
  const Term &t = j.subject;
  need(rule_in(d.rule, sys),
       std::string("rule ") + rule_name(d.rule) + " is not part of the " +
           system_name(sys) + " system");
  need(j.ctx.family() == fam && families_ok(j.rhs, fam),
       "types do not belong to the system's grammar");
  bool linear_sys = sys == SystemId::CbN;
  const auto &ps = d.premises;

  auto rhs_multi = [&](const char *what) {
    need(d.has_multi_rhs(), std::string(what) + " must have a multi type");
    return d.multi();
  };
  auto rhs_linear = [&](const char *what) {
    need(!d.has_multi_rhs(), std::string(what) + " must have a linear type");
    return d.linear();
  };
  auto indices = [&](unsigned m, unsigned e) {
    need(j.m == m && j.e == e,
         "indices should be (" + std::to_string(m) + "," + std::to_string(e) +
             ")");
  };
  auto ctx_is = [&](const TypeContext &g) {
    need(j.ctx == g, "context should be {" + to_string(g) + "}");
  };
  auto subject_is = [&](const Derivation &p, const Term &s, const char *what) {
    need(p.j.subject == s, std::string(what) + " subject mismatch");
  };

  switch (d.rule) {
  case Rule::Ax: {
    need(t.is_var(), "ax types a variable");
    const Variable &x = t.as_var().name;
    if (linear_sys) {
      LinearType l = rhs_linear("ax");
      ctx_is(ctx_single(x, MultiType::single(l)));
    } else {
      MultiType m = rhs_multi("ax");
      if (sys == SystemId::Need)
        need(!m.empty(), "ax may not introduce the empty type");
      ctx_is(ctx_single(x, m));
    }
    indices(0, 1);
    break;
  }
  case Rule::Normal: {
    need(t.is_abs(), "normal types an abstraction");
    need(!d.has_multi_rhs() && d.linear().is_normal(), "type must be normal");
    ctx_is(TypeContext(fam));
    indices(0, 0);
    break;
  }
  case Rule::Fun: {
    need(t.is_abs(), "fun types an abstraction");
    const auto &p = ps[0];
    subject_is(p, t.as_abs().body, "premise");
    const Variable &x = t.as_abs().binder;
    LinearType l = rhs_linear("fun");
    need(l.is_arrow(), "fun concludes with an arrow");
    need(l.source() == p.j.ctx.at(x), "arrow source must be the premise's type of " + x.str());
    if (linear_sys) {
      need(!p.has_multi_rhs(), "premise must have a linear type");
      need(l.linear_target() == p.linear(), "arrow target must be the premise type");
    } else {
      need(p.has_multi_rhs(), "premise must have a multi type");
      need(l.multi_target() == p.multi(), "arrow target must be the premise type");
    }
    ctx_is(ctx_restrict(p.j.ctx, x));
    indices(p.j.m, p.j.e);
    break;
  }
  case Rule::Many:
  case Rule::ManyPos: {
    MultiType m = rhs_multi("many");
    if (sys != SystemId::CbN)
      need(t.is_abs(), "many types an abstraction");
    if (sys == SystemId::Need || sys == SystemId::NeedNaive)
      need(!ps.empty(), "many needs at least one premise");
    std::vector<LinearType> elems;
    TypeContext g(fam);
    unsigned mm = 0, ee = 0;
    for (const auto &p : ps) {
      subject_is(p, t, "premise");
      need(!p.has_multi_rhs(), "many premises have linear types");
      elems.push_back(p.linear());
      g = ctx_union(g, p.j.ctx);
      mm += p.j.m;
      ee += p.j.e;
    }
    need(m == MultiType(fam, elems), "multi type must collect the premise types");
    ctx_is(g);
    indices(mm, ee);
    break;
  }
  case Rule::ManyZero: {
    need(d.has_multi_rhs() && d.multi().empty(), "many0 types with the empty type");
    ctx_is(TypeContext(fam));
    indices(0, 0);
    break;
  }
  case Rule::App: {
    need(t.is_app(), "app types an application");
    const auto &f = ps[0];
    const auto &a = ps[1];
    subject_is(f, t.as_app().fun, "left premise");
    subject_is(a, t.as_app().arg, "right premise");
    need(a.has_multi_rhs(), "right premise must have a multi type");
    if (linear_sys) {
      LinearType l = rhs_linear("app");
      need(!f.has_multi_rhs() && f.linear().is_arrow(), "left premise must have an arrow type");
      need(f.linear().source() == a.multi(), "argument type must match the arrow source");
      need(f.linear().linear_target() == l, "type must be the arrow target");
    } else {
      MultiType m = rhs_multi("app");
      need(f.has_multi_rhs() && f.multi().size() == 1 &&
               f.multi().elements()[0].is_arrow(),
           "left premise must have a single arrow type");
      const LinearType &ar = f.multi().elements()[0];
      need(ar.source() == a.multi(), "argument type must match the arrow source");
      need(ar.multi_target() == m, "type must be the arrow target");
      if (sys == SystemId::Need)
        need(!a.multi().empty(), "argument type must be non-empty (use app_gc)");
    }
    ctx_is(ctx_union(f.j.ctx, a.j.ctx));
    indices(f.j.m + a.j.m + 1, f.j.e + a.j.e);
    break;
  }
  case Rule::AppGc: {
    need(t.is_app(), "app_gc types an application");
    const auto &f = ps[0];
    subject_is(f, t.as_app().fun, "premise");
    MultiType m = rhs_multi("app_gc");
    need(f.has_multi_rhs() && f.multi().size() == 1 &&
             f.multi().elements()[0].is_arrow(),
         "premise must have a single arrow type");
    const LinearType &ar = f.multi().elements()[0];
    need(ar.source().empty(), "arrow source must be empty");
    need(ar.multi_target() == m, "type must be the arrow target");
    ctx_is(f.j.ctx);
    indices(f.j.m + 1, f.j.e);
    break;
  }
  case Rule::Es: {
    need(t.is_esub(), "es types an explicit substitution");
    const auto &b = ps[0];
    const auto &a = ps[1];
    const Variable &x = t.as_esub().binder;
    subject_is(b, t.as_esub().body, "left premise");
    subject_is(a, t.as_esub().arg, "right premise");
    need(a.has_multi_rhs(), "right premise must have a multi type");
    need(a.multi() == b.j.ctx.at(x),
         "argument type must be the body's type of " + x.str());
    if (sys == SystemId::Need)
      need(!a.multi().empty(), "argument type must be non-empty (use es_gc)");
    need(d.j.rhs == b.j.rhs, "type must be the body type");
    ctx_is(ctx_union(ctx_restrict(b.j.ctx, x), a.j.ctx));
    indices(b.j.m + a.j.m, b.j.e + a.j.e);
    break;
  }
  case Rule::EsGc: {
    need(t.is_esub(), "es_gc types an explicit substitution");
    const auto &b = ps[0];
    const Variable &x = t.as_esub().binder;
    subject_is(b, t.as_esub().body, "premise");
    need(b.j.ctx.at(x).empty(), "body must give " + x.str() + " the empty type");
    need(d.j.rhs == b.j.rhs, "type must be the body type");
    ctx_is(b.j.ctx);
    indices(b.j.m, b.j.e);
    break;
  }
  }
}

bool check_rec(const Derivation &d, SystemId sys, DerivPath &path,
               CheckReport &out) {
  std::size_t ar = arity(d.rule);
  if (ar != SIZE_MAX && d.premises.size() != ar)
    throw MalformedDerivation("node " + deriv_path_str(path) + " (" +
                              rule_name(d.rule) + ") has " +
                              std::to_string(d.premises.size()) +
                              " premises, expected " + std::to_string(ar));
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    path.push_back(i);
    bool ok = check_rec(d.premises[i], sys, path, out);
    path.pop_back();
    if (!ok)
      return false;
  }
  try {
    check_node(d, sys);
  } catch (const Reject &r) {
    out.accepted = false;
    out.at = path;
    out.rule = d.rule;
    out.clause = r.clause;
    return false;
  } catch (const TypeError &e) {
    out.accepted = false;
    out.at = path;
    out.rule = d.rule;
    out.clause = e.what();
    return false;
  }
  return true;
}

} // namespace

CheckReport check(const Derivation &d, SystemId sys) {
  CheckReport out;
  DerivPath path;
  check_rec(d, sys, path, out);
  return out;
}

std::pair<unsigned, unsigned> recompute_indices(const Derivation &d,
                                                SystemId sys) {
  unsigned m = 0, e = 0;
  for (const auto &p : d.premises) {
    auto [pm, pe] = recompute_indices(p, sys);
    m += pm;
    e += pe;
  }
  switch (d.rule) {
  case Rule::Ax: return {0, 1};
  case Rule::Normal:
  case Rule::ManyZero: return {0, 0};
  case Rule::App:
  case Rule::AppGc: return {m + 1, e};
  default: return {m, e};
  }
}

bool is_tight(const Derivation &d, SystemId sys) {
  if (!d.j.ctx.empty())
    return false;
  switch (sys) {
  case SystemId::CbN:
    return !d.has_multi_rhs() && d.linear().is_normal();
  case SystemId::CbV:
    return d.has_multi_rhs() && d.multi().empty();
  case SystemId::Need:
  case SystemId::NeedNaive:
    return d.has_multi_rhs() &&
           d.multi() == MultiType::single(LinearType::normal(Family::Need));
  }
  return false;
}

// ------------------------------------------------------------ construction

namespace node {

namespace {

Derivation make(Rule r, SystemId sys, const Term &subject, Rhs rhs,
                TypeContext ctx, unsigned m, unsigned e,
                std::vector<Derivation> ps) {
  (void)sys;
  return Derivation{r, Judgement{std::move(ctx), subject, std::move(rhs), m, e},
                    std::move(ps)};
}

} // namespace

Derivation ax(SystemId sys, const Variable &x, const Rhs &type) {
  MultiType m = std::holds_alternative<MultiType>(type)
                    ? std::get<MultiType>(type)
                    : MultiType::single(std::get<LinearType>(type));
  return make(Rule::Ax, sys, var(x), type, ctx_single(x, m), 0, 1, {});
}

Derivation normal(SystemId sys, const Term &abs) {
  return make(Rule::Normal, sys, abs, LinearType::normal(family_of(sys)),
              TypeContext(family_of(sys)), 0, 0, {});
}

Derivation fun(SystemId sys, const Term &abs, Derivation body) {
  const Variable &x = abs.as_abs().binder;
  MultiType src = body.j.ctx.at(x);
  LinearType l = body.has_multi_rhs() ? LinearType::arrow(src, body.multi())
                                      : LinearType::arrow(src, body.linear());
  TypeContext g = ctx_restrict(body.j.ctx, x);
  unsigned m = body.j.m, e = body.j.e;
  std::vector<Derivation> ps;
  ps.push_back(std::move(body));
  return make(Rule::Fun, sys, abs, l, std::move(g), m, e, std::move(ps));
}

Derivation many(SystemId sys, const Term &subject, std::vector<Derivation> ps) {
  Family f = family_of(sys);
  TypeContext g(f);
  std::vector<LinearType> elems;
  unsigned m = 0, e = 0;
  for (const auto &p : ps) {
    if (p.has_multi_rhs())
      throw TypeError("many premise with a multi type");
    elems.push_back(p.linear());
    g = ctx_union(g, p.j.ctx);
    m += p.j.m;
    e += p.j.e;
  }
  return make(Rule::Many, sys, subject, MultiType(f, std::move(elems)),
              std::move(g), m, e, std::move(ps));
}

Derivation many_zero(SystemId sys, const Term &subject) {
  Family f = family_of(sys);
  return make(Rule::ManyZero, sys, subject, MultiType(f), TypeContext(f), 0, 0, {});
}

Derivation app(SystemId sys, const Term &subject, Derivation f, Derivation a) {
  Rhs r = f.has_multi_rhs()
              ? Rhs(f.multi().elements().at(0).multi_target())
              : Rhs(f.linear().linear_target());
  TypeContext g = ctx_union(f.j.ctx, a.j.ctx);
  unsigned m = f.j.m + a.j.m + 1, e = f.j.e + a.j.e;
  std::vector<Derivation> ps;
  ps.push_back(std::move(f));
  ps.push_back(std::move(a));
  return make(Rule::App, sys, subject, std::move(r), std::move(g), m, e,
              std::move(ps));
}

Derivation app_gc(SystemId sys, const Term &subject, Derivation f) {
  Rhs r = f.multi().elements().at(0).multi_target();
  TypeContext g = f.j.ctx;
  unsigned m = f.j.m + 1, e = f.j.e;
  std::vector<Derivation> ps;
  ps.push_back(std::move(f));
  return make(Rule::AppGc, sys, subject, std::move(r), std::move(g), m, e,
              std::move(ps));
}

Derivation es(SystemId sys, const Term &subject, Derivation body, Derivation arg) {
  const Variable &x = subject.as_esub().binder;
  Rhs r = body.j.rhs;
  TypeContext g = ctx_union(ctx_restrict(body.j.ctx, x), arg.j.ctx);
  unsigned m = body.j.m + arg.j.m, e = body.j.e + arg.j.e;
  std::vector<Derivation> ps;
  ps.push_back(std::move(body));
  ps.push_back(std::move(arg));
  return make(Rule::Es, sys, subject, std::move(r), std::move(g), m, e,
              std::move(ps));
}

Derivation es_gc(SystemId sys, const Term &subject, Derivation body) {
  Rhs r = body.j.rhs;
  TypeContext g = body.j.ctx;
  unsigned m = body.j.m, e = body.j.e;
  std::vector<Derivation> ps;
  ps.push_back(std::move(body));
  return make(Rule::EsGc, sys, subject, std::move(r), std::move(g), m, e,
              std::move(ps));
}

Derivation remake(SystemId sys, const Derivation &like, const Term &subject,
                  std::vector<Derivation> ps) {
  switch (like.rule) {
  case Rule::Ax: return ax(sys, subject.as_var().name, like.j.rhs);
  case Rule::Normal: return normal(sys, subject);
  case Rule::ManyZero: return many_zero(sys, subject);
  case Rule::Fun: return fun(sys, subject, std::move(ps.at(0)));
  case Rule::Many:
  case Rule::ManyPos: {
    Derivation d = many(sys, subject, std::move(ps));
    d.rule = like.rule;
    return d;
  }
  case Rule::App: return app(sys, subject, std::move(ps.at(0)), std::move(ps.at(1)));
  case Rule::AppGc: return app_gc(sys, subject, std::move(ps.at(0)));
  case Rule::Es: return es(sys, subject, std::move(ps.at(0)), std::move(ps.at(1)));
  case Rule::EsGc: return es_gc(sys, subject, std::move(ps.at(0)));
  }
  throw std::logic_error("unknown rule");
}

} // namespace node

Derivation rename_derivation(const Derivation &d,
                             const std::map<Variable, Variable> &ren) {
  if (ren.empty())
    return d;
  Derivation out{d.rule, d.j, {}};
  out.j.subject = rename_vars(d.j.subject, ren);
  TypeContext g(d.j.ctx.family());
  for (const auto &[x, m] : d.j.ctx.bindings()) {
    auto it = ren.find(x);
    g.bind(it == ren.end() ? x : it->second, m);
  }
  out.j.ctx = std::move(g);
  out.premises.reserve(d.premises.size());
  for (const auto &p : d.premises)
    out.premises.push_back(rename_derivation(p, ren));
  return out;
}

std::string to_string(const Judgement &j) {
  std::string out = to_string(j.ctx);
  if (!out.empty())
    out += ' ';
  out += "\xE2\x8A\xA2(" + std::to_string(j.m) + "," + std::to_string(j.e) +
         ") " + print_term(j.subject) + " : " + to_string(j.rhs);
  return out;
}

std::string render(const Derivation &d) {
  std::string out;
  std::function<void(const Derivation &, std::size_t)> go =
      [&](const Derivation &n, std::size_t depth) {
        out.append(depth * 2, ' ');
        out += rule_name(n.rule);
        out += "  ";
        out += to_string(n.j);
        out += '\n';
        for (const auto &p : n.premises)
          go(p, depth + 1);
      };
  go(d, 0);
  return out;
}

} // namespace lsc
