#include "lsc/syntax.hpp"

#include <functional>
#include <sstream>

namespace lsc {

std::string Variable::str() const {
  return index == 0 ? name : name + std::to_string(index);
}

Term make_term(TermNode n) {
  Term t;
  t.node_ = std::make_shared<const TermNode>(std::move(n));
  return t;
}

bool Term::is_var() const { return std::holds_alternative<Var>(node_->v); }
bool Term::is_abs() const { return std::holds_alternative<Abs>(node_->v); }
bool Term::is_app() const { return std::holds_alternative<App>(node_->v); }
bool Term::is_esub() const { return std::holds_alternative<ESub>(node_->v); }

const Var &Term::as_var() const { return std::get<Var>(node_->v); }
const Abs &Term::as_abs() const { return std::get<Abs>(node_->v); }
const App &Term::as_app() const { return std::get<App>(node_->v); }
const ESub &Term::as_esub() const { return std::get<ESub>(node_->v); }

std::size_t Term::size() const { return node_ ? node_->size : 0; }

bool operator==(const Term &a, const Term &b) {
  if (a.node_ == b.node_)
    return true;
  if (!a.node_ || !b.node_ || a.size() != b.size())
    return false;
  const auto &x = a.node_->v;
  const auto &y = b.node_->v;
  if (x.index() != y.index())
    return false;
  if (auto *v = std::get_if<Var>(&x))
    return v->name == std::get<Var>(y).name;
  if (auto *l = std::get_if<Abs>(&x)) {
    const auto &r = std::get<Abs>(y);
    return l->binder == r.binder && l->body == r.body;
  }
  if (auto *l = std::get_if<App>(&x)) {
    const auto &r = std::get<App>(y);
    return l->fun == r.fun && l->arg == r.arg;
  }
  const auto &l = std::get<ESub>(x);
  const auto &r = std::get<ESub>(y);
  return l.binder == r.binder && l.body == r.body && l.arg == r.arg;
}

Term var(Variable x) { return make_term({Var{std::move(x)}, 1}); }
Term var(std::string name) { return var(Variable{std::move(name), 0}); }

Term lam(Variable x, Term body) {
  std::size_t n = body.size() + 1;
  return make_term({Abs{std::move(x), std::move(body)}, n});
}
Term lam(std::string x, Term body) {
  return lam(Variable{std::move(x), 0}, std::move(body));
}

Term app(Term f, Term a) {
  std::size_t n = f.size() + a.size() + 1;
  return make_term({App{std::move(f), std::move(a)}, n});
}

Term esub(Term body, Variable x, Term arg) {
  std::size_t n = body.size() + arg.size() + 1;
  return make_term({ESub{std::move(body), std::move(x), std::move(arg)}, n});
}

// ------------------------------------------------------------ free variables

namespace {

void collect_fv(const Term &t, VarSet &bound, VarSet &out) {
  if (t.is_var()) {
    if (!bound.count(t.as_var().name))
      out.insert(t.as_var().name);
  } else if (t.is_abs()) {
    const auto &a = t.as_abs();
    bool fresh = bound.insert(a.binder).second;
    collect_fv(a.body, bound, out);
    if (fresh)
      bound.erase(a.binder);
  } else if (t.is_app()) {
    collect_fv(t.as_app().fun, bound, out);
    collect_fv(t.as_app().arg, bound, out);
  } else {
    const auto &e = t.as_esub();
    collect_fv(e.arg, bound, out);
    bool fresh = bound.insert(e.binder).second;
    collect_fv(e.body, bound, out);
    if (fresh)
      bound.erase(e.binder);
  }
}

void collect_all(const Term &t, VarSet &out) {
  if (t.is_var()) {
    out.insert(t.as_var().name);
  } else if (t.is_abs()) {
    out.insert(t.as_abs().binder);
    collect_all(t.as_abs().body, out);
  } else if (t.is_app()) {
    collect_all(t.as_app().fun, out);
    collect_all(t.as_app().arg, out);
  } else {
    out.insert(t.as_esub().binder);
    collect_all(t.as_esub().body, out);
    collect_all(t.as_esub().arg, out);
  }
}

} // namespace

VarSet fv(const Term &t) {
  VarSet bound, out;
  collect_fv(t, bound, out);
  return out;
}

bool is_free_in(const Variable &x, const Term &t) {
  if (t.is_var())
    return t.as_var().name == x;
  if (t.is_abs())
    return t.as_abs().binder != x && is_free_in(x, t.as_abs().body);
  if (t.is_app())
    return is_free_in(x, t.as_app().fun) || is_free_in(x, t.as_app().arg);
  const auto &e = t.as_esub();
  return is_free_in(x, e.arg) || (e.binder != x && is_free_in(x, e.body));
}

VarSet all_vars(const Term &t) {
  VarSet out;
  collect_all(t, out);
  return out;
}

// ---------------------------------------------------------------- alpha

namespace {

using Levels = std::map<Variable, std::vector<std::size_t>>;

struct AlphaEnv {
  Levels left, right;
  std::size_t depth = 0;
};

std::optional<std::size_t> level_of(const Levels &m, const Variable &x) {
  auto it = m.find(x);
  if (it == m.end() || it->second.empty())
    return std::nullopt;
  return it->second.back();
}

bool alpha_rec(const Term &t, const Term &s, AlphaEnv &env) {
  if (t.node() == s.node() && env.left.empty() && env.right.empty())
    return true;
  if (t.node()->v.index() != s.node()->v.index() || t.size() != s.size())
    return false;
  if (t.is_var()) {
    auto l = level_of(env.left, t.as_var().name);
    auto r = level_of(env.right, s.as_var().name);
    if (l || r)
      return l == r;
    return t.as_var().name == s.as_var().name;
  }
  auto bind = [&](const Variable &a, const Variable &b, const Term &tb,
                  const Term &sb) {
    std::size_t lv = env.depth++;
    env.left[a].push_back(lv);
    env.right[b].push_back(lv);
    bool ok = alpha_rec(tb, sb, env);
    env.left[a].pop_back();
    env.right[b].pop_back();
    if (env.left[a].empty())
      env.left.erase(a);
    if (env.right[b].empty())
      env.right.erase(b);
    --env.depth;
    return ok;
  };
  if (t.is_abs())
    return bind(t.as_abs().binder, s.as_abs().binder, t.as_abs().body,
                s.as_abs().body);
  if (t.is_app())
    return alpha_rec(t.as_app().fun, s.as_app().fun, env) &&
           alpha_rec(t.as_app().arg, s.as_app().arg, env);
  const auto &te = t.as_esub();
  const auto &se = s.as_esub();
  return alpha_rec(te.arg, se.arg, env) &&
         bind(te.binder, se.binder, te.body, se.body);
}

void key_rec(const Term &t, std::map<Variable, std::vector<std::size_t>> &env,
             std::size_t &depth, std::string &out) {
  if (t.is_var()) {
    auto l = level_of(env, t.as_var().name);
    if (l)
      out += "#" + std::to_string(*l);
    else
      out += "'" + t.as_var().name.str();
    out += ' ';
    return;
  }
  auto bind = [&](const Variable &x, const Term &body) {
    env[x].push_back(depth++);
    key_rec(body, env, depth, out);
    env[x].pop_back();
    --depth;
  };
  if (t.is_abs()) {
    out += "L ";
    bind(t.as_abs().binder, t.as_abs().body);
  } else if (t.is_app()) {
    out += "A ";
    key_rec(t.as_app().fun, env, depth, out);
    key_rec(t.as_app().arg, env, depth, out);
  } else {
    out += "S ";
    key_rec(t.as_esub().arg, env, depth, out);
    bind(t.as_esub().binder, t.as_esub().body);
  }
}

} // namespace

bool alpha_eq(const Term &t, const Term &s) {
  AlphaEnv env;
  return alpha_rec(t, s, env);
}

std::string alpha_key(const Term &t) {
  std::map<Variable, std::vector<std::size_t>> env;
  std::size_t depth = 0;
  std::string out;
  key_rec(t, env, depth, out);
  return out;
}

// ---------------------------------------------------------------- renaming

void FreshSupply::reserve(const Term &t) {
  for (const auto &x : all_vars(t))
    used_.insert(x.str());
}

void FreshSupply::reserve(const Variable &x) { used_.insert(x.str()); }

Variable FreshSupply::fresh(const Variable &base) {
  for (;;) {
    Variable v{base.name, ++counter_};
    if (used_.insert(v.str()).second)
      return v;
  }
}

namespace {

using Env = std::map<Variable, Variable>;

Variable lookup(const Env &env, const Variable &x) {
  auto it = env.find(x);
  return it == env.end() ? x : it->second;
}

Term rename_rec(const Term &t, Env &env, VarSet &taken, FreshSupply &supply,
                bool rename_all) {
  if (t.is_var()) {
    Variable x = lookup(env, t.as_var().name);
    return x == t.as_var().name ? t : var(x);
  }
  auto bind = [&](const Variable &x, const Term &body) {
    Variable nx = x;
    if (rename_all || taken.count(x))
      nx = supply.fresh(x);
    taken.insert(nx);
    std::optional<Variable> saved;
    if (auto it = env.find(x); it != env.end())
      saved = it->second;
    env[x] = nx;
    Term nb = rename_rec(body, env, taken, supply, rename_all);
    if (saved)
      env[x] = *saved;
    else
      env.erase(x);
    return std::pair{nx, nb};
  };
  if (t.is_abs()) {
    auto [x, b] = bind(t.as_abs().binder, t.as_abs().body);
    if (x == t.as_abs().binder && b.node() == t.as_abs().body.node())
      return t;
    return lam(x, b);
  }
  if (t.is_app()) {
    Term f = rename_rec(t.as_app().fun, env, taken, supply, rename_all);
    Term a = rename_rec(t.as_app().arg, env, taken, supply, rename_all);
    if (f.node() == t.as_app().fun.node() && a.node() == t.as_app().arg.node())
      return t;
    return app(f, a);
  }
  const auto &e = t.as_esub();
  Term a = rename_rec(e.arg, env, taken, supply, rename_all);
  auto [x, b] = bind(e.binder, e.body);
  if (x == e.binder && b.node() == e.body.node() && a.node() == e.arg.node())
    return t;
  return esub(b, x, a);
}

} // namespace

Term rename_fresh(const Term &t) {
  FreshSupply supply(t);
  return rename_fresh(t, supply);
}

Term rename_fresh(const Term &t, FreshSupply &supply) {
  supply.reserve(t);
  Env env;
  VarSet taken = fv(t);
  return rename_rec(t, env, taken, supply, false);
}

Term copy_fresh(const Term &t, FreshSupply &supply) {
  supply.reserve(t);
  Env env;
  VarSet taken;
  return rename_rec(t, env, taken, supply, true);
}

bool has_distinct_binders(const Term &t) {
  VarSet seen = fv(t);
  bool ok = true;
  std::function<void(const Term &)> walk = [&](const Term &u) {
    if (!ok || u.is_var())
      return;
    if (u.is_abs()) {
      ok = seen.insert(u.as_abs().binder).second && ok;
      walk(u.as_abs().body);
    } else if (u.is_app()) {
      walk(u.as_app().fun);
      walk(u.as_app().arg);
    } else {
      ok = seen.insert(u.as_esub().binder).second && ok;
      walk(u.as_esub().body);
      walk(u.as_esub().arg);
    }
  };
  walk(t);
  return ok;
}

std::optional<std::map<Variable, Variable>> binder_renaming(const Term &from,
                                                            const Term &to) {
  std::map<Variable, Variable> ren;
  std::function<bool(const Term &, const Term &, Env &)> go =
      [&](const Term &a, const Term &b, Env &env) -> bool {
    if (a.node()->v.index() != b.node()->v.index())
      return false;
    if (a.is_var())
      return lookup(env, a.as_var().name) == b.as_var().name;
    auto bind = [&](const Variable &x, const Variable &y, const Term &ab,
                    const Term &bb) {
      if (auto it = ren.find(x); it != ren.end() && it->second != y)
        return false;
      ren[x] = y;
      std::optional<Variable> saved;
      if (auto it = env.find(x); it != env.end())
        saved = it->second;
      env[x] = y;
      bool ok = go(ab, bb, env);
      if (saved)
        env[x] = *saved;
      else
        env.erase(x);
      return ok;
    };
    if (a.is_abs())
      return bind(a.as_abs().binder, b.as_abs().binder, a.as_abs().body,
                  b.as_abs().body);
    if (a.is_app())
      return go(a.as_app().fun, b.as_app().fun, env) &&
             go(a.as_app().arg, b.as_app().arg, env);
    return go(a.as_esub().arg, b.as_esub().arg, env) &&
           bind(a.as_esub().binder, b.as_esub().binder, a.as_esub().body,
                b.as_esub().body);
  };
  Env env;
  if (!go(from, to, env))
    return std::nullopt;
  return ren;
}

Term rename_vars(const Term &t, const std::map<Variable, Variable> &ren) {
  if (ren.empty())
    return t;
  if (t.is_var()) {
    Variable x = lookup(ren, t.as_var().name);
    return x == t.as_var().name ? t : var(x);
  }
  if (t.is_abs())
    return lam(lookup(ren, t.as_abs().binder), rename_vars(t.as_abs().body, ren));
  if (t.is_app())
    return app(rename_vars(t.as_app().fun, ren), rename_vars(t.as_app().arg, ren));
  const auto &e = t.as_esub();
  return esub(rename_vars(e.body, ren), lookup(ren, e.binder),
              rename_vars(e.arg, ren));
}

// ---------------------------------------------------------------- positions

std::string path_str(const Path &p) {
  if (p.empty())
    return "root";
  std::string out;
  for (Dir d : p) {
    if (!out.empty())
      out += '.';
    switch (d) {
    case Dir::AppFun: out += "fun"; break;
    case Dir::AppArg: out += "arg"; break;
    case Dir::EsBody: out += "body"; break;
    case Dir::EsArg: out += "sub"; break;
    }
  }
  return out;
}

namespace {

const Term &child(const Term &t, Dir d) {
  switch (d) {
  case Dir::AppFun:
    if (t.is_app())
      return t.as_app().fun;
    break;
  case Dir::AppArg:
    if (t.is_app())
      return t.as_app().arg;
    break;
  case Dir::EsBody:
    if (t.is_esub())
      return t.as_esub().body;
    break;
  case Dir::EsArg:
    if (t.is_esub())
      return t.as_esub().arg;
    break;
  }
  throw std::out_of_range("path does not match term shape");
}

Term replace_rec(const Term &t, const Path &p, std::size_t i, const Term &sub) {
  if (i == p.size())
    return sub;
  const Term &c = child(t, p[i]);
  Term nc = replace_rec(c, p, i + 1, sub);
  switch (p[i]) {
  case Dir::AppFun: return app(nc, t.as_app().arg);
  case Dir::AppArg: return app(t.as_app().fun, nc);
  case Dir::EsBody: return esub(nc, t.as_esub().binder, t.as_esub().arg);
  case Dir::EsArg: return esub(t.as_esub().body, t.as_esub().binder, nc);
  }
  return t;
}

} // namespace

const Term &subterm_at(const Term &t, const Path &p) {
  const Term *cur = &t;
  for (Dir d : p)
    cur = &child(*cur, d);
  return *cur;
}

Term replace_at(const Term &t, const Path &p, const Term &sub) {
  return replace_rec(t, p, 0, sub);
}

// ---------------------------------------------------------------- contexts

Term SubstContext::plug(Term core) const {
  for (const auto &[x, s] : layers)
    core = esub(std::move(core), x, s);
  return core;
}

std::pair<SubstContext, Term> split_subst_context(const Term &t) {
  std::vector<std::pair<Variable, Term>> outer_first;
  Term cur = t;
  while (cur.is_esub()) {
    outer_first.emplace_back(cur.as_esub().binder, cur.as_esub().arg);
    cur = cur.as_esub().body;
  }
  SubstContext s;
  s.layers.assign(outer_first.rbegin(), outer_first.rend());
  return {s, cur};
}

CaptureError::CaptureError(Variable x)
    : std::runtime_error("context captures free variable " + x.str()),
      var_(std::move(x)) {}

namespace {

void require(bool ok, const char *what) {
  if (!ok)
    throw std::invalid_argument(what);
}

bool allows(ContextTag tag, std::size_t frame) {
  // frame indices follow EvalContextNode::v
  switch (tag) {
  case ContextTag::CbN: return frame == 0 || frame == 1 || frame == 3;
  case ContextTag::Weak:
  case ContextTag::CbV: return frame <= 4;
  case ContextTag::Need: return frame == 0 || frame == 1 || frame == 3 || frame == 5;
  }
  return false;
}

} // namespace

EvalContext EvalContext::hole(ContextTag tag) {
  return EvalContext(std::make_shared<const EvalContextNode>(
      EvalContextNode{tag, EvalContextNode::Hole{}}));
}

EvalContext EvalContext::app_left(EvalContext ctx, Term arg) {
  ContextTag tag = ctx.tag();
  require(allows(tag, 1), "frame not allowed by context grammar");
  return EvalContext(std::make_shared<const EvalContextNode>(EvalContextNode{
      tag, EvalContextNode::AppLeft{std::move(ctx), std::move(arg)}}));
}

EvalContext EvalContext::app_right(Term fun, EvalContext ctx) {
  ContextTag tag = ctx.tag();
  require(allows(tag, 2), "frame not allowed by context grammar");
  return EvalContext(std::make_shared<const EvalContextNode>(EvalContextNode{
      tag, EvalContextNode::AppRight{std::move(fun), std::move(ctx)}}));
}

EvalContext EvalContext::esub_body(EvalContext ctx, Variable binder, Term arg) {
  ContextTag tag = ctx.tag();
  require(allows(tag, 3), "frame not allowed by context grammar");
  return EvalContext(std::make_shared<const EvalContextNode>(
      EvalContextNode{tag, EvalContextNode::ESubBody{std::move(ctx),
                                                     std::move(binder),
                                                     std::move(arg)}}));
}

EvalContext EvalContext::esub_arg(Term body, Variable binder, EvalContext ctx) {
  ContextTag tag = ctx.tag();
  require(allows(tag, 4), "frame not allowed by context grammar");
  return EvalContext(std::make_shared<const EvalContextNode>(
      EvalContextNode{tag, EvalContextNode::ESubArg{std::move(body),
                                                    std::move(binder),
                                                    std::move(ctx)}}));
}

EvalContext EvalContext::need_chain(EvalContext outer, Variable needed,
                                    Variable binder, EvalContext inner) {
  require(outer.tag() == ContextTag::Need && inner.tag() == ContextTag::Need,
          "need chain requires call-by-need contexts");
  require(needed == binder, "need chain must bind the needed variable");
  require(!outer.binders().count(needed),
          "outer context captures the needed variable");
  return EvalContext(std::make_shared<const EvalContextNode>(EvalContextNode{
      ContextTag::Need,
      EvalContextNode::NeedChain{std::move(outer), std::move(needed),
                                 std::move(binder), std::move(inner)}}));
}

ContextTag EvalContext::tag() const { return node_->tag; }

bool EvalContext::is_hole() const {
  return std::holds_alternative<EvalContextNode::Hole>(node_->v);
}

Path EvalContext::path() const {
  Path p;
  const EvalContext *cur = this;
  for (;;) {
    const auto &v = cur->node_->v;
    if (std::holds_alternative<EvalContextNode::Hole>(v))
      return p;
    if (auto *f = std::get_if<EvalContextNode::AppLeft>(&v)) {
      p.push_back(Dir::AppFun);
      cur = &f->ctx;
    } else if (auto *f = std::get_if<EvalContextNode::AppRight>(&v)) {
      p.push_back(Dir::AppArg);
      cur = &f->ctx;
    } else if (auto *f = std::get_if<EvalContextNode::ESubBody>(&v)) {
      p.push_back(Dir::EsBody);
      cur = &f->ctx;
    } else if (auto *f = std::get_if<EvalContextNode::ESubArg>(&v)) {
      p.push_back(Dir::EsArg);
      cur = &f->ctx;
    } else {
      const auto &n = std::get<EvalContextNode::NeedChain>(v);
      p.push_back(Dir::EsArg);
      cur = &n.inner;
    }
  }
}

VarSet EvalContext::binders() const {
  VarSet out;
  const EvalContext *cur = this;
  for (;;) {
    const auto &v = cur->node_->v;
    if (std::holds_alternative<EvalContextNode::Hole>(v))
      return out;
    if (auto *f = std::get_if<EvalContextNode::AppLeft>(&v)) {
      cur = &f->ctx;
    } else if (auto *f = std::get_if<EvalContextNode::AppRight>(&v)) {
      cur = &f->ctx;
    } else if (auto *f = std::get_if<EvalContextNode::ESubBody>(&v)) {
      out.insert(f->binder);
      cur = &f->ctx;
    } else if (auto *f = std::get_if<EvalContextNode::ESubArg>(&v)) {
      cur = &f->ctx;
    } else {
      cur = &std::get<EvalContextNode::NeedChain>(v).inner;
    }
  }
}

Term plug(const EvalContext &ctx, const Term &t) {
  const auto &v = ctx.node().v;
  if (std::holds_alternative<EvalContextNode::Hole>(v))
    return t;
  if (auto *f = std::get_if<EvalContextNode::AppLeft>(&v))
    return app(plug(f->ctx, t), f->arg);
  if (auto *f = std::get_if<EvalContextNode::AppRight>(&v))
    return app(f->fun, plug(f->ctx, t));
  if (auto *f = std::get_if<EvalContextNode::ESubBody>(&v))
    return esub(plug(f->ctx, t), f->binder, f->arg);
  if (auto *f = std::get_if<EvalContextNode::ESubArg>(&v))
    return esub(f->body, f->binder, plug(f->ctx, t));
  const auto &n = std::get<EvalContextNode::NeedChain>(v);
  return esub(plug(n.outer, var(n.needed)), n.binder, plug(n.inner, t));
}

Term plug_capture_free(const EvalContext &ctx, const Term &t) {
  VarSet bound = ctx.binders();
  for (const auto &x : fv(t))
    if (bound.count(x))
      throw CaptureError(x);
  return plug(ctx, t);
}

namespace {

// Head search through call-by-need contexts. Returns the position of the
// needed variable, if the head of t is a variable not bound inside t.
std::optional<Path> need_head(const Term &t, Path &prefix) {
  if (t.is_var())
    return prefix;
  if (t.is_abs())
    return std::nullopt;
  if (t.is_app()) {
    prefix.push_back(Dir::AppFun);
    auto r = need_head(t.as_app().fun, prefix);
    prefix.pop_back();
    return r;
  }
  const auto &e = t.as_esub();
  prefix.push_back(Dir::EsBody);
  auto r = need_head(e.body, prefix);
  prefix.pop_back();
  if (!r)
    return r;
  if (subterm_at(t, Path(r->begin() + prefix.size(), r->end())).as_var().name !=
      e.binder)
    return r;
  prefix.push_back(Dir::EsArg);
  auto inner = need_head(e.arg, prefix);
  prefix.pop_back();
  return inner;
}

} // namespace

std::optional<Path> needed_occurrence(const Term &t) {
  Path prefix;
  return need_head(t, prefix);
}

EvalContext context_at(const Term &t, const Path &p, ContextTag tag) {
  std::function<EvalContext(const Term &, std::size_t)> go =
      [&](const Term &u, std::size_t i) -> EvalContext {
    if (i == p.size())
      return EvalContext::hole(tag);
    switch (p[i]) {
    case Dir::AppFun:
      require(u.is_app(), "path does not match term shape");
      return EvalContext::app_left(go(u.as_app().fun, i + 1), u.as_app().arg);
    case Dir::AppArg:
      require(u.is_app(), "path does not match term shape");
      return EvalContext::app_right(u.as_app().fun, go(u.as_app().arg, i + 1));
    case Dir::EsBody:
      require(u.is_esub(), "path does not match term shape");
      return EvalContext::esub_body(go(u.as_esub().body, i + 1),
                                    u.as_esub().binder, u.as_esub().arg);
    case Dir::EsArg: {
      require(u.is_esub(), "path does not match term shape");
      const auto &e = u.as_esub();
      if (tag != ContextTag::Need)
        return EvalContext::esub_arg(e.body, e.binder, go(e.arg, i + 1));
      auto occ = needed_occurrence(e.body);
      require(occ && subterm_at(e.body, *occ).as_var().name == e.binder,
              "substitution is not needed");
      return EvalContext::need_chain(context_at(e.body, *occ, tag), e.binder,
                                     e.binder, go(e.arg, i + 1));
    }
    }
    throw std::invalid_argument("bad path");
  };
  return go(t, 0);
}

} // namespace lsc
