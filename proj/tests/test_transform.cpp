#include <gtest/gtest.h>

#include "lsc/text.hpp"
#include "lsc/transform.hpp"

using namespace lsc;

namespace {

Term P(const char *s) { return parse_term(s); }
Variable X(const char *s) { return Variable{s, 0}; }

const char *kT0 = "((\\x.\\y.x x) ((\\z.z) (\\w.w))) ((\\z.z) (\\w.w))";
const char *kOmega = "(\\a.a a) (\\a.a a)";

LinearType nrm(Family f) { return LinearType::normal(f); }

bool same_judgement(const Judgement &a, const Judgement &b) {
  return a.m == b.m && a.e == b.e && a.ctx == b.ctx && to_string(a.rhs) == to_string(b.rhs) &&
         alpha_eq(a.subject, b.subject);
}

void expect_ok(const Derivation &d, SystemId sys) {
  CheckReport r = check(d, sys);
  EXPECT_TRUE(r.accepted) << r.str() << "\n" << render(d);
}

// I typed [normal, [normal] -> normal] in cbn
Derivation two_premise_identity() {
  Term id = P("\\x.x");
  Derivation n = node::normal(SystemId::CbN, id);
  Derivation f = node::fun(SystemId::CbN, id, node::ax(SystemId::CbN, X("x"), nrm(Family::CbN)));
  return node::many(SystemId::CbN, id, {n, f});
}

} // namespace

TEST(Split, CbnAlongPremises) {
  Derivation d = two_premise_identity();
  expect_ok(d, SystemId::CbN);
  MultiType n = MultiType::single(nrm(Family::CbN));
  MultiType o = MultiType::single(d.premises[1].linear());
  auto [a, b] = split_derivation(d, n, o, SystemId::CbN);
  expect_ok(a, SystemId::CbN);
  expect_ok(b, SystemId::CbN);
  EXPECT_EQ(a.multi(), n);
  EXPECT_EQ(b.multi(), o);
  EXPECT_EQ(a.j.e + b.j.e, d.j.e);
  Derivation back = merge_derivations(a, b, SystemId::CbN);
  expect_ok(back, SystemId::CbN);
  EXPECT_TRUE(same_judgement(back.j, d.j));
}

TEST(Split, EmptyPart) {
  Derivation d = two_premise_identity();
  auto [a, b] = split_derivation(d, d.multi(), MultiType(Family::CbN), SystemId::CbN);
  EXPECT_TRUE(same_judgement(a.j, d.j));
  EXPECT_TRUE(b.multi().empty());
  EXPECT_EQ(b.j.m + b.j.e, 0u);
  expect_ok(b, SystemId::CbN);
  Derivation u = merge_derivations(d, b, SystemId::CbN);
  EXPECT_TRUE(same_judgement(u.j, d.j));
}

TEST(Split, CbvDoubledValue) {
  Term id = P("\\x.x");
  MultiType zero(Family::CbV);
  Derivation f = node::fun(SystemId::CbV, id, node::ax(SystemId::CbV, X("x"), zero));
  Derivation d = node::many(SystemId::CbV, id, {f, f});
  expect_ok(d, SystemId::CbV);
  EXPECT_EQ(d.j.e, 2u);
  MultiType half = MultiType::single(f.linear());
  auto [a, b] = split_derivation(d, half, half, SystemId::CbV);
  expect_ok(a, SystemId::CbV);
  expect_ok(b, SystemId::CbV);
  EXPECT_EQ(a.j.e, 1u);
  EXPECT_EQ(b.j.e, 1u);
  EXPECT_THROW(split_derivation(d, half, zero, SystemId::CbV), TransformError);
}

TEST(Split, CbvRejectsNonValues) {
  Term t = P("(\\x.x) (\\y.y)");
  Derivation d = node::many(SystemId::CbV, t, {});
  EXPECT_THROW(split_derivation(d, MultiType(Family::CbV), MultiType(Family::CbV),
                                SystemId::CbV),
               TransformError);
}

TEST(Merge, NeedValues) {
  Term id = P("\\x.x");
  Family f = Family::Need;
  Derivation n = node::many(SystemId::Need, id, {node::normal(SystemId::Need, id)});
  Derivation ax = node::ax(SystemId::Need, X("x"), MultiType::single(nrm(f)));
  Derivation arr = node::many(SystemId::Need, id, {node::fun(SystemId::Need, id, ax)});
  Derivation m = merge_derivations(n, arr, SystemId::Need);
  expect_ok(m, SystemId::Need);
  EXPECT_EQ(m.multi().size(), 2u);
  EXPECT_EQ(m.j.e, 1u);
  EXPECT_EQ(to_string(m.j.rhs), "[normal, [normal] -> [normal]]");
  EXPECT_THROW(merge_derivations(n, node::many(SystemId::Need, P("\\y.y y"),
                                               {node::normal(SystemId::Need, P("\\y.y y"))}),
                                 SystemId::Need),
               TransformError);
}

TEST(LinearSubstitution, CbnHole) {
  Term v = P("\\y.u");
  Derivation ax = node::ax(SystemId::CbN, X("x"), nrm(Family::CbN));
  Derivation arg = node::normal(SystemId::CbN, v);
  Derivation r = linear_substitute(SystemId::CbN, ax, EvalContext::hole(ContextTag::CbN), arg);
  expect_ok(r, SystemId::CbN);
  EXPECT_TRUE(alpha_eq(r.j.subject, v));
  EXPECT_TRUE(r.j.ctx.empty());
  EXPECT_EQ(r.j.m + r.j.e, 0u);

  auto [s, hole] = linear_remove(SystemId::CbN, r, EvalContext::hole(ContextTag::CbN), v, X("x"));
  expect_ok(s, SystemId::CbN);
  expect_ok(hole, SystemId::CbN);
  EXPECT_TRUE(same_judgement(s.j, arg.j));
  EXPECT_TRUE(same_judgement(hole.j, ax.j));
  Derivation again = linear_substitute(SystemId::CbN, hole, EvalContext::hole(ContextTag::CbN), s);
  EXPECT_TRUE(same_judgement(again.j, r.j));
}

TEST(LinearSubstitution, CbvKeepsTheRest) {
  // x x with x : [A, B], A = [B] -> [B], B = 0 -> 0; the head copy is
  // replaced by I at A and x keeps [B]
  Term id = P("\\z.z");
  MultiType zero(Family::CbV);
  LinearType b = node::fun(SystemId::CbV, id, node::ax(SystemId::CbV, X("z"), zero)).linear();
  MultiType mb = MultiType::single(b);
  Derivation fa = node::fun(SystemId::CbV, id, node::ax(SystemId::CbV, X("z"), mb));
  Term t = P("x x");
  Derivation head = node::ax(SystemId::CbV, X("x"), MultiType::single(fa.linear()));
  Derivation arg = node::ax(SystemId::CbV, X("x"), mb);
  Derivation d = node::app(SystemId::CbV, t, head, arg);
  expect_ok(d, SystemId::CbV);
  EXPECT_EQ(d.j.ctx.at(X("x")).size(), 2u);
  EvalContext c = context_at(t, Path{Dir::AppFun}, ContextTag::CbV);
  Derivation r = linear_substitute(SystemId::CbV, d, c, node::many(SystemId::CbV, id, {fa}));
  expect_ok(r, SystemId::CbV);
  EXPECT_TRUE(alpha_eq(r.j.subject, P("(\\z.z) x")));
  EXPECT_EQ(r.j.ctx.at(X("x")), mb);
  EXPECT_EQ(r.j.m, d.j.m);
  EXPECT_EQ(r.j.e, d.j.e + 1 - 1);
}

TEST(SubjectReduction, FirstStepsOfT0) {
  for (auto [sys, m, e] : {std::tuple{SystemId::CbN, 5u, 5u}, std::tuple{SystemId::Need, 4u, 4u},
                           std::tuple{SystemId::CbV, 5u, 5u}}) {
    StrategyId s = strategy_for(sys);
    EvalResult r = evaluate(P(kT0), s);
    ASSERT_TRUE(r.normal());
    BuildResult b = build_tight(r.trace.initial, sys);
    ASSERT_TRUE(b.built);
    ASSERT_EQ(b.derivation->j.m, m);
    ASSERT_EQ(b.derivation->j.e, e);
    StepWitness w = witness(r.trace, 0, s);
    ASSERT_EQ(w.kind, StepKind::Multiplicative);
    Derivation d = subject_reduce(*b.derivation, w, sys);
    expect_ok(d, sys);
    EXPECT_EQ(d.j.m, m - 1);
    EXPECT_EQ(d.j.e, e);
    EXPECT_TRUE(alpha_eq(d.j.subject, w.after));
    Derivation back = subject_expand(d, w, sys);
    EXPECT_TRUE(same_judgement(back.j, b.derivation->j));
  }
}

TEST(SubjectReduction, ExponentialStep) {
  Term v = P("\\y.y");
  Term t = P("x[x<-\\y.y]");
  Derivation body = node::ax(SystemId::CbN, X("x"), nrm(Family::CbN));
  Derivation arg = node::many(SystemId::CbN, v, {node::normal(SystemId::CbN, v)});
  Derivation d = node::es(SystemId::CbN, t, body, arg);
  expect_ok(d, SystemId::CbN);
  EXPECT_EQ(d.j.e, 1u);
  EvalResult r = evaluate(t, StrategyId::cbn());
  ASSERT_EQ(r.trace.steps.size(), 1u);
  Derivation red = subject_reduce(d, witness(r.trace, 0, StrategyId::cbn()), SystemId::CbN);
  expect_ok(red, SystemId::CbN);
  EXPECT_EQ(red.j.m + red.j.e, 0u);
}

TEST(SubjectReduction, NeedRefusesEmptyType) {
  Term t = P("(\\x.x) (\\y.y)");
  Derivation d = node::many_zero(SystemId::NeedNaive, t);
  EvalResult r = evaluate(t, StrategyId::need());
  EXPECT_THROW(subject_reduce(d, witness(r.trace, 0, StrategyId::need()), SystemId::Need),
               TransformError);
}

TEST(SubjectExpansion, WholeTraces) {
  for (auto [sys, steps, m, e] :
       {std::tuple{SystemId::CbN, 10u, 5u, 5u}, std::tuple{SystemId::Need, 8u, 4u, 4u}}) {
    StrategyId s = strategy_for(sys);
    EvalResult r = evaluate(P(kT0), s);
    ASSERT_EQ(r.trace.steps.size(), steps);
    Derivation d = tight_type_normal(r.final_term(), sys);
    EXPECT_EQ(d.j.m + d.j.e, 0u);
    for (std::size_t i = steps; i-- > 0;) {
      d = subject_expand(d, witness(r.trace, i, s), sys);
      expect_ok(d, sys);
    }
    EXPECT_EQ(d.j.m, m);
    EXPECT_EQ(d.j.e, e);
    EXPECT_TRUE(is_tight(d, sys));
  }
}

TEST(TightNormal, Examples) {
  Derivation a = tight_type_normal(P("\\x.x"), SystemId::CbN);
  EXPECT_EQ(a.rule, Rule::Normal);
  EXPECT_TRUE(is_tight(a, SystemId::CbN));

  std::string gc = std::string("(\\y.y)[x<-") + kOmega + "]";
  Derivation b = tight_type_normal(P(gc.c_str()), SystemId::Need);
  expect_ok(b, SystemId::Need);
  EXPECT_EQ(b.rule, Rule::EsGc);
  EXPECT_TRUE(is_tight(b, SystemId::Need));

  Derivation c = tight_type_normal(P("(\\z.z)[x<-\\w.w]"), SystemId::CbV);
  expect_ok(c, SystemId::CbV);
  EXPECT_EQ(c.rule, Rule::Es);
  EXPECT_TRUE(c.multi().empty());
  EXPECT_TRUE(c.premises[1].multi().empty());
  EXPECT_TRUE(is_tight(c, SystemId::CbV));

  EXPECT_THROW(tight_type_normal(P(kOmega), SystemId::CbN), TransformError);
  EXPECT_THROW(tight_type_normal(P(gc.c_str()), SystemId::CbV), TransformError);
}

TEST(BuildTight, Examples) {
  BuildResult n = build_tight(P(kT0), SystemId::CbN);
  ASSERT_TRUE(n.built);
  expect_ok(*n.derivation, SystemId::CbN);
  EXPECT_EQ(n.derivation->j.m, 5u);
  EXPECT_EQ(n.derivation->j.e, 5u);
  EXPECT_TRUE(alpha_eq(n.derivation->j.subject, P(kT0)));

  BuildResult d = build_tight(P(kT0), SystemId::Need);
  ASSERT_TRUE(d.built);
  EXPECT_EQ(d.derivation->j.m, 4u);
  EXPECT_EQ(d.derivation->j.e, 4u);
  EXPECT_EQ(d.trace.m_count, 4u);

  std::string k = std::string("(\\x.\\z.z) (") + kOmega + ")";
  BuildResult v = build_tight(P(k.c_str()), SystemId::CbV, 100);
  EXPECT_FALSE(v.built);
  EXPECT_FALSE(v.derivation);
  EXPECT_EQ(v.trace.steps.size(), 100u);
  BuildResult cbn = build_tight(P(k.c_str()), SystemId::CbN, 100);
  ASSERT_TRUE(cbn.built);
  EXPECT_EQ(cbn.derivation->j.m, 1u);
  EXPECT_EQ(cbn.derivation->j.e, 0u);
}

TEST(Systems, Mapping) {
  EXPECT_EQ(system_for(StrategyKind::Need), SystemId::Need);
  EXPECT_EQ(strategy_for(SystemId::CbV).kind, StrategyKind::CbV);
  EXPECT_THROW(strategy_for(SystemId::NeedNaive), std::invalid_argument);
}
