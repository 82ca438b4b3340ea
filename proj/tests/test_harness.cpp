#include <gtest/gtest.h>

#include "lsc/harness.hpp"
#include "lsc/text.hpp"

using namespace lsc;

namespace {

Term P(const char *s) { return parse_term(s); }
const char *kOmega = "(\\a.a a) (\\a.a a)";

bool has_app(const Term &t) {
  if (t.is_var())
    return false;
  if (t.is_abs())
    return has_app(t.as_abs().body);
  if (t.is_app())
    return true;
  return has_app(t.as_esub().body) || has_app(t.as_esub().arg);
}

unsigned depth(const Term &t) {
  if (t.is_var())
    return 0;
  if (t.is_abs())
    return 1 + depth(t.as_abs().body);
  if (t.is_app())
    return 1 + std::max(depth(t.as_app().fun), depth(t.as_app().arg));
  return 1 + std::max(depth(t.as_esub().body), depth(t.as_esub().arg));
}

const PropertyResult *find(const SuiteReport &r, const std::string &name) {
  for (const auto &p : r.properties)
    if (p.name == name)
      return &p;
  return nullptr;
}

} // namespace

TEST(Generator, Deterministic) {
  GenConfig c;
  c.seed = 7;
  c.count = 3;
  auto a = gen_closed_term(c), b = gen_closed_term(c);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(print_term(a[i]), print_term(b[i]));
  c.seed = 8;
  auto d = gen_closed_term(c);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    differs = differs || print_term(a[i]) != print_term(d[i]);
  EXPECT_TRUE(differs);
}

TEST(Generator, ClosedAndShallow) {
  GenConfig c;
  c.count = 200;
  c.max_depth = 5;
  for (const auto &t : gen_closed_term(c)) {
    EXPECT_TRUE(fv(t).empty()) << print_term(t);
    EXPECT_LE(depth(t), 5u) << print_term(t);
  }
}

TEST(Generator, ZeroAppWeight) {
  GenConfig c;
  c.count = 100;
  c.weights.app = 0;
  for (const auto &t : gen_closed_term(c))
    EXPECT_FALSE(has_app(t)) << print_term(t);
}

TEST(Generator, RejectsBadConfig) {
  GenConfig c;
  c.max_depth = 0;
  EXPECT_THROW(gen_closed_term(c), ConfigError);
  GenConfig w;
  w.weights = GenWeights{0, 0, 0, 0, 0};
  EXPECT_THROW(gen_closed_term(w), ConfigError);
}

TEST(Generator, SmallCbvTerms) {
  auto ts = gen_small_cbv_terms(3, 40, 12, 200);
  EXPECT_EQ(ts.size(), 40u);
  for (const auto &t : ts) {
    EXPECT_LE(t.size(), 12u);
    EXPECT_TRUE(fv(t).empty());
    EXPECT_TRUE(evaluate(t, StrategyId::cbv(), 200).normal());
  }
}

TEST(Compare, T0) {
  CompareReport r = compare_strategies(example_t0());
  EXPECT_EQ(r.cbn.str(), "(5,5)");
  EXPECT_EQ(r.cbv.str(), "(5,5)");
  EXPECT_EQ(r.need.str(), "(4,4)");
  EXPECT_TRUE(r.cbn_need_termination_agree);
  EXPECT_EQ(r.need_leq_cbv, true);
  EXPECT_EQ(r.cbn_tight_geq_need, true);
}

TEST(Compare, ErasedOmega) {
  std::string k = std::string("(\\x.\\z.z) (") + kOmega + ")";
  CompareReport r = compare_strategies(P(k.c_str()), 300);
  EXPECT_EQ(r.cbn.str(), "(1,0)");
  EXPECT_EQ(r.cbv.str(), "diverged");
  EXPECT_EQ(r.need.str(), "(1,0)");
  EXPECT_TRUE(r.cbn_need_termination_agree);
  EXPECT_FALSE(r.need_leq_cbv);
  EXPECT_EQ(r.cbn_tight_geq_need, true);
}

TEST(Compare, Omega) {
  CompareReport r = compare_strategies(P(kOmega), 300);
  EXPECT_FALSE(r.cbn.normalized);
  EXPECT_FALSE(r.cbv.normalized);
  EXPECT_FALSE(r.need.normalized);
  EXPECT_TRUE(r.cbn_need_termination_agree);
  EXPECT_FALSE(r.need_leq_cbv);
  EXPECT_FALSE(r.cbn_tight_geq_need);
}

TEST(Oracle, Exactness) {
  for (SystemId s : {SystemId::CbN, SystemId::CbV, SystemId::Need}) {
    EXPECT_TRUE(oracle_exactness(example_t0(), s)) << system_name(s);
    EXPECT_TRUE(oracle_exactness(P("\\x.x"), s));
    EXPECT_TRUE(oracle_exactness(P("(\\x.x) (\\y.y)"), s));
    EXPECT_TRUE(oracle_exactness(P(kOmega), s, 100));
    BuildResult b = build_tight(P("(\\x.x) (\\y.y)"), s);
    ASSERT_TRUE(b.built);
    EXPECT_EQ(b.derivation->j.m, 1u);
    EXPECT_EQ(b.derivation->j.e, 1u);
  }
}

TEST(Checker, MutationCountsAxiomsAsFree) {
  BuildResult b = build_tight(example_t0(), SystemId::CbN);
  ASSERT_TRUE(b.built);
  Checker ok, broken(Mutation::AxFree);
  EXPECT_TRUE(ok.check(*b.derivation, SystemId::CbN).accepted);
  EXPECT_EQ(ok.indices(*b.derivation, SystemId::CbN), std::make_pair(5u, 5u));
  EXPECT_EQ(broken.indices(*b.derivation, SystemId::CbN), std::make_pair(5u, 0u));
  EXPECT_FALSE(broken.check(*b.derivation, SystemId::CbN).accepted);
}

TEST(Checks, SingleTermProperties) {
  Checker c;
  TermAnalysis a = analyze(example_t0(), 200);
  for (int i = 0; i < 3; ++i)
    ASSERT_TRUE(a.tight[i]) << a.build_error[i];
  Property ex("x"), co("c"), cb("b"), nf("n"), dm("d");
  check_exactness(a, c, ex);
  check_step_coherence(a, co);
  check_cross_bounds(a, cb);
  check_normal_tightness(a, c, nf);
  check_diamond_counts(P("x[x<-\\z.z] (y[y<-\\w.w])"), 64, dm);
  for (const Property *p : {&ex, &co, &cb, &nf, &dm}) {
    EXPECT_TRUE(p->result().passed()) << p->result().detail;
    EXPECT_GT(p->result().checked, 0u);
  }
  Property bad("b");
  check_exactness(a, Checker(Mutation::AxFree), bad);
  EXPECT_FALSE(bad.result().passed());
  EXPECT_FALSE(bad.result().counterexample.empty());
}

TEST(Suite, FixturesOnly) {
  GenConfig c;
  c.count = 0;
  SuiteOptions o;
  o.fixtures_dir = FIXTURES_DIR;
  o.diamond_terms = 10;
  o.type_law_samples = 20;
  SuiteReport r = run_property_suite(c, o);
  EXPECT_TRUE(r.all_passed()) << r.text();
  const PropertyResult *p = find(r, "worked examples");
  ASSERT_TRUE(p);
  EXPECT_GT(p->checked, 0u);
  EXPECT_EQ(r.json()["properties"].size(), r.properties.size());
}

TEST(Suite, SmallCorpusPasses) {
  GenConfig c;
  c.count = 40;
  c.seed = 11;
  SuiteOptions o;
  o.fixtures_dir = FIXTURES_DIR;
  o.diamond_terms = 20;
  o.type_law_samples = 50;
  SuiteReport r = run_property_suite(c, o);
  EXPECT_TRUE(r.all_passed()) << r.text();
  EXPECT_EQ(r.corpus, 46u);
}

TEST(Suite, MutationIsCaught) {
  GenConfig c;
  c.count = 20;
  SuiteOptions o;
  o.fixtures_dir = FIXTURES_DIR;
  o.mutation = Mutation::AxFree;
  o.diamond_terms = 5;
  o.type_law_samples = 10;
  SuiteReport r = run_property_suite(c, o);
  EXPECT_FALSE(r.all_passed());
  const PropertyResult *p = find(r, "exactness");
  ASSERT_TRUE(p);
  EXPECT_FALSE(p->passed());
  EXPECT_NE(r.text().find("FAIL"), std::string::npos);
}
