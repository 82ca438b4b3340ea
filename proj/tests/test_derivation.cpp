#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "lsc/derivation.hpp"
#include "lsc/document.hpp"
#include "lsc/text.hpp"

using namespace lsc;

namespace {

DerivationDocument load(const std::string &name) {
  std::ifstream in(std::string(FIXTURES_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

Term P(const char *s) { return parse_term(s); }
Variable X(const char *s) { return Variable{s, 0}; }

int count_rule(const Derivation &d, Rule r) {
  int n = d.rule == r;
  for (const auto &p : d.premises)
    n += count_rule(p, r);
  return n;
}

} // namespace

TEST(Fixtures, ThetaCbn) {
  auto doc = load("theta_cbn.json");
  ASSERT_EQ(doc.system, SystemId::CbN);
  CheckReport r = check(doc.root, SystemId::CbN);
  EXPECT_TRUE(r.accepted) << r.str();
  EXPECT_TRUE(is_tight(doc.root, SystemId::CbN));
  EXPECT_EQ(recompute_indices(doc.root, SystemId::CbN), std::make_pair(5u, 5u));
  const Judgement &j = conclusion(doc.root);
  EXPECT_TRUE(j.ctx.empty());
  EXPECT_EQ(j.m, 5u);
  EXPECT_EQ(j.e, 5u);
  EXPECT_EQ(to_string(j.rhs), "normal");
  // the indices count rules
  EXPECT_EQ(count_rule(doc.root, Rule::App), 5);
  EXPECT_EQ(count_rule(doc.root, Rule::Ax), 5);
}

TEST(Fixtures, PhiCbvAndNeed) {
  auto v = load("phi_cbv.json");
  EXPECT_TRUE(check(v.root, SystemId::CbV).accepted);
  EXPECT_TRUE(is_tight(v.root, SystemId::CbV));
  EXPECT_EQ(recompute_indices(v.root, SystemId::CbV), std::make_pair(5u, 5u));
  auto n = load("phi_need.json");
  EXPECT_TRUE(check(n.root, SystemId::Need).accepted) << check(n.root, SystemId::Need).str();
  EXPECT_TRUE(is_tight(n.root, SystemId::Need));
  EXPECT_EQ(recompute_indices(n.root, SystemId::Need), std::make_pair(4u, 4u));
  EXPECT_EQ(count_rule(n.root, Rule::App) + count_rule(n.root, Rule::AppGc), 4);
}

TEST(Fixtures, NaiveCounterexample) {
  auto doc = load("naive_counterexample.json");
  CheckReport ok = check(doc.root, SystemId::NeedNaive);
  EXPECT_TRUE(ok.accepted) << ok.str();
  EXPECT_EQ(recompute_indices(doc.root, SystemId::NeedNaive), std::make_pair(2u, 0u));
  CheckReport bad = check(doc.root, SystemId::Need);
  ASSERT_FALSE(bad.accepted);
  EXPECT_EQ(bad.rule, Rule::ManyZero);
  EXPECT_EQ(bad.str(),
            "Rejected at 1.0.0.0 (many0): rule many0 is not part of the need system");
}

TEST(Fixtures, NaiveAxiomWithEmptyType) {
  auto doc = load("naive_ax_empty.json");
  EXPECT_TRUE(check(doc.root, SystemId::NeedNaive).accepted);
  CheckReport bad = check(doc.root, SystemId::Need);
  ASSERT_FALSE(bad.accepted);
  EXPECT_EQ(bad.rule, Rule::Ax);
  EXPECT_NE(bad.clause.find("empty"), std::string::npos);
}

TEST(Check, Leaves) {
  Derivation n = node::normal(SystemId::CbN, P("\\x.x"));
  EXPECT_TRUE(check(n, SystemId::CbN).accepted);
  EXPECT_EQ(recompute_indices(n, SystemId::CbN), std::make_pair(0u, 0u));
  EXPECT_TRUE(is_tight(n, SystemId::CbN));
  Derivation a = node::ax(SystemId::CbN, X("x"), LinearType::normal(Family::CbN));
  EXPECT_TRUE(check(a, SystemId::CbN).accepted);
  EXPECT_FALSE(is_tight(a, SystemId::CbN));
  EXPECT_EQ(conclusion(a).e, 1u);
  EXPECT_EQ(to_string(conclusion(a)).find("x : [normal]"), 0u);
}

TEST(Check, CbvEmptyTypeIsTight) {
  Derivation z = node::many(SystemId::CbV, P("\\x.x"), {});
  EXPECT_TRUE(check(z, SystemId::CbV).accepted);
  EXPECT_TRUE(is_tight(z, SystemId::CbV));
  // the cbv axiom may introduce 0
  Derivation a = node::ax(SystemId::CbV, X("x"), MultiType(Family::CbV));
  EXPECT_TRUE(check(a, SystemId::CbV).accepted);
  EXPECT_TRUE(a.j.ctx.empty());
}

TEST(Check, NeedSideConditions) {
  Term id = P("\\x.x");
  // many over an abstraction needs at least one premise
  EXPECT_FALSE(check(node::many(SystemId::Need, id, {}), SystemId::Need).accepted);
  Derivation one = node::many(SystemId::Need, id, {node::normal(SystemId::Need, id)});
  EXPECT_TRUE(check(one, SystemId::Need).accepted);
  EXPECT_TRUE(is_tight(one, SystemId::Need));
  EXPECT_FALSE(check(node::ax(SystemId::Need, X("x"), MultiType(Family::Need)),
                     SystemId::Need)
                   .accepted);
  // rules outside a system
  EXPECT_THROW(node::normal(SystemId::CbV, id), TypeError);
  EXPECT_FALSE(check(node::many_zero(SystemId::Need, id), SystemId::Need).accepted);
  EXPECT_TRUE(check(node::many_zero(SystemId::NeedNaive, P("y z")), SystemId::NeedNaive)
                  .accepted);
}

TEST(Check, CatchesWrongAnnotations) {
  auto doc = load("theta_cbn.json");
  Derivation d = doc.root;
  d.j.m = 4;
  CheckReport r = check(d, SystemId::CbN);
  ASSERT_FALSE(r.accepted);
  EXPECT_TRUE(r.at.empty());
  EXPECT_EQ(recompute_indices(d, SystemId::CbN), std::make_pair(5u, 5u));
  Derivation e = doc.root;
  e.premises[1].j.e += 1;
  CheckReport r2 = check(e, SystemId::CbN);
  ASSERT_FALSE(r2.accepted);
  EXPECT_EQ(r2.at, (DerivPath{1}));
}

TEST(Check, ContextsAreRecomputed) {
  Term t = P("(x y)");
  Derivation f = node::ax(SystemId::CbN, X("x"),
                          LinearType::arrow(MultiType(Family::CbN),
                                            LinearType::normal(Family::CbN)));
  Derivation a = node::many(SystemId::CbN, P("y"), {});
  Derivation d = node::app(SystemId::CbN, t, f, a);
  EXPECT_TRUE(check(d, SystemId::CbN).accepted);
  d.j.ctx = TypeContext(Family::CbN);
  EXPECT_FALSE(check(d, SystemId::CbN).accepted);
}

TEST(Check, WrongSubjectStructure) {
  Derivation d = node::normal(SystemId::CbN, P("\\x.x"));
  d.premises.push_back(d);
  EXPECT_THROW(check(d, SystemId::CbN), MalformedDerivation);
}

TEST(Document, RoundTrip) {
  auto doc = load("phi_need.json");
  nlohmann::json j = to_json(doc);
  DerivationDocument back = document_from_json(j);
  EXPECT_EQ(to_json(back), j);
  EXPECT_TRUE(check(back.root, SystemId::Need).accepted);
  EXPECT_THROW(parse_document("{\"system\": \"cbn\""), DocumentError);
  EXPECT_THROW(parse_document("{\"system\": \"idempotent\", \"root\": {}}"), DocumentError);
}

TEST(Names, Systems) {
  EXPECT_EQ(parse_system("need-naive"), SystemId::NeedNaive);
  EXPECT_FALSE(parse_system("cbx"));
  EXPECT_EQ(parse_rule("es_gc"), Rule::EsGc);
  EXPECT_FALSE(parse_rule("many_gc"));
  EXPECT_STREQ(rule_name(Rule::AppGc), "app_gc");
}
