#include <gtest/gtest.h>

#include "lsc/types.hpp"

using namespace lsc;

namespace {

LinearType N(Family f = Family::CbN) { return LinearType::normal(f); }
MultiType M(std::vector<LinearType> v, Family f = Family::CbN) {
  return MultiType(f, std::move(v));
}
Variable X(const char *s) { return Variable{s, 0}; }

} // namespace

TEST(MultiType, UnionAddsMultiplicities) {
  LinearType a = N();
  LinearType b = LinearType::arrow(M({N()}), N());
  MultiType u = mt_union(M({a, a}), M({b}));
  EXPECT_EQ(u.size(), 3u);
  EXPECT_EQ(u, M({b, a, a}));
  EXPECT_EQ(mt_union(M({b}), MultiType(Family::CbN)), M({b}));
  EXPECT_EQ(mt_union(M({a}), M({a})), M({a, a}));
  EXPECT_NE(M({a}), M({a, a}));
}

TEST(MultiType, Minus) {
  LinearType a = N();
  LinearType b = LinearType::arrow(M({}), N());
  auto r = M({a, b, a}).minus(M({a}));
  ASSERT_TRUE(r);
  EXPECT_EQ(*r, M({a, b}));
  EXPECT_FALSE(M({a}).minus(M({b})));
}

TEST(MultiType, FamiliesDoNotMix) {
  EXPECT_THROW(LinearType::normal(Family::CbV), TypeError);
  EXPECT_THROW(mt_union(M({N()}), M({N(Family::Need)}, Family::Need)), TypeError);
  EXPECT_THROW(M({N(Family::Need)}), TypeError);
  // CbN arrows have a linear target
  EXPECT_THROW(LinearType::arrow(M({}), MultiType(Family::CbN)), TypeError);
  EXPECT_THROW(LinearType::arrow(M({}, Family::CbV), N(Family::Need)), TypeError);
}

TEST(MultiType, Printing) {
  MultiType zero(Family::CbV);
  LinearType z = LinearType::arrow(zero, zero);
  EXPECT_EQ(to_string(zero), "0");
  EXPECT_EQ(to_string(M({N()})), "[normal]");
  EXPECT_EQ(to_string(z), "0 -> 0");
}

TEST(CanonicalOrder, Examples) {
  LinearType n = N(Family::Need);
  LinearType arr =
      LinearType::arrow(MultiType(Family::Need), M({n}, Family::Need));
  EXPECT_EQ(canonical_order(n, arr), std::strong_ordering::less);
  EXPECT_EQ(canonical_order(arr, arr), std::strong_ordering::equal);
  LinearType longer = LinearType::arrow(M({N()}), N());
  LinearType shorter = LinearType::arrow(M({}), N());
  EXPECT_EQ(canonical_order(longer, shorter), std::strong_ordering::greater);
}

TEST(Context, Union) {
  LinearType a = N();
  LinearType b = LinearType::arrow(M({}), N());
  TypeContext g = ctx_single(X("x"), M({a}));
  TypeContext u = ctx_union(g, ctx_single(X("x"), M({b})));
  EXPECT_EQ(u.at(X("x")), M({a, b}));
  EXPECT_EQ(ctx_union(g, TypeContext(Family::CbN)), g);
  TypeContext d = ctx_union(g, ctx_single(X("y"), M({b})));
  EXPECT_EQ(d.domain(), (VarSet{X("x"), X("y")}));
  EXPECT_EQ(d.at(X("y")), M({b}));
}

TEST(Context, Restrict) {
  LinearType a = N();
  TypeContext g = ctx_union(ctx_single(X("x"), M({a})), ctx_single(X("y"), M({a})));
  TypeContext r = ctx_restrict(g, X("x"));
  EXPECT_FALSE(r.contains(X("x")));
  EXPECT_EQ(r.at(X("y")), M({a}));
  EXPECT_EQ(ctx_restrict(r, X("x")), r);
  EXPECT_TRUE(ctx_restrict(TypeContext(Family::CbN), X("x")).empty());
}

TEST(Context, EmptyBindingsAreNotStored) {
  TypeContext g(Family::CbV);
  g.bind(X("x"), MultiType(Family::CbV));
  EXPECT_TRUE(g.empty());
  EXPECT_EQ(g.at(X("x")), MultiType(Family::CbV));
  EXPECT_TRUE(ctx_single(X("x"), MultiType(Family::CbV)).empty());
}

TEST(Context, DisjointExtension) {
  TypeContext g = ctx_single(X("x"), M({N()}));
  EXPECT_THROW(ctx_extend(g, X("x"), M({N()})), TypeError);
  TypeContext e = ctx_extend(g, X("y"), M({N()}));
  EXPECT_EQ(e.domain().size(), 2u);
  EXPECT_THROW(ctx_union(g, TypeContext(Family::Need)), TypeError);
}
