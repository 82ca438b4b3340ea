#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lsc/cli.hpp"

using namespace lsc;

namespace {

const char *kT0 = "((\\x.\\y.x x) ((\\z.z) (\\z.z))) ((\\z.z) (\\z.z))";
const char *kKOmega = "(\\x.\\y.y)((\\a.a a)(\\a.a a))";

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "lsc");
  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err, FIXTURES_DIR);
  return {code, out.str(), err.str()};
}

std::string fixture(const char *name) { return std::string(FIXTURES_DIR) + "/" + name; }

std::string temp_file(const std::string &name, const std::string &content) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << content;
  return path;
}

bool contains(const std::string &hay, const std::string &needle) {
  return hay.find(needle) != std::string::npos;
}

} // namespace

TEST(CliEval, NeedCounts) {
  CliRun r = run({"eval", "--strategy", "need", "--expr", kT0});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "m=4 e=4")) << r.out;
}

TEST(CliEval, FuelExhausted) {
  CliRun r = run({"eval", "--strategy", "cbv", "--fuel", "20", "--expr", kKOmega});
  EXPECT_EQ(r.code, kExitFuel);
  EXPECT_TRUE(contains(r.out, "fuel")) << r.out;
}

TEST(CliEval, Identity) {
  CliRun r = run({"eval", "--expr", "\\x.x", "--strategy", "cbn"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "\\x.x\nm=0 e=0\n");
}

TEST(CliEval, TraceAndOrders) {
  CliRun r = run({"eval", "-s", "cbv", "--cbv-order", "rtl", "--trace", "-e", kT0});
  EXPECT_EQ(r.code, kExitOk);
  std::istringstream in(r.out);
  std::string line;
  int m = 0, e = 0;
  while (std::getline(in, line)) {
    m += line.rfind("m ", 0) == 0;
    e += line.rfind("e ", 0) == 0;
  }
  EXPECT_EQ(m, 5);
  EXPECT_EQ(e, 5);
  EXPECT_TRUE(contains(r.out, "m=5 e=5"));
}

TEST(CliEval, GcAndJson) {
  CliRun g = run({"eval", "-s", "need", "--gc", "-e", kKOmega});
  EXPECT_EQ(g.code, kExitOk);
  EXPECT_EQ(g.out, "\\y.y\nm=1 e=0 gc=1\n");
  CliRun j = run({"eval", "--json", "-e", "(\\x.x) (\\y.y)"});
  ASSERT_EQ(j.code, kExitOk);
  auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["strategy"], "cbn");
  EXPECT_EQ(doc["m"], 1);
  EXPECT_EQ(doc["e"], 1);
  ASSERT_EQ(doc["steps"].size(), 2u);
  EXPECT_EQ(doc["steps"][0]["kind"], "m");
}

TEST(CliEval, InputErrors) {
  CliRun p = run({"eval", "-e", "\\x."});
  EXPECT_EQ(p.code, kExitInput);
  EXPECT_TRUE(contains(p.err, "<expr>:1:")) << p.err;
  CliRun f = run({"eval", "/nonexistent/term.lsc"});
  EXPECT_EQ(f.code, kExitInput);
  EXPECT_EQ(run({"eval"}).code, kExitInput);
  EXPECT_EQ(run({"eval", "-s", "cbx", "-e", "x"}).code, kExitInput);
  EXPECT_EQ(run({}).code, kExitInput);
  EXPECT_EQ(run({"frobnicate"}).code, kExitInput);
  CliRun h = run({"--help"});
  EXPECT_EQ(h.code, kExitOk);
  EXPECT_TRUE(contains(h.out, "eval"));
}

TEST(CliEval, FileSource) {
  std::string path = temp_file("t0.lsc", std::string("# t0\n") + kT0 + "\n");
  CliRun r = run({"eval", path});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "m=5 e=5"));
  std::string bad = temp_file("bad.lsc", "x\n  $");
  CliRun b = run({"eval", bad});
  EXPECT_EQ(b.code, kExitInput);
  EXPECT_TRUE(contains(b.err, bad + ":2:")) << b.err;
}

TEST(CliType, Cbn) {
  CliRun r = run({"type", "--system", "cbn", "--expr", kT0});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "\xE2\x8A\xA2 ")) << r.out;
  EXPECT_TRUE(contains(r.out, " : normal (5,5)")) << r.out;
}

TEST(CliType, Diverges) {
  CliRun r = run({"type", "--system", "cbv", "--fuel", "200", "--expr",
               "(\\x.\\z.z)((\\a.a a)(\\a.a a))"});
  EXPECT_EQ(r.code, kExitFuel);
  EXPECT_FALSE(r.err.empty());
}

TEST(CliType, NeedIdentity) {
  CliRun r = run({"type", "--system", "need", "--expr", "\\x.x"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(contains(r.out, "(0,0)")) << r.out;
  EXPECT_TRUE(contains(r.out, "[normal]"));
}

TEST(CliType, Refusals) {
  EXPECT_EQ(run({"type", "--system", "need-naive", "-e", "\\x.x"}).code, kExitInput);
  EXPECT_EQ(run({"type", "-e", "x y"}).code, kExitInput);
}

TEST(CliType, WritesCheckableDocument) {
  std::string out = ::testing::TempDir() + "need_t0.json";
  CliRun r = run({"type", "--system", "need", "--tree", "-o", out, "-e", kT0});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "app_gc"));
  CliRun c = run({"check", out});
  EXPECT_EQ(c.code, kExitOk) << c.out;
  EXPECT_EQ(c.out, "Accepted\ntight: yes\nindices: (4,4)\n");
}

TEST(CliCheck, Theta) {
  CliRun r = run({"check", "--system", "cbn", fixture("theta_cbn.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "Accepted\ntight: yes\nindices: (5,5)\n");
}

TEST(CliCheck, NaiveUnderNeed) {
  CliRun r = run({"check", "--system", "need", fixture("naive_counterexample.json")});
  EXPECT_EQ(r.code, kExitRejected);
  EXPECT_TRUE(contains(r.out, "Rejected at 1.0.0.0 (many0)")) << r.out;
  CliRun ok = run({"check", fixture("naive_counterexample.json")});
  EXPECT_EQ(ok.code, kExitOk);
  EXPECT_TRUE(contains(ok.out, "indices: (2,0)"));
}

TEST(CliCheck, Truncated) {
  std::ifstream in(fixture("phi_cbv.json"));
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  std::string path = temp_file("truncated.json", text.substr(0, text.size() / 2));
  CliRun r = run({"check", path});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_TRUE(contains(r.err, "truncated.json")) << r.err;
  EXPECT_EQ(run({"check"}).code, kExitInput);
}

TEST(CliCheck, MalformedTree) {
  std::string path = temp_file(
      "arity.json",
      R"({"system": "cbn", "root": {"rule": "ax", "ctx": {"x": ["normal"]}, "term": "x",
          "type": "normal", "m": 0, "e": 1,
          "premises": [{"rule": "normal", "ctx": {}, "term": "\\y.y", "type": "normal",
                        "m": 0, "e": 0, "premises": []}]}})");
  EXPECT_EQ(run({"check", path}).code, kExitInput);
}

TEST(CliCompare, Rows) {
  CliRun t = run({"compare", "-e", kT0});
  EXPECT_EQ(t.code, kExitOk);
  EXPECT_TRUE(contains(t.out, "cbn       (5,5)"));
  EXPECT_TRUE(contains(t.out, "cbv       (5,5)"));
  EXPECT_TRUE(contains(t.out, "need      (4,4)"));
  EXPECT_TRUE(contains(t.out, "cbn_need_termination_agree true"));
  EXPECT_TRUE(contains(t.out, "need_leq_cbv true"));
  EXPECT_TRUE(contains(t.out, "cbn_tight_geq_need true"));
  CliRun k = run({"compare", "--fuel", "300", "-e", kKOmega});
  EXPECT_EQ(k.code, kExitOk);
  EXPECT_TRUE(contains(k.out, "cbv       diverged"));
  EXPECT_TRUE(contains(k.out, "need_leq_cbv n/a"));
  CliRun i = run({"compare", "-e", "\\x.x"});
  EXPECT_EQ(i.out.find("(0,0)"), i.out.find("cbn") + 10);
  EXPECT_EQ(run({"compare", "-e", "(x"}).code, kExitInput);
}

TEST(CliGen, Deterministic) {
  CliRun a = run({"gen", "--seed", "1", "--count", "5"});
  CliRun b = run({"gen", "--seed", "1", "--count", "5"});
  EXPECT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 5);
  EXPECT_EQ(run({"gen", "--max-depth", "0"}).code, kExitInput);
}

TEST(CliGen, FixtureOnlySuite) {
  std::string rep = ::testing::TempDir() + "report.json";
  CliRun r = run({"gen", "--count", "0", "--suite", "--report", rep});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_TRUE(contains(r.out, "pass worked examples"));
  std::ifstream in(rep);
  auto j = nlohmann::json::parse(in);
  EXPECT_TRUE(j["all_passed"].get<bool>());
}

TEST(CliGen, MutatedSuiteFails) {
  CliRun r = run({"gen", "--count", "15", "--suite", "--mutate"});
  EXPECT_EQ(r.code, kExitProperty);
  EXPECT_TRUE(contains(r.out, "FAIL exactness"));
}
