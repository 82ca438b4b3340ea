#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lsc/derivation.hpp"
#include "lsc/evaluator.hpp"
#include "lsc/transform.hpp"

namespace lsc {

struct GenWeights {
  unsigned var = 4;
  unsigned abs = 3;
  unsigned app = 3;
  unsigned esub = 1;
  // Replaces `abs` at the root, where a lambda would already be normal.
  unsigned root_abs = 1;
};

struct GenConfig {
  std::uint64_t seed = 1;
  unsigned max_depth = 6;
  GenWeights weights;
  unsigned count = 500;
};

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Closed terms with pairwise distinct binder names. Deterministic in seed.
// A zero weight disables that constructor; Var and Abs must stay positive.
std::vector<Term> gen_closed_term(const GenConfig &cfg);

// Closed terms of at most max_nodes AST nodes, distinct up to alpha, that
// normalize under CbV within fuel. Stops after `want` terms or when the
// attempt budget runs out.
std::vector<Term> gen_small_cbv_terms(std::uint64_t seed, std::size_t want,
                                      std::size_t max_nodes, unsigned fuel);

// Normalized(m, e) or diverged.
struct Outcome {
  bool normalized = false;
  unsigned m = 0;
  unsigned e = 0;

  std::string str() const;
};

Outcome outcome_of(const EvalResult &r);

struct CompareReport {
  Outcome cbn, cbv, need;
  std::optional<std::pair<unsigned, unsigned>> cbn_tight;
  bool cbn_need_termination_agree = true;
  std::optional<bool> need_leq_cbv;
  std::optional<bool> cbn_tight_geq_need;
};

CompareReport compare_strategies(const Term &t, unsigned fuel = kDefaultFuel);

bool oracle_exactness(const Term &t, SystemId sys, unsigned fuel = kDefaultFuel);

// The mutation mode swaps in a checker that counts axioms at (0,0).
enum class Mutation { None, AxFree };

class Checker {
public:
  explicit Checker(Mutation m = Mutation::None) : mut_(m) {}
  CheckReport check(const Derivation &d, SystemId sys) const;
  std::pair<unsigned, unsigned> indices(const Derivation &d, SystemId sys) const;

private:
  Mutation mut_;
};

// Everything the properties look at for one closed term.
struct TermAnalysis {
  Term term;
  EvalResult cbn, cbv, cbv_rtl, need;
  // Indexed by SystemId CbN, CbV, Need.
  std::optional<Derivation> tight[3];
  std::string build_error[3];

  const EvalResult &eval(SystemId s) const;
};

TermAnalysis analyze(const Term &t, unsigned fuel);

struct PropertyResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string counterexample; // first failing term
  std::string detail;         // why it failed

  bool passed() const { return failed == 0; }
};

// Accumulates one property over many cases.
class Property {
public:
  explicit Property(std::string name) { r_.name = std::move(name); }
  void pass() { ++r_.checked; }
  void fail(const Term &t, const std::string &why);
  void fail(const std::string &subject, const std::string &why);
  // Records a verdict; returns it.
  bool expect(bool ok, const Term &t, const std::string &why);
  const PropertyResult &result() const { return r_; }

private:
  PropertyResult r_;
};

struct SuiteOptions {
  unsigned fuel = 200;
  Mutation mutation = Mutation::None;
  std::size_t diamond_terms = 200;
  std::size_t diamond_max_nodes = 12;
  std::size_t diamond_max_states = 64;
  unsigned type_law_samples = 200;
  // Directory with the derivation fixtures; empty skips the document checks
  // that need them.
  std::string fixtures_dir;
};

struct SuiteReport {
  GenConfig config;
  SuiteOptions options;
  std::size_t corpus = 0;
  std::size_t normalizing[3] = {0, 0, 0};
  std::size_t diamond_corpus = 0;
  std::vector<PropertyResult> properties;

  bool all_passed() const;
  std::string text() const;
  nlohmann::json json() const;
};

SuiteReport run_property_suite(const GenConfig &cfg, const SuiteOptions &opts = {});

// Individual property groups, shared with the acceptance runner.
void check_exactness(const TermAnalysis &a, const Checker &c, Property &p);
void check_step_coherence(const TermAnalysis &a, Property &p);
void check_cross_bounds(const TermAnalysis &a, Property &p);
void check_normal_tightness(const TermAnalysis &a, const Checker &c, Property &p);
void check_diamond_counts(const Term &t, std::size_t max_states, Property &p);

// The t0 example of the strategies' comparison.
Term example_t0();

} // namespace lsc
