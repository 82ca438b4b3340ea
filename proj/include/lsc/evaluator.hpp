#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lsc/syntax.hpp"

namespace lsc {

enum class StrategyKind { CbN, CbV, Need };
enum class CbvPolicy { LeftToRight, RightToLeft, Exhaustive };

struct StrategyId {
  StrategyKind kind = StrategyKind::CbN;
  CbvPolicy policy = CbvPolicy::LeftToRight;

  static StrategyId cbn() { return {StrategyKind::CbN}; }
  static StrategyId cbv(CbvPolicy p = CbvPolicy::LeftToRight) {
    return {StrategyKind::CbV, p};
  }
  static StrategyId need() { return {StrategyKind::Need}; }
  std::string str() const;
};

ContextTag context_tag(StrategyKind k);

enum class StepKind { Multiplicative, Exponential, Erasing };
const char *step_kind_name(StepKind k);

// A root redex located in a term. For exponential redexes `at` is the
// explicit substitution and `occurrence` the replaced variable; for
// erasing redexes `at` is the erased substitution.
struct Redex {
  StepKind kind;
  Path at;
  Path occurrence;
};

struct FoundRedex {
  EvalContext context;
  Redex redex;
};

struct TraceStep {
  StepKind kind;
  Redex redex;
  Term result;
};

struct Trace {
  Term initial;
  std::vector<TraceStep> steps;
  unsigned m_count = 0;
  unsigned e_count = 0;
  unsigned gc_count = 0;

  const Term &last() const { return steps.empty() ? initial : steps.back().result; }
  // Term before step i.
  const Term &before(std::size_t i) const {
    return i == 0 ? initial : steps[i - 1].result;
  }
};

enum class EvalStatus { Normal, Stuck, FuelExhausted };
const char *status_name(EvalStatus s);

// Stuck: no redex left but the normal predicate fails (open terms only).
struct EvalResult {
  EvalStatus status = EvalStatus::Normal;
  Trace trace;

  bool normal() const { return status == EvalStatus::Normal; }
  bool halted() const { return status != EvalStatus::FuelExhausted; }

  const Term &final_term() const { return trace.last(); }
};

constexpr unsigned kDefaultFuel = 10000;

// All redexes of the strategy's relation, in the preorder of their action
// point (the App node for m, the variable occurrence for e).
std::vector<Redex> redexes(const Term &t, StrategyKind k);

std::optional<FoundRedex> find_redex(const Term &t, StrategyId s);

// Rewrites the root redex; the copied value gets fresh binders from supply.
Term apply_redex(const Term &t, const Redex &r, StrategyKind k,
                 FreshSupply &supply);

std::optional<std::pair<Term, StepKind>> step(const Term &t, StrategyId s);

struct EvalOptions {
  bool gc = false;
};

EvalResult evaluate(const Term &t, StrategyId s, unsigned fuel = kDefaultFuel,
                    EvalOptions opts = {});

bool is_normal(const Term &t);
bool is_normal_cbv(const Term &t);

std::optional<Redex> find_gc_redex(const Term &t, StrategyKind k);
std::optional<Term> gc_step(const Term &t, StrategyId s);
// gc_step to a fixpoint.
Term gc_normalize(const Term &t, StrategyId s);

struct Successor {
  Term term;
  StepKind kind;
  Redex redex;
};

std::vector<Successor> all_successors_cbv(const Term &t);

// Every (m, e) pair over all maximal CbV sequences, exploring states up to
// max_states (deduplicated up to alpha). Returns nullopt past the limit or
// when some path exceeds max_depth steps.
std::optional<std::set<std::pair<unsigned, unsigned>>>
explore_cbv(const Term &t, std::size_t max_states, unsigned max_depth = 200);

} // namespace lsc
