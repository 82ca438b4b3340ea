#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include "lsc/derivation.hpp"
#include "lsc/evaluator.hpp"

namespace lsc {

class TransformError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// One evaluation step, before -> after, with the root redex it fired.
struct StepWitness {
  Term before;
  Term after;
  StepKind kind;
  Redex redex;
  EvalContext context;
  StrategyId strategy;
};

StepWitness witness(const Trace &tr, std::size_t i, StrategyId s);

SystemId system_for(StrategyKind k);
StrategyId strategy_for(SystemId s);

std::pair<Derivation, Derivation> split_derivation(const Derivation &d,
                                                   const MultiType &n,
                                                   const MultiType &o,
                                                   SystemId sys);
Derivation merge_derivations(const Derivation &d1, const Derivation &d2,
                             SystemId sys);

// d_ctx types C<<x>>; the axiom for x at the hole of `occurrence` is
// replaced by d_arg.
Derivation linear_substitute(SystemId sys, const Derivation &d_ctx,
                             const EvalContext &occurrence,
                             const Derivation &d_arg);

// d types C<<s>>; returns the derivation of s found at the hole and the
// derivation of C<<x>> with an axiom for x in its place.
std::pair<Derivation, Derivation> linear_remove(SystemId sys, const Derivation &d,
                                                const EvalContext &occurrence,
                                                const Term &s, const Variable &x);

Derivation subject_reduce(const Derivation &d, const StepWitness &w, SystemId sys);
Derivation subject_expand(const Derivation &d, const StepWitness &w, SystemId sys);

Derivation tight_type_normal(const Term &t, SystemId sys);

struct BuildResult {
  bool built = false;
  std::optional<Derivation> derivation;
  Trace trace;
};

BuildResult build_tight(const Term &t, SystemId sys, unsigned fuel = kDefaultFuel);

} // namespace lsc
