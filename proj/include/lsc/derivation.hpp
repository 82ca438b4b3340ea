#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lsc/syntax.hpp"
#include "lsc/types.hpp"

namespace lsc {

enum class SystemId { CbN, CbV, Need, NeedNaive };

enum class Rule { Ax, Normal, Fun, Many, App, AppGc, Es, EsGc, ManyZero, ManyPos };

Family family_of(SystemId s);
const char *system_name(SystemId s);
std::optional<SystemId> parse_system(const std::string &s);
const char *rule_name(Rule r);
std::optional<Rule> parse_rule(const std::string &s);

using Rhs = std::variant<LinearType, MultiType>;

std::string to_string(const Rhs &r);

struct Judgement {
  TypeContext ctx;
  Term subject;
  Rhs rhs;
  unsigned m = 0;
  unsigned e = 0;
};

struct Derivation {
  Rule rule;
  Judgement j;
  std::vector<Derivation> premises;

  bool has_multi_rhs() const { return std::holds_alternative<MultiType>(j.rhs); }
  const MultiType &multi() const { return std::get<MultiType>(j.rhs); }
  const LinearType &linear() const { return std::get<LinearType>(j.rhs); }
  std::size_t node_count() const;
};

// Premise indices from the root.
using DerivPath = std::vector<std::size_t>;
std::string deriv_path_str(const DerivPath &p);

struct CheckReport {
  bool accepted = true;
  DerivPath at;
  Rule rule = Rule::Ax;
  std::string clause;

  std::string str() const;
};

class MalformedDerivation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Postorder, premises left to right: the reported node is the first one
// in that order whose own rule instance fails.
CheckReport check(const Derivation &d, SystemId sys);
std::pair<unsigned, unsigned> recompute_indices(const Derivation &d, SystemId sys);
bool is_tight(const Derivation &d, SystemId sys);
const Judgement &conclusion(const Derivation &d);

// Nodes built from premises; contexts, types and indices are computed, side
// conditions are left to check().
namespace node {
Derivation ax(SystemId sys, const Variable &x, const Rhs &type);
Derivation normal(SystemId sys, const Term &abs);
Derivation fun(SystemId sys, const Term &abs, Derivation body);
Derivation many(SystemId sys, const Term &subject, std::vector<Derivation> ps);
Derivation many_zero(SystemId sys, const Term &subject);
Derivation app(SystemId sys, const Term &subject, Derivation f, Derivation a);
Derivation app_gc(SystemId sys, const Term &subject, Derivation f);
Derivation es(SystemId sys, const Term &subject, Derivation body, Derivation arg);
Derivation es_gc(SystemId sys, const Term &subject, Derivation body);
// Same rule, new subject and premises. Leaves keep their type.
Derivation remake(SystemId sys, const Derivation &like, const Term &subject,
                  std::vector<Derivation> ps);
} // namespace node

// Applies a variable renaming to every subject and context in d.
Derivation rename_derivation(const Derivation &d,
                             const std::map<Variable, Variable> &ren);

// Indented text rendering, one judgement per line.
std::string render(const Derivation &d);
std::string to_string(const Judgement &j);

} // namespace lsc
