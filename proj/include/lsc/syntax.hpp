#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lsc {

// A variable is a base name plus a freshness index; index 0 is reserved for
// names written by the user.
struct Variable {
  std::string name;
  std::uint32_t index = 0;

  auto operator<=>(const Variable &) const = default;
  bool operator==(const Variable &) const = default;

  // Printed form: the base name followed by the index when it is non-zero.
  std::string str() const;
};

using VarSet = std::set<Variable>;

class Term;
struct TermNode;

struct Var {
  Variable name;
};
struct Abs;
struct App;
struct ESub;

// Immutable, structurally shared LSC term.
class Term {
public:
  Term() = default;

  bool is_var() const;
  bool is_abs() const;
  bool is_app() const;
  bool is_esub() const;

  const Var &as_var() const;
  const Abs &as_abs() const;
  const App &as_app() const;
  const ESub &as_esub() const;

  const TermNode *node() const { return node_.get(); }
  bool empty() const { return !node_; }

  // Number of AST nodes.
  std::size_t size() const;

  // Structural equality, names included. See alpha_eq for the quotient.
  friend bool operator==(const Term &a, const Term &b);

private:
  friend Term make_term(TermNode);
  std::shared_ptr<const TermNode> node_;
};

struct Abs {
  Variable binder;
  Term body;
};
struct App {
  Term fun;
  Term arg;
};
// body[binder <- arg]
struct ESub {
  Term body;
  Variable binder;
  Term arg;
};

struct TermNode {
  std::variant<Var, Abs, App, ESub> v;
  std::size_t size = 1;
};

Term var(Variable x);
Term var(std::string name);
Term lam(Variable x, Term body);
Term lam(std::string x, Term body);
Term app(Term f, Term a);
Term esub(Term body, Variable x, Term arg);

VarSet fv(const Term &t);
bool is_free_in(const Variable &x, const Term &t);
// Every variable name in t, bound or free.
VarSet all_vars(const Term &t);
bool alpha_eq(const Term &t, const Term &s);

// One-line key that identifies the alpha-class of a term.
std::string alpha_key(const Term &t);

// Deterministic generator of names that never clash with the names it has
// been told about. One instance lives for one evaluation session.
class FreshSupply {
public:
  FreshSupply() = default;
  explicit FreshSupply(const Term &t) { reserve(t); }

  void reserve(const Term &t);
  void reserve(const Variable &x);
  Variable fresh(const Variable &base);

private:
  std::set<std::string> used_;
  std::uint32_t counter_ = 0;
};

// Alpha-renames t so that all binders are pairwise distinct and distinct
// from fv(t). Binders that are already compliant keep their names.
Term rename_fresh(const Term &t);
Term rename_fresh(const Term &t, FreshSupply &supply);

// Copy of t in which every binder gets a fresh name.
Term copy_fresh(const Term &t, FreshSupply &supply);

// Binders of t are pairwise distinct and disjoint from fv(t).
bool has_distinct_binders(const Term &t);

// If `to` is `from` with its binders consistently renamed (free variables
// untouched), returns the renaming from -> to.
std::optional<std::map<Variable, Variable>> binder_renaming(const Term &from,
                                                            const Term &to);

// Applies the renaming to every occurrence, bound or free.
Term rename_vars(const Term &t, const std::map<Variable, Variable> &ren);

// ---------------------------------------------------------------- positions

enum class Dir : std::uint8_t { AppFun, AppArg, EsBody, EsArg };
using Path = std::vector<Dir>;

std::string path_str(const Path &p);

// Throws std::out_of_range when the path does not describe a position of t.
const Term &subterm_at(const Term &t, const Path &p);
Term replace_at(const Term &t, const Path &p, const Term &sub);

// ---------------------------------------------------------------- contexts

// S ::= <.> | S[x<-t]; layers[0] is the innermost substitution.
struct SubstContext {
  std::vector<std::pair<Variable, Term>> layers;

  bool empty() const { return layers.empty(); }
  Term plug(Term core) const;
};

// Maximal outer chain of explicit substitutions and the first non-ES core.
std::pair<SubstContext, Term> split_subst_context(const Term &t);

// Strategy grammar a context must belong to.
enum class ContextTag { Weak, CbN, CbV, Need };

class CaptureError : public std::runtime_error {
public:
  explicit CaptureError(Variable x);
  const Variable &variable() const { return var_; }

private:
  Variable var_;
};

struct EvalContextNode;

// One-hole weak context. Construction rejects frames the tag's grammar
// does not allow.
class EvalContext {
public:
  static EvalContext hole(ContextTag tag);
  static EvalContext app_left(EvalContext ctx, Term arg);
  static EvalContext app_right(Term fun, EvalContext ctx);
  static EvalContext esub_body(EvalContext ctx, Variable binder, Term arg);
  static EvalContext esub_arg(Term body, Variable binder, EvalContext ctx);
  // outer<<needed>>[binder <- inner], with needed == binder.
  static EvalContext need_chain(EvalContext outer, Variable needed,
                                Variable binder, EvalContext inner);

  ContextTag tag() const;
  bool is_hole() const;
  const EvalContextNode &node() const { return *node_; }

  // Position of the hole.
  Path path() const;
  // Variables bound by the context at its hole.
  VarSet binders() const;

private:
  explicit EvalContext(std::shared_ptr<const EvalContextNode> n)
      : node_(std::move(n)) {}
  std::shared_ptr<const EvalContextNode> node_;
};

struct EvalContextNode {
  struct Hole {};
  struct AppLeft {
    EvalContext ctx;
    Term arg;
  };
  struct AppRight {
    Term fun;
    EvalContext ctx;
  };
  struct ESubBody {
    EvalContext ctx;
    Variable binder;
    Term arg;
  };
  struct ESubArg {
    Term body;
    Variable binder;
    EvalContext ctx;
  };
  struct NeedChain {
    EvalContext outer;
    Variable needed;
    Variable binder;
    EvalContext inner;
  };

  ContextTag tag;
  std::variant<Hole, AppLeft, AppRight, ESubBody, ESubArg, NeedChain> v;
};

// Replaces the hole by t; capture is allowed.
Term plug(const EvalContext &ctx, const Term &t);
// As plug, but throws CaptureError if the context binds a free variable of t.
Term plug_capture_free(const EvalContext &ctx, const Term &t);

// If t = E<<x>> for a call-by-need context E, the position of that
// occurrence of x.
std::optional<Path> needed_occurrence(const Term &t);

// Decomposes t at p into a context of the given grammar. Throws
// std::invalid_argument if p is not a position of that grammar.
EvalContext context_at(const Term &t, const Path &p, ContextTag tag);

} // namespace lsc
