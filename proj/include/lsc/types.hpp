#pragma once

#include <compare>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "lsc/syntax.hpp"

namespace lsc {

// Type grammar a type belongs to. The naive need system reuses Need.
enum class Family { CbN, CbV, Need };

const char *family_name(Family f);

class TypeError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class MultiType;
struct ArrowData;

// normal | M -> L (CbN) | M -> N (CbV, Need). CbV has no normal constant.
class LinearType {
public:
  static LinearType normal(Family f);
  static LinearType arrow(MultiType src, LinearType tgt);
  static LinearType arrow(MultiType src, MultiType tgt);

  Family family() const { return fam_; }
  bool is_normal() const { return !arrow_; }
  bool is_arrow() const { return static_cast<bool>(arrow_); }

  const MultiType &source() const;
  // CbN arrows only.
  const LinearType &linear_target() const;
  // CbV and Need arrows only.
  const MultiType &multi_target() const;

  friend std::strong_ordering operator<=>(const LinearType &a,
                                          const LinearType &b);
  friend bool operator==(const LinearType &a, const LinearType &b) {
    return (a <=> b) == 0;
  }

private:
  LinearType(Family f, std::shared_ptr<const ArrowData> a)
      : fam_(f), arrow_(std::move(a)) {}
  Family fam_;
  std::shared_ptr<const ArrowData> arrow_;
};

// Finite multiset of linear types, kept sorted so equality is structural.
class MultiType {
public:
  explicit MultiType(Family f) : fam_(f) {}
  MultiType(Family f, std::vector<LinearType> elems);
  static MultiType single(LinearType l);

  Family family() const { return fam_; }
  bool empty() const { return elems_.empty(); }
  std::size_t size() const { return elems_.size(); }
  const std::vector<LinearType> &elements() const { return elems_; }

  // Removes one copy of each element of o; nullopt if o is not included.
  std::optional<MultiType> minus(const MultiType &o) const;

  friend std::strong_ordering operator<=>(const MultiType &a,
                                          const MultiType &b);
  friend bool operator==(const MultiType &a, const MultiType &b) {
    return (a <=> b) == 0;
  }

private:
  Family fam_;
  std::vector<LinearType> elems_;
};

struct ArrowData {
  MultiType src;
  std::optional<LinearType> linear_tgt;
  std::optional<MultiType> multi_tgt;
};

MultiType mt_union(const MultiType &a, const MultiType &b);

std::strong_ordering canonical_order(const LinearType &a, const LinearType &b);

// Variable -> multitype; empty bindings are never stored.
class TypeContext {
public:
  explicit TypeContext(Family f) : fam_(f) {}

  Family family() const { return fam_; }
  bool empty() const { return map_.empty(); }
  MultiType at(const Variable &x) const;
  bool contains(const Variable &x) const { return map_.count(x) != 0; }
  const std::map<Variable, MultiType> &bindings() const { return map_; }
  VarSet domain() const;

  void bind(const Variable &x, const MultiType &m);

  bool operator==(const TypeContext &o) const {
    return fam_ == o.fam_ && map_ == o.map_;
  }

private:
  Family fam_;
  std::map<Variable, MultiType> map_;
};

TypeContext ctx_union(const TypeContext &g, const TypeContext &p);
TypeContext ctx_restrict(const TypeContext &g, const Variable &x);
// g; x:m, which requires x not in dom(g).
TypeContext ctx_extend(const TypeContext &g, const Variable &x,
                       const MultiType &m);
TypeContext ctx_single(const Variable &x, const MultiType &m);

std::string to_string(const LinearType &l);
std::string to_string(const MultiType &m);
std::string to_string(const TypeContext &g);

} // namespace lsc
