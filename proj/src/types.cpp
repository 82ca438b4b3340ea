#include "lsc/types.hpp"

#include <algorithm>

namespace lsc {

const char *family_name(Family f) {
  switch (f) {
  case Family::CbN: return "cbn";
  case Family::CbV: return "cbv";
  case Family::Need: return "need";
  }
  return "?";
}

namespace {

void same_family(Family a, Family b) {
  if (a != b)
    throw TypeError(std::string("type family mismatch: ") + family_name(a) +
                    " vs " + family_name(b));
}

std::strong_ordering compare_seq(const std::vector<LinearType> &a,
                                 const std::vector<LinearType> &b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = a[i] <=> b[i]; c != 0)
      return c;
  return a.size() <=> b.size();
}

} // namespace

LinearType LinearType::normal(Family f) {
  if (f == Family::CbV)
    throw TypeError("the normal constant does not exist in cbv");
  return LinearType(f, nullptr);
}

LinearType LinearType::arrow(MultiType src, LinearType tgt) {
  if (src.family() != Family::CbN || tgt.family() != Family::CbN)
    throw TypeError("linear arrow targets are cbn only");
  Family f = src.family();
  return LinearType(f, std::make_shared<const ArrowData>(
                           ArrowData{std::move(src), std::move(tgt), {}}));
}

LinearType LinearType::arrow(MultiType src, MultiType tgt) {
  same_family(src.family(), tgt.family());
  if (src.family() == Family::CbN)
    throw TypeError("cbn arrows have linear targets");
  Family f = src.family();
  return LinearType(f, std::make_shared<const ArrowData>(
                           ArrowData{std::move(src), {}, std::move(tgt)}));
}

const MultiType &LinearType::source() const {
  if (!arrow_)
    throw TypeError("normal has no source");
  return arrow_->src;
}

const LinearType &LinearType::linear_target() const {
  if (!arrow_ || !arrow_->linear_tgt)
    throw TypeError("not a cbn arrow");
  return *arrow_->linear_tgt;
}

const MultiType &LinearType::multi_target() const {
  if (!arrow_ || !arrow_->multi_tgt)
    throw TypeError("not a multi-target arrow");
  return *arrow_->multi_tgt;
}

std::strong_ordering operator<=>(const LinearType &a, const LinearType &b) {
  if (a.fam_ != b.fam_)
    return a.fam_ <=> b.fam_;
  if (a.is_normal() || b.is_normal())
    return b.is_normal() <=> a.is_normal();
  if (a.arrow_ == b.arrow_)
    return std::strong_ordering::equal;
  if (auto c = a.arrow_->src <=> b.arrow_->src; c != 0)
    return c;
  if (a.arrow_->linear_tgt)
    return *a.arrow_->linear_tgt <=> *b.arrow_->linear_tgt;
  return *a.arrow_->multi_tgt <=> *b.arrow_->multi_tgt;
}

std::strong_ordering canonical_order(const LinearType &a, const LinearType &b) {
  same_family(a.family(), b.family());
  return a <=> b;
}

MultiType::MultiType(Family f, std::vector<LinearType> elems)
    : fam_(f), elems_(std::move(elems)) {
  for (const auto &l : elems_)
    same_family(f, l.family());
  std::sort(elems_.begin(), elems_.end());
}

MultiType MultiType::single(LinearType l) {
  Family f = l.family();
  return MultiType(f, {std::move(l)});
}

std::optional<MultiType> MultiType::minus(const MultiType &o) const {
  same_family(fam_, o.fam_);
  std::vector<LinearType> rest;
  auto it = o.elems_.begin();
  for (const auto &l : elems_) {
    if (it != o.elems_.end() && *it == l)
      ++it;
    else
      rest.push_back(l);
  }
  if (it != o.elems_.end())
    return std::nullopt;
  return MultiType(fam_, std::move(rest));
}

std::strong_ordering operator<=>(const MultiType &a, const MultiType &b) {
  if (a.fam_ != b.fam_)
    return a.fam_ <=> b.fam_;
  return compare_seq(a.elems_, b.elems_);
}

MultiType mt_union(const MultiType &a, const MultiType &b) {
  same_family(a.family(), b.family());
  std::vector<LinearType> out;
  out.reserve(a.size() + b.size());
  std::merge(a.elements().begin(), a.elements().end(), b.elements().begin(),
             b.elements().end(), std::back_inserter(out));
  return MultiType(a.family(), std::move(out));
}

// --------------------------------------------------------------- contexts

MultiType TypeContext::at(const Variable &x) const {
  auto it = map_.find(x);
  return it == map_.end() ? MultiType(fam_) : it->second;
}

VarSet TypeContext::domain() const {
  VarSet out;
  for (const auto &[x, m] : map_)
    out.insert(x);
  return out;
}

void TypeContext::bind(const Variable &x, const MultiType &m) {
  same_family(fam_, m.family());
  if (m.empty())
    map_.erase(x);
  else
    map_.insert_or_assign(x, m);
}

TypeContext ctx_union(const TypeContext &g, const TypeContext &p) {
  same_family(g.family(), p.family());
  TypeContext out = g;
  for (const auto &[x, m] : p.bindings())
    out.bind(x, mt_union(out.at(x), m));
  return out;
}

TypeContext ctx_restrict(const TypeContext &g, const Variable &x) {
  TypeContext out = g;
  out.bind(x, MultiType(g.family()));
  return out;
}

TypeContext ctx_extend(const TypeContext &g, const Variable &x,
                       const MultiType &m) {
  if (g.contains(x))
    throw TypeError("context already binds " + x.str());
  TypeContext out = g;
  out.bind(x, m);
  return out;
}

TypeContext ctx_single(const Variable &x, const MultiType &m) {
  TypeContext out(m.family());
  out.bind(x, m);
  return out;
}

// --------------------------------------------------------------- printing

std::string to_string(const LinearType &l) {
  if (l.is_normal())
    return "normal";
  std::string src = to_string(l.source());
  if (l.family() == Family::CbN)
    return src + " -> " + to_string(l.linear_target());
  return src + " -> " + to_string(l.multi_target());
}

std::string to_string(const MultiType &m) {
  if (m.empty())
    return "0";
  std::string out = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i)
      out += ", ";
    out += to_string(m.elements()[i]);
  }
  return out + "]";
}

std::string to_string(const TypeContext &g) {
  std::string out;
  for (const auto &[x, m] : g.bindings()) {
    if (!out.empty())
      out += ", ";
    out += x.str() + " : " + to_string(m);
  }
  return out;
}

} // namespace lsc
