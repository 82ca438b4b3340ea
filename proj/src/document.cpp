#include "lsc/document.hpp"

#include "lsc/text.hpp"

namespace lsc {

using nlohmann::json;

json type_to_json(const LinearType &l) {
  if (l.is_normal())
    return "normal";
  json tgt = l.family() == Family::CbN ? type_to_json(l.linear_target())
                                       : type_to_json(l.multi_target());
  return json{{"src", type_to_json(l.source())}, {"tgt", std::move(tgt)}};
}

json type_to_json(const MultiType &m) {
  json out = json::array();
  for (const auto &l : m.elements())
    out.push_back(type_to_json(l));
  return out;
}

namespace {

[[noreturn]] void bad(const std::string &msg) { throw DocumentError(msg); }

json rhs_json(const Rhs &r) {
  return std::visit([](const auto &t) { return type_to_json(t); }, r);
}

Rhs rhs_from_json(const json &j, Family f) {
  if (j.is_array())
    return multi_from_json(j, f);
  return linear_from_json(j, f);
}

const json &field(const json &j, const char *name) {
  if (!j.is_object() || !j.contains(name))
    bad(std::string("missing field '") + name + "'");
  return j.at(name);
}

json node_json(const Derivation &d) {
  json ctx = json::object();
  for (const auto &[x, m] : d.j.ctx.bindings())
    ctx[x.str()] = type_to_json(m);
  json ps = json::array();
  for (const auto &p : d.premises)
    ps.push_back(node_json(p));
  return json{{"rule", rule_name(d.rule)}, {"ctx", std::move(ctx)},
              {"term", print_term(d.j.subject)}, {"type", rhs_json(d.j.rhs)},
              {"m", d.j.m}, {"e", d.j.e}, {"premises", std::move(ps)}};
}

Derivation node_from_json(const json &j, Family f) {
  const json &rule = field(j, "rule");
  if (!rule.is_string())
    bad("rule must be a string");
  auto r = parse_rule(rule.get<std::string>());
  if (!r)
    bad("unknown rule '" + rule.get<std::string>() + "'");
  TypeContext g(f);
  if (j.contains("ctx")) {
    const json &c = j.at("ctx");
    if (!c.is_object())
      bad("ctx must be an object");
    for (const auto &[name, mt] : c.items())
      g.bind(Variable{name, 0}, multi_from_json(mt, f));
  }
  const json &term = field(j, "term");
  if (!term.is_string())
    bad("term must be a string");
  Term t;
  try {
    t = parse_term(term.get<std::string>());
  } catch (const ParseError &e) {
    bad(std::string("term '") + term.get<std::string>() + "': " + e.what());
  }
  Rhs rhs = rhs_from_json(field(j, "type"), f);
  const json &m = field(j, "m");
  const json &e = field(j, "e");
  if (!m.is_number_unsigned() || !e.is_number_unsigned())
    bad("indices must be natural numbers");
  std::vector<Derivation> ps;
  if (j.contains("premises")) {
    const json &pj = j.at("premises");
    if (!pj.is_array())
      bad("premises must be an array");
    for (const auto &p : pj)
      ps.push_back(node_from_json(p, f));
  }
  return Derivation{*r, Judgement{std::move(g), t, std::move(rhs),
                                  m.get<unsigned>(), e.get<unsigned>()},
                    std::move(ps)};
}

} // namespace

LinearType linear_from_json(const json &j, Family f) {
  try {
    if (j.is_string()) {
      if (j.get<std::string>() != "normal")
        bad("unknown type constant '" + j.get<std::string>() + "'");
      return LinearType::normal(f);
    }
    MultiType src = multi_from_json(field(j, "src"), f);
    const json &tgt = field(j, "tgt");
    if (f == Family::CbN)
      return LinearType::arrow(src, linear_from_json(tgt, f));
    return LinearType::arrow(src, multi_from_json(tgt, f));
  } catch (const TypeError &e) {
    bad(e.what());
  }
}

MultiType multi_from_json(const json &j, Family f) {
  if (!j.is_array())
    bad("multi type must be an array");
  std::vector<LinearType> elems;
  for (const auto &l : j)
    elems.push_back(linear_from_json(l, f));
  return MultiType(f, std::move(elems));
}

json to_json(const DerivationDocument &doc) {
  return json{{"system", system_name(doc.system)}, {"root", node_json(doc.root)}};
}

DerivationDocument document_from_json(const json &j) {
  const json &s = field(j, "system");
  if (!s.is_string())
    bad("system must be a string");
  auto sys = parse_system(s.get<std::string>());
  if (!sys)
    bad("unknown system '" + s.get<std::string>() + "'");
  return DerivationDocument{*sys, node_from_json(field(j, "root"), family_of(*sys))};
}

DerivationDocument parse_document(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    bad(e.what());
  }
  return document_from_json(j);
}

json trace_to_json(const EvalResult &r, StrategyId s) {
  json steps = json::array();
  for (const auto &st : r.trace.steps)
    steps.push_back({{"kind", step_kind_name(st.kind)},
                     {"term", print_term(st.result)}});
  json out{{"strategy", s.str()},
           {"initial", print_term(r.trace.initial)},
           {"steps", std::move(steps)},
           {"m", r.trace.m_count},
           {"e", r.trace.e_count},
           {"final", print_term(r.final_term())},
           {"status", status_name(r.status)}};
  if (r.trace.gc_count)
    out["gc"] = r.trace.gc_count;
  return out;
}

} // namespace lsc
