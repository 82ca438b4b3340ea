#include "lsc/cli.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lsc/document.hpp"
#include "lsc/harness.hpp"
#include "lsc/text.hpp"

namespace lsc {

namespace {

struct Source {
  std::string file;
  std::string expr;
};

void add_source(CLI::App *cmd, Source &src, const char *what) {
  cmd->add_option("file", src.file, std::string("file holding the ") + what);
  cmd->add_option("--expr,-e", src.expr, std::string(what) + " given inline");
}

// Thrown for anything that maps to exit status 1.
struct InputError {
  std::string msg;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError{"cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Term load_term(const Source &src) {
  if (src.file.empty() == src.expr.empty())
    throw InputError{"give exactly one of FILE or --expr"};
  std::string origin = src.file.empty() ? "<expr>" : src.file;
  std::string text = src.file.empty() ? src.expr : read_file(src.file);
  try {
    return parse_term(text);
  } catch (const ParseError &e) {
    throw InputError{origin + ":" + e.what()};
  }
}

std::string counts(unsigned m, unsigned e) {
  return "m=" + std::to_string(m) + " e=" + std::to_string(e);
}

std::string pair_str(unsigned m, unsigned e) {
  return "(" + std::to_string(m) + "," + std::to_string(e) + ")";
}

// ---------------------------------------------------------------- commands

struct EvalArgs {
  Source src;
  std::string strategy = "cbn";
  std::string order = "ltr";
  unsigned fuel = kDefaultFuel;
  bool trace = false;
  bool gc = false;
  bool json = false;
};

int cmd_eval(const EvalArgs &a, std::ostream &out) {
  Term t = load_term(a.src);
  StrategyId s = a.strategy == "cbn"    ? StrategyId::cbn()
                 : a.strategy == "need" ? StrategyId::need()
                 : StrategyId::cbv(a.order == "rtl" ? CbvPolicy::RightToLeft
                                                    : CbvPolicy::LeftToRight);
  EvalResult r = evaluate(t, s, a.fuel, EvalOptions{a.gc});
  if (a.json) {
    out << trace_to_json(r, s).dump(2) << "\n";
  } else {
    if (a.trace)
      for (const auto &st : r.trace.steps)
        out << step_kind_name(st.kind) << " " << print_term(st.result) << "\n";
    out << print_term(r.final_term()) << "\n";
    out << counts(r.trace.m_count, r.trace.e_count);
    if (a.gc)
      out << " gc=" << r.trace.gc_count;
    if (!r.normal())
      out << " (" << status_name(r.status) << ")";
    out << "\n";
  }
  return r.status == EvalStatus::FuelExhausted ? kExitFuel : kExitOk;
}

struct TypeArgs {
  Source src;
  std::string system = "cbn";
  unsigned fuel = kDefaultFuel;
  std::string out_file;
  bool tree = false;
};

int cmd_type(const TypeArgs &a, std::ostream &out, std::ostream &err) {
  SystemId sys = *parse_system(a.system);
  if (sys == SystemId::NeedNaive)
    throw InputError{"need-naive has no builder; use check on a document"};
  Term t = load_term(a.src);
  if (!fv(t).empty())
    throw InputError{"tight typing needs a closed term"};
  BuildResult b = build_tight(t, sys, a.fuel);
  if (!b.built) {
    err << "no " << strategy_for(sys).str() << " normal form within " << a.fuel
        << " steps\n";
    return kExitFuel;
  }
  const Derivation &d = *b.derivation;
  out << "\xE2\x8A\xA2 " << print_term(d.j.subject) << " : " << to_string(d.j.rhs)
      << " " << pair_str(d.j.m, d.j.e) << "\n";
  if (a.tree)
    out << render(d);
  if (!a.out_file.empty()) {
    std::ofstream f(a.out_file);
    if (!f)
      throw InputError{"cannot write " + a.out_file};
    f << to_json(DerivationDocument{sys, d}).dump(1) << "\n";
  }
  return kExitOk;
}

struct CheckArgs {
  std::string file;
  std::string system;
};

int cmd_check(const CheckArgs &a, std::ostream &out) {
  DerivationDocument doc = [&] {
    try {
      return parse_document(read_file(a.file));
    } catch (const DocumentError &e) {
      throw InputError{a.file + ": " + e.what()};
    }
  }();
  SystemId sys = a.system.empty() ? doc.system : *parse_system(a.system);
  CheckReport r;
  try {
    r = check(doc.root, sys);
  } catch (const MalformedDerivation &e) {
    throw InputError{a.file + ": " + e.what()};
  }
  auto [m, e] = recompute_indices(doc.root, sys);
  out << r.str() << "\n";
  out << "tight: " << (is_tight(doc.root, sys) ? "yes" : "no") << "\n";
  out << "indices: " << pair_str(m, e) << "\n";
  return r.accepted ? kExitOk : kExitRejected;
}

struct CompareArgs {
  Source src;
  unsigned fuel = kDefaultFuel;
};

std::string flag(const std::optional<bool> &b) {
  return b ? (*b ? "true" : "false") : "n/a";
}

int cmd_compare(const CompareArgs &a, std::ostream &out) {
  Term t = load_term(a.src);
  CompareReport r = compare_strategies(t, a.fuel);
  out << std::left << std::setw(10) << "strategy" << "counts\n";
  out << std::setw(10) << "cbn" << r.cbn.str() << "\n";
  out << std::setw(10) << "cbv" << r.cbv.str() << "\n";
  out << std::setw(10) << "need" << r.need.str() << "\n";
  out << "cbn_need_termination_agree " << (r.cbn_need_termination_agree ? "true" : "false")
      << "\n";
  out << "need_leq_cbv " << flag(r.need_leq_cbv) << "\n";
  out << "cbn_tight_geq_need " << flag(r.cbn_tight_geq_need) << "\n";
  return kExitOk;
}

struct GenArgs {
  GenConfig cfg;
  bool suite = false;
  std::string report;
  std::string fixtures;
  unsigned fuel = 200;
  bool mutate = false;
};

int cmd_gen(const GenArgs &a, std::ostream &out) {
  std::vector<Term> terms;
  try {
    terms = gen_closed_term(a.cfg);
  } catch (const ConfigError &e) {
    throw InputError{e.what()};
  }
  for (const auto &t : terms)
    out << print_term(t) << "\n";
  if (!a.suite)
    return kExitOk;
  SuiteOptions o;
  o.fuel = a.fuel;
  o.fixtures_dir = a.fixtures;
  o.mutation = a.mutate ? Mutation::AxFree : Mutation::None;
  SuiteReport rep = run_property_suite(a.cfg, o);
  out << rep.text();
  if (!a.report.empty()) {
    std::ofstream f(a.report);
    if (!f)
      throw InputError{"cannot write " + a.report};
    f << rep.json().dump(2) << "\n";
  }
  return rep.all_passed() ? kExitOk : kExitProperty;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err,
            const std::string &fixtures_dir) {
  CLI::App app{"Workbench for the linear substitution calculus and its "
               "multi type systems"};
  app.require_subcommand(1);
  auto strategies = CLI::IsMember({"cbn", "cbv", "need"});
  auto systems = CLI::IsMember({"cbn", "cbv", "need", "need-naive"});

  EvalArgs ea;
  auto *eval = app.add_subcommand("eval", "evaluate a term under a strategy");
  add_source(eval, ea.src, "term");
  eval->add_option("--strategy,-s", ea.strategy, "cbn, cbv or need")->check(strategies);
  eval->add_option("--cbv-order", ea.order, "cbv redex order")
      ->check(CLI::IsMember({"ltr", "rtl"}));
  eval->add_option("--fuel", ea.fuel, "step budget");
  eval->add_flag("--trace", ea.trace, "print every step");
  eval->add_flag("--gc", ea.gc, "take garbage collection steps");
  eval->add_flag("--json", ea.json, "print the trace as JSON");

  TypeArgs ta;
  auto *type = app.add_subcommand("type", "build the tight derivation of a term");
  add_source(type, ta.src, "term");
  type->add_option("--system", ta.system, "type system")->check(systems);
  type->add_option("--fuel", ta.fuel, "step budget");
  type->add_option("--out,-o", ta.out_file, "write the derivation document");
  type->add_flag("--tree", ta.tree, "print the derivation");

  CheckArgs ca;
  auto *chk = app.add_subcommand("check", "check a derivation document");
  chk->add_option("file", ca.file, "derivation document")->required();
  chk->add_option("--system", ca.system, "system to check against")->check(systems);

  CompareArgs cpa;
  auto *cmp = app.add_subcommand("compare", "evaluate under every strategy");
  add_source(cmp, cpa.src, "term");
  cmp->add_option("--fuel", cpa.fuel, "step budget");

  GenArgs ga;
  ga.fixtures = fixtures_dir;
  auto *gen = app.add_subcommand("gen", "generate closed terms");
  gen->add_option("--seed", ga.cfg.seed, "random seed");
  gen->add_option("--count,-n", ga.cfg.count, "number of terms");
  gen->add_option("--max-depth", ga.cfg.max_depth, "maximum term depth");
  gen->add_flag("--suite", ga.suite, "run the property suite on the terms");
  gen->add_option("--report", ga.report, "write the suite report as JSON");
  gen->add_option("--fixtures", ga.fixtures, "directory of derivation fixtures");
  gen->add_option("--fuel", ga.fuel, "suite step budget");
  gen->add_flag("--mutate", ga.mutate, "run the suite against a broken checker");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*eval)
      return cmd_eval(ea, out);
    if (*type)
      return cmd_type(ta, out, err);
    if (*chk)
      return cmd_check(ca, out);
    if (*cmp)
      return cmd_compare(cpa, out);
    return cmd_gen(ga, out);
  } catch (const InputError &e) {
    err << "error: " << e.msg << "\n";
    return kExitInput;
  }
}

} // namespace lsc
