#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "minerl/finite_model.hpp"
#include "minerl/interp.hpp"
#include "minerl/parser.hpp"
#include "minerl/pretty.hpp"

using namespace minerl;

namespace {

bool g_json = false;

void emit(const Diagnostic& d) {
  if (g_json) {
    nlohmann::json j{
        {"severity", d.severity == Severity::Error ? "error" : "warning"},
        {"code", d.code},
        {"file", d.file},
        {"line", d.line},
        {"col", d.col},
        {"message", d.message},
    };
    std::cout << j.dump() << "\n";
  } else {
    std::cout << render_diagnostic(d) << "\n";
  }
}

void emit_all(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) emit(d);
}

int usage_error(const std::string& file, const std::string& msg) {
  emit({Severity::Error, "usage", file, 0, 0, msg});
  return 2;
}

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// exit code 2 on parse failure
std::optional<Module> load(TypeStore& store, const std::string& path, int& rc) {
  auto text = slurp(path);
  if (!text) {
    rc = usage_error(path, "cannot read file");
    return std::nullopt;
  }
  ParseResult pr = parse(store, {path, *text});
  if (!pr.ok()) {
    emit_all(pr.diagnostics);
    rc = 2;
    return std::nullopt;
  }
  return std::move(*pr.module);
}

int cmd_check(const std::string& path) {
  TypeStore store;
  SubtypeCtx ctx(store);
  int rc = 0;
  auto mod = load(store, path, rc);
  if (!mod) return rc;
  CheckResult res = check_module(ctx, *mod);
  emit_all(res.diagnostics);
  return res.ok() ? 0 : 1;
}

int cmd_eval(const std::string& path, uint64_t fuel, uint64_t seed) {
  TypeStore store;
  int rc = 0;
  auto mod = load(store, path, rc);
  if (!mod) return rc;
  if (!mod->main) return usage_error(path, "the module has no main expression");
  OracleSource oracle(seed);
  EvalResult r = eval(*mod, fuel, oracle);
  switch (r.status) {
    case EvalStatus::Value:
      std::cout << value_str(r.value) << "\n";
      return 0;
    case EvalStatus::Stuck:
      emit({Severity::Error, "eval-stuck", path,
            r.offender ? r.offender->span.line : 0,
            r.offender ? r.offender->span.col : 0,
            "evaluation got stuck at: " + print_expr(r.offender)});
      return 1;
    case EvalStatus::OutOfFuel:
      emit({Severity::Error, "out-of-fuel", path, 0, 0,
            "evaluation did not finish within " + std::to_string(fuel) + " steps"});
      return 1;
  }
  return 1;
}

int cmd_subtype(const std::string& path, const std::string& s, const std::string& t) {
  TypeStore store;
  int rc = 0;
  auto mod = load(store, path, rc);
  if (!mod) return rc;
  std::map<Symbol, TyVar> vars;
  std::vector<Diagnostic> diags;
  auto lhs = parse_type_text(store, mod->type_defs, s, vars, diags);
  auto rhs = parse_type_text(store, mod->type_defs, t, vars, diags);
  if (!lhs || !rhs) {
    emit_all(diags);
    return 2;
  }
  SubtypeCtx ctx(store);
  std::cout << (ctx.is_subtype(*lhs, *rhs) ? "true" : "false") << "\n";
  return 0;
}

int cmd_branches(const std::string& path, const std::string& def) {
  TypeStore store;
  SubtypeCtx ctx(store);
  int rc = 0;
  auto mod = load(store, path, rc);
  if (!mod) return rc;
  auto rep = branch_report(ctx, *mod, intern_symbol(def));
  if (!rep) return usage_error(path, "unknown definition '" + def + "'");
  for (size_t m = 0; m < rep->members.size(); ++m) {
    const MemberReport& mr = rep->members[m];
    std::cout << "member " << (m + 1);
    if (mr.member) std::cout << ": " << print_type(store, mr.member, &mod->type_defs);
    std::cout << (mr.accepted ? "" : " (not accepted)") << "\n";
    for (const CaseReport& c : mr.cases) {
      std::cout << "  case at " << c.span.line << ":" << c.span.col << "\n";
      for (size_t i = 0; i < c.input_types.size(); ++i) {
        std::cout << "    branch " << (i + 1) << ": "
                  << print_type(store, c.input_types[i], &mod->type_defs) << "\n";
      }
      std::cout << "    output: "
                << print_type(store, c.output_type, &mod->type_defs) << "\n";
    }
  }
  return 0;
}

int cmd_oracle(const std::string& path, const std::string& s, const std::string& t,
               const std::string& atoms, const std::string& ints, uint32_t depth,
               bool with_float) {
  TypeStore store;
  int rc = 0;
  auto mod = load(store, path, rc);
  if (!mod) return rc;
  std::map<Symbol, TyVar> vars;
  std::vector<Diagnostic> diags;
  auto lhs = parse_type_text(store, mod->type_defs, s, vars, diags);
  auto rhs = parse_type_text(store, mod->type_defs, t, vars, diags);
  if (!lhs || !rhs) {
    emit_all(diags);
    return 2;
  }
  Universe u;
  u.max_depth = depth;
  u.include_float = with_float;
  std::stringstream as(atoms);
  std::string item;
  while (std::getline(as, item, ','))
    if (!item.empty()) u.atoms.push_back(intern_symbol(item));
  std::stringstream is(ints);
  while (std::getline(is, item, ','))
    if (!item.empty()) u.ints.push_back(BigInt::parse(item));
  if (u.atoms.empty() || u.ints.empty())
    return usage_error(path, "--atoms and --ints must be nonempty");
  try {
    std::cout << (subtype_oracle(store, *lhs, *rhs, u) ? "true" : "false") << "\n";
  } catch (const FiniteModelUnsupported& e) {
    return usage_error(path, e.what());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Type checker and interpreter for the MinErl core calculus"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "emit diagnostics as one JSON object per line");

  std::string file, lhs, rhs, def_name, atoms = "a,b,nil", ints = "0,1,2,3";
  uint64_t fuel = 1000000, seed = 0;
  uint32_t depth = 2;
  bool with_float = false;

  CLI::App* check = app.add_subcommand("check", "type-check a module");
  check->add_option("file", file, "module file")->required();

  CLI::App* ev = app.add_subcommand("eval", "evaluate the main expression");
  ev->add_option("file", file, "module file")->required();
  ev->add_option("--fuel", fuel, "step budget");
  ev->add_option("--seed", seed, "oracle seed");

  CLI::App* sub = app.add_subcommand("subtype", "decide a subtyping question");
  sub->add_option("file", file, "module providing type declarations")->required();
  sub->add_option("lhs", lhs, "left type")->required();
  sub->add_option("rhs", rhs, "right type")->required();

  CLI::App* br = app.add_subcommand("branches", "show case branch input types");
  br->add_option("file", file, "module file")->required();
  br->add_option("def", def_name, "definition name")->required();

  CLI::App* orc = app.add_subcommand("oracle", "finite-model subtyping verdict");
  orc->add_option("file", file, "module providing type declarations")->required();
  orc->add_option("lhs", lhs, "left type")->required();
  orc->add_option("rhs", rhs, "right type")->required();
  orc->add_option("--atoms", atoms, "comma separated atom names");
  orc->add_option("--ints", ints, "comma separated integers");
  orc->add_option("--depth", depth, "pair nesting bound");
  orc->add_flag("--float", with_float, "include a float value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (check->parsed()) return cmd_check(file);
  if (ev->parsed()) return cmd_eval(file, fuel, seed);
  if (sub->parsed()) return cmd_subtype(file, lhs, rhs);
  if (br->parsed()) return cmd_branches(file, def_name);
  if (orc->parsed()) return cmd_oracle(file, lhs, rhs, atoms, ints, depth, with_float);
  return 2;
}
