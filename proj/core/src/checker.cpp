#include "minerl/checker.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace minerl {

namespace {

Diagnostic make_diag(Severity sev, std::string code, const std::string& file,
                     Span span, std::string message) {
  Diagnostic d;
  d.severity = sev;
  d.code = std::move(code);
  d.file = file;
  d.line = span.line;
  d.col = span.col;
  d.message = std::move(message);
  return d;
}

struct Attempt {
  bool ok = false;
  bool limited = false;
  std::vector<BranchRecord> records;
  TypeSubst theta;
  std::vector<RewriteFailure> failures;
};

Attempt attempt_check(SubtypeCtx& ctx, const TypeEnv& env, const ConstraintSet& cs,
                      const std::set<TyVar>& extra_fixed,
                      const std::set<TyVar>& solvable, const CheckOptions& opts,
                      bool prefer_general = false) {
  Attempt a;
  try {
    RewriteResult rr = rewrite(ctx, env, cs, opts.rewrite);
    a.failures = rr.failures;
    std::set<TyVar> fixed = extra_fixed;
    for (TyVar v : env_free_tyvars(ctx.store(), env)) fixed.insert(v);
    for (TyVar v : solvable) fixed.erase(v);
    TallyOptions top_tally = opts.rewrite.tally;
    top_tally.prefer_general = prefer_general;
    for (const RewriteCandidate& cand : rr.candidates) {
      std::vector<TypeSubst> sols = tally(ctx, fixed, cand.constraints, top_tally);
      if (!sols.empty()) {
        a.ok = true;
        a.records = cand.branch_records;
        a.theta = sols.front();
        return a;
      }
    }
  } catch (const ResourceLimitError& e) {
    a.limited = true;
    a.failures.push_back({Span{}, e.what(), false});
  }
  return a;
}

struct CaseLiveness {
  Span span;
  std::vector<Span> branch_spans;
  std::vector<bool> ever_live;
  size_t member_runs = 0;
};

struct CheckerRun {
  SubtypeCtx& ctx;
  TypeStore& store;
  const Module& mod;
  const CheckOptions& opts;
  std::vector<Diagnostic> diags;
  std::map<Symbol, DefReport> reports;

  void merge_liveness(std::map<const Expr*, CaseLiveness>& acc,
                      const std::vector<BranchRecord>& records) {
    for (const BranchRecord& r : records) {
      CaseLiveness& cl = acc[r.case_expr];
      cl.span = r.span;
      if (cl.ever_live.size() < r.live.size()) {
        cl.ever_live.resize(r.live.size(), false);
        cl.branch_spans = r.branch_spans;
      }
      for (size_t i = 0; i < r.live.size(); ++i)
        if (r.live[i]) cl.ever_live[i] = true;
    }
  }

  MemberReport member_report(TypeRef member, const Attempt& a) {
    MemberReport rep;
    rep.member = member;
    rep.accepted = a.ok;
    if (!a.ok) return rep;
    std::vector<BranchRecord> ordered = a.records;
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const BranchRecord& x, const BranchRecord& y) {
                       if (x.span.line != y.span.line) return x.span.line < y.span.line;
                       return x.span.col < y.span.col;
                     });
    for (const BranchRecord& r : ordered) {
      CaseReport cr;
      cr.span = r.span;
      for (TypeRef in : r.inputs)
        cr.input_types.push_back(apply_subst(store, in, a.theta));
      cr.output_type = apply_subst(store, r.output_var, a.theta);
      rep.cases.push_back(std::move(cr));
    }
    return rep;
  }

  void report_failure(const Definition& d, size_t member_index, size_t member_count,
                      const Attempt& a) {
    if (a.limited) {
      diags.push_back(make_diag(Severity::Error, "resource-limit", mod.filename,
                                d.span,
                                "checking '" + symbol_name(d.name) +
                                    "' exceeded the configured search budget"));
      return;
    }
    for (const RewriteFailure& f : a.failures) {
      if (f.exhaustiveness) {
        diags.push_back(make_diag(Severity::Error, "non-exhaustive", mod.filename,
                                  f.span.valid() ? f.span : d.span, f.reason));
        return;
      }
    }
    std::string msg = "body of '" + symbol_name(d.name) + "' does not satisfy ";
    if (d.annotation && member_count > 1) {
      msg += "member " + std::to_string(member_index + 1) + " of its signature";
    } else if (d.annotation) {
      msg += "its signature";
    } else {
      msg = "no consistent type found for '" + symbol_name(d.name) + "'";
    }
    diags.push_back(
        make_diag(Severity::Error, "sig-mismatch", mod.filename, d.span, msg));
  }

  void run() {
    TypeEnv top;
    std::map<Symbol, const Definition*> by_name;
    std::vector<const Definition*> annotated, unannotated;
    std::set<Symbol> invalid;

    for (const Definition& d : mod.defs) {
      if (!by_name.emplace(d.name, &d).second) {
        diags.push_back(make_diag(Severity::Error, "duplicate-def", mod.filename,
                                  d.span,
                                  "duplicate definition of '" +
                                      symbol_name(d.name) + "'"));
        invalid.insert(d.name);
        continue;
      }
      if (!d.rhs || d.rhs->kind != ExprKind::Abs) {
        diags.push_back(make_diag(Severity::Error, "not-a-function", mod.filename,
                                  d.span,
                                  "the right-hand side of '" + symbol_name(d.name) +
                                      "' must be a function"));
        invalid.insert(d.name);
        continue;
      }
      if (d.annotation) {
        const AnnotatedScheme& ann = *d.annotation;
        TypeScheme scheme{ann.quantified, ann.body};
        if (!free_tyvars(store, scheme).empty()) {
          diags.push_back(make_diag(
              Severity::Error, "open-annotation", mod.filename, d.span,
              "the signature of '" + symbol_name(d.name) +
                  "' mentions type variables outside its quantifier"));
          invalid.insert(d.name);
        } else {
          bool shaped = !ann.members.empty();
          for (TypeRef mref : ann.members)
            shaped = shaped && store.node(mref).kind == TypeKind::Arrow;
          if (!shaped) {
            diags.push_back(make_diag(
                Severity::Error, "annotation-shape", mod.filename, d.span,
                "the signature of '" + symbol_name(d.name) +
                    "' must be an intersection of function types"));
            invalid.insert(d.name);
          }
        }
        top.bind(d.name, scheme);
        if (!invalid.count(d.name)) annotated.push_back(&d);
      } else {
        top.bind_mono(d.name, store.var(store.fresh_var(symbol_name(d.name))));
        unannotated.push_back(&d);
      }
    }

    // Unannotated definitions first, strongly connected groups in dependency
    // order, their solutions generalized into the environment.
    std::map<Symbol, std::set<Symbol>> graph;
    std::set<Symbol> un_names;
    for (const Definition* d : unannotated) un_names.insert(d->name);
    for (const Definition* d : unannotated) {
      std::set<Symbol> deps;
      for (Symbol v : free_vars(d->rhs))
        if (un_names.count(v) && v != d->name) deps.insert(v);
      graph[d->name] = std::move(deps);
    }
    std::vector<std::vector<Symbol>> sccs = topo_sccs(graph);

    std::map<const Expr*, CaseLiveness> liveness;
    for (const auto& scc : sccs) {
      ConstraintSet cs;
      std::set<TyVar> solvable;
      FreshSource fresh(store);
      for (Symbol name : scc) {
        const Definition* d = by_name[name];
        const TypeScheme* bound = top.lookup(name);
        assert(bound && bound->is_mono());
        solvable.insert(store.node(bound->body).var);
        ConstraintSet body = gen_expr(store, fresh, d->rhs, bound->body);
        cs.insert(cs.end(), body.begin(), body.end());
      }
      Attempt a = attempt_check(ctx, top, cs, {}, solvable, opts, true);
      DefReport scc_report;
      scc_report.members.push_back(member_report(0, a));
      if (!a.ok) {
        for (Symbol name : scc) {
          report_failure(*by_name[name], 0, 1, a);
          invalid.insert(name);
        }
        continue;
      }
      merge_liveness(liveness, a.records);
      for (Symbol name : scc) {
        reports[name] = scc_report;
        TypeEnv outer = top;
        for (Symbol other : scc) outer.binds.erase(other);
        const TypeScheme* bound = top.lookup(name);
        TypeRef solved = apply_subst(store, bound->body, a.theta);
        TypeEnv solved_env;
        solved_env.bind_mono(name, solved);
        TypeEnv gen = generalize(store, outer, solved_env);
        top.bind(name, *gen.lookup(name));
      }
      mark_member_run(liveness, a.records);
    }

    // Annotated definitions, each arrow member separately.
    for (const Definition* d : annotated) {
      const AnnotatedScheme& ann = *d->annotation;
      DefReport rep;
      bool all_ok = true;
      std::map<const Expr*, CaseLiveness> local;
      for (size_t k = 0; k < ann.members.size(); ++k) {
        const TypeNode& mem = store.node(ann.members[k]);
        FreshSource fresh(store);
        TypeEnv param_env;
        param_env.bind_mono(d->rhs->var, mem.kids[0]);
        ConstraintSet cs{Constraint::def(
            param_env, gen_expr(store, fresh, d->rhs->child1, mem.kids[1]), d->span)};
        std::set<TyVar> extra(ann.quantified.begin(), ann.quantified.end());
        Attempt a = attempt_check(ctx, top, cs, extra, {}, opts);
        rep.members.push_back(member_report(ann.members[k], a));
        if (!a.ok) {
          all_ok = false;
          report_failure(*d, k, ann.members.size(), a);
        } else {
          merge_liveness(local, a.records);
          mark_member_run(local, a.records);
        }
      }
      reports[d->name] = std::move(rep);
      if (all_ok) {
        for (auto& [expr, cl] : local) {
          CaseLiveness& g = liveness[expr];
          if (g.ever_live.size() < cl.ever_live.size()) {
            g.span = cl.span;
            g.ever_live.resize(cl.ever_live.size(), false);
            g.branch_spans = cl.branch_spans;
          }
          for (size_t i = 0; i < cl.ever_live.size(); ++i)
            if (cl.ever_live[i]) g.ever_live[i] = true;
          g.member_runs += cl.member_runs;
        }
      }
    }

    // The main expression under the final environment.
    if (mod.main) {
      FreshSource fresh(store);
      TypeRef target = fresh.fresh_ref("main");
      ConstraintSet cs = gen_expr(store, fresh, mod.main, target);
      std::set<TyVar> solvable{store.node(target).var};
      Attempt a = attempt_check(ctx, top, cs, {}, solvable, opts);
      if (!a.ok) {
        bool named = false;
        for (const RewriteFailure& f : a.failures) {
          if (f.exhaustiveness) {
            diags.push_back(make_diag(Severity::Error, "non-exhaustive",
                                      mod.filename, f.span, f.reason));
            named = true;
            break;
          }
        }
        if (!named)
          diags.push_back(make_diag(Severity::Error, "main-ill-typed", mod.filename,
                                    mod.main->span,
                                    "the main expression is ill-typed"));
      } else {
        merge_liveness(liveness, a.records);
        mark_member_run(liveness, a.records);
      }
    }

    // Branches that stayed dead across every member they were checked under.
    for (const auto& [expr, cl] : liveness) {
      (void)expr;
      if (cl.member_runs == 0) continue;
      for (size_t i = 0; i < cl.ever_live.size(); ++i) {
        if (!cl.ever_live[i]) {
          diags.push_back(make_diag(Severity::Warning, "dead-branch", mod.filename,
                                    cl.branch_spans[i],
                                    "this branch can never match"));
        }
      }
    }
    std::stable_sort(diags.begin(), diags.end(),
                     [](const Diagnostic& a, const Diagnostic& b) {
                       if (a.line != b.line) return a.line < b.line;
                       return a.col < b.col;
                     });
  }

  static void mark_member_run(std::map<const Expr*, CaseLiveness>& acc,
                              const std::vector<BranchRecord>& records) {
    for (const BranchRecord& r : records) acc[r.case_expr].member_runs += 1;
  }

  static std::vector<std::vector<Symbol>> topo_sccs(
      const std::map<Symbol, std::set<Symbol>>& graph) {
    std::map<Symbol, int> index, low;
    std::vector<Symbol> stack;
    std::set<Symbol> on_stack;
    std::vector<std::vector<Symbol>> out;
    int counter = 0;
    std::function<void(Symbol)> connect = [&](Symbol v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack.insert(v);
      for (Symbol w : graph.at(v)) {
        if (!index.count(w)) {
          connect(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        std::vector<Symbol> scc;
        Symbol w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack.erase(w);
          scc.push_back(w);
        } while (w != v);
        std::reverse(scc.begin(), scc.end());
        out.push_back(std::move(scc));
      }
    };
    for (const auto& [v, deps] : graph)
      if (!index.count(v)) connect(v);
    return out;
  }
};

}  // namespace

CheckResult check_module(SubtypeCtx& ctx, const Module& m, const CheckOptions& opts) {
  CheckerRun run{ctx, ctx.store(), m, opts};
  run.run();
  CheckResult res;
  res.diagnostics = std::move(run.diags);
  return res;
}

std::optional<DefReport> branch_report(SubtypeCtx& ctx, const Module& m,
                                       Symbol def_name, const CheckOptions& opts) {
  bool known = false;
  for (const Definition& d : m.defs) known = known || d.name == def_name;
  if (!known) return std::nullopt;
  CheckerRun run{ctx, ctx.store(), m, opts};
  run.run();
  auto it = run.reports.find(def_name);
  if (it == run.reports.end()) return std::nullopt;
  return it->second;
}

}  // namespace minerl
