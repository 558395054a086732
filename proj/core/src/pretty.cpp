#include "minerl/pretty.hpp"

#include <map>
#include <set>

namespace minerl {

namespace {

// precedence levels: union 0, inter 1, neg 2, arrow 3, atom 4
struct TypePrinter {
  TypeStore& store;
  const TypeDefs* defs;
  std::map<TypeRef, std::pair<Symbol, std::vector<TypeRef>>> spellings;
  std::set<TypeRef> on_path;

  TypePrinter(TypeStore& s, const TypeDefs* d) : store(s), defs(d) {
    if (defs) {
      for (const auto& [key, ref] : defs->instances())
        spellings.emplace(ref, key);
      for (const auto& [name, ctor] : defs->all()) {
        if (ctor.params.empty()) spellings.emplace(ctor.body, std::make_pair(name, std::vector<TypeRef>{}));
      }
    }
  }

  std::string paren(int need, int have, const std::string& s) {
    return have < need ? "(" + s + ")" : s;
  }

  std::string run(TypeRef t, int level) {
    auto sp = spellings.find(t);
    if (sp != spellings.end()) {
      const auto& [name, args] = sp->second;
      std::string out = symbol_name(name);
      if (!args.empty()) {
        out += "(";
        for (size_t i = 0; i < args.size(); ++i) {
          if (i) out += ", ";
          out += run(args[i], 0);
        }
        out += ")";
      }
      return out;
    }
    if (on_path.count(t)) return "<rec>";  // unnamed recursive graph
    on_path.insert(t);
    std::string out = node_str(t, level);
    on_path.erase(t);
    return out;
  }

  std::string node_str(TypeRef t, int level) {
    const TypeNode& n = store.node(t);
    switch (n.kind) {
      case TypeKind::Top: return "any";
      case TypeKind::Bottom: return "none";
      case TypeKind::Base: return n.base.str();
      case TypeKind::Var: return store.var_name(n.var);
      case TypeKind::Union: {
        std::string s;
        for (size_t i = 0; i < n.kids.size(); ++i) {
          if (i) s += " | ";
          s += run(n.kids[i], 1);
        }
        return paren(level <= 0 ? 0 : 1, 0, s);
      }
      case TypeKind::Inter: {
        std::string s;
        for (size_t i = 0; i < n.kids.size(); ++i) {
          if (i) s += " & ";
          s += run(n.kids[i], 2);
        }
        return level > 1 ? "(" + s + ")" : s;
      }
      case TypeKind::Neg:
        return level > 2 ? "(!" + run(n.kids[0], 2) + ")" : "!" + run(n.kids[0], 2);
      case TypeKind::Arrow: {
        std::string s = run(n.kids[0], 4) + " -> " + run(n.kids[1], 3);
        return level > 3 ? "(" + s + ")" : s;
      }
      case TypeKind::Product:
        return "{" + run(n.kids[0], 0) + ", " + run(n.kids[1], 0) + "}";
      case TypeKind::Hole:
        return "<hole>";
    }
    return "?";
  }
};

}  // namespace

std::string print_type(TypeStore& store, TypeRef t, const TypeDefs* defs) {
  TypePrinter p(store, defs);
  // Top-level union should not be parenthesized.
  const TypeNode& n = store.node(t);
  if (n.kind == TypeKind::Union) {
    auto sp = p.spellings.find(t);
    if (sp == p.spellings.end()) {
      std::string s;
      p.on_path.insert(t);
      for (size_t i = 0; i < n.kids.size(); ++i) {
        if (i) s += " | ";
        s += p.run(n.kids[i], 1);
      }
      return s;
    }
  }
  return p.run(t, 0);
}

std::string print_scheme(TypeStore& store, const AnnotatedScheme& ann,
                         const TypeDefs* defs) {
  std::string out;
  if (!ann.quantified.empty()) {
    out += "forall";
    for (TyVar v : ann.quantified) out += " " + store.var_name(v);
    out += ". ";
  }
  for (size_t i = 0; i < ann.members.size(); ++i) {
    if (i) out += " & ";
    TypePrinter p(store, defs);
    out += p.run(ann.members[i], ann.members.size() > 1 ? 2 : 0);
  }
  return out;
}

std::string print_pattern(const PatternPtr& p) {
  switch (p->kind) {
    case PatternKind::Const: return p->constant.str();
    case PatternKind::Wild: return "_";
    case PatternKind::Var: return symbol_name(p->var);
    case PatternKind::Pair:
      return "{" + print_pattern(p->left) + ", " + print_pattern(p->right) + "}";
  }
  return "?";
}

std::string print_guard(const GuardPtr& g) {
  switch (g->kind) {
    case GuardKind::True: return "true";
    case GuardKind::Oracle: return "oracle";
    case GuardKind::And:
      return print_guard(g->lhs) + " and " + print_guard(g->rhs);
    case GuardKind::Is: {
      std::string subj = g->subject->kind == ExprKind::Var
                             ? symbol_name(g->subject->var)
                             : print_expr(g->subject);
      return "is " + g->base.str() + " " + subj;
    }
  }
  return "true";
}

namespace {

// expression precedence: 0 = open (fun/case/letrec), 1 = application, 2 = atom
std::string print_expr_prec(const ExprPtr& e, int level) {
  switch (e->kind) {
    case ExprKind::Var: {
      return symbol_name(e->var);
    }
    case ExprKind::Const:
      return e->constant.str();
    case ExprKind::Abs: {
      std::string s = "fun " + symbol_name(e->var);
      ExprPtr body = e->child1;
      while (body->kind == ExprKind::Abs) {
        s += " " + symbol_name(body->var);
        body = body->child1;
      }
      s += " -> " + print_expr_prec(body, 0);
      return level > 0 ? "(" + s + ")" : s;
    }
    case ExprKind::App: {
      std::string s =
          print_expr_prec(e->child1, 1) + " " + print_expr_prec(e->child2, 2);
      return level > 1 ? "(" + s + ")" : s;
    }
    case ExprKind::Pair:
      return "{" + print_expr_prec(e->child1, 0) + ", " +
             print_expr_prec(e->child2, 0) + "}";
    case ExprKind::Case: {
      std::string s = "case " + print_expr_prec(e->child1, 0) + " of";
      for (size_t i = 0; i < e->clauses.size(); ++i) {
        const Clause& c = e->clauses[i];
        s += i ? "; " : " ";
        s += print_pattern(c.guarded_pattern.pattern);
        if (c.guarded_pattern.guard->kind != GuardKind::True)
          s += " when " + print_guard(c.guarded_pattern.guard);
        s += " -> " + print_expr_prec(c.body, 0);
      }
      s += " end";
      return level > 0 ? "(" + s + ")" : s;
    }
    case ExprKind::Letrec: {
      std::string s = "letrec ";
      for (size_t i = 0; i < e->defs.size(); ++i) {
        if (i) s += "; ";
        s += symbol_name(e->defs[i].name) + " = " +
             print_expr_prec(e->defs[i].rhs, 0);
      }
      s += " in " + print_expr_prec(e->child1, 0);
      return level > 0 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

}  // namespace

std::string print_expr(const ExprPtr& e) { return print_expr_prec(e, 0); }

std::string print_module(TypeStore& store, const Module& m) {
  std::string out;
  Symbol list = intern_symbol("list");
  for (const TypeDecl& d : m.type_decls) {
    if (d.name == list) continue;  // the builtin is re-injected on parse
    out += "type " + symbol_name(d.name);
    if (!d.params.empty()) {
      out += "(";
      for (size_t i = 0; i < d.params.size(); ++i) {
        if (i) out += ", ";
        out += symbol_name(d.params[i]);
      }
      out += ")";
    }
    const TypeDefs::Ctor* ctor = m.type_defs.find(d.name);
    out += " = ";
    if (ctor) {
      // print the unfolded body with recursive references spelled by name
      TypePrinter p(store, &m.type_defs);
      std::vector<TypeRef> self_args;
      for (TyVar v : ctor->params) self_args.push_back(store.var(v));
      p.spellings[ctor->body] = {d.name, self_args};
      const TypeNode& body = store.node(ctor->body);
      std::string s;
      if (body.kind == TypeKind::Union) {
        for (size_t i = 0; i < body.kids.size(); ++i) {
          if (i) s += " | ";
          s += p.run(body.kids[i], 1);
        }
      } else {
        p.spellings.erase(ctor->body);
        s = p.run(ctor->body, 0);
      }
      out += s;
    } else {
      out += "any";
    }
    out += ";\n";
  }
  for (const Definition& d : m.defs) {
    out += "def " + symbol_name(d.name);
    if (d.annotation) out += " : " + print_scheme(store, *d.annotation, &m.type_defs);
    out += " = " + print_expr(d.rhs) + ";\n";
  }
  if (m.main) out += "main = " + print_expr(m.main) + ";\n";
  return out;
}

std::string render_diagnostic(const Diagnostic& d) {
  std::string out = d.file + ":" + std::to_string(d.line) + ":" +
                    std::to_string(d.col) + ": ";
  out += d.severity == Severity::Error ? "error" : "warning";
  out += "[" + d.code + "]: " + d.message;
  return out;
}

}  // namespace minerl
