#include "minerl/types.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace minerl {

bool TypeNode::operator==(const TypeNode& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case TypeKind::Top:
    case TypeKind::Bottom:
    case TypeKind::Hole:
      return true;
    case TypeKind::Var:
      return var == o.var;
    case TypeKind::Base:
      return base == o.base;
    default:
      return kids == o.kids;
  }
}

size_t TypeNode::hash() const {
  size_t h = static_cast<size_t>(kind) * 0x100000001b3ull;
  switch (kind) {
    case TypeKind::Var:
      hash_mix(h, var);
      break;
    case TypeKind::Base:
      hash_mix(h, base.hash());
      break;
    default:
      for (TypeRef k : kids) hash_mix(h, k);
      break;
  }
  return h;
}

TypeStore::TypeStore() {
  TypeNode top_node;
  top_node.kind = TypeKind::Top;
  top_ = lookup_or_insert(top_node);
  TypeNode bot_node;
  bot_node.kind = TypeKind::Bottom;
  bottom_ = lookup_or_insert(bot_node);
}

TypeRef TypeStore::lookup_or_insert(TypeNode node) {
  size_t h = node.hash();
  auto& bucket = table_[h];
  for (TypeRef r : bucket) {
    if (nodes_[r] == node) return r;
  }
  TypeRef r = static_cast<TypeRef>(nodes_.size());
  nodes_.push_back(std::move(node));
  bucket.push_back(r);
  return r;
}

TypeRef TypeStore::base(const BaseType& b) {
  TypeNode n;
  n.kind = TypeKind::Base;
  n.base = b;
  return lookup_or_insert(std::move(n));
}

TypeRef TypeStore::var(TyVar v) {
  TypeNode n;
  n.kind = TypeKind::Var;
  n.var = v;
  return lookup_or_insert(std::move(n));
}

TypeRef TypeStore::arrow(TypeRef dom, TypeRef cod) {
  TypeNode n;
  n.kind = TypeKind::Arrow;
  n.kids = {dom, cod};
  return lookup_or_insert(std::move(n));
}

TypeRef TypeStore::product(TypeRef left, TypeRef right) {
  TypeNode n;
  n.kind = TypeKind::Product;
  n.kids = {left, right};
  return lookup_or_insert(std::move(n));
}

TypeRef TypeStore::neg(TypeRef t) {
  const TypeNode& n = nodes_[t];
  if (n.kind == TypeKind::Neg) return n.kids[0];
  if (t == top_) return bottom_;
  if (t == bottom_) return top_;
  TypeNode out;
  out.kind = TypeKind::Neg;
  out.kids = {t};
  return lookup_or_insert(std::move(out));
}

TypeRef TypeStore::unite(std::vector<TypeRef> members) {
  std::vector<TypeRef> flat;
  // Flatten nested unions; holes stay opaque.
  std::vector<TypeRef> work(members.rbegin(), members.rend());
  while (!work.empty()) {
    TypeRef m = work.back();
    work.pop_back();
    const TypeNode& n = nodes_[m];
    if (n.kind == TypeKind::Union) {
      for (auto it = n.kids.rbegin(); it != n.kids.rend(); ++it) work.push_back(*it);
    } else if (m == bottom_) {
      continue;
    } else if (m == top_) {
      return top_;
    } else {
      flat.push_back(m);
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return bottom_;
  if (flat.size() == 1) return flat[0];
  TypeNode out;
  out.kind = TypeKind::Union;
  out.kids = std::move(flat);
  return lookup_or_insert(std::move(out));
}

TypeRef TypeStore::intersect(std::vector<TypeRef> members) {
  std::vector<TypeRef> flat;
  std::vector<TypeRef> work(members.rbegin(), members.rend());
  while (!work.empty()) {
    TypeRef m = work.back();
    work.pop_back();
    const TypeNode& n = nodes_[m];
    if (n.kind == TypeKind::Inter) {
      for (auto it = n.kids.rbegin(); it != n.kids.rend(); ++it) work.push_back(*it);
    } else if (m == top_) {
      continue;
    } else if (m == bottom_) {
      return bottom_;
    } else {
      flat.push_back(m);
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return top_;
  if (flat.size() == 1) return flat[0];
  TypeNode out;
  out.kind = TypeKind::Inter;
  out.kids = std::move(flat);
  return lookup_or_insert(std::move(out));
}

TypeRef TypeStore::intern(const TypeNode& node) {
  switch (node.kind) {
    case TypeKind::Top: return top_;
    case TypeKind::Bottom: return bottom_;
    case TypeKind::Union: return unite(node.kids);
    case TypeKind::Inter: return intersect(node.kids);
    case TypeKind::Neg: return neg(node.kids[0]);
    case TypeKind::Arrow: return arrow(node.kids[0], node.kids[1]);
    case TypeKind::Product: return product(node.kids[0], node.kids[1]);
    case TypeKind::Var: return var(node.var);
    case TypeKind::Base: return base(node.base);
    case TypeKind::Hole: assert(false && "cannot intern a hole"); return top_;
  }
  return top_;
}

TyVar TypeStore::fresh_var(std::string hint) {
  TyVar v = static_cast<TyVar>(var_names_.size());
  var_names_.push_back(std::move(hint));
  return v;
}

TypeRef TypeStore::make_hole() {
  TypeNode n;
  n.kind = TypeKind::Hole;
  TypeRef r = static_cast<TypeRef>(nodes_.size());
  nodes_.push_back(std::move(n));
  return r;
}

void TypeStore::patch(TypeRef hole, TypeRef content) {
  assert(nodes_[hole].kind == TypeKind::Hole);
  assert(hole != content);
  assert(nodes_[content].kind != TypeKind::Hole);
  nodes_[hole] = nodes_[content];
  // Make the patched handle findable so later interning of the same shape
  // reuses it when possible.
  size_t h = nodes_[hole].hash();
  table_[h].push_back(hole);
}

bool TypeStore::is_atom_node(TypeRef t) const {
  switch (nodes_[t].kind) {
    case TypeKind::Base:
    case TypeKind::Arrow:
    case TypeKind::Product:
    case TypeKind::Var:
      return true;
    default:
      return false;
  }
}

namespace {

void line_sort(DnfLine& l) {
  std::sort(l.pos.begin(), l.pos.end());
  l.pos.erase(std::unique(l.pos.begin(), l.pos.end()), l.pos.end());
  std::sort(l.neg.begin(), l.neg.end());
  l.neg.erase(std::unique(l.neg.begin(), l.neg.end()), l.neg.end());
}

bool line_contradicts(const DnfLine& l) {
  // pos and neg are sorted.
  size_t i = 0, j = 0;
  while (i < l.pos.size() && j < l.neg.size()) {
    if (l.pos[i] == l.neg[j]) return true;
    if (l.pos[i] < l.neg[j]) ++i;
    else ++j;
  }
  return false;
}

bool subset(const std::vector<TypeRef>& a, const std::vector<TypeRef>& b) {
  // a ⊆ b, both sorted
  size_t i = 0;
  for (TypeRef x : a) {
    while (i < b.size() && b[i] < x) ++i;
    if (i >= b.size() || b[i] != x) return false;
  }
  return true;
}

void prune_lines(Dnf& d) {
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  // Drop lines covered by a strictly more general line.
  std::vector<bool> dead(d.size(), false);
  for (size_t i = 0; i < d.size(); ++i) {
    if (dead[i]) continue;
    for (size_t j = 0; j < d.size(); ++j) {
      if (i == j || dead[j]) continue;
      if (subset(d[j].pos, d[i].pos) && subset(d[j].neg, d[i].neg)) {
        dead[i] = true;
        break;
      }
    }
  }
  Dnf out;
  for (size_t i = 0; i < d.size(); ++i)
    if (!dead[i]) out.push_back(std::move(d[i]));
  d = std::move(out);
}

Dnf cross(const Dnf& a, const Dnf& b) {
  Dnf out;
  for (const auto& la : a) {
    for (const auto& lb : b) {
      DnfLine l;
      l.pos = la.pos;
      l.pos.insert(l.pos.end(), lb.pos.begin(), lb.pos.end());
      l.neg = la.neg;
      l.neg.insert(l.neg.end(), lb.neg.begin(), lb.neg.end());
      line_sort(l);
      if (!line_contradicts(l)) out.push_back(std::move(l));
    }
  }
  prune_lines(out);
  return out;
}

}  // namespace

void TypeStore::dnf_of(TypeRef t, Dnf& out) {
  const TypeNode& n = nodes_[t];
  switch (n.kind) {
    case TypeKind::Top:
      out.push_back(DnfLine{});
      break;
    case TypeKind::Bottom:
      break;
    case TypeKind::Union: {
      for (TypeRef k : n.kids) {
        const Dnf& kd = dnf(k);
        out.insert(out.end(), kd.begin(), kd.end());
      }
      prune_lines(out);
      break;
    }
    case TypeKind::Inter: {
      out.push_back(DnfLine{});
      for (TypeRef k : n.kids) out = cross(out, dnf(k));
      break;
    }
    case TypeKind::Neg: {
      const Dnf& kd = dnf(n.kids[0]);
      out.push_back(DnfLine{});
      for (const auto& line : kd) {
        Dnf alt;
        for (TypeRef p : line.pos) alt.push_back(DnfLine{{}, {p}});
        for (TypeRef m : line.neg) alt.push_back(DnfLine{{m}, {}});
        out = cross(out, alt);
      }
      break;
    }
    case TypeKind::Arrow:
    case TypeKind::Product:
    case TypeKind::Var:
    case TypeKind::Base:
      out.push_back(DnfLine{{t}, {}});
      break;
    case TypeKind::Hole:
      assert(false && "dnf of unfinished type");
      break;
  }
}

const Dnf& TypeStore::dnf(TypeRef t) {
  auto it = dnf_cache_.find(t);
  if (it != dnf_cache_.end()) return it->second;
  Dnf d;
  dnf_of(t, d);
  return dnf_cache_.emplace(t, std::move(d)).first->second;
}

const std::vector<TyVar>& TypeStore::free_vars(TypeRef t) {
  auto it = fv_cache_.find(t);
  if (it != fv_cache_.end()) return it->second;
  std::set<TyVar> vars;
  std::vector<TypeRef> stack{t};
  std::set<TypeRef> seen;
  while (!stack.empty()) {
    TypeRef r = stack.back();
    stack.pop_back();
    if (!seen.insert(r).second) continue;
    const TypeNode& n = nodes_[r];
    if (n.kind == TypeKind::Var) {
      vars.insert(n.var);
    } else {
      for (TypeRef k : n.kids) stack.push_back(k);
    }
  }
  std::vector<TyVar> out(vars.begin(), vars.end());
  return fv_cache_.emplace(t, std::move(out)).first->second;
}

std::vector<TyVar> free_tyvars(TypeStore& store, TypeRef t) {
  return store.free_vars(t);
}

std::vector<TyVar> free_tyvars(TypeStore& store, const TypeScheme& s) {
  std::vector<TyVar> out;
  for (TyVar v : store.free_vars(s.body)) {
    if (std::find(s.quantified.begin(), s.quantified.end(), v) == s.quantified.end())
      out.push_back(v);
  }
  return out;
}

namespace {

struct SubstJob {
  TypeStore& store;
  const TypeSubst& subst;
  std::unordered_map<TypeRef, TypeRef> memo;
  struct InProgress {
    TypeRef hole;
    bool used = false;
  };
  std::unordered_map<TypeRef, InProgress> in_progress;

  bool touches(TypeRef t) {
    for (TyVar v : store.free_vars(t)) {
      if (subst.count(v)) return true;
    }
    return false;
  }

  TypeRef run(TypeRef t) {
    auto done = memo.find(t);
    if (done != memo.end()) return done->second;
    auto open = in_progress.find(t);
    if (open != in_progress.end()) {
      open->second.used = true;
      return open->second.hole;
    }
    const TypeNode n = store.node(t);
    if (n.kind == TypeKind::Var) {
      auto it = subst.find(n.var);
      TypeRef r = it != subst.end() ? it->second : t;
      memo[t] = r;
      return r;
    }
    if (!touches(t)) {
      memo[t] = t;
      return t;
    }
    TypeRef hole = store.make_hole();
    in_progress[t] = {hole, false};
    std::vector<TypeRef> kids;
    kids.reserve(n.kids.size());
    for (TypeRef k : n.kids) kids.push_back(run(k));
    TypeRef r = 0;
    switch (n.kind) {
      case TypeKind::Union: r = store.unite(std::move(kids)); break;
      case TypeKind::Inter: r = store.intersect(std::move(kids)); break;
      case TypeKind::Neg: r = store.neg(kids[0]); break;
      case TypeKind::Arrow: r = store.arrow(kids[0], kids[1]); break;
      case TypeKind::Product: r = store.product(kids[0], kids[1]); break;
      default:
        assert(false && "unexpected node under substitution");
        r = t;
        break;
    }
    bool used = in_progress.at(t).used;
    in_progress.erase(t);
    if (used) {
      store.patch(hole, r);
      memo[t] = hole;
      return hole;
    }
    memo[t] = r;
    return r;
  }
};

}  // namespace

TypeRef apply_subst(TypeStore& store, TypeRef t, const TypeSubst& subst) {
  if (subst.empty()) return t;
  SubstJob job{store, subst};
  return job.run(t);
}

TypeRef scheme_body_instantiated(TypeStore& store, const TypeScheme& s,
                                 const TypeSubst& inst) {
  return apply_subst(store, s.body, inst);
}

// ---------------------------------------------------------------------------
// Syntactic types, declarations, lowering.

TypeExprPtr TypeExpr::make(TypeExprKind k, std::vector<TypeExprPtr> args, Span s) {
  auto t = std::make_shared<TypeExpr>();
  t->kind = k;
  t->args = std::move(args);
  t->span = s;
  return t;
}

TypeExprPtr TypeExpr::make_base(BaseType b, Span s) {
  auto t = std::make_shared<TypeExpr>();
  t->kind = TypeExprKind::Base;
  t->base = std::move(b);
  t->span = s;
  return t;
}

TypeExprPtr TypeExpr::make_name(Symbol n, std::vector<TypeExprPtr> args, Span s) {
  auto t = std::make_shared<TypeExpr>();
  t->kind = TypeExprKind::Name;
  t->name = n;
  t->args = std::move(args);
  t->span = s;
  return t;
}

const TypeDefs::Ctor* TypeDefs::find(Symbol name) const {
  auto it = ctors_.find(name);
  return it == ctors_.end() ? nullptr : &it->second;
}

std::optional<TypeRef> TypeDefs::instantiate(TypeStore& store, Symbol name,
                                             const std::vector<TypeRef>& args) const {
  auto it = ctors_.find(name);
  if (it == ctors_.end()) return std::nullopt;
  const Ctor& c = it->second;
  if (args.size() != c.params.size()) return std::nullopt;
  if (c.params.empty()) return c.body;
  auto key = std::make_pair(name, args);
  auto cached = inst_cache_.find(key);
  if (cached != inst_cache_.end()) return cached->second;
  TypeSubst subst;
  for (size_t i = 0; i < args.size(); ++i) subst[c.params[i]] = args[i];
  TypeRef r = apply_subst(store, c.body, subst);
  inst_cache_.emplace(std::move(key), r);
  return r;
}

namespace {

struct SccHook {
  // Members of the strongly connected group being declared; hole per name.
  std::map<Symbol, TypeRef> holes;
  // Parameter symbols of the declaration currently being lowered.
  const std::vector<Symbol>* enclosing_params = nullptr;
};

struct Lowering {
  TypeStore& store;
  const TypeDefs& defs;
  const std::map<Symbol, TyVar>& vars;
  SccHook* hook;
  std::vector<DeclError>& errors;

  TypeRef run(const TypeExprPtr& te) {
    switch (te->kind) {
      case TypeExprKind::Any: return store.top();
      case TypeExprKind::None: return store.bottom();
      case TypeExprKind::Base: return store.base(te->base);
      case TypeExprKind::Union: {
        std::vector<TypeRef> kids;
        for (const auto& a : te->args) kids.push_back(run(a));
        return store.unite(std::move(kids));
      }
      case TypeExprKind::Inter: {
        std::vector<TypeRef> kids;
        for (const auto& a : te->args) kids.push_back(run(a));
        return store.intersect(std::move(kids));
      }
      case TypeExprKind::Neg:
        return store.neg(run(te->args[0]));
      case TypeExprKind::Arrow:
        return store.arrow(run(te->args[0]), run(te->args[1]));
      case TypeExprKind::Product:
        return store.product(run(te->args[0]), run(te->args[1]));
      case TypeExprKind::Name: {
        auto v = vars.find(te->name);
        if (v != vars.end()) {
          if (!te->args.empty()) {
            errors.push_back({DeclErrorCode::BadArity, te->span,
                              "type variable '" + symbol_name(te->name) +
                                  "' cannot take arguments"});
            return store.bottom();
          }
          return store.var(v->second);
        }
        if (hook) {
          auto h = hook->holes.find(te->name);
          if (h != hook->holes.end()) {
            // Inside a recursive group a member must be applied verbatim to
            // the enclosing parameters, otherwise the unfolding would not be
            // a regular tree.
            const auto& params = *hook->enclosing_params;
            bool regular = te->args.size() == params.size();
            if (regular) {
              for (size_t i = 0; i < params.size(); ++i) {
                const TypeExpr& a = *te->args[i];
                if (a.kind != TypeExprKind::Name || !a.args.empty() ||
                    a.name != params[i]) {
                  regular = false;
                  break;
                }
              }
            }
            if (!regular) {
              errors.push_back(
                  {DeclErrorCode::NonRegular, te->span,
                   "recursive use of '" + symbol_name(te->name) +
                       "' must be applied to the declaration parameters unchanged"});
              return store.bottom();
            }
            return h->second;
          }
        }
        const TypeDefs::Ctor* c = defs.find(te->name);
        if (!c) {
          errors.push_back({DeclErrorCode::UnknownName, te->span,
                            "unknown type name '" + symbol_name(te->name) + "'"});
          return store.bottom();
        }
        if (c->params.size() != te->args.size()) {
          errors.push_back({DeclErrorCode::BadArity, te->span,
                            "'" + symbol_name(te->name) + "' expects " +
                                std::to_string(c->params.size()) + " argument(s)"});
          return store.bottom();
        }
        std::vector<TypeRef> args;
        for (const auto& a : te->args) args.push_back(run(a));
        return *defs.instantiate(store, te->name, args);
      }
    }
    return store.bottom();
  }
};

void collect_group_refs(const TypeExprPtr& te, const std::set<Symbol>& group,
                        std::set<Symbol>& out) {
  if (te->kind == TypeExprKind::Name && group.count(te->name)) out.insert(te->name);
  for (const auto& a : te->args) collect_group_refs(a, group, out);
}

// Cycle check over the boolean connectives: contractive types never loop
// without passing an arrow or product.
bool boolean_cycle(const TypeStore& store, TypeRef start) {
  enum State : uint8_t { White, Grey, Black };
  std::map<TypeRef, State> state;
  struct Frame {
    TypeRef t;
    size_t next = 0;
  };
  std::vector<Frame> stack{{start}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    const TypeNode& n = store.node(f.t);
    bool boolean = n.kind == TypeKind::Union || n.kind == TypeKind::Inter ||
                   n.kind == TypeKind::Neg || n.kind == TypeKind::Hole;
    if (f.next == 0) {
      State& s = state[f.t];
      if (s == Grey) return true;
      if (s == Black || !boolean) {
        stack.pop_back();
        continue;
      }
      s = Grey;
    }
    if (f.next < n.kids.size()) {
      TypeRef k = n.kids[f.next++];
      State s = state.count(k) ? state[k] : White;
      const TypeNode& kn = store.node(k);
      bool kbool = kn.kind == TypeKind::Union || kn.kind == TypeKind::Inter ||
                   kn.kind == TypeKind::Neg || kn.kind == TypeKind::Hole;
      if (kbool) {
        if (s == Grey) return true;
        if (s == White) stack.push_back({k});
      }
    } else {
      state[f.t] = Black;
      stack.pop_back();
    }
  }
  return false;
}

}  // namespace

LowerResult lower_type(TypeStore& store, const TypeDefs& defs,
                       const std::map<Symbol, TyVar>& vars, const TypeExprPtr& te) {
  LowerResult res;
  Lowering lo{store, defs, vars, nullptr, res.errors};
  res.type = lo.run(te);
  return res;
}

std::vector<DeclError> declare(TypeStore& store, const std::vector<TypeDecl>& decls,
                               TypeDefs& defs) {
  std::vector<DeclError> errors;
  std::set<Symbol> group;
  std::map<Symbol, const TypeDecl*> by_name;
  for (const auto& d : decls) {
    if (defs.has(d.name) || !by_name.emplace(d.name, &d).second) {
      errors.push_back({DeclErrorCode::DuplicateName, d.span,
                        "duplicate type name '" + symbol_name(d.name) + "'"});
      continue;
    }
    group.insert(d.name);
  }
  if (!errors.empty()) return errors;

  // Reference graph restricted to this group.
  std::map<Symbol, std::set<Symbol>> refs;
  for (const auto& d : decls) {
    std::set<Symbol> shadow(d.params.begin(), d.params.end());
    std::set<Symbol> r;
    collect_group_refs(d.body, group, r);
    for (Symbol p : d.params) r.erase(p);  // params shadow decl names
    (void)shadow;
    refs[d.name] = std::move(r);
  }

  // Tarjan SCCs, emitted in dependency order.
  std::map<Symbol, int> index, low;
  std::vector<Symbol> tarjan_stack;
  std::set<Symbol> on_stack;
  std::vector<std::vector<Symbol>> sccs;
  int counter = 0;
  std::function<void(Symbol)> strongconnect = [&](Symbol v) {
    index[v] = low[v] = counter++;
    tarjan_stack.push_back(v);
    on_stack.insert(v);
    for (Symbol w : refs[v]) {
      if (!index.count(w)) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<Symbol> scc;
      Symbol w;
      do {
        w = tarjan_stack.back();
        tarjan_stack.pop_back();
        on_stack.erase(w);
        scc.push_back(w);
      } while (w != v);
      std::reverse(scc.begin(), scc.end());
      sccs.push_back(std::move(scc));
    }
  };
  for (const auto& d : decls)
    if (!index.count(d.name)) strongconnect(d.name);

  for (const auto& scc : sccs) {
    bool cyclic = scc.size() > 1 || refs[scc[0]].count(scc[0]) != 0;
    if (!cyclic) {
      const TypeDecl& d = *by_name[scc[0]];
      std::map<Symbol, TyVar> vars;
      std::vector<TyVar> params;
      for (Symbol p : d.params) {
        TyVar v = store.fresh_var(symbol_name(p));
        vars[p] = v;
        params.push_back(v);
      }
      Lowering lo{store, defs, vars, nullptr, errors};
      TypeRef body = lo.run(d.body);
      if (!errors.empty()) return errors;
      defs.add(d.name, {std::move(params), body});
      continue;
    }

    // Recursive group: all members share one canonical parameter tuple.
    size_t arity = by_name[scc[0]]->params.size();
    for (Symbol m : scc) {
      if (by_name[m]->params.size() != arity) {
        errors.push_back({DeclErrorCode::NonRegular, by_name[m]->span,
                          "mutually recursive types must agree on arity"});
        return errors;
      }
    }
    std::vector<TyVar> canon;
    for (Symbol p : by_name[scc[0]]->params)
      canon.push_back(store.fresh_var(symbol_name(p)));

    SccHook hook;
    for (Symbol m : scc) hook.holes[m] = store.make_hole();

    std::map<Symbol, TypeRef> bodies;
    for (Symbol m : scc) {
      const TypeDecl& d = *by_name[m];
      std::map<Symbol, TyVar> vars;
      for (size_t i = 0; i < arity; ++i) vars[d.params[i]] = canon[i];
      hook.enclosing_params = &d.params;
      Lowering lo{store, defs, vars, &hook, errors};
      bodies[m] = lo.run(d.body);
      if (!errors.empty()) return errors;
    }

    // Tie the knot; aliases resolve over multiple passes.
    std::map<Symbol, TypeRef> pending = bodies;
    bool progress = true;
    while (!pending.empty() && progress) {
      progress = false;
      for (auto it = pending.begin(); it != pending.end();) {
        Symbol m = it->first;
        TypeRef body = it->second;
        if (body == hook.holes[m]) {
          errors.push_back({DeclErrorCode::NonContractive, by_name[m]->span,
                            "'" + symbol_name(m) +
                                "' collapses to itself; every cycle must pass "
                                "through an arrow or a product"});
          return errors;
        }
        if (store.node(body).kind != TypeKind::Hole) {
          store.patch(hook.holes[m], body);
          it = pending.erase(it);
          progress = true;
        } else {
          ++it;
        }
      }
    }
    if (!pending.empty()) {
      errors.push_back({DeclErrorCode::NonContractive, by_name[pending.begin()->first]->span,
                        "cyclic aliases without any type constructor"});
      return errors;
    }
    for (Symbol m : scc) {
      if (boolean_cycle(store, hook.holes[m])) {
        errors.push_back({DeclErrorCode::NonContractive, by_name[m]->span,
                          "'" + symbol_name(m) +
                              "' recurses without passing through an arrow or "
                              "a product"});
        return errors;
      }
    }
    for (Symbol m : scc) defs.add(m, {canon, hook.holes[m]});
  }
  return errors;
}

}  // namespace minerl
