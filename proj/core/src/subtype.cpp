#include "minerl/subtype.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace minerl {

bool base_subtype(const BaseType& b1, const BaseType& b2) {
  if (b1 == b2) return true;
  if (b1.kind == BaseKind::IntSingleton && b2.kind == BaseKind::Int) return true;
  if (b1.kind == BaseKind::AtomSingleton && b2.kind == BaseKind::Atom) return true;
  return false;
}

namespace {

bool scalar_base(const BaseType& b) {
  switch (b.kind) {
    case BaseKind::AnyPair:
    case BaseKind::AnyFun:
      return false;
    default:
      return true;
  }
}

}  // namespace

bool LineParts::vars_contradict() const {
  for (TyVar v : pos_vars) {
    if (std::find(neg_vars.begin(), neg_vars.end(), v) != neg_vars.end())
      return true;
  }
  return false;
}

LineParts split_line(TypeStore& store, const DnfLine& line) {
  LineParts p;
  auto add = [&](TypeRef atom, bool positive) {
    const TypeNode& n = store.node(atom);
    switch (n.kind) {
      case TypeKind::Var:
        (positive ? p.pos_vars : p.neg_vars).push_back(n.var);
        break;
      case TypeKind::Product:
        (positive ? p.pos_prod : p.neg_prod).emplace_back(n.kids[0], n.kids[1]);
        break;
      case TypeKind::Arrow:
        (positive ? p.pos_arrow : p.neg_arrow).emplace_back(n.kids[0], n.kids[1]);
        break;
      case TypeKind::Base:
        if (scalar_base(n.base)) {
          (positive ? p.pos_scalar : p.neg_scalar).push_back(n.base);
        } else if (n.base.kind == BaseKind::AnyPair) {
          if (positive) p.pos_any_pair = true;
          else p.neg_prod.emplace_back(store.top(), store.top());
        } else {
          (positive ? p.pos_any_fun : p.neg_any_fun) = true;
        }
        break;
      default:
        assert(false && "non-atom in dnf line");
    }
  };
  for (TypeRef a : line.pos) add(a, true);
  for (TypeRef a : line.neg) add(a, false);
  return p;
}

// Singleton carriers are infinite, so finitely many negated singletons never
// exhaust a world.
bool scalar_world_empty(World w, const LineParts& p) {
  if (p.pos_excludes_scalars()) return true;
  bool has_singleton = false;
  BaseType singleton;
  auto compatible = [&](const BaseType& b) {
    switch (w) {
      case World::Ints:
        return b.kind == BaseKind::Int || b.kind == BaseKind::IntSingleton;
      case World::Floats:
        return b.kind == BaseKind::Float;
      case World::Atoms:
        return b.kind == BaseKind::Atom || b.kind == BaseKind::AtomSingleton;
      default:
        return false;
    }
  };
  auto is_singleton = [&](const BaseType& b) {
    return b.kind == BaseKind::IntSingleton || b.kind == BaseKind::AtomSingleton;
  };
  for (const BaseType& b : p.pos_scalar) {
    if (!compatible(b)) return true;
    if (is_singleton(b)) {
      if (has_singleton && !(singleton == b)) return true;
      has_singleton = true;
      singleton = b;
    }
  }
  for (const BaseType& b : p.neg_scalar) {
    if (!compatible(b)) continue;
    if (!is_singleton(b)) return true;  // whole world negated
    if (has_singleton && singleton == b) return true;
  }
  return false;
}

bool SubtypeCtx::is_empty(TypeRef t) {
  uint32_t low = kInf;
  return empty_rec(t, low);
}

bool SubtypeCtx::is_subtype(TypeRef s, TypeRef t) {
  return is_empty(store_.diff(s, t));
}

bool SubtypeCtx::empty_rec(TypeRef t, uint32_t& low) {
  auto hit = cache_.find(t);
  if (hit != cache_.end()) return hit->second;
  auto open = active_.find(t);
  if (open != active_.end()) {
    low = std::min(low, open->second);
    return true;  // coinductive hypothesis
  }
  uint32_t depth = static_cast<uint32_t>(active_.size());
  active_.emplace(t, depth);
  uint32_t mylow = kInf;
  bool result = true;
  const Dnf& d = store_.dnf(t);
  for (const DnfLine& line : d) {
    if (!line_empty(line, mylow)) {
      result = false;
      break;
    }
  }
  active_.erase(t);
  if (mylow >= depth) {
    cache_.emplace(t, result);
  } else {
    low = std::min(low, mylow);
  }
  return result;
}

bool SubtypeCtx::line_empty(const DnfLine& line, uint32_t& low) {
  LineParts p = split_line(store_, line);

  // A variable on both sides empties the line under every assignment.
  // Otherwise top-level variables are eliminated by polarity: a positive
  // variable can always be assigned the top type and a negative one the
  // bottom type, so the residue must be empty on its own.
  if (p.vars_contradict()) return true;

  for (World w : kScalarWorlds) {
    if (!scalar_world_empty(w, p)) return false;
  }

  // Pair world.
  {
    if (!p.pos_excludes_pairs()) {
      TypeRef s0 = store_.top(), t0 = store_.top();
      for (const auto& [s, t] : p.pos_prod) {
        s0 = store_.intersect(s0, s);
        t0 = store_.intersect(t0, t);
      }
      if (!product_line_empty(s0, t0, p.neg_prod, 0, low)) return false;
    }
  }

  // Function world.
  {
    if (!p.pos_excludes_funs() && !p.neg_any_fun) {
      bool covered = false;
      for (const auto& [nd, nc] : p.neg_arrow) {
        if (arrow_covered(nd, nc, p.pos_arrow, nd, store_.top(), 0, false, low)) {
          covered = true;
          break;
        }
      }
      if (!covered) return false;
    }
  }
  return true;
}

bool SubtypeCtx::product_line_empty(
    TypeRef s, TypeRef t, const std::vector<std::pair<TypeRef, TypeRef>>& negs,
    size_t i, uint32_t& low) {
  if (empty_rec(s, low) || empty_rec(t, low)) return true;
  if (i == negs.size()) return false;
  const auto& [sj, tj] = negs[i];
  return product_line_empty(store_.diff(s, sj), t, negs, i + 1, low) &&
         product_line_empty(s, store_.diff(t, tj), negs, i + 1, low);
}

bool SubtypeCtx::arrow_covered(TypeRef neg_dom, TypeRef neg_cod,
                               const std::vector<std::pair<TypeRef, TypeRef>>& pos,
                               TypeRef dom, TypeRef cod, size_t i, bool picked,
                               uint32_t& low) {
  if (empty_rec(dom, low)) return true;
  if (i == pos.size()) {
    return picked && empty_rec(store_.diff(cod, neg_cod), low);
  }
  const auto& [si, ti] = pos[i];
  return arrow_covered(neg_dom, neg_cod, pos, store_.intersect(dom, si),
                       store_.intersect(cod, ti), i + 1, true, low) &&
         arrow_covered(neg_dom, neg_cod, pos, store_.diff(dom, si), cod, i + 1,
                       picked, low);
}

std::optional<TypeRef> SubtypeCtx::proj(TypeRef t, bool left) {
  TypeRef all_pairs = store_.product(store_.top(), store_.top());
  if (!is_subtype(t, all_pairs)) return std::nullopt;
  TypeRef acc = store_.bottom();
  for (const DnfLine& line : store_.dnf(store_.intersect(t, store_.any_pair()))) {
    LineParts p = split_line(store_, line);
    if (p.vars_contradict()) continue;
    if (p.pos_excludes_pairs()) continue;
    TypeRef s0 = store_.top(), t0 = store_.top();
    for (const auto& [s, u] : p.pos_prod) {
      s0 = store_.intersect(s0, s);
      t0 = store_.intersect(t0, u);
    }
    if (!left) std::swap(s0, t0);
    std::vector<std::pair<TypeRef, TypeRef>> negs;
    for (const auto& [s, u] : p.neg_prod)
      negs.emplace_back(left ? s : u, left ? u : s);

    // Partition the projected side by which negated products the component
    // falls into; each slot contributes when the other side survives.
    std::function<void(size_t, TypeRef, TypeRef)> walk = [&](size_t i, TypeRef sacc,
                                                             TypeRef tacc) {
      if (is_empty(sacc)) return;
      if (i == negs.size()) {
        if (!is_empty(tacc)) acc = store_.unite(acc, sacc);
        return;
      }
      walk(i + 1, store_.intersect(sacc, negs[i].first),
           store_.diff(tacc, negs[i].second));
      walk(i + 1, store_.diff(sacc, negs[i].first), tacc);
    };
    walk(0, s0, t0);
  }
  return acc;
}

std::optional<TypeRef> value_singleton(TypeStore& store, const ValuePtr& v) {
  switch (v->kind) {
    case ValueKind::Const:
      return store.base(type_of_constant(v->constant));
    case ValueKind::Closure:
      return std::nullopt;
    case ValueKind::Pair: {
      auto l = value_singleton(store, v->left);
      auto r = value_singleton(store, v->right);
      if (!l || !r) return std::nullopt;
      return store.product(*l, *r);
    }
  }
  return std::nullopt;
}

}  // namespace minerl
