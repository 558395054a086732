#include "minerl/parser.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <functional>

namespace minerl {

namespace {

const char* decl_error_code(DeclErrorCode c) {
  switch (c) {
    case DeclErrorCode::NonRegular: return "non-regular";
    case DeclErrorCode::NonContractive: return "non-contractive";
    case DeclErrorCode::UnknownName: return "unknown-name";
    case DeclErrorCode::BadArity: return "bad-arity";
    case DeclErrorCode::DuplicateName: return "duplicate-type";
  }
  return "type-decl";
}

enum class Tok : uint8_t {
  Ident, AtomLit, IntLit, FloatLit,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Semi, Colon, Dot, DotDot, Pipe, Amp, Bang, Arrow, Eq,
  End, Error,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  BigInt int_value;
  double float_value = 0;
  Span span;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  uint32_t line = 1, col = 1;
  std::vector<Diagnostic> errors;
  const std::string& file;

  Lexer(const std::string& s, const std::string& f) : src(s), file(f) {}

  char peek(size_t off = 0) const {
    return pos + off < src.size() ? src[pos + off] : '\0';
  }
  char advance() {
    char c = src[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  static bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool ident_char(char c) {
    return ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
  }
  static bool digit(char c) { return c >= '0' && c <= '9'; }

  void error(Span s, const std::string& msg) {
    errors.push_back({Severity::Error, "syntax", file, s.line, s.col, msg});
  }

  Token next() {
    for (;;) {
      while (pos < src.size() && (peek() == ' ' || peek() == '\t' || peek() == '\r' ||
                                  peek() == '\n'))
        advance();
      if (peek() == '-' && peek(1) == '-') {
        while (pos < src.size() && peek() != '\n') advance();
        continue;
      }
      break;
    }
    Token t;
    t.span = {line, col};
    if (pos >= src.size()) return t;
    char c = peek();
    if (ident_start(c)) {
      std::string s;
      while (ident_char(peek())) s.push_back(advance());
      t.kind = Tok::Ident;
      t.text = std::move(s);
      return t;
    }
    if (c == '\'') {
      advance();
      std::string s;
      while (ident_char(peek())) s.push_back(advance());
      if (s.empty()) {
        error(t.span, "atom name expected after '");
        t.kind = Tok::Error;
        return t;
      }
      t.kind = Tok::AtomLit;
      t.text = std::move(s);
      return t;
    }
    bool neg = false;
    if (c == '-' && digit(peek(1))) {
      neg = true;
      advance();
      c = peek();
    }
    if (digit(c)) {
      std::string s;
      while (digit(peek())) s.push_back(advance());
      bool is_float = false;
      if (peek() == '.' && digit(peek(1))) {  // a lone '.' starts '..'
        is_float = true;
        s.push_back(advance());
        while (digit(peek())) s.push_back(advance());
      }
      if ((peek() == 'e' || peek() == 'E') &&
          (digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && digit(peek(2))))) {
        is_float = true;
        s.push_back(advance());
        if (peek() == '+' || peek() == '-') s.push_back(advance());
        while (digit(peek())) s.push_back(advance());
      }
      if (is_float) {
        t.kind = Tok::FloatLit;
        t.float_value = std::strtod(((neg ? "-" : "") + s).c_str(), nullptr);
      } else {
        t.kind = Tok::IntLit;
        t.int_value = BigInt::parse((neg ? "-" : "") + s);
      }
      return t;
    }
    advance();
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case '[': t.kind = Tok::LBracket; return t;
      case ']': t.kind = Tok::RBracket; return t;
      case ',': t.kind = Tok::Comma; return t;
      case ';': t.kind = Tok::Semi; return t;
      case ':': t.kind = Tok::Colon; return t;
      case '|': t.kind = Tok::Pipe; return t;
      case '&': t.kind = Tok::Amp; return t;
      case '!': t.kind = Tok::Bang; return t;
      case '=': t.kind = Tok::Eq; return t;
      case '.':
        if (peek() == '.') {
          advance();
          t.kind = Tok::DotDot;
        } else {
          t.kind = Tok::Dot;
        }
        return t;
      case '-':
        if (peek() == '>') {
          advance();
          t.kind = Tok::Arrow;
          return t;
        }
        error(t.span, "unexpected '-'");
        t.kind = Tok::Error;
        return t;
      default:
        error(t.span, std::string("unexpected character '") + c + "'");
        t.kind = Tok::Error;
        return t;
    }
  }
};

struct SchemeExpr {
  std::vector<Symbol> forall;
  TypeExprPtr body;
  Span span;
};

struct RawDef {
  Symbol name = 0;
  std::optional<SchemeExpr> scheme;
  ExprPtr rhs;
  Span span;
};

struct Parser {
  Lexer lex;
  Token tok;
  std::vector<Diagnostic> diags;
  const std::string& file;
  bool failed = false;

  struct PendingScheme {
    std::optional<SchemeExpr> scheme;
  };
  // Annotations on letrec definitions, in encounter order; matched back up
  // after declarations are known.
  std::vector<PendingScheme> pending_letdef_schemes;

  Parser(const std::string& src, const std::string& f) : lex(src, f), file(f) {
    tok = lex.next();
  }

  void error(Span s, const std::string& msg) {
    failed = true;
    diags.push_back({Severity::Error, "syntax", file, s.line, s.col, msg});
  }

  void bump() { tok = lex.next(); }

  bool at_ident(const char* kw) const {
    return tok.kind == Tok::Ident && tok.text == kw;
  }

  bool eat(Tok k) {
    if (tok.kind == k) {
      bump();
      return true;
    }
    return false;
  }

  bool expect(Tok k, const char* what) {
    if (eat(k)) return true;
    error(tok.span, std::string("expected ") + what);
    return false;
  }

  Symbol expect_ident(const char* what) {
    if (tok.kind != Tok::Ident || is_keyword(tok.text)) {
      error(tok.span, std::string("expected ") + what);
      if (tok.kind == Tok::Ident) bump();
      return intern_symbol("?");
    }
    Symbol s = intern_symbol(tok.text);
    bump();
    return s;
  }

  static bool is_keyword(const std::string& s) {
    static const char* kws[] = {"type", "def",  "main", "forall", "fun",  "case",
                                "of",   "when", "end",  "letrec", "in",   "and",
                                "is",   "true", "oracle"};
    for (const char* k : kws)
      if (s == k) return true;
    return false;
  }

  // --- types ---------------------------------------------------------------

  TypeExprPtr parse_type() { return parse_union(); }

  TypeExprPtr parse_union() {
    Span sp = tok.span;
    std::vector<TypeExprPtr> parts{parse_inter()};
    while (tok.kind == Tok::Pipe) {
      bump();
      parts.push_back(parse_inter());
    }
    if (parts.size() == 1) return parts[0];
    return TypeExpr::make(TypeExprKind::Union, std::move(parts), sp);
  }

  TypeExprPtr parse_inter() {
    Span sp = tok.span;
    std::vector<TypeExprPtr> parts{parse_neg()};
    while (tok.kind == Tok::Amp) {
      bump();
      parts.push_back(parse_neg());
    }
    if (parts.size() == 1) return parts[0];
    return TypeExpr::make(TypeExprKind::Inter, std::move(parts), sp);
  }

  TypeExprPtr parse_neg() {
    if (tok.kind == Tok::Bang) {
      Span sp = tok.span;
      bump();
      return TypeExpr::make(TypeExprKind::Neg, {parse_neg()}, sp);
    }
    return parse_arrow();
  }

  TypeExprPtr parse_arrow() {
    Span sp = tok.span;
    TypeExprPtr lhs = parse_type_prim();
    if (tok.kind == Tok::Arrow) {
      bump();
      TypeExprPtr rhs = parse_arrow();
      return TypeExpr::make(TypeExprKind::Arrow, {lhs, rhs}, sp);
    }
    return lhs;
  }

  TypeExprPtr type_error(Span sp, const std::string& msg) {
    error(sp, msg);
    return TypeExpr::make(TypeExprKind::None, {}, sp);
  }

  TypeExprPtr parse_type_prim() {
    Span sp = tok.span;
    switch (tok.kind) {
      case Tok::LParen: {
        bump();
        TypeExprPtr t = parse_type();
        expect(Tok::RParen, "')'");
        return t;
      }
      case Tok::LBrace: {
        bump();
        std::vector<TypeExprPtr> parts{parse_type()};
        while (eat(Tok::Comma)) parts.push_back(parse_type());
        expect(Tok::RBrace, "'}'");
        if (parts.size() < 2)
          return type_error(sp, "tuple types need two or more components");
        return desugar_tuple_type(std::move(parts), sp);
      }
      case Tok::LBracket: {
        bump();
        TypeExprPtr elem = parse_type();
        expect(Tok::RBracket, "']'");
        return TypeExpr::make_name(intern_symbol("list"), {elem}, sp);
      }
      case Tok::AtomLit: {
        BaseType b = BaseType::atom_singleton(intern_symbol(tok.text));
        bump();
        return TypeExpr::make_base(std::move(b), sp);
      }
      case Tok::IntLit: {
        BigInt lo = tok.int_value;
        bump();
        if (tok.kind == Tok::DotDot) {
          bump();
          if (tok.kind != Tok::IntLit)
            return type_error(tok.span, "integer after '..'");
          BigInt hi = tok.int_value;
          bump();
          uint64_t width = 0;
          if (!BigInt::small_distance(lo, hi, 1023, &width)) {
            return type_error(sp,
                              "integer range is empty or wider than 1024 values");
          }
          std::vector<TypeExprPtr> parts;
          BigInt cur = lo;
          for (uint64_t i = 0; i <= width; ++i) {
            parts.push_back(TypeExpr::make_base(BaseType::int_singleton(cur), sp));
            cur = cur.next();
          }
          if (parts.size() == 1) return parts[0];
          return TypeExpr::make(TypeExprKind::Union, std::move(parts), sp);
        }
        return TypeExpr::make_base(BaseType::int_singleton(std::move(lo)), sp);
      }
      case Tok::Ident: {
        std::string name = tok.text;
        if (name == "any") { bump(); return TypeExpr::make(TypeExprKind::Any, {}, sp); }
        if (name == "none") { bump(); return TypeExpr::make(TypeExprKind::None, {}, sp); }
        if (name == "int") { bump(); return TypeExpr::make_base(BaseType::of(BaseKind::Int), sp); }
        if (name == "float") { bump(); return TypeExpr::make_base(BaseType::of(BaseKind::Float), sp); }
        if (name == "atom") { bump(); return TypeExpr::make_base(BaseType::of(BaseKind::Atom), sp); }
        if (name == "pair") { bump(); return TypeExpr::make_base(BaseType::of(BaseKind::AnyPair), sp); }
        if (name == "fun") { bump(); return TypeExpr::make_base(BaseType::of(BaseKind::AnyFun), sp); }
        if (is_keyword(name)) return type_error(sp, "'" + name + "' cannot start a type");
        bump();
        std::vector<TypeExprPtr> args;
        if (eat(Tok::LParen)) {
          if (tok.kind != Tok::RParen) {
            args.push_back(parse_type());
            while (eat(Tok::Comma)) args.push_back(parse_type());
          }
          expect(Tok::RParen, "')'");
        }
        return TypeExpr::make_name(intern_symbol(name), std::move(args), sp);
      }
      default:
        break;
    }
    TypeExprPtr t = type_error(sp, "type expected");
    bump();
    return t;
  }

  TypeExprPtr desugar_tuple_type(std::vector<TypeExprPtr> parts, Span sp) {
    if (parts.size() == 2)
      return TypeExpr::make(TypeExprKind::Product, std::move(parts), sp);
    // {T1,...,Tn} is {n, {T1, {...{Tn-1, Tn}}}}
    TypeExprPtr nested = parts.back();
    for (size_t i = parts.size() - 1; i-- > 0;)
      nested = TypeExpr::make(TypeExprKind::Product, {parts[i], nested}, sp);
    TypeExprPtr tag = TypeExpr::make_base(
        BaseType::int_singleton(BigInt((int64_t)parts.size())), sp);
    return TypeExpr::make(TypeExprKind::Product, {tag, nested}, sp);
  }

  // --- expressions ----------------------------------------------------------

  ExprPtr parse_expr() {
    Span sp = tok.span;
    if (at_ident("fun")) {
      bump();
      std::vector<Symbol> params;
      while (tok.kind == Tok::Ident && !is_keyword(tok.text))
        params.push_back(expect_ident("parameter"));
      if (params.empty()) error(tok.span, "expected a parameter after 'fun'");
      expect(Tok::Arrow, "'->'");
      ExprPtr body = parse_expr();
      for (size_t i = params.size(); i-- > 0;)
        body = Expr::make_abs(params[i], body, sp);
      return body;
    }
    if (at_ident("case")) {
      bump();
      ExprPtr scrut = parse_expr();
      if (!at_ident("of")) error(tok.span, "expected 'of'");
      else bump();
      std::vector<Clause> clauses;
      clauses.push_back(parse_clause());
      while (tok.kind == Tok::Semi) {
        bump();
        clauses.push_back(parse_clause());
      }
      if (!at_ident("end")) error(tok.span, "expected 'end'");
      else bump();
      return Expr::make_case(scrut, std::move(clauses), sp);
    }
    if (at_ident("letrec")) {
      bump();
      std::vector<Definition> defs;
      defs.push_back(parse_letdef());
      while (tok.kind == Tok::Semi) {
        bump();
        defs.push_back(parse_letdef());
      }
      if (!at_ident("in")) error(tok.span, "expected 'in'");
      else bump();
      ExprPtr body = parse_expr();
      return Expr::make_letrec(std::move(defs), body, sp);
    }
    return parse_app();
  }

  ExprPtr parse_app() {
    Span sp = tok.span;
    ExprPtr e = parse_atom_expr();
    for (;;) {
      if (tok.kind == Tok::LParen || tok.kind == Tok::LBrace ||
          tok.kind == Tok::AtomLit || tok.kind == Tok::IntLit ||
          tok.kind == Tok::FloatLit ||
          (tok.kind == Tok::Ident && !is_keyword(tok.text))) {
        ExprPtr arg = parse_atom_expr();
        e = Expr::make_app(e, arg, sp);
      } else {
        break;
      }
    }
    return e;
  }

  ExprPtr parse_atom_expr() {
    Span sp = tok.span;
    switch (tok.kind) {
      case Tok::LParen: {
        bump();
        ExprPtr e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::LBrace: {
        bump();
        std::vector<ExprPtr> parts{parse_expr()};
        while (eat(Tok::Comma)) parts.push_back(parse_expr());
        expect(Tok::RBrace, "'}'");
        if (parts.size() < 2) {
          error(sp, "tuples need two or more components");
          return parts[0];
        }
        if (parts.size() == 2) return Expr::make_pair(parts[0], parts[1], sp);
        ExprPtr nested = parts.back();
        for (size_t i = parts.size() - 1; i-- > 0;)
          nested = Expr::make_pair(parts[i], nested, sp);
        return Expr::make_pair(
            Expr::make_const(Constant::make_int((int64_t)parts.size()), sp), nested,
            sp);
      }
      case Tok::AtomLit: {
        Constant c = Constant::make_atom(intern_symbol(tok.text));
        bump();
        return Expr::make_const(std::move(c), sp);
      }
      case Tok::IntLit: {
        Constant c = Constant::make_int(tok.int_value);
        bump();
        return Expr::make_const(std::move(c), sp);
      }
      case Tok::FloatLit: {
        Constant c = Constant::make_float(tok.float_value);
        bump();
        return Expr::make_const(std::move(c), sp);
      }
      case Tok::Ident: {
        if (is_keyword(tok.text)) {
          error(sp, "unexpected '" + tok.text + "'");
          bump();
          return Expr::make_const(Constant::make_atom("error"), sp);
        }
        Symbol s = intern_symbol(tok.text);
        bump();
        return Expr::make_var(s, sp);
      }
      default:
        error(sp, "expression expected");
        bump();
        return Expr::make_const(Constant::make_atom("error"), sp);
    }
  }

  Clause parse_clause() {
    PatternPtr p = parse_pattern();
    GuardPtr g = Guard::make_true(tok.span);
    if (at_ident("when")) {
      bump();
      g = parse_guard();
    }
    expect(Tok::Arrow, "'->'");
    ExprPtr body = parse_expr();
    return Clause{{p, g}, body};
  }

  PatternPtr parse_pattern() {
    Span sp = tok.span;
    switch (tok.kind) {
      case Tok::LBrace: {
        bump();
        std::vector<PatternPtr> parts{parse_pattern()};
        while (eat(Tok::Comma)) parts.push_back(parse_pattern());
        expect(Tok::RBrace, "'}'");
        if (parts.size() < 2) {
          error(sp, "tuple patterns need two or more components");
          return parts[0];
        }
        if (parts.size() == 2) return Pattern::make_pair(parts[0], parts[1], sp);
        PatternPtr nested = parts.back();
        for (size_t i = parts.size() - 1; i-- > 0;)
          nested = Pattern::make_pair(parts[i], nested, sp);
        return Pattern::make_pair(
            Pattern::make_const(Constant::make_int((int64_t)parts.size()), sp),
            nested, sp);
      }
      case Tok::LParen: {
        bump();
        PatternPtr p = parse_pattern();
        expect(Tok::RParen, "')'");
        return p;
      }
      case Tok::AtomLit: {
        Constant c = Constant::make_atom(intern_symbol(tok.text));
        bump();
        return Pattern::make_const(std::move(c), sp);
      }
      case Tok::IntLit: {
        Constant c = Constant::make_int(tok.int_value);
        bump();
        return Pattern::make_const(std::move(c), sp);
      }
      case Tok::FloatLit: {
        Constant c = Constant::make_float(tok.float_value);
        bump();
        return Pattern::make_const(std::move(c), sp);
      }
      case Tok::Ident: {
        if (tok.text == "_") {
          bump();
          return Pattern::make_wild(sp);
        }
        if (is_keyword(tok.text)) {
          error(sp, "unexpected '" + tok.text + "' in a pattern");
          bump();
          return Pattern::make_wild(sp);
        }
        Symbol s = intern_symbol(tok.text);
        bump();
        return Pattern::make_var(s, sp);
      }
      default:
        error(sp, "pattern expected");
        bump();
        return Pattern::make_wild(sp);
    }
  }

  GuardPtr parse_guard() {
    GuardPtr g = parse_guard_atom();
    while (at_ident("and")) {
      Span sp = tok.span;
      bump();
      g = Guard::make_and(g, parse_guard_atom(), sp);
    }
    return g;
  }

  GuardPtr parse_guard_atom() {
    Span sp = tok.span;
    if (tok.kind == Tok::LParen) {
      bump();
      GuardPtr g = parse_guard();
      expect(Tok::RParen, "')'");
      return g;
    }
    if (at_ident("true")) {
      bump();
      return Guard::make_true(sp);
    }
    if (at_ident("oracle")) {
      bump();
      return Guard::make_oracle(sp);
    }
    if (at_ident("is")) {
      bump();
      BaseType b = parse_base_type();
      // Source guards may only test variables.
      Symbol subject = expect_ident("a variable as the guard subject");
      return Guard::make_is(std::move(b), Expr::make_var(subject, sp), sp);
    }
    error(sp, "guard expected");
    bump();
    return Guard::make_true(sp);
  }

  BaseType parse_base_type() {
    Span sp = tok.span;
    if (tok.kind == Tok::AtomLit) {
      BaseType b = BaseType::atom_singleton(intern_symbol(tok.text));
      bump();
      return b;
    }
    if (tok.kind == Tok::IntLit) {
      BaseType b = BaseType::int_singleton(tok.int_value);
      bump();
      return b;
    }
    if (tok.kind == Tok::Ident) {
      std::string n = tok.text;
      if (n == "int") { bump(); return BaseType::of(BaseKind::Int); }
      if (n == "float") { bump(); return BaseType::of(BaseKind::Float); }
      if (n == "atom") { bump(); return BaseType::of(BaseKind::Atom); }
      if (n == "pair") { bump(); return BaseType::of(BaseKind::AnyPair); }
      if (n == "fun") { bump(); return BaseType::of(BaseKind::AnyFun); }
    }
    error(sp, "base type expected in guard");
    bump();
    return BaseType::of(BaseKind::Int);
  }

  Definition parse_letdef() {
    Definition d;
    d.span = tok.span;
    d.name = expect_ident("definition name");
    PendingScheme pending;
    if (eat(Tok::Colon)) pending.scheme = parse_scheme();
    expect(Tok::Eq, "'='");
    d.rhs = parse_expr();
    pending_letdef_schemes.push_back(std::move(pending));
    return d;
  }

  SchemeExpr parse_scheme() {
    SchemeExpr s;
    s.span = tok.span;
    if (at_ident("forall")) {
      bump();
      while (tok.kind == Tok::Ident && !is_keyword(tok.text))
        s.forall.push_back(expect_ident("type variable"));
      expect(Tok::Dot, "'.'");
      if (s.forall.empty()) error(s.span, "'forall' needs at least one variable");
    }
    s.body = parse_type();
    return s;
  }

  // --- module ---------------------------------------------------------------

  struct RawModule {
    std::vector<TypeDecl> type_decls;
    std::vector<RawDef> defs;
    ExprPtr main;
    Span main_span;
  };

  RawModule parse_module() {
    RawModule m;
    while (tok.kind != Tok::End && diags.size() <= 40) {
      if (at_ident("type")) {
        Span sp = tok.span;
        bump();
        TypeDecl d;
        d.span = sp;
        d.name = expect_ident("type name");
        if (eat(Tok::LParen)) {
          d.params.push_back(expect_ident("type parameter"));
          while (eat(Tok::Comma)) d.params.push_back(expect_ident("type parameter"));
          expect(Tok::RParen, "')'");
        }
        expect(Tok::Eq, "'='");
        d.body = parse_type();
        expect(Tok::Semi, "';'");
        m.type_decls.push_back(std::move(d));
        continue;
      }
      if (at_ident("def")) {
        Span sp = tok.span;
        bump();
        RawDef d;
        d.span = sp;
        d.name = expect_ident("definition name");
        if (eat(Tok::Colon)) d.scheme = parse_scheme();
        expect(Tok::Eq, "'='");
        d.rhs = parse_expr();
        expect(Tok::Semi, "';'");
        m.defs.push_back(std::move(d));
        continue;
      }
      if (at_ident("main")) {
        Span sp = tok.span;
        bump();
        expect(Tok::Eq, "'='");
        m.main = parse_expr();
        m.main_span = sp;
        expect(Tok::Semi, "';'");
        continue;
      }
      error(tok.span, "expected 'type', 'def' or 'main'");
      bump();
    }
    return m;
  }
};

// --- renaming ---------------------------------------------------------------

struct Renamer {
  std::set<Symbol>& used;

  Symbol freshen(Symbol base) {
    if (used.insert(base).second) return base;
    const std::string& name = symbol_name(base);
    for (int i = 2;; ++i) {
      Symbol cand = intern_symbol(name + "_" + std::to_string(i));
      if (used.insert(cand).second) return cand;
    }
  }

  using Scope = std::map<Symbol, Symbol>;

  ExprPtr expr(const ExprPtr& e, const Scope& scope) {
    switch (e->kind) {
      case ExprKind::Var: {
        auto it = scope.find(e->var);
        return it == scope.end() ? e : Expr::make_var(it->second, e->span);
      }
      case ExprKind::Const:
        return e;
      case ExprKind::Abs: {
        Scope inner = scope;
        Symbol fresh = freshen(e->var);
        inner[e->var] = fresh;
        return Expr::make_abs(fresh, expr(e->child1, inner), e->span);
      }
      case ExprKind::App:
        return Expr::make_app(expr(e->child1, scope), expr(e->child2, scope),
                              e->span);
      case ExprKind::Pair:
        return Expr::make_pair(expr(e->child1, scope), expr(e->child2, scope),
                               e->span);
      case ExprKind::Case: {
        ExprPtr scrut = expr(e->child1, scope);
        std::vector<Clause> clauses;
        for (const Clause& c : e->clauses) {
          Scope inner = scope;
          for (Symbol b : bound_vars(c.guarded_pattern.pattern))
            inner[b] = freshen(b);
          Clause nc;
          nc.guarded_pattern.pattern = pattern(c.guarded_pattern.pattern, inner);
          nc.guarded_pattern.guard = guard(c.guarded_pattern.guard, inner);
          nc.body = expr(c.body, inner);
          clauses.push_back(std::move(nc));
        }
        return Expr::make_case(scrut, std::move(clauses), e->span);
      }
      case ExprKind::Letrec: {
        Scope inner = scope;
        for (const Definition& d : e->defs) inner[d.name] = freshen(d.name);
        std::vector<Definition> defs;
        for (const Definition& d : e->defs) {
          Definition nd = d;
          nd.name = inner.at(d.name);
          nd.rhs = expr(d.rhs, inner);
          defs.push_back(std::move(nd));
        }
        return Expr::make_letrec(std::move(defs), expr(e->child1, inner), e->span);
      }
    }
    return e;
  }

  PatternPtr pattern(const PatternPtr& p, const Scope& scope) {
    switch (p->kind) {
      case PatternKind::Const:
      case PatternKind::Wild:
        return p;
      case PatternKind::Var: {
        auto it = scope.find(p->var);
        return Pattern::make_var(it == scope.end() ? p->var : it->second, p->span);
      }
      case PatternKind::Pair:
        return Pattern::make_pair(pattern(p->left, scope), pattern(p->right, scope),
                                  p->span);
    }
    return p;
  }

  GuardPtr guard(const GuardPtr& g, const Scope& scope) {
    switch (g->kind) {
      case GuardKind::Is:
        return Guard::make_is(g->base, expr(g->subject, scope), g->span);
      case GuardKind::And:
        return Guard::make_and(guard(g->lhs, scope), guard(g->rhs, scope), g->span);
      default:
        return g;
    }
  }
};

void collect_names(const ExprPtr& e, std::set<Symbol>& out);

void collect_names_guard(const GuardPtr& g, std::set<Symbol>& out) {
  if (g->kind == GuardKind::Is) collect_names(g->subject, out);
  if (g->kind == GuardKind::And) {
    collect_names_guard(g->lhs, out);
    collect_names_guard(g->rhs, out);
  }
}

void collect_names_pattern(const PatternPtr& p, std::set<Symbol>& out) {
  if (p->kind == PatternKind::Var) out.insert(p->var);
  if (p->kind == PatternKind::Pair) {
    collect_names_pattern(p->left, out);
    collect_names_pattern(p->right, out);
  }
}

void collect_names(const ExprPtr& e, std::set<Symbol>& out) {
  switch (e->kind) {
    case ExprKind::Var:
      out.insert(e->var);
      break;
    case ExprKind::Const:
      break;
    case ExprKind::Abs:
      out.insert(e->var);
      collect_names(e->child1, out);
      break;
    case ExprKind::App:
    case ExprKind::Pair:
      collect_names(e->child1, out);
      collect_names(e->child2, out);
      break;
    case ExprKind::Case:
      collect_names(e->child1, out);
      for (const Clause& c : e->clauses) {
        collect_names_pattern(c.guarded_pattern.pattern, out);
        collect_names_guard(c.guarded_pattern.guard, out);
        collect_names(c.body, out);
      }
      break;
    case ExprKind::Letrec:
      for (const Definition& d : e->defs) {
        out.insert(d.name);
        collect_names(d.rhs, out);
      }
      collect_names(e->child1, out);
      break;
  }
}

std::optional<AnnotatedScheme> lower_scheme(TypeStore& store, const TypeDefs& defs,
                                            const SchemeExpr& scheme,
                                            const std::string& file,
                                            std::vector<Diagnostic>& diags) {
  AnnotatedScheme ann;
  std::map<Symbol, TyVar> vars;
  for (Symbol v : scheme.forall) {
    if (vars.count(v)) {
      diags.push_back({Severity::Error, "syntax", file, scheme.span.line,
                       scheme.span.col,
                       "duplicate type variable '" + symbol_name(v) + "'"});
      return std::nullopt;
    }
    TyVar tv = store.fresh_var(symbol_name(v));
    vars[v] = tv;
    ann.quantified.push_back(tv);
  }
  std::vector<TypeExprPtr> members;
  if (scheme.body->kind == TypeExprKind::Inter) {
    members = scheme.body->args;
  } else {
    members = {scheme.body};
  }
  std::vector<TypeRef> lowered;
  for (const TypeExprPtr& m : members) {
    LowerResult r = lower_type(store, defs, vars, m);
    for (const DeclError& e : r.errors) {
      diags.push_back({Severity::Error, decl_error_code(e.code), file, e.span.line,
                       e.span.col, e.message});
    }
    if (!r.ok()) return std::nullopt;
    lowered.push_back(r.type);
  }
  ann.members = lowered;
  ann.body = store.intersect(std::move(lowered));
  return ann;
}

}  // namespace

ParseResult parse(TypeStore& store, const SourceFile& file) {
  ParseResult res;
  Parser parser(file.text, file.path);
  Parser::RawModule raw = parser.parse_module();
  res.diagnostics = parser.diags;
  for (const auto& d : parser.lex.errors) res.diagnostics.push_back(d);
  if (!res.diagnostics.empty()) return res;

  Module m;
  m.filename = file.path;
  m.type_decls = raw.type_decls;

  // The builtin list type, unless the file declares its own.
  bool has_list = false;
  for (const TypeDecl& d : m.type_decls) has_list |= d.name == intern_symbol("list");
  if (!has_list) {
    Symbol a = intern_symbol("a");
    auto var_a = TypeExpr::make_name(a, {});
    auto nil = TypeExpr::make_base(BaseType::atom_singleton(intern_symbol("nil")));
    auto rec = TypeExpr::make_name(intern_symbol("list"), {var_a});
    TypeDecl list;
    list.name = intern_symbol("list");
    list.params = {a};
    list.body = TypeExpr::make(
        TypeExprKind::Union,
        {nil, TypeExpr::make(TypeExprKind::Product, {var_a, rec})});
    m.type_decls.push_back(std::move(list));
  }

  std::vector<DeclError> decl_errors = declare(store, m.type_decls, m.type_defs);
  for (const DeclError& e : decl_errors) {
    res.diagnostics.push_back({Severity::Error, decl_error_code(e.code), file.path,
                               e.span.line, e.span.col, e.message});
  }
  if (!res.diagnostics.empty()) return res;

  for (const RawDef& rd : raw.defs) {
    Definition d;
    d.name = rd.name;
    d.span = rd.span;
    d.rhs = rd.rhs;
    if (rd.scheme) {
      auto ann =
          lower_scheme(store, m.type_defs, *rd.scheme, file.path, res.diagnostics);
      if (!ann) return res;
      d.annotation = std::move(*ann);
    }
    m.defs.push_back(std::move(d));
  }

  // Annotations on letrec-bound definitions, lowered in encounter order.
  if (!parser.pending_letdef_schemes.empty()) {
    size_t cursor = 0;
    std::function<ExprPtr(const ExprPtr&)> walk = [&](const ExprPtr& e) -> ExprPtr {
      switch (e->kind) {
        case ExprKind::Letrec: {
          std::vector<Definition> defs;
          for (const Definition& d : e->defs) {
            Definition nd = d;
            assert(cursor < parser.pending_letdef_schemes.size());
            const auto& pending = parser.pending_letdef_schemes[cursor++];
            if (pending.scheme) {
              auto ann = lower_scheme(store, m.type_defs, *pending.scheme, file.path,
                                      res.diagnostics);
              if (ann) nd.annotation = std::move(*ann);
            }
            nd.rhs = walk(d.rhs);
            defs.push_back(std::move(nd));
          }
          return Expr::make_letrec(std::move(defs), walk(e->child1), e->span);
        }
        case ExprKind::Abs:
          return Expr::make_abs(e->var, walk(e->child1), e->span);
        case ExprKind::App:
          return Expr::make_app(walk(e->child1), walk(e->child2), e->span);
        case ExprKind::Pair:
          return Expr::make_pair(walk(e->child1), walk(e->child2), e->span);
        case ExprKind::Case: {
          std::vector<Clause> cls;
          for (const Clause& c : e->clauses)
            cls.push_back(Clause{c.guarded_pattern, walk(c.body)});
          return Expr::make_case(walk(e->child1), std::move(cls), e->span);
        }
        default:
          return e;
      }
    };
    for (Definition& d : m.defs) d.rhs = walk(d.rhs);
    if (raw.main) raw.main = walk(raw.main);
    if (!res.diagnostics.empty()) return res;
  }
  m.main = raw.main;

  // Make all binders unique. Seed the used set with the top-level names and
  // every free variable so a rename never collides with them; binders keep
  // their first spelling.
  std::set<Symbol> used;
  for (const Definition& d : m.defs) used.insert(d.name);
  for (const Definition& d : m.defs)
    for (Symbol v : free_vars(d.rhs)) used.insert(v);
  if (m.main)
    for (Symbol v : free_vars(m.main)) used.insert(v);
  Renamer renamer{used};
  Renamer::Scope top;
  for (Definition& d : m.defs) d.rhs = renamer.expr(d.rhs, top);
  if (m.main) m.main = renamer.expr(m.main, top);

  res.module = std::move(m);
  return res;
}

std::optional<TypeRef> parse_type_text(TypeStore& store, const TypeDefs& defs,
                                       const std::string& text,
                                       std::map<Symbol, TyVar>& vars,
                                       std::vector<Diagnostic>& diagnostics) {
  Parser parser(text, "<arg>");
  TypeExprPtr te = parser.parse_type();
  if (parser.tok.kind != Tok::End)
    parser.error(parser.tok.span, "trailing input after type");
  for (auto& d : parser.diags) diagnostics.push_back(d);
  for (auto& d : parser.lex.errors) diagnostics.push_back(d);
  if (!parser.diags.empty() || !parser.lex.errors.empty()) return std::nullopt;

  // Unknown identifiers become shared type variables.
  std::function<void(const TypeExprPtr&)> scan = [&](const TypeExprPtr& t) {
    if (t->kind == TypeExprKind::Name && t->args.empty() && !defs.has(t->name) &&
        !vars.count(t->name)) {
      vars[t->name] = store.fresh_var(symbol_name(t->name));
    }
    for (const auto& a : t->args) scan(a);
  };
  scan(te);
  LowerResult r = lower_type(store, defs, vars, te);
  for (const DeclError& e : r.errors) {
    diagnostics.push_back({Severity::Error, decl_error_code(e.code), "<arg>",
                           e.span.line, e.span.col, e.message});
  }
  if (!r.ok()) return std::nullopt;
  return r.type;
}

}  // namespace minerl
