#pragma once

#include "minerl/checker.hpp"
#include "minerl/module.hpp"

namespace minerl {

struct SourceFile {
  std::string path;
  std::string text;
};

struct ParseResult {
  std::optional<Module> module;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return module.has_value(); }
};

// Parses a whole module: declarations are declared (with the builtin list
// type injected unless the file declares its own), annotations lowered, all
// sugar expanded, and binders renamed apart.
ParseResult parse(TypeStore& store, const SourceFile& file);

// Parses one type written on a command line against a module's declarations.
// Unknown identifiers become type variables, shared through `vars`.
std::optional<TypeRef> parse_type_text(TypeStore& store, const TypeDefs& defs,
                                       const std::string& text,
                                       std::map<Symbol, TyVar>& vars,
                                       std::vector<Diagnostic>& diagnostics);

}  // namespace minerl
