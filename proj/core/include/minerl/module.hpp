#pragma once

#include <string>
#include <vector>

#include "minerl/ast.hpp"
#include "minerl/types.hpp"

namespace minerl {

// A whole program: type declarations, top-level definitions, optional main.
struct Module {
  std::string filename;
  std::vector<TypeDecl> type_decls;
  std::vector<Definition> defs;
  ExprPtr main;
  TypeDefs type_defs;  // declared constructors, filled once declare() ran
};

}  // namespace minerl
