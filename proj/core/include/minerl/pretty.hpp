#pragma once

#include "minerl/checker.hpp"
#include "minerl/module.hpp"

namespace minerl {

// Renders types after local normalization. Recursive graphs are spelled by
// their declared constructor name where one is known.
std::string print_type(TypeStore& store, TypeRef t, const TypeDefs* defs = nullptr);

std::string print_scheme(TypeStore& store, const AnnotatedScheme& ann,
                         const TypeDefs* defs = nullptr);

std::string print_pattern(const PatternPtr& p);
std::string print_guard(const GuardPtr& g);
std::string print_expr(const ExprPtr& e);
std::string print_module(TypeStore& store, const Module& m);

// FILE:LINE:COL: SEVERITY[CODE]: MESSAGE
std::string render_diagnostic(const Diagnostic& d);

}  // namespace minerl
