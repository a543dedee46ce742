#pragma once

// Concrete syntax.
//
//   types     e1 | e2 | <t1,...,tn>
//   terms     name, or name^type on first use; names starting with an
//             uppercase letter are variables, others constants, unless a
//             declaration in the symbol table says otherwise. Binders always
//             introduce variables.
//   formulas  ! A, A & B, A | B, A -> B, A <-> B, t = u,
//             forall X^t . A, exists X^t . A, head(arg, ...)
//             precedence ! > & > | > -> > <->, -> right-associative,
//             binder bodies extend maximally to the right.
//
// Within one formula a name's type is fixed by its first annotation (or
// binder, or argument position against a known head) and may then be
// omitted. Formula files are UTF-8 with '#' line comments and one formula
// per line.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "veil/lang.hpp"

namespace veil::lang {

struct SymbolInfo {
  Term::Kind kind;
  TypeExpr type;
};

/// Pre-declared names override the case convention and provide types.
using SymbolTable = std::map<std::string, SymbolInfo>;

TypeExpr parse_type(std::string_view text);
Term parse_term(std::string_view text, const SymbolTable* symbols = nullptr);
Formula parse_formula(std::string_view text, const SymbolTable* symbols = nullptr);

/// As above, and merges the types learned while parsing back into symbols,
/// so later inputs can drop annotations established by earlier ones.
Formula parse_formula(std::string_view text, SymbolTable& symbols);

/// One formula per non-comment line. Type annotations carry across lines.
std::vector<Formula> parse_formula_file(std::istream& in,
                                        SymbolTable* symbols = nullptr);

}  // namespace veil::lang
