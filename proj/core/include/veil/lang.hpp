#pragma once

// Typed relational language.
//
// Types are e1 (identity-free individuals), e2 (classical individuals) and
// finite tuples of types. Terms are typed variables and constants; atomic
// formulas apply a tuple-typed term to argument terms. The primitive
// connectives are negation, implication and the universal quantifier;
// conjunction, disjunction, biconditional, the existential quantifier and
// the defined identity are sugar eliminated by desugar(). Identity is
// undefined at type e1 and rejected at construction.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "veil/error.hpp"

namespace veil::lang {

class TypeExpr {
 public:
  enum class Kind { base1, base2, tuple };

  static TypeExpr e1();
  static TypeExpr e2();
  /// Tuple types have arity >= 1.
  static TypeExpr tuple(std::vector<TypeExpr> components);

  Kind kind() const { return kind_; }
  bool is_base() const { return kind_ != Kind::tuple; }
  bool is_tuple() const { return kind_ == Kind::tuple; }
  const std::vector<TypeExpr>& components() const;
  std::size_t arity() const { return components().size(); }

  /// Base types have depth 0; a tuple is one deeper than its deepest component.
  int depth() const;

  std::string to_string() const;  // e1 | e2 | <t1,...,tn>

  bool operator==(const TypeExpr& other) const;
  std::strong_ordering operator<=>(const TypeExpr& other) const;

 private:
  TypeExpr(Kind k, std::vector<TypeExpr> comps)
      : kind_(k), comps_(std::move(comps)) {}
  Kind kind_;
  std::vector<TypeExpr> comps_;
};

/// True iff every leaf base type of the tuple type t is e1.
/// Throws domain_error when t is not a tuple type (relations are
/// tuple-typed; base types are not classified).
bool is_opaque(const TypeExpr& t);

/// For a non-opaque tuple type, the 1-based index of the first component
/// containing an e2 leaf; nullopt when the type is opaque.
std::optional<std::size_t> first_e2_component(const TypeExpr& t);

struct Term {
  enum class Kind { variable, constant };

  Kind kind;
  std::string name;
  TypeExpr type;

  static Term variable(std::string name, TypeExpr type);
  static Term constant(std::string name, TypeExpr type);

  bool is_variable() const { return kind == Kind::variable; }
  std::string to_string() const;  // name^type

  bool operator==(const Term& other) const;
  std::strong_ordering operator<=>(const Term& other) const;
};

class Formula {
 public:
  enum class Kind {
    atom,         // head(args...)
    negation,     // !A
    implication,  // A -> B
    forall,       // forall X . A
    conjunction,  // sugar: A & B
    disjunction,  // sugar: A | B
    iff,          // sugar: A <-> B
    exists,       // sugar: exists X . A
    equality,     // sugar: t = u, t and u not of type e1
  };

  /// Head must be tuple-typed and argument types must match its components.
  static Formula atom(Term head, std::vector<Term> args);
  static Formula negation(Formula f);
  static Formula implication(Formula a, Formula b);
  static Formula forall(Term var, Formula body);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula exists(Term var, Formula body);
  /// Rejects operands of type e1 ("identity undefined at type e1") and
  /// mismatched operand types.
  static Formula equality(Term lhs, Term rhs);

  Kind kind() const;

  // atom access
  const Term& head() const;
  const std::vector<Term>& args() const;
  // unary / binder access
  const Formula& child() const;     // negation
  const Term& var() const;          // forall / exists
  const Formula& body() const;      // forall / exists
  // binary access
  const Formula& lhs() const;
  const Formula& rhs() const;
  // equality access
  const Term& eq_lhs() const;
  const Term& eq_rhs() const;

  /// True when the formula uses only atom, negation, implication, forall.
  bool is_primitive() const;

  bool operator==(const Formula& other) const;  // structural

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Binder-aware free variables.
std::set<Term> free_variables(const Formula& f);

/// All constants occurring in the formula.
std::set<Term> constants(const Formula& f);

/// Every tuple type carried by a term of the formula (heads, arguments,
/// binders, identity operands).
std::set<TypeExpr> term_tuple_types(const Formula& f);

/// All variable and constant names occurring anywhere (free, bound or as a
/// binder) in the formula.
std::set<std::string> all_names(const Formula& f);

enum class SubstMode {
  strict,  // throw capture_error when the replacement is not free for var
  rename,  // alpha-rename offending binders instead
};

/// Replaces free occurrences of var by repl. repl must have var's type.
Formula substitute(const Formula& f, const Term& var, const Term& repl,
                   SubstMode mode = SubstMode::strict);

/// Eliminates all sugar. Output is primitive; the transform is idempotent.
/// Equality at type t expands to the bound-predicate form
/// forall X^<t> (X(lhs) <-> X(rhs)) with a fresh X, then recursively.
Formula desugar(const Formula& f);

/// Structural equality up to renaming of bound variables.
bool alpha_equal(const Formula& a, const Formula& b);

/// Alpha-invariant canonical key (bound variables printed by binder index).
/// Two formulas have equal keys iff they are alpha-equal.
std::string alpha_key(const Formula& f);

/// Canonical text form; parse(print(f)) reproduces f.
std::string to_string(const Formula& f);

/// Universally closes f over its free variables (sorted by name, then type).
Formula universal_closure(const Formula& f);

/// A variable name not occurring in `taken`, derived from `stem`.
std::string fresh_name(const std::string& stem, const std::set<std::string>& taken);

}  // namespace veil::lang
