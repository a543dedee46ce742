#pragma once

// Finite semantics over labeled concretizations.
//
// A frame fixes a pure atom pool (hidden labels, one or more species), a
// classical set M, and one relation collection per requested tuple type.
// Elements are encoded as indices: an atom label for e1, an index into M
// for e2, and for a tuple type a bitmask over the rows of its tuple space
// (rows enumerate the full labeled element spaces of the component types,
// independent of the frame kind). The frame kind decides which relations
// populate a domain:
//
//   standard   every relation (the full power collection),
//   symmetric  exactly the relations fixed setwise by every
//              species-preserving relabeling (unions of row orbits),
//   custom     exactly the listed relations.
//
// Quantifiers and valuations range over frame domains. The definitional
// identity between two elements is evaluated against the predicate domain
// one level up; its arguments may come from the full labeled space, which
// is what makes the standard/symmetric contrast observable.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "veil/lang.hpp"
#include "veil/qset.hpp"

namespace veil::model {

enum class FrameKind { standard, symmetric, custom };

std::string to_string(FrameKind k);
FrameKind frame_kind_from_string(const std::string& s);

/// An element of a type: atom label (e1), M index (e2), or relation bitmask
/// over the type's tuple rows. The bits double as the element's index in
/// the full space of its type.
struct Value {
  lang::TypeExpr type;
  std::uint64_t bits = 0;

  bool operator==(const Value& other) const {
    return type == other.type && bits == other.bits;
  }
  std::strong_ordering operator<=>(const Value& other) const {
    if (auto c = type <=> other.type; c != 0) return c;
    return bits <=> other.bits;
  }
};

struct FrameSpec {
  std::vector<std::pair<std::string, std::uint32_t>> species;  // ordered
  std::vector<std::string> mtags;
  FrameKind kind = FrameKind::standard;
  std::vector<lang::TypeExpr> types;  // tuple types to materialize
  std::map<lang::TypeExpr, std::vector<std::uint64_t>> custom_domains;
  int max_depth = 2;
  std::uint64_t budget = std::uint64_t{1} << 20;
};

class Frame {
 public:
  /// Materializes the domains. Throws domain_error on an empty M or an
  /// ill-formed custom relation, budget_error when a domain or the product
  /// of domain sizes would exceed the budget.
  static Frame build(const FrameSpec& spec);

  const FrameSpec& spec() const { return spec_; }
  FrameKind kind() const { return spec_.kind; }

  std::size_t atom_count() const { return atom_species_.size(); }
  /// Species of an atom label (labels are grouped by declared species order).
  const std::string& species_of(std::size_t label) const;
  /// Global label of the i-th atom of a species.
  std::size_t atom_label(const std::string& species, std::uint32_t index) const;
  const std::vector<std::string>& mtags() const { return spec_.mtags; }

  qset::QSet pool_qset() const;

  /// Number of tuple rows of a tuple type: the product of the full space
  /// sizes of its components.
  std::uint64_t rows(const lang::TypeExpr& tuple_type) const;
  /// Full labeled space size of a type (e1: atoms, e2: |M|, tuple: 2^rows).
  std::uint64_t full_space_size(const lang::TypeExpr& t) const;
  /// Every element of the full labeled space of a type, in index order.
  std::vector<Value> full_space(const lang::TypeExpr& t) const;

  bool has_domain(const lang::TypeExpr& tuple_type) const;
  /// The frame's relation collection at a materialized tuple type.
  const std::vector<std::uint64_t>& tuple_domain(const lang::TypeExpr& t) const;
  /// Quantification domain at any type (atoms / M / tuple_domain).
  std::vector<Value> domain(const lang::TypeExpr& t) const;

  /// Row index of a component tuple inside a tuple type's row space.
  std::uint64_t row_index(const lang::TypeExpr& tuple_type,
                          const std::vector<Value>& elems) const;
  /// Inverse of row_index.
  std::vector<Value> row_elements(const lang::TypeExpr& tuple_type,
                                  std::uint64_t row) const;

  /// Species-preserving relabelings (each entry maps label -> image).
  const std::vector<std::vector<std::size_t>>& group() const { return group_; }
  Value apply(const std::vector<std::size_t>& perm, const Value& v) const;
  std::vector<Value> orbit(const Value& v) const;  // sorted, unique
  bool orbit_equivalent(const Value& a, const Value& b) const;

 private:
  std::uint64_t row_index_mapped(const lang::TypeExpr& tuple_type, std::uint64_t row,
                                 const std::vector<std::size_t>& perm) const;

  FrameSpec spec_;
  std::vector<std::string> atom_species_;  // label -> species id
  std::map<lang::TypeExpr, std::vector<std::uint64_t>> domains_;
  std::vector<std::vector<std::size_t>> group_;
};

class Interpretation {
 public:
  Interpretation(Frame frame, std::map<std::string, Value> denotation);

  const Frame& frame() const { return frame_; }
  const std::map<std::string, Value>& denotation() const { return denotation_; }
  bool principal() const { return frame_.kind() == FrameKind::standard; }

  /// Image of a constant; throws domain_error when absent or type-mismatched.
  const Value& denote(const lang::Term& constant) const;

 private:
  Frame frame_;
  std::map<std::string, Value> denotation_;
};

/// Extends the denotation to variables; may also override constant images
/// within their indistinguishability orbit.
struct Valuation {
  std::map<std::string, Value> variables;
  std::map<std::string, Value> constant_images;

  Valuation with(const std::string& var, Value v) const {
    Valuation out = *this;
    out.variables.insert_or_assign(var, std::move(v));
    return out;
  }
};

/// Tarskian satisfaction. Sugar connectives evaluate by their standard
/// clauses; an identity node evaluates via the pseudo-diagonal (orbit
/// equivalence). Desugar first for the bound-predicate reading of identity.
bool satisfies(const Interpretation& i, const Valuation& v, const lang::Formula& f);

/// Truth: satisfaction under every valuation, i.e. every assignment of the
/// free variables and every orbit variant of each constant image.
bool is_true(const Interpretation& i, const lang::Formula& f);

/// Pairs of indistinguishable elements of the full labeled space at a type.
class PseudoDiagonal {
 public:
  PseudoDiagonal(lang::TypeExpr type, std::set<std::pair<Value, Value>> pairs)
      : type_(std::move(type)), pairs_(std::move(pairs)) {}

  const lang::TypeExpr& type() const { return type_; }
  const std::set<std::pair<Value, Value>>& pairs() const { return pairs_; }
  bool related(const Value& a, const Value& b) const {
    return pairs_.count({a, b}) > 0;
  }

 private:
  lang::TypeExpr type_;
  std::set<std::pair<Value, Value>> pairs_;
};

/// Throws domain_error at t = e1 (identity is undefined there).
PseudoDiagonal pseudo_diagonal(const Frame& f, const lang::TypeExpr& t);

/// Truth of the definitional identity between a and b of type tau: the
/// predicate quantifier ranges over the frame's domain at <tau>, while a
/// and b may be any elements of the full labeled space at tau.
bool identity_holds(const Frame& f, const lang::TypeExpr& tau, const Value& a,
                    const Value& b);

struct Bounds {
  int max_nm = 3;
  int max_M = 2;
  int max_depth = 2;
  FrameKind kind = FrameKind::symmetric;
  std::uint64_t budget = std::uint64_t{1} << 22;
};

struct InterpretationPoint {
  FrameSpec frame_spec;
  std::map<std::string, Value> denotation;
  std::map<std::string, Value> valuation;
};

struct ValidityResult {
  bool valid = true;  // no counterexample found within bounds
  bool complete = true;
  std::uint64_t frames = 0;
  std::uint64_t interpretations = 0;
  std::uint64_t valuations = 0;
  std::optional<InterpretationPoint> counterexample;
};

struct SatResult {
  bool satisfiable = false;
  bool complete = true;
  std::uint64_t frames = 0;
  std::uint64_t interpretations = 0;
  std::uint64_t valuations = 0;
  std::optional<InterpretationPoint> witness;
};

/// Enumerates one-species frames of the given kind within bounds, all
/// denotations of the formula's constants and all valuations of its free
/// variables, in canonical order; returns the first falsifying point, or
/// an exhaustion report with enumeration counts.
ValidityResult bounded_validity(const lang::Formula& f, const Bounds& bounds);

/// Dual search for a satisfying point.
SatResult bounded_satisfiability(const lang::Formula& f, const Bounds& bounds);

struct PermutationReport {
  int trials = 0;
  int failures = 0;
};

/// Applies sampled species-preserving relabelings simultaneously to the
/// atom pool, every domain relation and every constant image, re-evaluates
/// the closed formula, and reports how often the truth value moved (it
/// never does; the count is measured, not assumed).
PermutationReport permutation_invariance_check(const Interpretation& i,
                                               const lang::Formula& f, int trials,
                                               std::uint64_t seed);

/// Quotient of the labeled subset denoted by an opaque unary predicate
/// constant: species multiplicities only, no labels escape.
qset::QSet veiled_extension(const Interpretation& i, const lang::Term& constant);

/// Normality spot-check. Standard and symmetric frames pass by
/// construction; custom frames verify the supplied axiom-schema instances
/// by evaluation and one comprehension instance per defining formula.
struct NormalityReport {
  bool normal = true;
  std::string failure;
};
NormalityReport check_normality(const Interpretation& i,
                                const std::vector<lang::Formula>& defining_formulas,
                                const std::vector<lang::Formula>& schema_instances);

}  // namespace veil::model
