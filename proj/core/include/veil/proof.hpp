#pragma once

// Hilbert-style proof checker.
//
// Lines are justified by the axiom schemata A1 (propositional tautology
// instances), A2 (quantifier distribution), A3 (instantiation), A4
// (comprehension), the choice schema, premises, modus ponens (R1),
// generalization (R2), and the definitional identity rewrite between t = u
// and its bound-predicate expansion. All matching happens after desugaring
// and is insensitive to bound-variable names.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "veil/lang.hpp"

namespace veil::proof {

struct Justification {
  enum class Kind { a1, a2, a3, a4, choice, premise, mp, gen, defeq };

  Kind kind;
  int i = 0;        // referenced line (1-based); premise index for Kind::premise
  int j = 0;        // second referenced line for modus ponens
  std::string var;  // generalized variable name for Kind::gen

  static Justification axiom(Kind k);
  static Justification premise(int index);
  static Justification mp(int antecedent_line, int implication_line);
  static Justification gen(int line, std::string var);
  static Justification defeq(int line);

  /// Token form: A1 A2 A3 A4 CHOICE PREM k MP i j GEN i X DEFEQ i.
  std::string to_string() const;
};

struct ProofLine {
  lang::Formula formula;
  Justification just;
};

struct Proof {
  std::vector<lang::Formula> premises;
  std::vector<ProofLine> lines;
};

struct Verdict {
  bool accepted;
  int line = 0;        // first failing line when rejected (1-based)
  std::string reason;  // empty when accepted
};

/// Guard on the number of distinct propositional atoms a tautology check
/// may table (2^k rows).
constexpr int kTautologyAtomGuard = 24;

/// True iff f comes from a tautology in ! and -> by uniform substitution:
/// maximal subformulas that are not negations or implications are abstracted
/// into propositional atoms (up to alpha-equivalence) and the skeleton is
/// truth-tabled. Throws budget_error past the atom guard.
bool is_tautology_instance(const lang::Formula& f, int atom_guard = kTautologyAtomGuard);

enum class Schema { a2, a3, a4, choice };

struct MatchResult {
  bool matched;
  std::string diagnostic;  // first violated side condition when not matched
};

/// Structural schema match with side conditions, after desugaring.
MatchResult match_axiom(Schema schema, const lang::Formula& f);

/// Checks every line; reports the first failure. Generalization over a
/// variable free in a premise the line depends on is rejected.
Verdict check_proof(const Proof& p);

/// Proof file format:
///   # comment
///   premises:
///   <formula>          (zero or more)
///   1. <formula> ; <justification>
///   2. ...
/// Line numbers must be sequential from 1. Type annotations carry across
/// the whole file.
Proof parse_proof(std::istream& in);
Proof parse_proof_text(std::string_view text);

}  // namespace veil::proof
