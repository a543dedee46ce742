#include "veil/proof.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "veil/parse.hpp"

namespace veil::proof {

using lang::Formula;
using lang::Term;
using lang::TypeExpr;

// ---------------------------------------------------------------------------
// Justification

Justification Justification::axiom(Kind k) { return Justification{k, 0, 0, ""}; }

Justification Justification::premise(int index) {
  return Justification{Kind::premise, index, 0, ""};
}

Justification Justification::mp(int antecedent_line, int implication_line) {
  return Justification{Kind::mp, antecedent_line, implication_line, ""};
}

Justification Justification::gen(int line, std::string var) {
  return Justification{Kind::gen, line, 0, std::move(var)};
}

Justification Justification::defeq(int line) {
  return Justification{Kind::defeq, line, 0, ""};
}

std::string Justification::to_string() const {
  switch (kind) {
    case Kind::a1: return "A1";
    case Kind::a2: return "A2";
    case Kind::a3: return "A3";
    case Kind::a4: return "A4";
    case Kind::choice: return "CHOICE";
    case Kind::premise: return "PREM " + std::to_string(i);
    case Kind::mp: return "MP " + std::to_string(i) + " " + std::to_string(j);
    case Kind::gen: return "GEN " + std::to_string(i) + " " + var;
    case Kind::defeq: return "DEFEQ " + std::to_string(i);
  }
  return "";
}

// ---------------------------------------------------------------------------
// tautology instances

namespace {

struct Skeleton {
  enum class Kind { atom, neg, imp };
  Kind kind;
  int atom = -1;
  std::unique_ptr<Skeleton> a, b;
};

Skeleton build_skeleton(const Formula& f, std::map<std::string, int>& atoms) {
  switch (f.kind()) {
    case Formula::Kind::negation: {
      Skeleton s{Skeleton::Kind::neg, -1, nullptr, nullptr};
      s.a = std::make_unique<Skeleton>(build_skeleton(f.child(), atoms));
      return s;
    }
    case Formula::Kind::implication: {
      Skeleton s{Skeleton::Kind::imp, -1, nullptr, nullptr};
      s.a = std::make_unique<Skeleton>(build_skeleton(f.lhs(), atoms));
      s.b = std::make_unique<Skeleton>(build_skeleton(f.rhs(), atoms));
      return s;
    }
    default: {
      // maximal non-propositional subformula, abstracted up to alpha
      auto [it, inserted] =
          atoms.emplace(lang::alpha_key(f), static_cast<int>(atoms.size()));
      return Skeleton{Skeleton::Kind::atom, it->second, nullptr, nullptr};
    }
  }
}

bool eval_skeleton(const Skeleton& s, std::uint32_t assignment) {
  switch (s.kind) {
    case Skeleton::Kind::atom: return (assignment >> s.atom) & 1u;
    case Skeleton::Kind::neg: return !eval_skeleton(*s.a, assignment);
    case Skeleton::Kind::imp:
      return !eval_skeleton(*s.a, assignment) || eval_skeleton(*s.b, assignment);
  }
  return false;
}

}  // namespace

bool is_tautology_instance(const Formula& f, int atom_guard) {
  Formula d = lang::desugar(f);
  std::map<std::string, int> atoms;
  Skeleton s = build_skeleton(d, atoms);
  const int k = static_cast<int>(atoms.size());
  if (k > atom_guard) {
    throw budget_error("tautology check: " + std::to_string(k) +
                       " atoms exceed the guard of " + std::to_string(atom_guard));
  }
  const std::uint32_t rows = std::uint32_t{1} << k;
  for (std::uint32_t a = 0; a < rows; ++a) {
    if (!eval_skeleton(s, a)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// schema matching

namespace {

MatchResult no_match(std::string why) { return {false, std::move(why)}; }

bool is_forall(const Formula& f) { return f.kind() == Formula::Kind::forall; }
bool is_not(const Formula& f) { return f.kind() == Formula::Kind::negation; }
bool is_imp(const Formula& f) { return f.kind() == Formula::Kind::implication; }

MatchResult match_a2(const Formula& f) {
  // forall X (A -> B) -> (A -> forall X B), X not free in A
  if (!is_imp(f)) return no_match("not an implication");
  const Formula& l = f.lhs();
  const Formula& r = f.rhs();
  if (!is_forall(l) || !is_imp(l.body())) {
    return no_match("antecedent is not of shape forall X (A -> B)");
  }
  if (!is_imp(r) || !is_forall(r.rhs())) {
    return no_match("consequent is not of shape A -> forall X B");
  }
  const Term& x = l.var();
  const Formula& a = l.body().lhs();
  const Formula& b = l.body().rhs();
  if (!lang::alpha_equal(a, r.lhs())) {
    return no_match("the two occurrences of A differ");
  }
  if (!lang::alpha_equal(Formula::forall(x, b), r.rhs())) {
    return no_match("the two occurrences of forall X B differ");
  }
  if (lang::free_variables(a).count(x)) {
    return no_match("'" + x.name + "' free in antecedent");
  }
  return {true, ""};
}

// Finds the term U with inst alpha-equal to substitute(body, x, U). Terms
// are atomic, so U is read off the positions where body has x free.
std::optional<Term> infer_instantiation(const Formula& body, const Term& x,
                                        const Formula& inst) {
  std::optional<Term> candidate;
  std::vector<Term> ba, bb;

  auto find_bound = [](const std::vector<Term>& stack, const Term& t) {
    return std::find(stack.crbegin(), stack.crend(), t);
  };

  std::function<bool(const Formula&, const Formula&)> walk =
      [&](const Formula& p, const Formula& q) -> bool {
    if (p.kind() != q.kind()) return false;

    auto match_term = [&](const Term& tp, const Term& tq) -> bool {
      bool p_is_x = tp == x && find_bound(ba, tp) == ba.crend();
      if (p_is_x) {
        if (tq.is_variable() && find_bound(bb, tq) != bb.crend()) {
          return false;  // U would be captured here
        }
        if (!candidate) {
          candidate = tq;
          return true;
        }
        return *candidate == tq;
      }
      if (!(tp.type == tq.type) || tp.kind != tq.kind) return false;
      auto ip = find_bound(ba, tp);
      auto iq = find_bound(bb, tq);
      bool pb = tp.is_variable() && ip != ba.crend();
      bool qb = tq.is_variable() && iq != bb.crend();
      if (pb != qb) return false;
      if (pb) return std::distance(ba.crbegin(), ip) == std::distance(bb.crbegin(), iq);
      return tp.name == tq.name;
    };

    switch (p.kind()) {
      case Formula::Kind::atom: {
        if (p.args().size() != q.args().size()) return false;
        if (!match_term(p.head(), q.head())) return false;
        for (std::size_t i = 0; i < p.args().size(); ++i) {
          if (!match_term(p.args()[i], q.args()[i])) return false;
        }
        return true;
      }
      case Formula::Kind::equality:
        return match_term(p.eq_lhs(), q.eq_lhs()) &&
               match_term(p.eq_rhs(), q.eq_rhs());
      case Formula::Kind::negation:
        return walk(p.child(), q.child());
      case Formula::Kind::implication:
      case Formula::Kind::conjunction:
      case Formula::Kind::disjunction:
      case Formula::Kind::iff:
        return walk(p.lhs(), q.lhs()) && walk(p.rhs(), q.rhs());
      case Formula::Kind::forall:
      case Formula::Kind::exists: {
        if (!(p.var().type == q.var().type)) return false;
        ba.push_back(p.var());
        bb.push_back(q.var());
        bool r = walk(p.body(), q.body());
        ba.pop_back();
        bb.pop_back();
        return r;
      }
    }
    return false;
  };

  if (!walk(body, inst)) return std::nullopt;
  if (!candidate) candidate = x;  // x not free in body; the trivial instance
  return candidate;
}

MatchResult match_a3(const Formula& f) {
  // forall X A(X) -> A(U), U of X's type and free for X in A
  if (!is_imp(f) || !is_forall(f.lhs())) {
    return no_match("not of shape forall X A -> A(U)");
  }
  const Term& x = f.lhs().var();
  const Formula& body = f.lhs().body();
  auto u = infer_instantiation(body, x, f.rhs());
  if (!u) return no_match("consequent is not an instantiation of the body");
  if (!(u->type == x.type)) {
    return no_match("instantiating term has type " + u->type.to_string() +
                    ", expected " + x.type.to_string());
  }
  try {
    Formula expected = lang::substitute(body, x, *u, lang::SubstMode::strict);
    if (!lang::alpha_equal(expected, f.rhs())) {
      return no_match("consequent differs from the substituted body");
    }
  } catch (const capture_error&) {
    return no_match("'" + u->name + "' is not free for '" + x.name + "'");
  }
  return {true, ""};
}

MatchResult match_a4(const Formula& f) {
  // desugared form of:  exists Xi forall X1..Xn (Xi(X1,..,Xn) <-> U)
  if (!is_not(f) || !is_forall(f.child()) || !is_not(f.child().body())) {
    return no_match("not an existential");
  }
  const Formula& q = f.child();
  const Term& xi = q.var();
  if (!xi.type.is_tuple()) {
    return no_match("comprehended variable must have a tuple type");
  }
  const std::size_t n = xi.type.arity();

  Formula cur = q.body().child();
  std::vector<Term> vars;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_forall(cur)) {
      return no_match("expected " + std::to_string(n) +
                      " universal quantifiers after the existential");
    }
    vars.push_back(cur.var());
    cur = cur.body();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(vars[i].type == xi.type.components()[i])) {
      return no_match("quantified variable " + std::to_string(i + 1) +
                      " has the wrong type");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (vars[k].name == vars[i].name) {
        return no_match("quantified variables must be distinct");
      }
    }
  }

  // desugared biconditional: !((P -> U) -> !(U' -> P'))
  if (!is_not(cur) || !is_imp(cur.child())) {
    return no_match("body is not a biconditional");
  }
  const Formula& outer = cur.child();
  if (!is_imp(outer.lhs()) || !is_not(outer.rhs()) || !is_imp(outer.rhs().child())) {
    return no_match("body is not a biconditional");
  }
  const Formula& p = outer.lhs().lhs();
  const Formula& u = outer.lhs().rhs();
  const Formula& u2 = outer.rhs().child().lhs();
  const Formula& p2 = outer.rhs().child().rhs();
  if (!lang::alpha_equal(p, p2) || !lang::alpha_equal(u, u2)) {
    return no_match("body is not a biconditional");
  }

  if (p.kind() != Formula::Kind::atom) return no_match("left side is not an atom");
  if (!(p.head() == xi)) {
    return no_match("left side must apply the comprehended variable");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(p.args()[i] == vars[i])) {
      return no_match("left side must apply the quantified variables in order");
    }
  }

  if (lang::free_variables(u).count(xi)) {
    return no_match("'" + xi.name + "' occurs free in the defining formula");
  }
  return {true, ""};
}

MatchResult match_choice(const Formula& f) {
  // The instance is determined by the pair type of the leading binder; build
  // that template and compare up to alpha.
  if (!is_forall(f)) return no_match("not of the choice shape");
  const TypeExpr& zt = f.var().type;
  if (!zt.is_tuple() || zt.arity() != 2) {
    return no_match("leading binder must range over a binary relation type");
  }
  const TypeExpr& t1 = zt.components()[0];
  const TypeExpr& t2 = zt.components()[1];
  if (t1.kind() == TypeExpr::Kind::base1 || t2.kind() == TypeExpr::Kind::base1) {
    return no_match("choice is restricted to types other than e1");
  }

  Term z1 = Term::variable("Zc1", zt);
  Term z2 = Term::variable("Zc2", zt);
  Term x1 = Term::variable("Xc1", t1);
  Term x2 = Term::variable("Xc2", t1);
  Term y1 = Term::variable("Yc1", t2);
  Term y2 = Term::variable("Yc2", t2);

  auto rel = [](const Term& z, const Term& a, const Term& b) {
    return Formula::atom(z, {a, b});
  };

  Formula selector = Formula::forall(
      x1, Formula::exists(
              y1, Formula::implication(
                      rel(z1, x1, y1),
                      Formula::exists(y1, Formula::conjunction(rel(z2, x1, y1),
                                                               rel(z1, x1, y1))))));
  Formula functional = Formula::forall(
      x1,
      Formula::forall(
          x2,
          Formula::forall(
              y1, Formula::forall(
                      y2, Formula::implication(
                              Formula::conjunction(rel(z2, x1, y1), rel(z2, x1, y2)),
                              Formula::equality(y1, y2))))));
  Formula templ = Formula::forall(
      z1, Formula::exists(z2, Formula::implication(std::move(selector),
                                                   std::move(functional))));

  if (!lang::alpha_equal(f, lang::desugar(templ))) {
    return no_match("does not match the choice schema at types " +
                    t1.to_string() + ", " + t2.to_string());
  }
  return {true, ""};
}

}  // namespace

MatchResult match_axiom(Schema schema, const Formula& f) {
  Formula d = lang::desugar(f);
  switch (schema) {
    case Schema::a2: return match_a2(d);
    case Schema::a3: return match_a3(d);
    case Schema::a4: return match_a4(d);
    case Schema::choice: return match_choice(d);
  }
  return no_match("unknown schema");
}

// ---------------------------------------------------------------------------
// proof checking

Verdict check_proof(const Proof& p) {
  std::vector<Formula> dprem;
  dprem.reserve(p.premises.size());
  for (const auto& f : p.premises) dprem.push_back(lang::desugar(f));

  std::vector<Formula> dlines;
  std::vector<std::set<int>> deps;  // premise indices each line depends on

  auto reject = [](int line, std::string why) {
    return Verdict{false, line, std::move(why)};
  };

  for (std::size_t idx = 0; idx < p.lines.size(); ++idx) {
    const int lineno = static_cast<int>(idx) + 1;
    const ProofLine& line = p.lines[idx];
    const Justification& just = line.just;
    Formula d = lang::desugar(line.formula);
    std::set<int> dep;

    auto valid_ref = [&](int r) { return r >= 1 && r <= static_cast<int>(idx); };

    switch (just.kind) {
      case Justification::Kind::a1: {
        bool ok;
        try {
          ok = is_tautology_instance(d);
        } catch (const budget_error& e) {
          return reject(lineno, e.what());
        }
        if (!ok) return reject(lineno, "not a tautology instance");
        break;
      }
      case Justification::Kind::a2:
      case Justification::Kind::a3:
      case Justification::Kind::a4:
      case Justification::Kind::choice: {
        Schema s = just.kind == Justification::Kind::a2   ? Schema::a2
                   : just.kind == Justification::Kind::a3 ? Schema::a3
                   : just.kind == Justification::Kind::a4 ? Schema::a4
                                                          : Schema::choice;
        MatchResult m = match_axiom(s, d);
        if (!m.matched) {
          return reject(lineno, just.to_string() + ": " + m.diagnostic);
        }
        break;
      }
      case Justification::Kind::premise: {
        if (just.i < 1 || just.i > static_cast<int>(dprem.size())) {
          return reject(lineno,
                        "premise index " + std::to_string(just.i) + " out of range");
        }
        if (!lang::alpha_equal(d, dprem[just.i - 1])) {
          return reject(lineno,
                        "formula differs from premise " + std::to_string(just.i));
        }
        dep.insert(just.i);
        break;
      }
      case Justification::Kind::mp: {
        if (!valid_ref(just.i) || !valid_ref(just.j)) {
          return reject(lineno, "MP references a line at or after this one");
        }
        Formula expected = Formula::implication(dlines[just.i - 1], d);
        if (!lang::alpha_equal(dlines[just.j - 1], expected)) {
          return reject(lineno, "line " + std::to_string(just.j) +
                                    " is not (line " + std::to_string(just.i) +
                                    " -> this line)");
        }
        dep = deps[just.i - 1];
        dep.insert(deps[just.j - 1].begin(), deps[just.j - 1].end());
        break;
      }
      case Justification::Kind::gen: {
        if (!valid_ref(just.i)) {
          return reject(lineno, "GEN references a line at or after this one");
        }
        if (d.kind() != Formula::Kind::forall) {
          return reject(lineno, "GEN must derive a universal formula");
        }
        // The token names the generalized variable; its type comes from the
        // referenced line, or from this line's binder when the binding is
        // vacuous.
        std::optional<TypeExpr> type;
        for (const auto& v : lang::free_variables(dlines[just.i - 1])) {
          if (v.name == just.var) type = v.type;
        }
        if (!type) type = d.var().type;
        Term gvar = Term::variable(just.var, *type);

        try {
          Formula want = Formula::forall(gvar, dlines[just.i - 1]);
          if (!lang::alpha_equal(d, want)) {
            return reject(lineno, "not the generalization of line " +
                                      std::to_string(just.i) + " over '" +
                                      just.var + "'");
          }
        } catch (const type_error& e) {
          return reject(lineno, e.what());
        }
        for (int k : deps[just.i - 1]) {
          if (lang::free_variables(dprem[k - 1]).count(gvar)) {
            return reject(lineno, "generalized variable '" + just.var +
                                      "' occurs free in premise " + std::to_string(k));
          }
        }
        dep = deps[just.i - 1];
        break;
      }
      case Justification::Kind::defeq: {
        if (!valid_ref(just.i)) {
          return reject(lineno, "DEFEQ references a line at or after this one");
        }
        if (!lang::alpha_equal(d, dlines[just.i - 1])) {
          return reject(lineno,
                        "not an identity rewrite of line " + std::to_string(just.i));
        }
        dep = deps[just.i - 1];
        break;
      }
    }

    dlines.push_back(std::move(d));
    deps.push_back(std::move(dep));
  }

  return Verdict{true, 0, ""};
}

// ---------------------------------------------------------------------------
// proof files

namespace {

std::string strip_comment(const std::string& line) {
  std::string out = line;
  auto hash = out.find('#');
  if (hash != std::string::npos) out.erase(hash);
  while (!out.empty() &&
         (out.back() == ' ' || out.back() == '\t' || out.back() == '\r')) {
    out.pop_back();
  }
  return out;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t") == std::string::npos;
}

Justification parse_justification(const std::string& text, int lineno) {
  std::istringstream in(text);
  std::string tok;
  if (!(in >> tok)) throw parse_error("missing justification", lineno, 1);

  auto read_int = [&](const char* what) {
    int v;
    if (!(in >> v)) {
      throw parse_error(std::string("justification needs ") + what, lineno, 1);
    }
    return v;
  };

  Justification j{};
  if (tok == "A1") j = Justification::axiom(Justification::Kind::a1);
  else if (tok == "A2") j = Justification::axiom(Justification::Kind::a2);
  else if (tok == "A3") j = Justification::axiom(Justification::Kind::a3);
  else if (tok == "A4") j = Justification::axiom(Justification::Kind::a4);
  else if (tok == "CHOICE") j = Justification::axiom(Justification::Kind::choice);
  else if (tok == "PREM") j = Justification::premise(read_int("a premise index"));
  else if (tok == "MP") {
    int a = read_int("two line numbers");
    int b = read_int("two line numbers");
    j = Justification::mp(a, b);
  } else if (tok == "GEN") {
    int a = read_int("a line number");
    std::string var;
    if (!(in >> var)) throw parse_error("GEN needs a variable name", lineno, 1);
    auto caret = var.find('^');
    if (caret != std::string::npos) var.erase(caret);
    j = Justification::gen(a, std::move(var));
  } else if (tok == "DEFEQ") {
    j = Justification::defeq(read_int("a line number"));
  } else {
    throw parse_error("unknown justification '" + tok + "'", lineno, 1);
  }

  std::string extra;
  if (in >> extra) {
    throw parse_error("trailing justification token '" + extra + "'", lineno, 1);
  }
  return j;
}

}  // namespace

Proof parse_proof(std::istream& in) {
  Proof proof;
  lang::SymbolTable symbols;
  std::string raw;
  int lineno = 0;
  bool in_premises = false;
  int expected_number = 1;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip_comment(raw);
    if (blank(line)) continue;

    std::string t = line;
    t.erase(0, t.find_first_not_of(" \t"));

    if (t == "premises:") {
      in_premises = true;
      continue;
    }

    // numbered line:  n. <formula> ; <justification>
    std::size_t pos = 0;
    while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
    bool numbered = pos > 0 && pos < t.size() && t[pos] == '.';

    if (!numbered) {
      if (!in_premises) {
        throw parse_error("expected 'premises:' or a numbered line", lineno, 1);
      }
      try {
        proof.premises.push_back(lang::parse_formula(t, symbols));
      } catch (const parse_error& e) {
        throw parse_error(e.message, lineno, e.column);
      }
      continue;
    }

    in_premises = false;
    int number = std::stoi(t.substr(0, pos));
    if (number != expected_number) {
      throw parse_error("line numbered " + std::to_string(number) + ", expected " +
                            std::to_string(expected_number),
                        lineno, 1);
    }
    ++expected_number;

    std::string rest = t.substr(pos + 1);
    auto semi = rest.find(';');
    if (semi == std::string::npos) {
      throw parse_error("missing '; <justification>'", lineno, 1);
    }
    std::string formula_text = rest.substr(0, semi);
    std::string just_text = rest.substr(semi + 1);

    Formula f = [&] {
      try {
        return lang::parse_formula(formula_text, symbols);
      } catch (const parse_error& e) {
        throw parse_error(e.message, lineno, e.column);
      }
    }();
    proof.lines.push_back(
        ProofLine{std::move(f), parse_justification(just_text, lineno)});
  }

  if (proof.lines.empty()) throw parse_error("proof has no lines", lineno + 1, 1);
  return proof;
}

Proof parse_proof_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_proof(in);
}

}  // namespace veil::proof
