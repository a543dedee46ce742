#include "veil/lang.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace veil::lang {

// ---------------------------------------------------------------------------
// TypeExpr

TypeExpr TypeExpr::e1() { return TypeExpr(Kind::base1, {}); }
TypeExpr TypeExpr::e2() { return TypeExpr(Kind::base2, {}); }

TypeExpr TypeExpr::tuple(std::vector<TypeExpr> components) {
  if (components.empty()) throw type_error("tuple types have arity >= 1");
  return TypeExpr(Kind::tuple, std::move(components));
}

const std::vector<TypeExpr>& TypeExpr::components() const {
  if (!is_tuple()) throw type_error("base types have no components");
  return comps_;
}

int TypeExpr::depth() const {
  if (!is_tuple()) return 0;
  int d = 0;
  for (const auto& c : comps_) d = std::max(d, c.depth());
  return d + 1;
}

std::string TypeExpr::to_string() const {
  switch (kind_) {
    case Kind::base1: return "e1";
    case Kind::base2: return "e2";
    case Kind::tuple: {
      std::string out = "<";
      for (std::size_t i = 0; i < comps_.size(); ++i) {
        if (i) out += ",";
        out += comps_[i].to_string();
      }
      return out + ">";
    }
  }
  return "";
}

bool TypeExpr::operator==(const TypeExpr& other) const {
  return (*this <=> other) == std::strong_ordering::equal;
}

std::strong_ordering TypeExpr::operator<=>(const TypeExpr& other) const {
  if (auto c = kind_ <=> other.kind_; c != 0) return c;
  if (auto c = comps_.size() <=> other.comps_.size(); c != 0) return c;
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    if (auto c = comps_[i] <=> other.comps_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

bool is_opaque(const TypeExpr& t) {
  if (!t.is_tuple()) {
    throw domain_error("is_opaque: '" + t.to_string() +
                       "' is not a relation (tuple) type");
  }
  // Recursively from e1: each component is e1 itself or a tuple all of whose
  // leaves are e1.
  for (const auto& c : t.components()) {
    if (c.kind() == TypeExpr::Kind::base2) return false;
    if (c.is_tuple() && !is_opaque(c)) return false;
  }
  return true;
}

namespace {

bool has_e2_leaf(const TypeExpr& t) {
  if (t.kind() == TypeExpr::Kind::base2) return true;
  if (!t.is_tuple()) return false;
  for (const auto& c : t.components()) {
    if (has_e2_leaf(c)) return true;
  }
  return false;
}

}  // namespace

std::optional<std::size_t> first_e2_component(const TypeExpr& t) {
  if (!t.is_tuple()) {
    throw domain_error("first_e2_component: '" + t.to_string() +
                       "' is not a relation (tuple) type");
  }
  const auto& comps = t.components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (has_e2_leaf(comps[i])) return i + 1;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Term

Term Term::variable(std::string name, TypeExpr type) {
  return Term{Kind::variable, std::move(name), std::move(type)};
}

Term Term::constant(std::string name, TypeExpr type) {
  return Term{Kind::constant, std::move(name), std::move(type)};
}

std::string Term::to_string() const { return name + "^" + type.to_string(); }

bool Term::operator==(const Term& other) const {
  return (*this <=> other) == std::strong_ordering::equal;
}

std::strong_ordering Term::operator<=>(const Term& other) const {
  if (auto c = kind <=> other.kind; c != 0) return c;
  if (auto c = name <=> other.name; c != 0) return c;
  return type <=> other.type;
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  // atom
  std::optional<Term> head;
  std::vector<Term> args;
  // binder
  std::optional<Term> var;
  // children: negation/binder body in a; binary in a, b
  std::optional<Formula> a;
  std::optional<Formula> b;
  // equality operands
  std::optional<Term> t1;
  std::optional<Term> t2;
};

Formula Formula::atom(Term head, std::vector<Term> args) {
  if (!head.type.is_tuple()) {
    throw type_error("atom head '" + head.name + "' must have a tuple type, got " +
                     head.type.to_string());
  }
  const auto& comps = head.type.components();
  if (comps.size() != args.size()) {
    throw type_error("atom '" + head.name + "' expects " +
                     std::to_string(comps.size()) + " arguments, got " +
                     std::to_string(args.size()));
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!(args[i].type == comps[i])) {
      throw type_error("atom '" + head.name + "': argument " + std::to_string(i + 1) +
                       " has type " + args[i].type.to_string() + ", expected " +
                       comps[i].to_string());
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::atom;
  n->head = std::move(head);
  n->args = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::negation(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::negation;
  n->a = std::move(f);
  return Formula(std::move(n));
}

Formula Formula::implication(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::implication;
  n->a = std::move(a);
  n->b = std::move(b);
  return Formula(std::move(n));
}

namespace {

// Binding is by name, so a body may not use the binder's name at another type.
void check_binder(const Term& var, const Formula& body) {
  if (!var.is_variable()) throw type_error("binder requires a variable");
  for (const auto& v : free_variables(body)) {
    if (v.name == var.name && !(v.type == var.type)) {
      throw type_error("variable '" + var.name + "' used at conflicting types " +
                       var.type.to_string() + " and " + v.type.to_string());
    }
  }
}

}  // namespace

Formula Formula::forall(Term var, Formula body) {
  check_binder(var, body);
  auto n = std::make_shared<Node>();
  n->kind = Kind::forall;
  n->var = std::move(var);
  n->a = std::move(body);
  return Formula(std::move(n));
}

Formula Formula::conjunction(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::conjunction;
  n->a = std::move(a);
  n->b = std::move(b);
  return Formula(std::move(n));
}

Formula Formula::disjunction(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::disjunction;
  n->a = std::move(a);
  n->b = std::move(b);
  return Formula(std::move(n));
}

Formula Formula::iff(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::iff;
  n->a = std::move(a);
  n->b = std::move(b);
  return Formula(std::move(n));
}

Formula Formula::exists(Term var, Formula body) {
  check_binder(var, body);
  auto n = std::make_shared<Node>();
  n->kind = Kind::exists;
  n->var = std::move(var);
  n->a = std::move(body);
  return Formula(std::move(n));
}

Formula Formula::equality(Term lhs, Term rhs) {
  if (!(lhs.type == rhs.type)) {
    throw type_error("identity requires operands of one type, got " +
                     lhs.type.to_string() + " and " + rhs.type.to_string());
  }
  if (lhs.type.kind() == TypeExpr::Kind::base1) {
    throw type_error("identity undefined at type e1");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::equality;
  n->t1 = std::move(lhs);
  n->t2 = std::move(rhs);
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const Term& Formula::head() const { return *node_->head; }
const std::vector<Term>& Formula::args() const { return node_->args; }
const Formula& Formula::child() const { return *node_->a; }
const Term& Formula::var() const { return *node_->var; }
const Formula& Formula::body() const { return *node_->a; }
const Formula& Formula::lhs() const { return *node_->a; }
const Formula& Formula::rhs() const { return *node_->b; }
const Term& Formula::eq_lhs() const { return *node_->t1; }
const Term& Formula::eq_rhs() const { return *node_->t2; }

bool Formula::is_primitive() const {
  switch (kind()) {
    case Kind::atom: return true;
    case Kind::negation: return child().is_primitive();
    case Kind::implication: return lhs().is_primitive() && rhs().is_primitive();
    case Kind::forall: return body().is_primitive();
    default: return false;
  }
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::atom:
      return head() == other.head() && args() == other.args();
    case Kind::negation:
      return child() == other.child();
    case Kind::implication:
    case Kind::conjunction:
    case Kind::disjunction:
    case Kind::iff:
      return lhs() == other.lhs() && rhs() == other.rhs();
    case Kind::forall:
    case Kind::exists:
      return var() == other.var() && body() == other.body();
    case Kind::equality:
      return eq_lhs() == other.eq_lhs() && eq_rhs() == other.eq_rhs();
  }
  return false;
}

// ---------------------------------------------------------------------------
// traversals

namespace {

void collect_free(const Formula& f, std::vector<Term>& bound, std::set<Term>& out) {
  switch (f.kind()) {
    case Formula::Kind::atom: {
      auto visit = [&](const Term& t) {
        if (!t.is_variable()) return;
        if (std::find(bound.rbegin(), bound.rend(), t) != bound.rend()) return;
        out.insert(t);
      };
      visit(f.head());
      for (const auto& a : f.args()) visit(a);
      return;
    }
    case Formula::Kind::equality: {
      for (const Term* t : {&f.eq_lhs(), &f.eq_rhs()}) {
        if (t->is_variable() &&
            std::find(bound.rbegin(), bound.rend(), *t) == bound.rend()) {
          out.insert(*t);
        }
      }
      return;
    }
    case Formula::Kind::negation:
      collect_free(f.child(), bound, out);
      return;
    case Formula::Kind::implication:
    case Formula::Kind::conjunction:
    case Formula::Kind::disjunction:
    case Formula::Kind::iff:
      collect_free(f.lhs(), bound, out);
      collect_free(f.rhs(), bound, out);
      return;
    case Formula::Kind::forall:
    case Formula::Kind::exists:
      bound.push_back(f.var());
      collect_free(f.body(), bound, out);
      bound.pop_back();
      return;
  }
}

void collect_names(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::atom:
      out.insert(f.head().name);
      for (const auto& a : f.args()) out.insert(a.name);
      return;
    case Formula::Kind::equality:
      out.insert(f.eq_lhs().name);
      out.insert(f.eq_rhs().name);
      return;
    case Formula::Kind::negation:
      collect_names(f.child(), out);
      return;
    case Formula::Kind::implication:
    case Formula::Kind::conjunction:
    case Formula::Kind::disjunction:
    case Formula::Kind::iff:
      collect_names(f.lhs(), out);
      collect_names(f.rhs(), out);
      return;
    case Formula::Kind::forall:
    case Formula::Kind::exists:
      out.insert(f.var().name);
      collect_names(f.body(), out);
      return;
  }
}

}  // namespace

std::set<Term> free_variables(const Formula& f) {
  std::set<Term> out;
  std::vector<Term> bound;
  collect_free(f, bound, out);
  return out;
}

namespace {

void visit_terms(const Formula& f, const std::function<void(const Term&)>& fn) {
  switch (f.kind()) {
    case Formula::Kind::atom:
      fn(f.head());
      for (const auto& a : f.args()) fn(a);
      return;
    case Formula::Kind::equality:
      fn(f.eq_lhs());
      fn(f.eq_rhs());
      return;
    case Formula::Kind::negation:
      visit_terms(f.child(), fn);
      return;
    case Formula::Kind::implication:
    case Formula::Kind::conjunction:
    case Formula::Kind::disjunction:
    case Formula::Kind::iff:
      visit_terms(f.lhs(), fn);
      visit_terms(f.rhs(), fn);
      return;
    case Formula::Kind::forall:
    case Formula::Kind::exists:
      fn(f.var());
      visit_terms(f.body(), fn);
      return;
  }
}

}  // namespace

std::set<Term> constants(const Formula& f) {
  std::set<Term> out;
  visit_terms(f, [&](const Term& t) {
    if (!t.is_variable()) out.insert(t);
  });
  return out;
}

std::set<TypeExpr> term_tuple_types(const Formula& f) {
  std::set<TypeExpr> out;
  visit_terms(f, [&](const Term& t) {
    if (t.type.is_tuple()) out.insert(t.type);
  });
  return out;
}

std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  collect_names(f, out);
  return out;
}

std::string fresh_name(const std::string& stem, const std::set<std::string>& taken) {
  if (!taken.count(stem)) return stem;
  for (int i = 1;; ++i) {
    std::string cand = stem + std::to_string(i);
    if (!taken.count(cand)) return cand;
  }
}

// ---------------------------------------------------------------------------
// substitution

namespace {

Formula substitute_impl(const Formula& f, const Term& var, const Term& repl,
                        SubstMode mode) {
  switch (f.kind()) {
    case Formula::Kind::atom: {
      auto map_term = [&](const Term& t) { return t == var ? repl : t; };
      Term head = map_term(f.head());
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const auto& a : f.args()) args.push_back(map_term(a));
      return Formula::atom(std::move(head), std::move(args));
    }
    case Formula::Kind::equality: {
      Term l = f.eq_lhs() == var ? repl : f.eq_lhs();
      Term r = f.eq_rhs() == var ? repl : f.eq_rhs();
      return Formula::equality(std::move(l), std::move(r));
    }
    case Formula::Kind::negation:
      return Formula::negation(substitute_impl(f.child(), var, repl, mode));
    case Formula::Kind::implication:
      return Formula::implication(substitute_impl(f.lhs(), var, repl, mode),
                                  substitute_impl(f.rhs(), var, repl, mode));
    case Formula::Kind::conjunction:
      return Formula::conjunction(substitute_impl(f.lhs(), var, repl, mode),
                                  substitute_impl(f.rhs(), var, repl, mode));
    case Formula::Kind::disjunction:
      return Formula::disjunction(substitute_impl(f.lhs(), var, repl, mode),
                                  substitute_impl(f.rhs(), var, repl, mode));
    case Formula::Kind::iff:
      return Formula::iff(substitute_impl(f.lhs(), var, repl, mode),
                          substitute_impl(f.rhs(), var, repl, mode));
    case Formula::Kind::forall:
    case Formula::Kind::exists: {
      const bool is_forall = f.kind() == Formula::Kind::forall;
      if (f.var() == var) return f;  // no free occurrences below
      bool body_has_var = free_variables(f.body()).count(var) > 0;
      if (!body_has_var) return f;
      if (repl.is_variable() && f.var().name == repl.name) {
        // the binder would capture repl
        if (mode == SubstMode::strict) {
          throw capture_error("'" + repl.name + "' is not free for '" + var.name +
                              "': capture under binder '" + f.var().name + "'");
        }
        std::set<std::string> taken = all_names(f.body());
        taken.insert(var.name);
        taken.insert(repl.name);
        Term renamed = Term::variable(fresh_name(f.var().name, taken), f.var().type);
        Formula body = substitute_impl(f.body(), f.var(), renamed, mode);
        body = substitute_impl(body, var, repl, mode);
        return is_forall ? Formula::forall(renamed, std::move(body))
                         : Formula::exists(renamed, std::move(body));
      }
      Formula body = substitute_impl(f.body(), var, repl, mode);
      return is_forall ? Formula::forall(f.var(), std::move(body))
                       : Formula::exists(f.var(), std::move(body));
    }
  }
  throw error("substitute: unreachable");
}

}  // namespace

Formula substitute(const Formula& f, const Term& var, const Term& repl,
                   SubstMode mode) {
  if (!var.is_variable()) throw type_error("substitute: not a variable");
  if (!(repl.type == var.type)) {
    throw type_error("substitute: replacement type " + repl.type.to_string() +
                     " does not match variable type " + var.type.to_string());
  }
  return substitute_impl(f, var, repl, mode);
}

// ---------------------------------------------------------------------------
// desugar

Formula desugar(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::atom:
      return f;
    case Formula::Kind::negation:
      return Formula::negation(desugar(f.child()));
    case Formula::Kind::implication:
      return Formula::implication(desugar(f.lhs()), desugar(f.rhs()));
    case Formula::Kind::forall:
      return Formula::forall(f.var(), desugar(f.body()));
    case Formula::Kind::conjunction: {
      // A & B  =>  !(A -> !B)
      Formula a = desugar(f.lhs());
      Formula b = desugar(f.rhs());
      return Formula::negation(
          Formula::implication(std::move(a), Formula::negation(std::move(b))));
    }
    case Formula::Kind::disjunction: {
      // A | B  =>  !A -> B
      return Formula::implication(Formula::negation(desugar(f.lhs())),
                                  desugar(f.rhs()));
    }
    case Formula::Kind::iff: {
      // A <-> B  =>  (A -> B) & (B -> A), then desugar the conjunction
      Formula a = desugar(f.lhs());
      Formula b = desugar(f.rhs());
      Formula ab = Formula::implication(a, b);
      Formula ba = Formula::implication(b, a);
      return Formula::negation(
          Formula::implication(std::move(ab), Formula::negation(std::move(ba))));
    }
    case Formula::Kind::exists: {
      // exists X . A  =>  ! forall X . !A
      return Formula::negation(
          Formula::forall(f.var(), Formula::negation(desugar(f.body()))));
    }
    case Formula::Kind::equality: {
      // t = u at type T  =>  forall X^<T> (X(t) <-> X(u)), X fresh
      const Term& l = f.eq_lhs();
      const Term& r = f.eq_rhs();
      std::set<std::string> taken = {l.name, r.name};
      Term pred = Term::variable(fresh_name("EQV", taken),
                                 TypeExpr::tuple({l.type}));
      Formula body = Formula::iff(Formula::atom(pred, {l}), Formula::atom(pred, {r}));
      return desugar(Formula::forall(pred, std::move(body)));
    }
  }
  throw error("desugar: unreachable");
}

// ---------------------------------------------------------------------------
// alpha equivalence

namespace {

// Bound variables are tracked by parallel binder stacks; a variable matches
// when both sides resolve to the same binder depth (or both are free and
// identical).
bool alpha_eq(const Formula& a, const Formula& b, std::vector<Term>& ba,
              std::vector<Term>& bb) {
  if (a.kind() != b.kind()) return false;

  auto term_eq = [&](const Term& x, const Term& y) {
    if (!(x.type == y.type) || x.kind != y.kind) return false;
    if (x.is_variable()) {
      auto ia = std::find(ba.rbegin(), ba.rend(), x);
      auto ib = std::find(bb.rbegin(), bb.rend(), y);
      bool xa = ia != ba.rend();
      bool xb = ib != bb.rend();
      if (xa != xb) return false;
      if (xa) return std::distance(ba.rbegin(), ia) == std::distance(bb.rbegin(), ib);
    }
    return x.name == y.name;
  };

  switch (a.kind()) {
    case Formula::Kind::atom: {
      if (!term_eq(a.head(), b.head())) return false;
      if (a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (!term_eq(a.args()[i], b.args()[i])) return false;
      }
      return true;
    }
    case Formula::Kind::equality:
      return term_eq(a.eq_lhs(), b.eq_lhs()) && term_eq(a.eq_rhs(), b.eq_rhs());
    case Formula::Kind::negation:
      return alpha_eq(a.child(), b.child(), ba, bb);
    case Formula::Kind::implication:
    case Formula::Kind::conjunction:
    case Formula::Kind::disjunction:
    case Formula::Kind::iff:
      return alpha_eq(a.lhs(), b.lhs(), ba, bb) && alpha_eq(a.rhs(), b.rhs(), ba, bb);
    case Formula::Kind::forall:
    case Formula::Kind::exists: {
      if (!(a.var().type == b.var().type)) return false;
      ba.push_back(a.var());
      bb.push_back(b.var());
      bool r = alpha_eq(a.body(), b.body(), ba, bb);
      ba.pop_back();
      bb.pop_back();
      return r;
    }
  }
  return false;
}

void alpha_key_impl(const Formula& f, std::vector<Term>& bound, std::string& out) {
  auto term_key = [&](const Term& t) {
    if (t.is_variable()) {
      auto it = std::find(bound.rbegin(), bound.rend(), t);
      if (it != bound.rend()) {
        out += "#" + std::to_string(std::distance(bound.rbegin(), it));
        out += "^" + t.type.to_string();
        return;
      }
    }
    out += (t.is_variable() ? "v:" : "c:");
    out += t.name + "^" + t.type.to_string();
  };

  switch (f.kind()) {
    case Formula::Kind::atom:
      out += "A(";
      term_key(f.head());
      for (const auto& a : f.args()) {
        out += ",";
        term_key(a);
      }
      out += ")";
      return;
    case Formula::Kind::equality:
      out += "E(";
      term_key(f.eq_lhs());
      out += ",";
      term_key(f.eq_rhs());
      out += ")";
      return;
    case Formula::Kind::negation:
      out += "N(";
      alpha_key_impl(f.child(), bound, out);
      out += ")";
      return;
    case Formula::Kind::implication:
    case Formula::Kind::conjunction:
    case Formula::Kind::disjunction:
    case Formula::Kind::iff: {
      const char* tag = f.kind() == Formula::Kind::implication ? "I"
                        : f.kind() == Formula::Kind::conjunction ? "C"
                        : f.kind() == Formula::Kind::disjunction ? "D"
                                                                 : "B";
      out += tag;
      out += "(";
      alpha_key_impl(f.lhs(), bound, out);
      out += ",";
      alpha_key_impl(f.rhs(), bound, out);
      out += ")";
      return;
    }
    case Formula::Kind::forall:
    case Formula::Kind::exists:
      out += f.kind() == Formula::Kind::forall ? "F" : "X";
      out += "[" + f.var().type.to_string() + "](";
      bound.push_back(f.var());
      alpha_key_impl(f.body(), bound, out);
      bound.pop_back();
      out += ")";
      return;
  }
}

}  // namespace

bool alpha_equal(const Formula& a, const Formula& b) {
  std::vector<Term> ba, bb;
  return alpha_eq(a, b, ba, bb);
}

std::string alpha_key(const Formula& f) {
  std::string out;
  std::vector<Term> bound;
  alpha_key_impl(f, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// printing

namespace {

// Higher binds tighter. Quantifier bodies extend maximally to the right.
int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::iff: return 1;
    case Formula::Kind::implication: return 2;
    case Formula::Kind::disjunction: return 3;
    case Formula::Kind::conjunction: return 4;
    case Formula::Kind::negation: return 5;
    case Formula::Kind::forall:
    case Formula::Kind::exists: return 0;  // always parenthesized as operand
    default: return 6;
  }
}

void print_impl(const Formula& f, std::ostringstream& out, int parent_prec) {
  const int prec = precedence(f.kind());
  switch (f.kind()) {
    case Formula::Kind::atom: {
      out << f.head().to_string() << "(";
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i) out << ", ";
        out << f.args()[i].to_string();
      }
      out << ")";
      return;
    }
    case Formula::Kind::equality:
      if (parent_prec > 0) out << "(";
      out << f.eq_lhs().to_string() << " = " << f.eq_rhs().to_string();
      if (parent_prec > 0) out << ")";
      return;
    case Formula::Kind::negation:
      out << "!";
      print_impl(f.child(), out, prec);
      return;
    case Formula::Kind::forall:
    case Formula::Kind::exists: {
      bool need = parent_prec > 0;
      if (need) out << "(";
      out << (f.kind() == Formula::Kind::forall ? "forall " : "exists ");
      out << f.var().to_string() << " . ";
      print_impl(f.body(), out, 0);
      if (need) out << ")";
      return;
    }
    case Formula::Kind::implication:
    case Formula::Kind::conjunction:
    case Formula::Kind::disjunction:
    case Formula::Kind::iff: {
      const char* op = f.kind() == Formula::Kind::implication ? " -> "
                       : f.kind() == Formula::Kind::conjunction ? " & "
                       : f.kind() == Formula::Kind::disjunction ? " | "
                                                                : " <-> ";
      bool need = prec < parent_prec;
      // implication is right-associative; &, |, <-> associate to the left
      if (need) out << "(";
      int lp = f.kind() == Formula::Kind::implication ? prec + 1 : prec;
      int rp = f.kind() == Formula::Kind::implication ? prec : prec + 1;
      print_impl(f.lhs(), out, lp);
      out << op;
      print_impl(f.rhs(), out, rp);
      if (need) out << ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::ostringstream out;
  print_impl(f, out, 0);
  return out.str();
}

Formula universal_closure(const Formula& f) {
  auto free = free_variables(f);
  std::vector<Term> vars(free.begin(), free.end());
  std::sort(vars.begin(), vars.end(), [](const Term& a, const Term& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.type < b.type;
  });
  Formula out = f;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    out = Formula::forall(*it, std::move(out));
  }
  return out;
}

}  // namespace veil::lang
