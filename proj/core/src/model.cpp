#include "veil/model.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <random>

namespace veil::model {

using lang::Formula;
using lang::Term;
using lang::TypeExpr;

std::string to_string(FrameKind k) {
  switch (k) {
    case FrameKind::standard: return "standard";
    case FrameKind::symmetric: return "symmetric";
    case FrameKind::custom: return "custom";
  }
  return "";
}

FrameKind frame_kind_from_string(const std::string& s) {
  if (s == "standard") return FrameKind::standard;
  if (s == "symmetric") return FrameKind::symmetric;
  if (s == "custom") return FrameKind::custom;
  throw domain_error("unknown frame kind '" + s + "'");
}

// ---------------------------------------------------------------------------
// Frame

namespace {

constexpr std::uint64_t kMaxRows = 62;  // relation masks live in a uint64_t

void collect_tuple_types(const TypeExpr& t, std::set<TypeExpr>& out) {
  if (!t.is_tuple()) return;
  out.insert(t);
}

}  // namespace

Frame Frame::build(const FrameSpec& spec) {
  if (spec.mtags.empty()) {
    throw domain_error("build_frame: M must be non-empty");
  }
  {
    std::set<std::string> seen;
    for (const auto& tag : spec.mtags) {
      if (!seen.insert(tag).second) {
        throw domain_error("build_frame: duplicate M tag '" + tag + "'");
      }
    }
    seen.clear();
    for (const auto& [id, count] : spec.species) {
      (void)count;
      if (!seen.insert(id).second) {
        throw domain_error("build_frame: duplicate species '" + id + "'");
      }
    }
  }

  Frame f;
  f.spec_ = spec;
  for (const auto& [id, count] : spec.species) {
    for (std::uint32_t i = 0; i < count; ++i) f.atom_species_.push_back(id);
  }

  // species-preserving relabelings: the product of per-block permutations
  {
    std::vector<std::vector<std::vector<std::size_t>>> block_perms;
    std::size_t offset = 0;
    std::uint64_t group_size = 1;
    for (const auto& [id, count] : spec.species) {
      (void)id;
      std::vector<std::size_t> base(count);
      std::iota(base.begin(), base.end(), offset);
      std::vector<std::vector<std::size_t>> perms;
      std::vector<std::size_t> p = base;
      do {
        perms.push_back(p);
      } while (std::next_permutation(p.begin(), p.end()));
      group_size *= perms.size();
      if (group_size > 100000) {
        throw budget_error("build_frame: relabeling group too large");
      }
      block_perms.push_back(std::move(perms));
      offset += count;
    }
    std::vector<std::size_t> identity(f.atom_species_.size());
    std::iota(identity.begin(), identity.end(), 0);
    f.group_.push_back(identity);
    for (std::size_t b = 0; b < block_perms.size(); ++b) {
      std::vector<std::vector<std::size_t>> next;
      std::size_t block_offset = 0;
      for (std::size_t k = 0; k < b; ++k) block_offset += spec.species[k].second;
      for (const auto& g : f.group_) {
        for (const auto& bp : block_perms[b]) {
          std::vector<std::size_t> combined = g;
          for (std::size_t k = 0; k < bp.size(); ++k) {
            combined[block_offset + k] = bp[k];
          }
          next.push_back(std::move(combined));
        }
      }
      f.group_ = std::move(next);
    }
    std::sort(f.group_.begin(), f.group_.end());
    f.group_.erase(std::unique(f.group_.begin(), f.group_.end()), f.group_.end());
  }

  // materialize domains
  std::set<TypeExpr> wanted;
  for (const auto& t : spec.types) collect_tuple_types(t, wanted);
  for (const auto& [t, rels] : spec.custom_domains) {
    (void)rels;
    collect_tuple_types(t, wanted);
  }

  long double domain_product = 1.0L;
  for (const auto& t : wanted) {
    if (t.depth() > spec.max_depth) {
      throw domain_error("build_frame: type " + t.to_string() +
                         " exceeds the depth bound of " +
                         std::to_string(spec.max_depth));
    }
    const std::uint64_t r = f.rows(t);
    std::vector<std::uint64_t> rels;

    switch (spec.kind) {
      case FrameKind::standard: {
        if (r >= kMaxRows || (std::uint64_t{1} << r) > spec.budget) {
          throw budget_error("build_frame: standard domain at " + t.to_string() +
                             " needs 2^" + std::to_string(r) + " relations");
        }
        const std::uint64_t n = std::uint64_t{1} << r;
        rels.resize(n);
        std::iota(rels.begin(), rels.end(), 0);
        break;
      }
      case FrameKind::symmetric: {
        // row orbits under the relabeling group; the domain holds every
        // union of orbits
        std::vector<std::uint64_t> orbit_masks;
        std::vector<bool> seen(r, false);
        for (std::uint64_t row = 0; row < r; ++row) {
          if (seen[row]) continue;
          std::uint64_t mask = 0;
          for (const auto& g : f.group_) {
            std::uint64_t image = f.row_index_mapped(t, row, g);
            mask |= std::uint64_t{1} << image;
            seen[image] = true;
          }
          orbit_masks.push_back(mask);
        }
        if (orbit_masks.size() >= kMaxRows ||
            (std::uint64_t{1} << orbit_masks.size()) > spec.budget) {
          throw budget_error("build_frame: symmetric domain at " + t.to_string() +
                             " needs 2^" + std::to_string(orbit_masks.size()) +
                             " relations");
        }
        const std::uint64_t n = std::uint64_t{1} << orbit_masks.size();
        for (std::uint64_t pick = 0; pick < n; ++pick) {
          std::uint64_t mask = 0;
          for (std::size_t k = 0; k < orbit_masks.size(); ++k) {
            if (pick & (std::uint64_t{1} << k)) mask |= orbit_masks[k];
          }
          rels.push_back(mask);
        }
        std::sort(rels.begin(), rels.end());
        rels.erase(std::unique(rels.begin(), rels.end()), rels.end());
        break;
      }
      case FrameKind::custom: {
        auto it = spec.custom_domains.find(t);
        if (it != spec.custom_domains.end()) rels = it->second;
        const std::uint64_t limit =
            r >= kMaxRows ? ~std::uint64_t{0} : (std::uint64_t{1} << r);
        for (auto m : rels) {
          if (r < kMaxRows && m >= limit) {
            throw domain_error("build_frame: relation outside the row space of " +
                               t.to_string());
          }
        }
        std::sort(rels.begin(), rels.end());
        rels.erase(std::unique(rels.begin(), rels.end()), rels.end());
        break;
      }
    }

    domain_product *= static_cast<long double>(std::max<std::size_t>(rels.size(), 1));
    if (domain_product > static_cast<long double>(spec.budget)) {
      throw budget_error("build_frame: product of domain sizes exceeds the budget");
    }
    f.domains_.emplace(t, std::move(rels));
  }

  return f;
}

const std::string& Frame::species_of(std::size_t label) const {
  if (label >= atom_species_.size()) {
    throw domain_error("species_of: atom label out of range");
  }
  return atom_species_[label];
}

std::size_t Frame::atom_label(const std::string& species, std::uint32_t index) const {
  std::size_t offset = 0;
  for (const auto& [id, count] : spec_.species) {
    if (id == species) {
      if (index >= count) {
        throw domain_error("atom " + species + "." + std::to_string(index) +
                           " out of range");
      }
      return offset + index;
    }
    offset += count;
  }
  throw domain_error("unknown species '" + species + "'");
}

qset::QSet Frame::pool_qset() const {
  std::map<qset::Species, std::uint32_t> pure;
  for (const auto& [id, count] : spec_.species) {
    if (count > 0) pure.emplace(qset::Species{id}, count);
  }
  return qset::QSet::pure(std::move(pure));
}

std::uint64_t Frame::rows(const TypeExpr& tuple_type) const {
  if (!tuple_type.is_tuple()) {
    throw domain_error("rows: " + tuple_type.to_string() + " is not a tuple type");
  }
  std::uint64_t r = 1;
  for (const auto& c : tuple_type.components()) {
    const std::uint64_t s = full_space_size(c);
    if (r == 0 || s == 0) {
      r = 0;
      continue;
    }
    if (s > (std::uint64_t{1} << kMaxRows) / r) {
      throw budget_error("rows: tuple space of " + tuple_type.to_string() +
                         " is too large");
    }
    r *= s;
  }
  return r;
}

std::uint64_t Frame::full_space_size(const TypeExpr& t) const {
  switch (t.kind()) {
    case TypeExpr::Kind::base1: return atom_species_.size();
    case TypeExpr::Kind::base2: return spec_.mtags.size();
    case TypeExpr::Kind::tuple: {
      const std::uint64_t r = rows(t);
      if (r >= kMaxRows) {
        throw budget_error("full space of " + t.to_string() + " needs 2^" +
                           std::to_string(r) + " elements");
      }
      return std::uint64_t{1} << r;
    }
  }
  return 0;
}

std::vector<Value> Frame::full_space(const TypeExpr& t) const {
  const std::uint64_t n = full_space_size(t);
  if (n > spec_.budget) {
    throw budget_error("full space of " + t.to_string() + " exceeds the budget");
  }
  std::vector<Value> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(Value{t, i});
  return out;
}

bool Frame::has_domain(const TypeExpr& tuple_type) const {
  return domains_.count(tuple_type) > 0;
}

const std::vector<std::uint64_t>& Frame::tuple_domain(const TypeExpr& t) const {
  auto it = domains_.find(t);
  if (it == domains_.end()) {
    throw domain_error("frame has no domain for type " + t.to_string());
  }
  return it->second;
}

std::vector<Value> Frame::domain(const TypeExpr& t) const {
  std::vector<Value> out;
  switch (t.kind()) {
    case TypeExpr::Kind::base1:
      for (std::size_t i = 0; i < atom_species_.size(); ++i) out.push_back(Value{t, i});
      return out;
    case TypeExpr::Kind::base2:
      for (std::size_t i = 0; i < spec_.mtags.size(); ++i) out.push_back(Value{t, i});
      return out;
    case TypeExpr::Kind::tuple:
      for (auto m : tuple_domain(t)) out.push_back(Value{t, m});
      return out;
  }
  return out;
}

std::uint64_t Frame::row_index(const TypeExpr& tuple_type,
                               const std::vector<Value>& elems) const {
  const auto& comps = tuple_type.components();
  if (elems.size() != comps.size()) {
    throw domain_error("row_index: arity mismatch at " + tuple_type.to_string());
  }
  std::uint64_t row = 0;
  std::uint64_t stride = 1;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (!(elems[i].type == comps[i])) {
      throw domain_error("row_index: component type mismatch at " +
                         tuple_type.to_string());
    }
    row += elems[i].bits * stride;
    stride *= full_space_size(comps[i]);
  }
  return row;
}

std::vector<Value> Frame::row_elements(const TypeExpr& tuple_type,
                                       std::uint64_t row) const {
  const auto& comps = tuple_type.components();
  std::vector<Value> out;
  out.reserve(comps.size());
  for (const auto& c : comps) {
    const std::uint64_t s = full_space_size(c);
    out.push_back(Value{c, row % s});
    row /= s;
  }
  return out;
}

std::uint64_t Frame::row_index_mapped(const TypeExpr& tuple_type, std::uint64_t row,
                                      const std::vector<std::size_t>& perm) const {
  auto elems = row_elements(tuple_type, row);
  for (auto& e : elems) e = apply(perm, e);
  return row_index(tuple_type, elems);
}

Value Frame::apply(const std::vector<std::size_t>& perm, const Value& v) const {
  switch (v.type.kind()) {
    case TypeExpr::Kind::base1:
      return Value{v.type, perm[v.bits]};
    case TypeExpr::Kind::base2:
      return v;
    case TypeExpr::Kind::tuple: {
      std::uint64_t out = 0;
      for (std::uint64_t rest = v.bits; rest; rest &= rest - 1) {
        const std::uint64_t row = static_cast<std::uint64_t>(std::countr_zero(rest));
        out |= std::uint64_t{1} << row_index_mapped(v.type, row, perm);
      }
      return Value{v.type, out};
    }
  }
  return v;
}

std::vector<Value> Frame::orbit(const Value& v) const {
  std::set<Value> seen;
  for (const auto& g : group_) seen.insert(apply(g, v));
  return std::vector<Value>(seen.begin(), seen.end());
}

bool Frame::orbit_equivalent(const Value& a, const Value& b) const {
  if (!(a.type == b.type)) return false;
  if (a.bits == b.bits) return true;
  for (const auto& g : group_) {
    if (apply(g, a) == b) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Interpretation

Interpretation::Interpretation(Frame frame, std::map<std::string, Value> denotation)
    : frame_(std::move(frame)), denotation_(std::move(denotation)) {
  for (const auto& [name, value] : denotation_) {
    switch (value.type.kind()) {
      case TypeExpr::Kind::base1:
        if (value.bits >= frame_.atom_count()) {
          throw domain_error("denotation of '" + name + "' is not in the atom pool");
        }
        break;
      case TypeExpr::Kind::base2:
        if (value.bits >= frame_.mtags().size()) {
          throw domain_error("denotation of '" + name + "' is not in M");
        }
        break;
      case TypeExpr::Kind::tuple: {
        const auto& dom = frame_.tuple_domain(value.type);
        if (!std::binary_search(dom.begin(), dom.end(), value.bits)) {
          throw domain_error("denotation of '" + name +
                             "' is not in the frame's domain at " +
                             value.type.to_string());
        }
        break;
      }
    }
  }
}

const Value& Interpretation::denote(const Term& constant) const {
  auto it = denotation_.find(constant.name);
  if (it == denotation_.end()) {
    throw domain_error("constant '" + constant.name + "' has no denotation");
  }
  if (!(it->second.type == constant.type)) {
    throw domain_error("constant '" + constant.name + "' is denoted at type " +
                       it->second.type.to_string() + ", used at " +
                       constant.type.to_string());
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// satisfaction

namespace {

Value term_value(const Interpretation& i, const Valuation& v, const Term& t) {
  if (t.is_variable()) {
    auto it = v.variables.find(t.name);
    if (it == v.variables.end()) {
      throw domain_error("variable '" + t.name + "' has no assigned value");
    }
    if (!(it->second.type == t.type)) {
      throw domain_error("variable '" + t.name + "' is assigned at type " +
                         it->second.type.to_string() + ", used at " +
                         t.type.to_string());
    }
    return it->second;
  }
  auto it = v.constant_images.find(t.name);
  if (it != v.constant_images.end()) {
    if (!(it->second.type == t.type)) {
      throw domain_error("constant '" + t.name + "' is imaged at type " +
                         it->second.type.to_string() + ", used at " +
                         t.type.to_string());
    }
    return it->second;
  }
  return i.denote(t);
}

}  // namespace

bool satisfies(const Interpretation& i, const Valuation& v, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::atom: {
      const Value head = term_value(i, v, f.head());
      std::vector<Value> elems;
      elems.reserve(f.args().size());
      for (const auto& a : f.args()) elems.push_back(term_value(i, v, a));
      const std::uint64_t row = i.frame().row_index(f.head().type, elems);
      return (head.bits >> row) & 1u;
    }
    case Formula::Kind::negation:
      return !satisfies(i, v, f.child());
    case Formula::Kind::implication:
      return !satisfies(i, v, f.lhs()) || satisfies(i, v, f.rhs());
    case Formula::Kind::conjunction:
      return satisfies(i, v, f.lhs()) && satisfies(i, v, f.rhs());
    case Formula::Kind::disjunction:
      return satisfies(i, v, f.lhs()) || satisfies(i, v, f.rhs());
    case Formula::Kind::iff:
      return satisfies(i, v, f.lhs()) == satisfies(i, v, f.rhs());
    case Formula::Kind::forall: {
      for (const auto& x : i.frame().domain(f.var().type)) {
        if (!satisfies(i, v.with(f.var().name, x), f.body())) return false;
      }
      return true;
    }
    case Formula::Kind::exists: {
      for (const auto& x : i.frame().domain(f.var().type)) {
        if (satisfies(i, v.with(f.var().name, x), f.body())) return true;
      }
      return false;
    }
    case Formula::Kind::equality: {
      // convenience reading: the pseudo-diagonal (orbit equivalence)
      const Value a = term_value(i, v, f.eq_lhs());
      const Value b = term_value(i, v, f.eq_rhs());
      return i.frame().orbit_equivalent(a, b);
    }
  }
  return false;
}

bool is_true(const Interpretation& i, const Formula& f) {
  // orbit variants of each constant image
  std::vector<std::pair<std::string, std::vector<Value>>> const_choices;
  for (const auto& c : lang::constants(f)) {
    const_choices.emplace_back(c.name, i.frame().orbit(i.denote(c)));
  }
  // assignments of each free variable
  std::vector<std::pair<std::string, std::vector<Value>>> var_choices;
  for (const auto& x : lang::free_variables(f)) {
    var_choices.emplace_back(x.name, i.frame().domain(x.type));
  }

  std::vector<std::pair<std::string, std::vector<Value>>> axes = const_choices;
  axes.insert(axes.end(), var_choices.begin(), var_choices.end());

  for (const auto& [name, options] : axes) {
    (void)name;
    if (options.empty()) return true;  // no valuations exist
  }

  std::vector<std::size_t> idx(axes.size(), 0);
  for (;;) {
    Valuation v;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const auto& [name, options] = axes[k];
      if (k < const_choices.size()) {
        v.constant_images.insert_or_assign(name, options[idx[k]]);
      } else {
        v.variables.insert_or_assign(name, options[idx[k]]);
      }
    }
    if (!satisfies(i, v, f)) return false;

    std::size_t k = 0;
    while (k < axes.size() && idx[k] + 1 == axes[k].second.size()) {
      idx[k] = 0;
      ++k;
    }
    if (k == axes.size()) break;
    ++idx[k];
  }
  return true;
}

// ---------------------------------------------------------------------------
// identity semantics

PseudoDiagonal pseudo_diagonal(const Frame& f, const TypeExpr& t) {
  if (t.kind() == TypeExpr::Kind::base1) {
    throw domain_error("pseudo_diagonal: identity is undefined at type e1");
  }
  std::set<std::pair<Value, Value>> pairs;
  const auto space = f.full_space(t);
  for (const auto& a : space) {
    for (const auto& b : space) {
      if (f.orbit_equivalent(a, b)) pairs.insert({a, b});
    }
  }
  return PseudoDiagonal(t, std::move(pairs));
}

bool identity_holds(const Frame& f, const TypeExpr& tau, const Value& a,
                    const Value& b) {
  if (tau.kind() == TypeExpr::Kind::base1) {
    throw domain_error("identity is undefined at type e1");
  }
  if (!(a.type == tau) || !(b.type == tau)) {
    throw domain_error("identity_holds: operand type mismatch");
  }
  const TypeExpr pred = TypeExpr::tuple({tau});
  for (const auto mask : f.tuple_domain(pred)) {
    const bool in_a = (mask >> a.bits) & 1u;
    const bool in_b = (mask >> b.bits) & 1u;
    if (in_a != in_b) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// bounded search

namespace {

struct EnumSpace {
  std::vector<std::pair<std::string, std::vector<Value>>> consts;
  std::vector<std::pair<std::string, std::vector<Value>>> vars;

  std::uint64_t denotations() const {
    std::uint64_t n = 1;
    for (const auto& [name, opts] : consts) {
      (void)name;
      n *= opts.size();
    }
    return n;
  }
  std::uint64_t valuations() const {
    std::uint64_t n = 1;
    for (const auto& [name, opts] : vars) {
      (void)name;
      n *= opts.size();
    }
    return n;
  }
  bool empty() const {
    for (const auto& [name, opts] : consts) {
      (void)name;
      if (opts.empty()) return true;
    }
    for (const auto& [name, opts] : vars) {
      (void)name;
      if (opts.empty()) return true;
    }
    return false;
  }
};

std::vector<std::string> default_mtags(int count) {
  std::vector<std::string> tags;
  for (int i = 0; i < count; ++i) tags.push_back(std::string(1, char('a' + i)));
  return tags;
}

// Enumerates (frame, denotation, valuation) points in canonical order:
// frames by (n_m, |M|), then denotations, then valuations, each as an
// odometer over name-sorted axes. on_point returns false to stop.
template <typename OnPoint>
void bounded_search(const Formula& f, const Bounds& bounds, ValidityResult& counts,
                    bool& complete, OnPoint&& on_point) {
  const Formula d = lang::desugar(f);
  const auto types = lang::term_tuple_types(d);
  for (const auto& t : types) {
    if (t.depth() > bounds.max_depth) {
      throw domain_error("formula needs type " + t.to_string() +
                         " beyond the depth bound of " +
                         std::to_string(bounds.max_depth));
    }
  }
  if (bounds.kind == FrameKind::custom) {
    throw domain_error("bounded search enumerates standard or symmetric frames");
  }

  const auto consts = lang::constants(d);
  const auto frees = lang::free_variables(d);

  std::uint64_t remaining = bounds.budget;

  for (int nm = 0; nm <= bounds.max_nm; ++nm) {
    for (int m = 1; m <= bounds.max_M; ++m) {
      FrameSpec fs;
      fs.species = {{"s", static_cast<std::uint32_t>(nm)}};
      fs.mtags = default_mtags(m);
      fs.kind = bounds.kind;
      fs.types.assign(types.begin(), types.end());
      fs.max_depth = bounds.max_depth;
      fs.budget = bounds.budget;

      std::optional<Frame> frame;
      try {
        frame = Frame::build(fs);
      } catch (const budget_error&) {
        complete = false;
        continue;
      }
      ++counts.frames;

      EnumSpace space;
      for (const auto& c : consts) {
        space.consts.emplace_back(c.name, frame->domain(c.type));
      }
      for (const auto& x : frees) {
        space.vars.emplace_back(x.name, frame->domain(x.type));
      }
      if (space.empty()) continue;  // no interpretations at this frame

      const std::uint64_t points = space.denotations() * space.valuations();
      if (points > remaining) {
        complete = false;
        continue;
      }
      remaining -= points;

      std::vector<std::size_t> ci(space.consts.size(), 0);
      for (;;) {
        std::map<std::string, Value> denot;
        for (std::size_t k = 0; k < space.consts.size(); ++k) {
          denot.insert_or_assign(space.consts[k].first, space.consts[k].second[ci[k]]);
        }
        ++counts.interpretations;
        Interpretation interp(*frame, denot);

        std::vector<std::size_t> vi(space.vars.size(), 0);
        for (;;) {
          std::map<std::string, Value> valu;
          for (std::size_t k = 0; k < space.vars.size(); ++k) {
            valu.insert_or_assign(space.vars[k].first, space.vars[k].second[vi[k]]);
          }
          ++counts.valuations;
          if (!on_point(fs, interp, denot, valu, d)) return;

          std::size_t k = 0;
          while (k < space.vars.size() && vi[k] + 1 == space.vars[k].second.size()) {
            vi[k] = 0;
            ++k;
          }
          if (k == space.vars.size()) break;
          ++vi[k];
        }

        std::size_t k = 0;
        while (k < space.consts.size() && ci[k] + 1 == space.consts[k].second.size()) {
          ci[k] = 0;
          ++k;
        }
        if (k == space.consts.size()) break;
        ++ci[k];
      }
    }
  }
}

}  // namespace

ValidityResult bounded_validity(const Formula& f, const Bounds& bounds) {
  ValidityResult res;
  bool complete = true;
  bounded_search(f, bounds, res, complete,
                 [&](const FrameSpec& fs, const Interpretation& interp,
                     const std::map<std::string, Value>& denot,
                     const std::map<std::string, Value>& valu, const Formula& d) {
                   Valuation v;
                   v.variables = valu;
                   if (!satisfies(interp, v, d)) {
                     res.valid = false;
                     res.counterexample = InterpretationPoint{fs, denot, valu};
                     return false;
                   }
                   return true;
                 });
  res.complete = complete;
  return res;
}

SatResult bounded_satisfiability(const Formula& f, const Bounds& bounds) {
  SatResult res;
  ValidityResult counts;
  bool complete = true;
  bounded_search(f, bounds, counts, complete,
                 [&](const FrameSpec& fs, const Interpretation& interp,
                     const std::map<std::string, Value>& denot,
                     const std::map<std::string, Value>& valu, const Formula& d) {
                   Valuation v;
                   v.variables = valu;
                   if (satisfies(interp, v, d)) {
                     res.satisfiable = true;
                     res.witness = InterpretationPoint{fs, denot, valu};
                     return false;
                   }
                   return true;
                 });
  res.complete = complete;
  res.frames = counts.frames;
  res.interpretations = counts.interpretations;
  res.valuations = counts.valuations;
  return res;
}

// ---------------------------------------------------------------------------
// permutation invariance

PermutationReport permutation_invariance_check(const Interpretation& i,
                                               const Formula& f, int trials,
                                               std::uint64_t seed) {
  if (!lang::free_variables(f).empty()) {
    throw domain_error("permutation invariance requires a closed formula");
  }
  const bool base = is_true(i, f);
  const auto& group = i.frame().group();
  std::mt19937_64 rng(seed);

  PermutationReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const auto& perm = group[rng() % group.size()];

    FrameSpec fs = i.frame().spec();
    for (auto& [type, rels] : fs.custom_domains) {
      for (auto& mask : rels) {
        mask = i.frame().apply(perm, Value{type, mask}).bits;
      }
      std::sort(rels.begin(), rels.end());
    }
    Frame moved = Frame::build(fs);

    std::map<std::string, Value> denot;
    for (const auto& [name, value] : i.denotation()) {
      denot.emplace(name, i.frame().apply(perm, value));
    }
    Interpretation moved_interp(std::move(moved), std::move(denot));
    if (is_true(moved_interp, f) != base) ++report.failures;
  }
  return report;
}

// ---------------------------------------------------------------------------
// veiled extensions

qset::QSet veiled_extension(const Interpretation& i, const Term& constant) {
  const TypeExpr& t = constant.type;
  if (!t.is_tuple()) {
    throw domain_error("not an opaque predicate: '" + constant.name +
                       "' has non-relation type " + t.to_string());
  }
  if (!lang::is_opaque(t)) {
    auto comp = lang::first_e2_component(t);
    throw domain_error("not opaque: component " +
                       std::to_string(comp.value_or(0)) + " has leaf e2");
  }
  const TypeExpr unary = TypeExpr::tuple({TypeExpr::e1()});
  if (!(t == unary)) {
    throw domain_error("veiled extension requires an opaque predicate of type <e1>");
  }
  const Value v = i.denote(constant);
  std::map<qset::Species, std::uint32_t> pure;
  for (std::uint64_t rest = v.bits; rest; rest &= rest - 1) {
    const auto label = static_cast<std::size_t>(std::countr_zero(rest));
    ++pure[qset::Species{i.frame().species_of(label)}];
  }
  return qset::QSet::pure(std::move(pure));
}

// ---------------------------------------------------------------------------
// normality

NormalityReport check_normality(const Interpretation& i,
                                const std::vector<Formula>& defining_formulas,
                                const std::vector<Formula>& schema_instances) {
  if (i.frame().kind() != FrameKind::custom) {
    return {true, ""};  // standard and symmetric frames: by construction
  }
  for (const auto& inst : schema_instances) {
    if (!is_true(i, lang::desugar(inst))) {
      return {false, "axiom instance fails: " + lang::to_string(inst)};
    }
  }
  for (const auto& u : defining_formulas) {
    const auto frees = lang::free_variables(u);
    if (frees.empty()) continue;
    std::vector<Term> vars(frees.begin(), frees.end());
    std::vector<TypeExpr> comps;
    for (const auto& v : vars) comps.push_back(v.type);
    const TypeExpr pt = TypeExpr::tuple(comps);
    if (!i.frame().has_domain(pt)) {
      return {false, "no domain at type " + pt.to_string() +
                         " for defining formula " + lang::to_string(u)};
    }
    std::set<std::string> taken = lang::all_names(u);
    Term pred = Term::variable(lang::fresh_name("F", taken), pt);
    std::vector<Term> args = vars;
    Formula body = Formula::iff(Formula::atom(pred, args), u);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      body = Formula::forall(*it, std::move(body));
    }
    Formula instance = Formula::exists(pred, std::move(body));
    if (!is_true(i, lang::desugar(instance))) {
      return {false, "comprehension fails for " + lang::to_string(u)};
    }
  }
  return {true, ""};
}

}  // namespace veil::model
