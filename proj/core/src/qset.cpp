#include "veil/qset.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace veil::qset {

// ---------------------------------------------------------------------------
// ClassicalElem

ClassicalElem ClassicalElem::m_atom(std::string tag) {
  ClassicalElem e;
  e.tag_ = std::move(tag);
  return e;
}

ClassicalElem ClassicalElem::z_set(QSet z) {
  if (!z.is_z()) {
    throw domain_error("classical members must satisfy Z or M: nested quasi-set contains m-atoms");
  }
  ClassicalElem e;
  e.z_ = std::make_shared<const QSet>(std::move(z));
  return e;
}

const std::string& ClassicalElem::tag() const {
  if (!is_m_atom()) throw domain_error("classical element is not an M-atom");
  return tag_;
}

const QSet& ClassicalElem::z() const {
  if (is_m_atom()) throw domain_error("classical element is not a nested quasi-set");
  return *z_;
}

bool ClassicalElem::operator==(const ClassicalElem& other) const {
  return (*this <=> other) == std::strong_ordering::equal;
}

std::strong_ordering ClassicalElem::operator<=>(const ClassicalElem& other) const {
  // M-atoms order before nested quasi-sets.
  if (is_m_atom() != other.is_m_atom()) {
    return is_m_atom() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (is_m_atom()) return tag_ <=> other.tag_;
  return *z_ <=> *other.z_;
}

// ---------------------------------------------------------------------------
// QSet

QSet QSet::make(std::map<Species, std::uint32_t> pure,
                std::vector<ClassicalElem> classical) {
  QSet q;
  for (auto& [s, m] : pure) {
    if (m > 0) q.pure_.emplace(s, m);
  }
  std::sort(classical.begin(), classical.end());
  classical.erase(std::unique(classical.begin(), classical.end()), classical.end());
  q.classical_ = std::move(classical);
  return q;
}

QSet QSet::pure(std::map<Species, std::uint32_t> multiplicities) {
  return make(std::move(multiplicities), {});
}

std::uint64_t QSet::quasi_cardinal() const {
  std::uint64_t n = classical_.size();
  for (const auto& [s, m] : pure_) n += m;
  return n;
}

std::uint32_t QSet::multiplicity(const Species& s) const {
  auto it = pure_.find(s);
  return it == pure_.end() ? 0 : it->second;
}

std::strong_ordering QSet::operator<=>(const QSet& other) const {
  if (auto c = pure_ <=> other.pure_; c != 0) return c;
  return classical_ <=> other.classical_;
}

bool indist(const QSet& a, const QSet& b) {
  // Canonical construction makes the relation coincide with structural
  // equality: equal multiplicity maps and pairwise extensionally equal
  // classical parts.
  return a == b;
}

// ---------------------------------------------------------------------------
// combine

QSet combine(CombineMode mode, const QSet& a, const QSet& b) {
  std::map<Species, std::uint32_t> pure;
  switch (mode) {
    case CombineMode::union_: {
      pure = a.pure_part();
      for (const auto& [s, m] : b.pure_part()) {
        auto& slot = pure[s];
        slot = std::max(slot, m);
      }
      break;
    }
    case CombineMode::intersection: {
      for (const auto& [s, m] : a.pure_part()) {
        auto n = b.multiplicity(s);
        if (std::min(m, n) > 0) pure.emplace(s, std::min(m, n));
      }
      break;
    }
    case CombineMode::difference: {
      for (const auto& [s, m] : a.pure_part()) {
        auto n = b.multiplicity(s);
        if (m > n) pure.emplace(s, m - n);
      }
      break;
    }
  }

  std::vector<ClassicalElem> classical;
  const auto& ca = a.classical_part();
  const auto& cb = b.classical_part();
  auto in = [](const std::vector<ClassicalElem>& v, const ClassicalElem& e) {
    return std::binary_search(v.begin(), v.end(), e);
  };
  switch (mode) {
    case CombineMode::union_:
      classical = ca;
      for (const auto& e : cb)
        if (!in(ca, e)) classical.push_back(e);
      break;
    case CombineMode::intersection:
      for (const auto& e : ca)
        if (in(cb, e)) classical.push_back(e);
      break;
    case CombineMode::difference:
      for (const auto& e : ca)
        if (!in(cb, e)) classical.push_back(e);
      break;
  }
  return QSet::make(std::move(pure), std::move(classical));
}

// ---------------------------------------------------------------------------
// power profile

namespace {

std::uint64_t binomial(std::uint32_t n, std::uint32_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint32_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

}  // namespace

std::uint64_t PowerProfile::total() const {
  std::uint64_t t = 0;
  for (const auto& [shape, mult] : entries_) t += mult;
  return t;
}

std::uint64_t PowerProfile::multiplicity(const QSet& shape) const {
  auto it = entries_.find(shape);
  return it == entries_.end() ? 0 : it->second;
}

PowerProfile power_profile(const QSet& q, std::uint32_t bound) {
  if (q.quasi_cardinal() > bound) {
    throw budget_error("power_profile: quasi-cardinal " +
                       std::to_string(q.quasi_cardinal()) + " exceeds bound " +
                       std::to_string(bound));
  }

  struct SpeciesEntry {
    Species s;
    std::uint32_t mult;
  };
  std::vector<SpeciesEntry> species;
  for (const auto& [s, m] : q.pure_part()) species.push_back({s, m});
  const auto& classical = q.classical_part();

  PowerProfile::Map entries;

  // Odometer over per-species chosen counts.
  std::vector<std::uint32_t> chosen(species.size(), 0);
  for (;;) {
    std::uint64_t coeff = 1;
    std::map<Species, std::uint32_t> pure;
    for (std::size_t i = 0; i < species.size(); ++i) {
      coeff *= binomial(species[i].mult, chosen[i]);
      if (chosen[i] > 0) pure.emplace(species[i].s, chosen[i]);
    }

    // Every classical subset is a distinct shape with the same coefficient.
    const std::size_t cn = classical.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cn); ++mask) {
      std::vector<ClassicalElem> sub;
      for (std::size_t i = 0; i < cn; ++i) {
        if (mask & (std::uint64_t{1} << i)) sub.push_back(classical[i]);
      }
      entries[QSet::make(pure, std::move(sub))] += coeff;
    }

    std::size_t i = 0;
    while (i < chosen.size() && chosen[i] == species[i].mult) {
      chosen[i] = 0;
      ++i;
    }
    if (i == chosen.size()) break;
    ++chosen[i];
  }

  return PowerProfile(std::move(entries));
}

QSet strong_singleton(const QSet& q, const Species& s) {
  if (q.multiplicity(s) == 0) {
    throw domain_error("strong_singleton: species '" + s.id + "' absent from quasi-set");
  }
  return QSet::pure({{s, 1}});
}

// ---------------------------------------------------------------------------
// LabeledConcretization

LabeledConcretization LabeledConcretization::realize(const QSet& q) {
  if (!q.is_pure()) {
    throw domain_error("realize: only pure quasi-sets are concretized");
  }
  LabeledConcretization c;
  for (const auto& [s, m] : q.pure_part()) {
    for (std::uint32_t i = 0; i < m; ++i) c.species_.push_back(s);
  }
  return c;
}

const Species& LabeledConcretization::species_of(std::size_t label) const {
  if (label >= species_.size()) throw domain_error("species_of: label out of range");
  return species_[label];
}

std::size_t LabeledConcretization::add_subset(std::vector<std::size_t> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  for (auto l : labels) {
    if (l >= species_.size()) throw domain_error("add_subset: label out of range");
  }
  subsets_.push_back(std::move(labels));
  return subsets_.size() - 1;
}

QSet LabeledConcretization::quotient_pool() const {
  std::map<Species, std::uint32_t> pure;
  for (const auto& s : species_) ++pure[s];
  return QSet::pure(std::move(pure));
}

QSet LabeledConcretization::quotient(std::size_t subset_index) const {
  if (subset_index >= subsets_.size()) {
    throw domain_error("quotient: subset index out of range");
  }
  std::map<Species, std::uint32_t> pure;
  for (auto l : subsets_[subset_index]) ++pure[species_[l]];
  return QSet::pure(std::move(pure));
}

std::vector<QSet> LabeledConcretization::quotient_all() const {
  std::vector<QSet> out;
  out.reserve(subsets_.size());
  for (std::size_t i = 0; i < subsets_.size(); ++i) out.push_back(quotient(i));
  return out;
}

std::pair<LabeledConcretization, bool> permute_exchange(
    const LabeledConcretization& c, std::size_t i, std::size_t j) {
  if (c.species_of(i) != c.species_of(j)) {
    throw domain_error("permute_exchange: atoms " + std::to_string(i) + " and " +
                       std::to_string(j) + " have different species");
  }

  LabeledConcretization swapped = c;
  if (i != j) {
    LabeledConcretization rebuilt = LabeledConcretization::realize(c.quotient_pool());
    // Same species layout, so labels carry over; only subset membership moves.
    for (const auto& subset : c.subsets()) {
      std::vector<std::size_t> labels;
      labels.reserve(subset.size());
      for (auto l : subset) {
        if (l == i) labels.push_back(j);
        else if (l == j) labels.push_back(i);
        else labels.push_back(l);
      }
      rebuilt.add_subset(std::move(labels));
    }
    swapped = std::move(rebuilt);
  }

  const auto before = c.quotient_all();
  const auto after = swapped.quotient_all();
  bool unchanged = before.size() == after.size();
  for (std::size_t k = 0; unchanged && k < before.size(); ++k) {
    unchanged = indist(before[k], after[k]);
  }
  return {std::move(swapped), unchanged};
}

// ---------------------------------------------------------------------------
// text form

namespace {

void print_qset(std::ostringstream& out, const QSet& q) {
  out << "qset{ pure: {";
  bool first = true;
  for (const auto& [s, m] : q.pure_part()) {
    out << (first ? "" : ", ") << s.id << ": " << m;
    first = false;
  }
  out << "}, classical: [";
  first = true;
  for (const auto& e : q.classical_part()) {
    out << (first ? "" : ", ");
    if (e.is_m_atom()) {
      out << '"' << e.tag() << '"';
    } else {
      print_qset(out, e.z());
    }
    first = false;
  }
  out << "] }";
}

class QSetParser {
 public:
  explicit QSetParser(std::string_view text) : text_(text) {}

  QSet parse() {
    QSet q = parse_qset();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after quasi-set");
    return q;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    throw parse_error("qset: " + msg, line, col);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool try_consume(std::string_view s) {
    skip_ws();
    if (text_.substr(pos_, s.size()) == s) {
      pos_ += s.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view s) {
    if (!try_consume(s)) fail("expected '" + std::string(s) + "'");
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint32_t number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected number");
    return static_cast<std::uint32_t>(std::stoul(std::string(text_.substr(start, pos_ - start))));
  }

  std::string quoted() {
    expect("\"");
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') out += text_[pos_++];
    if (pos_ == text_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  QSet parse_qset() {
    expect("qset");
    expect("{");
    expect("pure");
    expect(":");
    expect("{");
    std::map<Species, std::uint32_t> pure;
    skip_ws();
    if (!try_consume("}")) {
      for (;;) {
        std::string name = ident();
        expect(":");
        std::uint32_t m = number();
        if (pure.count(Species{name})) fail("duplicate species '" + name + "'");
        pure.emplace(Species{name}, m);
        if (try_consume("}")) break;
        expect(",");
      }
    }
    expect(",");
    expect("classical");
    expect(":");
    expect("[");
    std::vector<ClassicalElem> classical;
    skip_ws();
    if (!try_consume("]")) {
      for (;;) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '"') {
          classical.push_back(ClassicalElem::m_atom(quoted()));
        } else {
          classical.push_back(ClassicalElem::z_set(parse_qset()));
        }
        if (try_consume("]")) break;
        expect(",");
      }
    }
    expect("}");
    return QSet::make(std::move(pure), std::move(classical));
  }
};

}  // namespace

std::string to_text(const QSet& q) {
  std::ostringstream out;
  print_qset(out, q);
  return out.str();
}

QSet parse_qset(std::string_view text) { return QSetParser(text).parse(); }

}  // namespace veil::qset
