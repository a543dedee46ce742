#pragma once

// Finite quasi-set kernel.
//
// A QSet describes a collection whose "pure part" consists of m-atoms that
// admit no identity, only indistinguishability: the only data kept per
// species is a multiplicity. The classical part holds ordinary elements
// (tagged M-atoms and nested m-atom-free collections) under extensional
// equality. All QSet values are canonical and immutable, so the
// indistinguishability relation coincides with structural equality.
//
// LabeledConcretization is the hidden-label representation used to realize
// quasi-sets for finite checks: atoms get internal labels so that subsets
// can be manipulated concretely, and every observable is quotiented back to
// label-free QSets. Labels exist only at this representation level.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "veil/error.hpp"

namespace veil::qset {

/// Opaque species tag. Two m-atoms of the same species are indistinguishable.
struct Species {
  std::string id;

  auto operator<=>(const Species&) const = default;
};

class QSet;

/// A member of a classical part: an M-atom tag or a nested m-atom-free QSet.
class ClassicalElem {
 public:
  static ClassicalElem m_atom(std::string tag);
  /// Nested collections must have an m-atom-free transitive closure.
  static ClassicalElem z_set(QSet z);

  bool is_m_atom() const { return z_ == nullptr; }
  const std::string& tag() const;
  const QSet& z() const;

  bool operator==(const ClassicalElem& other) const;
  std::strong_ordering operator<=>(const ClassicalElem& other) const;

 private:
  ClassicalElem() = default;
  std::string tag_;
  std::shared_ptr<const QSet> z_;
};

class QSet {
 public:
  /// The empty quasi-set.
  QSet() = default;

  /// Canonicalizes: zero multiplicities dropped, classical part sorted and
  /// deduplicated under extensional equality.
  static QSet make(std::map<Species, std::uint32_t> pure,
                   std::vector<ClassicalElem> classical = {});

  /// Pure quasi-set shorthand.
  static QSet pure(std::map<Species, std::uint32_t> multiplicities);

  const std::map<Species, std::uint32_t>& pure_part() const { return pure_; }
  const std::vector<ClassicalElem>& classical_part() const { return classical_; }

  std::uint64_t quasi_cardinal() const;

  bool empty() const { return pure_.empty() && classical_.empty(); }
  bool is_pure() const { return classical_.empty(); }
  /// True iff the transitive closure contains no m-atoms.
  bool is_z() const { return pure_.empty(); }

  std::uint32_t multiplicity(const Species& s) const;

  bool operator==(const QSet&) const = default;
  std::strong_ordering operator<=>(const QSet&) const;

 private:
  std::map<Species, std::uint32_t> pure_;
  std::vector<ClassicalElem> classical_;  // sorted, no extensional duplicates
};

/// The indistinguishability relation on quasi-sets: same multiplicity per
/// species and classical parts matching pairwise under extensional equality.
bool indist(const QSet& a, const QSet& b);

enum class CombineMode { union_, intersection, difference };

/// Pure parts combine per species by max / min / truncated subtraction;
/// classical parts by the corresponding classical set operation.
QSet combine(CombineMode mode, const QSet& a, const QSet& b);

/// Subqset shapes of a source quasi-set, each with the number of labeled
/// realizations it has. Multiplicities sum to 2^qc(source).
class PowerProfile {
 public:
  using Map = std::map<QSet, std::uint64_t>;

  explicit PowerProfile(Map entries) : entries_(std::move(entries)) {}

  const Map& entries() const { return entries_; }
  std::uint64_t total() const;
  std::uint64_t multiplicity(const QSet& shape) const;

 private:
  Map entries_;
};

constexpr std::uint32_t kDefaultPowerBound = 20;

/// Enumerates every subqset shape of q with its realization count.
/// Throws budget_error when qc(q) exceeds the bound.
PowerProfile power_profile(const QSet& q, std::uint32_t bound = kDefaultPowerBound);

/// The quasi-cardinal-1 subqset drawn from the atoms of species s in q.
/// Throws domain_error when q has no atom of that species.
QSet strong_singleton(const QSet& q, const Species& s);

/// Pure quasi-set realized with internal atom labels plus a list of realized
/// labeled subsets. Quotienting by species-preserving relabelings recovers
/// label-free QSets.
class LabeledConcretization {
 public:
  /// Realizes the pure part of q. Throws domain_error if q has classical
  /// members (only pure quasi-sets are concretized).
  static LabeledConcretization realize(const QSet& q);

  std::size_t atom_count() const { return species_.size(); }
  const Species& species_of(std::size_t label) const;
  const std::vector<Species>& atoms() const { return species_; }

  /// Registers a realized subset (labels deduplicated and kept sorted).
  /// Returns its index.
  std::size_t add_subset(std::vector<std::size_t> labels);
  const std::vector<std::vector<std::size_t>>& subsets() const { return subsets_; }

  QSet quotient_pool() const;
  QSet quotient(std::size_t subset_index) const;
  std::vector<QSet> quotient_all() const;

 private:
  std::vector<Species> species_;  // label -> species
  std::vector<std::vector<std::size_t>> subsets_;
};

/// Swaps labels i and j throughout the realized subsets and reports whether
/// the quotients before and after are indistinguishable (they always are;
/// the flag is computed, not assumed). Throws domain_error when the two
/// atoms belong to different species.
std::pair<LabeledConcretization, bool> permute_exchange(
    const LabeledConcretization& c, std::size_t i, std::size_t j);

/// Canonical text form, e.g. qset{ pure: {s: 3}, classical: ["a"] }.
std::string to_text(const QSet& q);

/// Parses the canonical text form (whitespace-insensitive). Round-trips
/// losslessly with to_text.
QSet parse_qset(std::string_view text);

}  // namespace veil::qset
