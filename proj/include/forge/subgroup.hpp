#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forge/group.hpp"

namespace forge {

/// Three-valued answer. `Unknown` only comes out of budgeted searches.
enum class Tri { No, Yes, Unknown };
std::string to_string(Tri t);

enum class Strategy {
  Trivial,
  Whole,
  FiniteEnumeration,
  CyclicInAbelian,   // any sublattice of a free abelian group
  FreeFactor,        // generated by basis letters of a free group
  FactorSubgroup,    // lies inside one factor of a free product / amalgam / HNN base
  AmalgamOfHandles,  // <K1, K2> in A *_C B with C <= K1, K2
  BudgetedSearch,
};
std::string to_string(Strategy s);

/// g = rep * h with rep the canonical coset representative of gH and `sub`
/// a word in the handle generators evaluating to h.
struct Decomposition {
  Word rep;
  Word sub;
};

/// A subgroup of an ambient group: generators plus a membership and coset
/// representative procedure. Handle generator i is referenced by letter +-(i+1)
/// in `Decomposition::sub`.
class Subgroup {
 public:
  Subgroup(GroupPtr ambient, std::vector<Word> generators);
  virtual ~Subgroup() = default;

  const GroupPtr& ambient() const { return ambient_; }
  const std::vector<Word>& generators() const { return generators_; }

  virtual Strategy strategy() const = 0;
  virtual Tri contains(std::span<const Letter> g) const = 0;
  /// nullopt when the budget does not settle the answer.
  virtual std::optional<Decomposition> decompose(std::span<const Letter> g) const = 0;
  virtual Tri finite() const = 0;
  virtual std::optional<std::uint64_t> order() const { return std::nullopt; }

  bool decision_complete() const { return strategy() != Strategy::BudgetedSearch; }
  /// Canonical representative of the coset gH. Throws BudgetExceeded.
  Word coset_rep(std::span<const Letter> g) const;
  /// Evaluates a word over the handle generators in the ambient group.
  Word evaluate(std::span<const Letter> sub) const;
  /// Distinct elements reachable as products of at most `max_length`
  /// generators (BFS order, deterministic). Stops early at `cap` elements.
  std::vector<Word> enumerate(std::size_t max_length, std::size_t cap) const;
  /// Tri-valued check that every generator of `other` lies here.
  Tri contains_subgroup(const Subgroup& other) const;
  std::string describe() const;

 protected:
  GroupPtr ambient_;
  std::vector<Word> generators_;
};

SubgroupPtr trivial_subgroup(GroupPtr g);
SubgroupPtr whole_group(GroupPtr g);
SubgroupPtr finite_subgroup(GroupPtr g, std::vector<Word> generators);
SubgroupPtr lattice_subgroup(GroupPtr g, std::vector<Word> generators);
SubgroupPtr free_factor_subgroup(GroupPtr g, std::vector<Word> generators);
/// Subgroup of a composite group lying inside factor `f`; `inner` is a handle of that factor.
SubgroupPtr factor_subgroup(GroupPtr g, std::size_t f, SubgroupPtr inner);
/// <K1, K2> inside an amalgam; `k1` is a handle of factor 0, `k2` of factor 1,
/// and both must contain the image of the edge group.
SubgroupPtr amalgam_join(GroupPtr amalgam, SubgroupPtr k1, SubgroupPtr k2);
SubgroupPtr budgeted_subgroup(GroupPtr g, std::vector<Word> generators, std::size_t budget,
                              std::size_t cap = 200000);

/// Factor index and inner handle of a FactorSubgroup handle.
std::optional<std::pair<std::size_t, SubgroupPtr>> as_factor_subgroup(const SubgroupPtr& h);
/// Side handles of an AmalgamOfHandles handle.
std::optional<std::pair<SubgroupPtr, SubgroupPtr>> as_amalgam_join(const SubgroupPtr& h);

/// Picks the most precise strategy for the given generators. Generator order
/// is preserved (identity generators included).
SubgroupPtr make_subgroup(GroupPtr g, std::vector<Word> generators, std::size_t budget = 10);

}  // namespace forge
