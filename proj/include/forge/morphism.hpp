#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forge/group.hpp"
#include "forge/subgroup.hpp"

namespace forge {

/// A homomorphism from a subgroup handle into a group, given on the handle's generators.
struct Monomorphism {
  SubgroupPtr domain;
  GroupPtr codomain;
  std::vector<Word> images;

  /// Image of a word over the domain handle's generators.
  Word apply_sub(std::span<const Letter> sub) const;
  /// Image of a domain element given as a word in the domain's ambient group.
  Word apply(std::span<const Letter> g) const;
  SubgroupPtr image_handle(std::size_t budget = 10) const;
};

/// Domain = the whole of `domain`, images listed per generator.
Monomorphism make_monomorphism(GroupPtr domain, GroupPtr codomain, std::vector<Word> images);
/// Inclusion of a factor of a composite group.
Monomorphism factor_inclusion(const GroupPtr& composite, std::size_t factor);

enum class MonoVerdict { Verified, Refuted, Unknown };
std::string to_string(MonoVerdict v);

struct MonoCheck {
  MonoVerdict verdict = MonoVerdict::Unknown;
  bool exact = false;               // whole domain examined
  std::optional<Word> witness;      // word over the domain generators
  std::string reason;
  std::size_t examined = 0;
};

/// Walks the domain ball to radius `budget` (or to saturation) checking that
/// the assignment is well defined and injective there.
MonoCheck check_monomorphism(const Monomorphism& f, std::size_t budget, std::size_t cap = 200000);

/// Distinct elements that are products of at most `radius` of the given words and their inverses.
std::vector<Word> ball_enumerate(const GroupPtr& g, const std::vector<Word>& gens, std::size_t radius,
                                 std::size_t cap = 1000000);

struct ConjugacyResult {
  bool found = false;
  Word witness;             // x with x g x^-1 in H
  std::size_t searched = 0; // conjugators examined
};
ConjugacyResult conjugacy_probe(const GroupPtr& g, std::span<const Letter> elem, const Subgroup& h,
                                std::size_t budget);

/// Tri-valued membership and coset representatives with ambient checks.
Tri subgroup_contains(const Subgroup& h, std::span<const Letter> g, const GroupPtr& ambient = nullptr);
Word coset_rep(const Subgroup& h, std::span<const Letter> g);

struct BuildOptions {
  std::size_t budget = 8;
  bool trust = false;
};

GroupPtr build_amalgam(std::string name, const Monomorphism& d1, const Monomorphism& d2, BuildOptions opts = {});
/// `phi` maps the associated subgroup C (its domain, a handle of the base) into the base.
GroupPtr build_hnn(std::string name, const Monomorphism& phi, std::string stable_letter, BuildOptions opts = {});

}  // namespace forge
