#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/word.hpp"

namespace forge {

class Group;
class Subgroup;
using GroupPtr = std::shared_ptr<const Group>;
using SubgroupPtr = std::shared_ptr<const Subgroup>;

enum class GroupKind { FiniteTable, Free, FreeAbelian, FreeProduct, Amalgam, HNN };
std::string to_string(GroupKind kind);

/// A finitely described group with a canonical normal form.
///
/// Two words represent the same element iff `normalize` returns identical
/// letter sequences. Groups are immutable once built and safe to share
/// between threads.
class Group : public std::enable_shared_from_this<Group> {
 public:
  Group(std::string name, GroupKind kind, std::vector<std::string> generators);
  virtual ~Group() = default;

  const std::string& name() const { return name_; }
  GroupKind kind() const { return kind_; }
  const std::vector<std::string>& generators() const { return generators_; }
  std::size_t rank() const { return generators_.size(); }

  virtual Word normalize(std::span<const Letter> w) const = 0;
  virtual bool is_finite() const { return false; }
  virtual std::optional<std::uint64_t> order() const { return std::nullopt; }

  // Composite structure. Atomic groups have no factors.
  virtual std::size_t factor_count() const { return 0; }
  virtual GroupPtr factor(std::size_t i) const;
  virtual std::size_t factor_offset(std::size_t i) const;
  /// Factor owning a letter; nullopt for atomic groups and for a stable letter.
  virtual std::optional<std::size_t> factor_of_letter(Letter l) const;
  /// Writes g = prefix * y with y in factor f (y returned as a local word of f).
  /// `prefix` depends only on the coset g * factor(f).
  virtual std::pair<Word, Word> split_last_factor(std::span<const Letter> g, std::size_t f) const;

  Word multiply(std::span<const Letter> a, std::span<const Letter> b) const;
  Word invert(std::span<const Letter> w) const;
  bool is_identity(std::span<const Letter> w) const { return normalize(w).empty(); }
  bool equal(std::span<const Letter> a, std::span<const Letter> b) const;

  std::optional<std::size_t> find_generator(std::string_view name) const;
  /// Parses "a b^-1 c^3" style words; "1" or "" is the identity.
  Word parse(std::string_view text) const;
  std::string format(std::span<const Letter> w) const;
  void check_letters(std::span<const Letter> w) const;

  GroupPtr self() const { return shared_from_this(); }

 private:
  std::string name_;
  GroupKind kind_;
  std::vector<std::string> generators_;
};

// --- atomic groups --------------------------------------------------------

class FreeGroup final : public Group {
 public:
  FreeGroup(std::string name, std::vector<std::string> generators);
  Word normalize(std::span<const Letter> w) const override;
};

class FreeAbelianGroup final : public Group {
 public:
  FreeAbelianGroup(std::string name, std::vector<std::string> generators);
  Word normalize(std::span<const Letter> w) const override;
  std::vector<std::int64_t> exponents(std::span<const Letter> w) const;
  Word from_exponents(std::span<const std::int64_t> v) const;
};

/// A finite group given by its multiplication table. Element 0 is the identity.
class FiniteGroup final : public Group {
 public:
  FiniteGroup(std::string name, std::vector<std::string> generators,
              std::vector<std::vector<std::uint32_t>> table,
              std::vector<std::uint32_t> generator_elements);

  Word normalize(std::span<const Letter> w) const override;
  bool is_finite() const override { return true; }
  std::optional<std::uint64_t> order() const override { return table_.size(); }

  std::size_t size() const { return table_.size(); }
  std::uint32_t element_of(std::span<const Letter> w) const;
  const Word& word_of(std::uint32_t e) const { return normal_words_[e]; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return table_[a][b]; }
  std::uint32_t inv(std::uint32_t a) const { return inverses_[a]; }

 private:
  std::vector<std::vector<std::uint32_t>> table_;
  std::vector<std::uint32_t> inverses_;
  std::vector<std::uint32_t> generator_elements_;
  std::vector<Word> normal_words_;
};

// --- composite groups -----------------------------------------------------

class CompositeGroup : public Group {
 public:
  CompositeGroup(std::string name, GroupKind kind, std::vector<GroupPtr> factors,
                 std::vector<std::string> extra_generators);
  std::size_t factor_count() const override { return factors_.size(); }
  GroupPtr factor(std::size_t i) const override { return factors_.at(i); }
  std::size_t factor_offset(std::size_t i) const override { return offsets_.at(i); }
  std::optional<std::size_t> factor_of_letter(Letter l) const override;

  Letter to_local(Letter l) const;
  Word to_global(std::span<const Letter> local, std::size_t f) const { return shift(local, offsets_.at(f)); }

 protected:
  std::vector<GroupPtr> factors_;
  std::vector<std::size_t> offsets_;
};

struct Syllable {
  std::size_t factor;
  Word local;
};

class FreeProductGroup final : public CompositeGroup {
 public:
  FreeProductGroup(std::string name, std::vector<GroupPtr> factors);
  Word normalize(std::span<const Letter> w) const override;
  bool is_finite() const override;
  std::optional<std::uint64_t> order() const override;
  std::vector<Syllable> syllables(std::span<const Letter> w) const;
  std::pair<Word, Word> split_last_factor(std::span<const Letter> g, std::size_t f) const override;

 private:
  Word flatten(const std::vector<Syllable>& s) const;
};

/// A *_C B. `edge_handles[0]` lives in A, `edge_handles[1]` in B; their i-th
/// generators are the images of the i-th generator of C.
class AmalgamGroup final : public CompositeGroup {
 public:
  struct Form {
    std::vector<Syllable> syllables;  // alternating; reps from fixed transversals
    Word c;                           // word over the generators of C
  };

  AmalgamGroup(std::string name, GroupPtr a, GroupPtr b, SubgroupPtr k1, SubgroupPtr k2);
  Word normalize(std::span<const Letter> w) const override;
  bool is_finite() const override;
  std::pair<Word, Word> split_last_factor(std::span<const Letter> g, std::size_t f) const override;

  Form structured(std::span<const Letter> w) const;
  Word flatten(const Form& form) const;
  /// Value of a C-word inside factor `side`, as a local word.
  Word c_to_side(std::span<const Letter> c, std::size_t side) const;
  const SubgroupPtr& edge_handle(std::size_t side) const { return edge_handles_.at(side); }

 private:
  std::vector<SubgroupPtr> edge_handles_;
};

/// A *_phi = < A, t | t c t^-1 = phi(c), c in C >.
class HNNGroup final : public CompositeGroup {
 public:
  struct Form {
    std::vector<std::pair<Word, int>> prefix;  // (transversal rep in A, exponent of t)
    Word tail;                                 // arbitrary element of A
  };

  HNNGroup(std::string name, GroupPtr base, SubgroupPtr associated, SubgroupPtr image, std::string stable_letter);
  Word normalize(std::span<const Letter> w) const override;
  std::pair<Word, Word> split_last_factor(std::span<const Letter> g, std::size_t f) const override;

  Form structured(std::span<const Letter> w) const;
  Word flatten(const Form& form) const;
  Letter stable_letter() const { return letter(rank() - 1); }
  /// C (in the base) and phi(C) (in the base); generator i of one maps to generator i of the other.
  const SubgroupPtr& associated() const { return associated_; }
  const SubgroupPtr& image() const { return image_; }

 private:
  SubgroupPtr associated_;
  SubgroupPtr image_;
};

// --- constructors ---------------------------------------------------------

GroupPtr make_free_group(std::string name, std::vector<std::string> generators);
GroupPtr make_free_abelian_group(std::string name, std::vector<std::string> generators);
GroupPtr make_finite_group(std::string name, std::vector<std::string> generators,
                           std::vector<std::vector<std::uint32_t>> table,
                           std::vector<std::uint32_t> generator_elements);
GroupPtr make_cyclic_group(std::string name, std::string generator, std::uint32_t n);
/// Closure of the given permutations of {0..n-1}; product is composition (g*h)(i) = g(h(i)).
GroupPtr make_permutation_group(std::string name, std::vector<std::string> generators,
                                const std::vector<std::vector<std::uint32_t>>& permutations);
GroupPtr make_free_product(std::string name, std::vector<GroupPtr> factors);

}  // namespace forge
