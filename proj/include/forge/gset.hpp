#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "forge/group.hpp"
#include "forge/morphism.hpp"
#include "forge/subgroup.hpp"

namespace forge {

struct GSetElem {
  std::size_t orbit = 0;
  Word rep;  // canonical coset representative
  bool operator==(const GSetElem& o) const { return orbit == o.orbit && rep == o.rep; }
  bool operator!=(const GSetElem& o) const { return !(*this == o); }
  bool operator<(const GSetElem& o) const {
    if (orbit != o.orbit) return orbit < o.orbit;
    return shortlex_less(rep, o.rep);
  }
};

struct GSetElemHash {
  std::size_t operator()(const GSetElem& e) const noexcept { return WordHash{}(e.rep) * 31u + e.orbit; }
};

struct Orbit {
  std::string id;
  SubgroupPtr stabilizer;
};

/// A disjoint union of coset spaces G/H_i. Element (i, w) stands for the coset w H_i.
///
/// `acting` restricts the acting group to a subgroup K (a K-set whose
/// stabilizers lie in K); by default the whole group acts.
class GSet {
 public:
  GSet(GroupPtr group, std::vector<Orbit> orbits, SubgroupPtr acting = nullptr);

  const GroupPtr& group() const { return group_; }
  const std::vector<Orbit>& orbits() const { return orbits_; }
  const SubgroupPtr& acting() const { return acting_; }
  std::size_t orbit_count() const { return orbits_.size(); }
  const Orbit& orbit(std::size_t i) const { return orbits_.at(i); }
  std::optional<std::size_t> find_orbit(const std::string& id) const;

  GSetElem base(std::size_t orbit) const { return GSetElem{orbit, {}}; }
  /// Canonical element g.base(orbit).
  GSetElem element(std::size_t orbit, std::span<const Letter> g) const;
  GSetElem act(std::span<const Letter> g, const GSetElem& x) const;
  bool equal(const GSetElem& x, const GSetElem& y) const;
  /// Stabilizer of x as a handle (conjugate of the orbit stabilizer).
  SubgroupPtr stabilizer_of(const GSetElem& x) const;
  /// Every element, for finite acting groups only.
  std::vector<GSetElem> elements() const;
  std::string format(const GSetElem& x) const;

 private:
  GroupPtr group_;
  std::vector<Orbit> orbits_;
  SubgroupPtr acting_;
};

using GSetPtr = std::shared_ptr<const GSet>;

/// Equivariant map given by the image of each domain base point.
struct GMap {
  GSetPtr domain;
  GSetPtr codomain;
  std::vector<GSetElem> images;

  GSetElem apply(const GSetElem& x) const;
  /// First stabilizer generator that moves its assigned image, if any.
  std::optional<std::pair<std::size_t, Word>> equivariance_violation() const;
};

/// Validating constructor; throws StabilizerNotContained.
GMap make_gmap(GSetPtr domain, GSetPtr codomain, std::vector<GSetElem> images);
GMap identity_map(const GSetPtr& s);

/// Transports a set over a group A along a monomorphism A -> G (stabilizers are
/// pushed forward, the acting group becomes the image of A).
GSetPtr transport(const GSet& s, const Monomorphism& along);

struct Induced {
  GSetPtr set;  // over G, acted on by all of G
  GMap iota;    // canonical K-equivariant injection S -> G x_K S
};
/// G x_K S for a K-set S; orbit K/K_i becomes G/K_i with the same stabilizer handle.
Induced induce_gset(const GSetPtr& s);
/// Extension of a K-map S -> T (T a G-set) to G x_K S -> T.
GMap extend_map(const Induced& induced, const GMap& f);

struct Pushout {
  GSetPtr z;
  GMap iota;  // S -> Z
  GMap jota;  // T -> Z
  GMap phi;   // R -> S
  GMap psi;   // R -> T
  std::vector<std::size_t> class_of;  // S orbits, then T orbits -> Z orbit
  std::vector<Word> offset;           // base of member m = offset[m] . base of its class
};

/// Identifies phi(r) with psi(r) for every r in R.
Pushout pushout_gsets(const GMap& phi, const GMap& psi, std::optional<std::size_t> root_hint = std::nullopt);
/// The unique map Z -> W with alpha = f o iota and beta = f o jota; throws GroupMismatch if alpha o phi != beta o psi.
GMap pushout_factor(const Pushout& p, const GMap& alpha, const GMap& beta);

struct Chain {
  Word conjugator;               // h with z = h . iota(s)
  std::vector<Word> factors;     // a0, b0, a1, b1, ... in the order they are applied
  Word product;                  // a_k ... b_0 a_0
};
/// Certifies g in <G_s, G_t> for g fixing z, following the alternating chain argument.
/// `r_orbit` selects the R-orbit whose images s, t are identified.
Chain chain_factorize(std::span<const Letter> g, const GSetElem& z, const Pushout& p, std::size_t r_orbit = 0,
                      std::size_t budget = 12);
/// Checks the chain conditions: a_i fixes t_i, b_j fixes s_{j+1}, product in g' G_s.
bool verify_chain(const Chain& c, std::span<const Letter> g, const Pushout& p, std::size_t r_orbit = 0);

/// Quotient of a G-set by identifications (x_k ~ y_k); stabilizers grow accordingly.
struct Quotient {
  GSetPtr set;
  GMap map;  // original -> quotient
  std::vector<std::size_t> class_of;
  std::vector<Word> offset;
};
Quotient quotient_gset(const GSetPtr& s, const std::vector<std::pair<GSetElem, GSetElem>>& identify,
                       std::optional<std::size_t> root_hint = std::nullopt);

/// Disjoint union; orbits of `b` follow those of `a`.
GSetPtr disjoint_union(const GSet& a, const GSet& b);

}  // namespace forge
