#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forge/group.hpp"
#include "forge/morphism.hpp"
#include "forge/subgroup.hpp"

namespace forge {

/// A letter of F(S, H): an S-letter, or a nontrivial element of peripheral H_i
/// stored as a normalized word of the ambient group.
struct Token {
  int h = -1;              // -1: S-letter
  Letter s = 0;            // S-letter +-(i+1)
  Word value;              // element of H_h
  std::size_t symbols = 1; // display length (a conjugated token t k t^-1 counts 3)
  bool operator==(const Token& o) const { return h == o.h && s == o.s && value == o.value; }
};
using RelWord = std::vector<Token>;

struct RelPresentation {
  GroupPtr group;                    // the presented group
  std::vector<std::string> s_names;
  std::vector<Word> s_images;        // evaluation of S in `group`
  std::vector<std::string> h_names;
  std::vector<SubgroupPtr> hs;       // peripherals as handles of `group`
  std::vector<RelWord> relators;
};

Token s_token(std::size_t i, bool inv = false);
/// Token for an element of H_i, normalized in the presentation's group. Throws
/// InvalidSpec for the identity or non-members.
Token h_token(const RelPresentation& p, std::size_t i, std::span<const Letter> g);

RelWord inverse(const RelWord& w);
/// Free reduction in F(S) * (*H_i): S-letters cancel, adjacent tokens of one H merge.
RelWord reduce(const GroupPtr& g, const RelWord& w);
Word evaluate(const RelPresentation& p, const RelWord& w);
std::size_t symbol_count(const RelWord& w);
std::string format(const RelPresentation& p, const RelWord& w);
/// Parses space separated letters: S names (with ^-1 or ^k), or `H:word` for peripheral elements.
RelWord parse_relword(const RelPresentation& p, const std::string& text);

struct RelatorCheck {
  bool pass = true;
  std::vector<std::pair<std::size_t, Word>> failures;  // relator index, normal form of its value
};
RelatorCheck verify_relators(const RelPresentation& p);

struct AbsorbData {
  std::vector<std::size_t> s0;  // S-letters that move into P
  std::vector<std::size_t> h0;  // peripherals that move into P
  std::vector<std::size_t> r0;  // relators presenting P
  SubgroupPtr p;                // the subgroup generated by S0 and H0
  std::string name = "P";
};
/// Replaces S0 and the H0 peripherals by the single peripheral P and maps the
/// remaining relators through the natural epimorphism. Throws SubPresentationUnverified.
RelPresentation absorb(const RelPresentation& p, const AbsorbData& d);

struct AmalgamPresentation {
  RelPresentation presentation;
  GroupPtr group;
};
/// Presentations of (G_i, H_i + {K_i}); `k1`, `k2` index K_i among the peripherals.
/// `d1`, `d2` are the edge monomorphisms C -> G_i.
AmalgamPresentation amalgam_presentation(const RelPresentation& p1, std::size_t k1, const RelPresentation& p2,
                                         std::size_t k2, const Monomorphism& d1, const Monomorphism& d2,
                                         BuildOptions opts = {});

struct HNNPresentation {
  RelPresentation presentation;
  GroupPtr group;
};
/// Presentation of (G *_phi, H + {<K^t, L>}) from one of (G, H + {K, L}); `phi` has domain C <= K
/// and values in L. Throws KLNotDistinct.
HNNPresentation hnn_presentation(const RelPresentation& p, std::size_t k, std::size_t l, const Monomorphism& phi,
                                 const std::string& stable_letter = "t", BuildOptions opts = {});

struct DehnCaps {
  std::size_t k_cap = 4;          // most relators tried per word
  std::size_t conjugator_cap = 2; // conjugator ball radius in F(S, H)
  std::size_t h_letter_cap = 1;   // H-letters are H-ball elements of this radius
};

struct DehnEntry {
  std::size_t m = 0;
  std::size_t value = 0;
  bool capped = false;        // some word needed more than k_cap relators within the conjugator ball
  RelWord witness;            // a word attaining the value
  std::size_t trivial_words = 0;
};

struct DehnTable {
  std::vector<DehnEntry> entries;  // m = 0..n
  DehnCaps caps;
};

/// Minimal k with W a product of k conjugates of relators (or inverses) within the caps; nullopt past k_cap.
std::optional<std::size_t> min_relators(const RelPresentation& p, const RelWord& w, const DehnCaps& caps = {});
DehnTable dehn_bruteforce(const RelPresentation& p, std::size_t n, const DehnCaps& caps = {});

}  // namespace forge
