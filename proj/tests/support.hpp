#pragma once

#include <random>
#include <string>
#include <vector>

#include "forge/group.hpp"
#include "forge/morphism.hpp"
#include "forge/subgroup.hpp"

namespace fixtures {

using namespace forge;

// S3 generated by s = (12) and u = (13), acting on {0,1,2}.
inline GroupPtr s3() {
  return make_permutation_group("S3", {"s", "u"}, {{1, 0, 2}, {2, 1, 0}});
}

inline GroupPtr z(const std::string& name = "Z", const std::string& gen = "a") {
  return make_free_abelian_group(name, {gen});
}

// Z/4 *_{Z/2} Z/6 with a^2 = b^3.
inline GroupPtr z4_z6() {
  auto a = make_cyclic_group("Z4", "a", 4);
  auto b = make_cyclic_group("Z6", "b", 6);
  auto c = make_cyclic_group("Z2", "c", 2);
  return build_amalgam("Z4*Z6", make_monomorphism(c, a, {a->parse("a^2")}),
                       make_monomorphism(c, b, {b->parse("b^3")}));
}

// <F(a,b), t | t a t^-1 = b>
inline GroupPtr hnn_ab() {
  auto f = make_free_group("F", {"a", "b"});
  Monomorphism phi{make_subgroup(f, {f->parse("a")}), f, {f->parse("b")}};
  return build_hnn("Fab*", phi, "t");
}

// Z^2 *_Z Z^2 along maximal cyclic subgroups <a1>, <b1>.
inline GroupPtr z2_z2() {
  auto a = make_free_abelian_group("A", {"a1", "a2"});
  auto b = make_free_abelian_group("B", {"b1", "b2"});
  auto c = make_free_abelian_group("C", {"c"});
  return build_amalgam("Z2*Z2", make_monomorphism(c, a, {a->parse("a1")}), make_monomorphism(c, b, {b->parse("b1")}));
}

inline Word random_word(std::mt19937& rng, std::size_t rank, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> gen(0, rank - 1);
  std::bernoulli_distribution inv(0.5);
  Word w;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) w.push_back(letter(gen(rng), inv(rng)));
  return w;
}

}  // namespace fixtures

namespace fixtures {

// <a1,a2,a3 | [a1,a2]> as (Z^2 on a1,a2) * (Z on a3).
inline GroupPtr commuting_pair_plus_one(const std::string& name, const std::string& p) {
  return make_free_product(name, {make_free_abelian_group(name + "0", {p + "1", p + "2"}),
                                  make_free_abelian_group(name + "1", {p + "3"})});
}

// A *_C B with A, B as above and C = <a1> = <b1>.
struct Example2 {
  GroupPtr a, b, g;
};
inline Example2 example2() {
  Example2 e;
  e.a = commuting_pair_plus_one("A", "a");
  e.b = commuting_pair_plus_one("B", "b");
  auto c = make_free_abelian_group("C", {"c"});
  e.g = build_amalgam("G", make_monomorphism(c, e.a, {e.a->parse("a1")}), make_monomorphism(c, e.b, {e.b->parse("b1")}));
  return e;
}

}  // namespace fixtures
