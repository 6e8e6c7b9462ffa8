#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "doctest.h"
#include "forge/errors.hpp"
#include "support.hpp"

using namespace forge;
using namespace fixtures;

namespace {

// Words equal in <a,b | a^4, b^6, a^2 b^-3>, found by relator substitutions
// and free moves on words of bounded length.
bool relator_closure_reaches(const Word& from, const Word& to, std::size_t max_len) {
  std::vector<Word> relators{{1, 1, 1, 1}, {2, 2, 2, 2, 2, 2}, {1, 1, -2, -2, -2}};
  std::vector<std::pair<Word, Word>> rules;  // u -> v with u v^-1 a cyclic conjugate of r^{+-1}
  for (const auto& r0 : relators) {
    for (const Word& r : {r0, inverse(r0)}) {
      for (std::size_t rot = 0; rot < r.size(); ++rot) {
        Word c(r.begin() + rot, r.end());
        c.insert(c.end(), r.begin(), r.begin() + rot);
        for (std::size_t cut = 0; cut <= c.size(); ++cut) {
          Word u(c.begin(), c.begin() + cut);
          Word rest(c.begin() + cut, c.end());
          rules.emplace_back(u, inverse(rest));
        }
      }
    }
  }
  std::set<Word> seen{from};
  std::deque<Word> queue{from};
  while (!queue.empty()) {
    Word w = queue.front();
    queue.pop_front();
    if (w == to) return true;
    std::vector<Word> nexts;
    for (std::size_t i = 0; i <= w.size(); ++i) {
      for (const auto& [u, v] : rules) {
        if (i + u.size() > w.size() || !std::equal(u.begin(), u.end(), w.begin() + i)) continue;
        Word x(w.begin(), w.begin() + i);
        x.insert(x.end(), v.begin(), v.end());
        x.insert(x.end(), w.begin() + i + u.size(), w.end());
        nexts.push_back(x);
      }
      for (Letter l : {1, -1, 2, -2}) {
        Word x(w.begin(), w.begin() + i);
        x.push_back(l);
        x.push_back(-l);
        x.insert(x.end(), w.begin() + i, w.end());
        nexts.push_back(x);
      }
    }
    nexts.push_back(free_reduce(w));
    for (auto& x : nexts)
      if (x.size() <= max_len && seen.insert(x).second) queue.push_back(x);
  }
  return false;
}

// Reference composition for S3 words over s=(01), u=(02).
std::vector<int> perm_of(const Word& w) {
  std::vector<int> p{0, 1, 2};
  const std::vector<std::vector<int>> gens{{1, 0, 2}, {2, 1, 0}};
  for (Letter l : w) {
    const auto& g = gens[generator_of(l)];
    std::vector<int> q(3);
    for (int i = 0; i < 3; ++i) q[i] = p[g[i]];
    p = q;
  }
  return p;
}

}  // namespace

TEST_CASE("normalize: free reduction") {
  auto f = make_free_group("F", {"a", "b"});
  CHECK(f->normalize(f->parse("a b b^-1")) == f->parse("a"));
  CHECK(f->format(f->normalize(f->parse("a b b^-1 a"))) == "a^2");
  CHECK_THROWS_AS(f->parse("c"), MalformedWord);
}

TEST_CASE("normalize: hnn defining relation") {
  auto g = hnn_ab();
  CHECK(g->normalize(g->parse("t a t^-1")) == g->parse("b"));
  CHECK(g->normalize(g->parse("t^-1 b t")) == g->parse("a"));
  CHECK(g->normalize(g->parse("t a^3 t^-1 b^-3")).empty());
  CHECK_FALSE(g->normalize(g->parse("t b t^-1")).empty());
}

TEST_CASE("normalize: finite amalgam agrees with relator closure") {
  auto g = z4_z6();
  const Word aab = g->parse("a a b");
  const Word b4 = g->parse("b^4");
  REQUIRE(relator_closure_reaches(aab, b4, 6));
  CHECK(g->normalize(aab) == g->normalize(b4));
  CHECK(g->normalize(g->parse("a^2 b^-3")).empty());
  CHECK(g->normalize(g->parse("a^4")).empty());
  CHECK_FALSE(g->normalize(g->parse("a b")).empty());
}

TEST_CASE("normalize: idempotent and multiplicative") {
  std::mt19937 rng(7);
  std::vector<GroupPtr> groups{make_free_group("F", {"a", "b"}), make_free_abelian_group("Z2", {"x", "y"}), s3(),
                               z4_z6(), hnn_ab(), z2_z2(),
                               make_free_product("P", {make_cyclic_group("A", "p", 2), make_cyclic_group("B", "q", 3)})};
  for (const auto& g : groups) {
    for (int i = 0; i < 150; ++i) {
      Word u = random_word(rng, g->rank(), 9);
      Word v = random_word(rng, g->rank(), 9);
      Word nu = g->normalize(u);
      CHECK(g->normalize(nu) == nu);
      CHECK(g->normalize(concat(u, v)) == g->normalize(concat(nu, g->normalize(v))));
      CHECK(g->normalize(concat(u, inverse(u))).empty());
    }
  }
}

TEST_CASE("finite table normal forms are shortlex minimal") {
  auto g = s3();
  std::map<std::vector<int>, Word> best;
  // all words up to length 3 in shortlex order
  std::vector<Word> words{{}};
  for (std::size_t len = 1; len <= 3; ++len) {
    std::vector<Word> layer;
    for (const auto& w : words)
      if (w.size() == len - 1)
        for (Letter l : {1, -1, 2, -2}) {
          Word x = w;
          x.push_back(l);
          layer.push_back(x);
        }
    words.insert(words.end(), layer.begin(), layer.end());
  }
  std::sort(words.begin(), words.end(), [](const Word& a, const Word& b) { return shortlex_less(a, b); });
  for (const auto& w : words) best.emplace(perm_of(w), w);
  CHECK(best.size() == 6);
  for (const auto& [p, w] : best) CHECK(g->normalize(w) == w);
}

TEST_CASE("subgroup_contains") {
  auto zz = z();
  auto h = make_subgroup(zz, {zz->parse("a^2")});
  CHECK(subgroup_contains(*h, zz->parse("a^4")) == Tri::Yes);
  CHECK(subgroup_contains(*h, zz->parse("a^3")) == Tri::No);
  CHECK_THROWS_AS(subgroup_contains(*h, zz->parse("a"), s3()), MismatchedAmbient);

  auto g = s3();
  auto c3 = make_subgroup(g, {g->parse("s u")});
  std::set<std::vector<int>> oracle;
  for (int k = 0; k < 6; ++k) {
    Word w;
    for (int i = 0; i < k; ++i) w = concat(w, g->parse("s u"));
    oracle.insert(perm_of(w));
  }
  CHECK(oracle.size() == 3);
  CHECK(oracle.count(perm_of(g->parse("s"))) == 0);
  CHECK(subgroup_contains(*c3, g->parse("s")) == Tri::No);
  CHECK(c3->order() == 3u);
}

TEST_CASE("coset_rep") {
  auto zz = z();
  auto h = make_subgroup(zz, {zz->parse("a^2")});
  // shortlex-minimal w with w^-1 a^5 in <a^2>
  Word oracle;
  bool found = false;
  for (int len = 0; len <= 5 && !found; ++len)
    for (int sign : {1, -1}) {
      const int e = sign * len;
      if (((5 - e) % 2 + 2) % 2 == 0) {
        oracle = Word(len, sign);
        found = true;
        break;
      }
    }
  CHECK(coset_rep(*h, zz->parse("a^5")) == oracle);
  CHECK(coset_rep(*h, zz->parse("a^-4")).empty());

  auto p = make_free_product("AB", {make_free_abelian_group("A", {"x"}), make_cyclic_group("B", "y", 3)});
  auto a = make_subgroup(p, {p->parse("x")});
  CHECK(a->strategy() == Strategy::FactorSubgroup);
  CHECK(coset_rep(*a, p->parse("x y x^2")) == p->normalize(p->parse("x y")));
  CHECK(coset_rep(*a, p->parse("x^3")).empty());
}

TEST_CASE("contains iff coset_rep is empty") {
  std::mt19937 rng(11);
  auto g2 = z2_z2();
  auto h = hnn_ab();
  std::vector<SubgroupPtr> handles{
      make_subgroup(s3(), {s3()->parse("s")}),
      make_subgroup(z4_z6(), {z4_z6()->parse("a")}),
      make_subgroup(g2, {g2->parse("a1"), g2->parse("a2"), g2->parse("b2")}),
      make_subgroup(h, {h->parse("b")}),
      make_subgroup(make_free_abelian_group("L", {"x", "y"}), {Word{1, 1, 2}, Word{2, 2, 2}}),
  };
  CHECK(handles[2]->strategy() == Strategy::AmalgamOfHandles);
  for (const auto& k : handles) {
    const auto& g = k->ambient();
    for (int i = 0; i < 100; ++i) {
      Word w = random_word(rng, g->rank(), 8);
      const bool in = k->contains(w) == Tri::Yes;
      CHECK(in == k->coset_rep(w).empty());
      auto d = k->decompose(w);
      REQUIRE(d);
      CHECK(g->normalize(concat(d->rep, k->evaluate(d->sub))) == g->normalize(w));
      // constant on cosets
      Word hgen = k->generators()[static_cast<std::size_t>(i) % k->generators().size()];
      CHECK(k->coset_rep(concat(w, hgen)) == d->rep);
    }
  }
}

TEST_CASE("build_amalgam") {
  auto g = z4_z6();
  CHECK(g->normalize(g->parse("a^2 b^-3")).empty());

  auto a = make_cyclic_group("A", "x", 3);
  auto b = make_cyclic_group("B", "y", 2);
  auto one = make_free_group("1", {});
  auto fp = build_amalgam("A*B", make_monomorphism(one, a, {}), make_monomorphism(one, b, {}));
  CHECK(fp->normalize(fp->parse("x y x y")) == fp->parse("x y x y"));
  CHECK_FALSE(fp->is_finite());

  auto e1 = z2_z2();
  CHECK(e1->normalize(e1->parse("a1 b1^-1")).empty());
  CHECK(e1->normalize(e1->parse("a2 b2 a2^-1 b2^-1")).size() == 4);

  auto z4 = make_cyclic_group("Z4", "p", 4);
  auto z2 = make_cyclic_group("Z2", "c", 2);
  CHECK_THROWS_AS(build_amalgam("bad", make_monomorphism(z2, z4, {z4->parse("p")}), make_monomorphism(z2, z4, {z4->parse("p^2")})),
                  MonomorphismUnverified);
}

TEST_CASE("build_hnn") {
  auto g = hnn_ab();
  for (int k = -4; k <= 4; ++k) {
    Word c(std::abs(k), k < 0 ? -1 : 1);
    Word phic(std::abs(k), k < 0 ? -2 : 2);
    CHECK(g->normalize(concat({g->parse("t"), c, g->parse("t^-1"), inverse(phic)})).empty());
  }
  auto f = make_free_group("F", {"a", "b"});
  Monomorphism clash{make_subgroup(f, {f->parse("a")}), f, {f->parse("b")}};
  CHECK_THROWS_AS(build_hnn("x", clash, "a"), StableLetterCollision);

  Monomorphism trivial{trivial_subgroup(f), f, {}};
  auto free_t = build_hnn("F*t", trivial, "t");
  CHECK(free_t->normalize(free_t->parse("t a t^-1")) == free_t->parse("t a t^-1"));

  // Z/2 * Z/2 with phi swapping the factors
  auto p = make_free_product("D", {make_cyclic_group("H1", "h1", 2), make_cyclic_group("H2", "h2", 2)});
  Monomorphism swap{make_subgroup(p, {p->parse("h1")}), p, {p->parse("h2")}};
  auto d = build_hnn("D*", swap, "t");
  CHECK(d->normalize(d->parse("t h1 t^-1")) == d->parse("h2"));
}

TEST_CASE("check_monomorphism") {
  auto z2 = make_cyclic_group("Z2", "c", 2);
  auto z4 = make_cyclic_group("Z4", "a", 4);
  auto ok = check_monomorphism(make_monomorphism(z2, z4, {z4->parse("a^2")}), 4);
  CHECK(ok.verdict == MonoVerdict::Verified);
  CHECK(ok.exact);
  auto bad = check_monomorphism(make_monomorphism(z2, z4, {z4->parse("a")}), 4);
  CHECK(bad.verdict == MonoVerdict::Refuted);
  REQUIRE(bad.witness);
  CHECK_FALSE(z4->normalize(substitute(*bad.witness, {z4->parse("a")})).empty());

  auto f = make_free_group("F", {"a", "b"});
  Monomorphism ab{make_subgroup(f, {f->parse("a")}), f, {f->parse("b")}};
  auto r = check_monomorphism(ab, 8);
  CHECK(r.verdict == MonoVerdict::Verified);
  CHECK_FALSE(r.exact);
  for (int k = 1; k <= 8; ++k) CHECK_FALSE(f->normalize(Word(k, 2)).empty());
}

TEST_CASE("ball_enumerate") {
  auto zz = z();
  CHECK(ball_enumerate(zz, {zz->parse("a")}, 2).size() == 5);
  auto f = make_free_group("F", {"a", "b"});
  // reduced words of length <= 2: 1 + 4 + 4*3
  CHECK(ball_enumerate(f, {f->parse("a"), f->parse("b")}, 2).size() == 1 + 4 + 12);
  auto g = s3();
  CHECK(ball_enumerate(g, {g->parse("s"), g->parse("s u")}, 3).size() == 6);
  std::mt19937 rng(3);
  auto h = hnn_ab();
  std::vector<Word> gens{h->parse("a"), h->parse("t")};
  for (std::size_t r = 0; r < 4; ++r) {
    auto small = ball_enumerate(h, gens, r);
    auto big = ball_enumerate(h, gens, r + 1);
    std::set<Word> bs(big.begin(), big.end());
    for (const auto& w : small) CHECK(bs.count(w));
    for (const auto& w : small) CHECK(bs.count(h->normalize(inverse(w))));
  }
  CHECK_THROWS_AS(ball_enumerate(f, {f->parse("a"), f->parse("b")}, 10, 100), BudgetExceeded);
}

TEST_CASE("conjugacy_probe") {
  auto g = s3();
  auto h = make_subgroup(g, {g->parse("s")});
  auto r = conjugacy_probe(g, g->parse("u"), *h, 3);
  REQUIRE(r.found);
  CHECK(h->contains(concat({r.witness, g->parse("u"), inverse(r.witness)})) == Tri::Yes);
  // enumerate all six conjugators: (13) is conjugate into <(12)>
  int hits = 0;
  for (const auto& x : ball_enumerate(g, {g->parse("s"), g->parse("u")}, 3))
    if (perm_of(concat({x, g->parse("u"), inverse(x)})) == perm_of(g->parse("s"))) ++hits;
  CHECK(hits == 2);

  auto in = conjugacy_probe(g, g->parse("s"), *h, 3);
  CHECK(in.found);
  CHECK(in.witness.empty());

  auto f = make_free_group("F", {"a", "b"});
  auto hb = make_subgroup(f, {f->parse("b")});
  auto no = conjugacy_probe(f, f->parse("a"), *hb, 4);
  CHECK_FALSE(no.found);
  CHECK(no.searched == 1 + 4 + 12 + 36 + 108);
}
