// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "forge/analysis.hpp"
#include "forge/errors.hpp"
#include "forge/parallel.hpp"
#include "forge/pipeline.hpp"
#include "forge/relpres.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace forge;
using namespace fixtures;
using oracles::oracle_delta;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failed expectation and keeps going.
class Expect {
 public:
  void operator()(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && first_.empty()) first_ = what;
  }
  Outcome done(const std::string& summary) const {
    if (!first_.empty()) return {false, first_};
    return {true, summary + " (" + std::to_string(checks_) + " checks)"};
  }

 private:
  std::size_t checks_ = 0;
  std::string first_;
};

std::vector<Word> group_ball(const GroupPtr& g, std::size_t r) {
  std::vector<Word> gens;
  for (std::size_t i = 0; i < g->rank(); ++i) gens.push_back(Word{letter(i)});
  return ball_enumerate(g, gens, r);
}

std::vector<Word> all_elements(const GroupPtr& g) { return group_ball(g, *g->order()); }

GGraphPtr point_graph(const GroupPtr& g, SubgroupPtr stab) {
  auto vs = std::make_shared<GSet>(g, std::vector<Orbit>{{"pt", std::move(stab)}});
  auto es = std::make_shared<GSet>(g, std::vector<Orbit>{});
  return std::make_shared<GGraph>("pt", vs, es, std::vector<Attach>{});
}

// Normal forms of a subgroup's elements, by closing its generators under products.
std::set<Word> closure(const GroupPtr& g, const std::vector<Word>& gens) {
  std::set<Word> out{Word{}};
  std::vector<Word> frontier{Word{}};
  while (!frontier.empty()) {
    std::vector<Word> next;
    for (const auto& x : frontier)
      for (const auto& s : gens) {
        Word y = g->normalize(concat(x, s));
        if (out.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return out;
}

std::set<Word> elements_of(const SubgroupPtr& h) { return closure(h->ambient(), h->generators()); }

// Every subgroup of a finite group, each with a generating pair, ordered by size.
std::vector<SubgroupPtr> subgroup_lattice(const GroupPtr& g, const std::set<Word>& inside) {
  std::map<std::set<Word>, SubgroupPtr> seen;
  std::vector<Word> el(inside.begin(), inside.end());
  for (const auto& x : el)
    for (const auto& y : el) {
      auto set = closure(g, {x, y});
      if (!seen.count(set)) seen.emplace(set, make_subgroup(g, {x, y}));
    }
  std::vector<std::pair<std::set<Word>, SubgroupPtr>> v(seen.begin(), seen.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first.size() < b.first.size(); });
  std::vector<SubgroupPtr> out;
  for (auto& [s, h] : v) out.push_back(h);
  return out;
}

// Union-find orbits of `elems` under the given generators.
std::map<GSetElem, std::size_t> orbit_classes(const GSet& s, const std::vector<GSetElem>& elems,
                                              const std::vector<Word>& gens) {
  std::map<GSetElem, std::size_t> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);
  std::vector<std::size_t> parent(elems.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const auto& x : gens) parent[find(i)] = find(index.at(s.act(x, elems[i])));
  std::map<GSetElem, std::size_t> out;
  for (std::size_t i = 0; i < elems.size(); ++i) out.emplace(elems[i], find(i));
  return out;
}

// --- criteria -----------------------------------------------------------------

Outcome amalgam_points() {
  Expect ex;
  RunReport r = run_pipeline(*builtin_example("example-amalgam-1"));
  ex(r.exit_code() == 0, "pipeline exit code " + std::to_string(r.exit_code()));
  ex(!r.steps.empty() && r.steps[0].data.value("vertex_orbits", -1) == 1, "pipeline vertex orbits != 1");
  ex(!r.steps.empty() && r.steps[0].data.value("edge_orbits", -1) == 0, "pipeline edge orbits != 0");

  auto g = z2_z2();
  auto x = point_graph(g->factor(0), whole_group(g->factor(0)));
  auto y = point_graph(g->factor(1), whole_group(g->factor(1)));
  auto p = c_pushout(x, y, x->vertices()->base(0), y->vertices()->base(0), g);
  ex(p.graph->vertices()->orbit_count() == 1, "vertex orbits != 1");
  ex(p.graph->edges()->orbit_count() == 0, "edge orbits != 0");
  auto b = ball_view(p.graph, {p.graph->provenance().z}, 6);
  ex(b.size() == 1, "ball R=6 has " + std::to_string(b.size()) + " vertices");
  return ex.done("1 vertex orbit, 0 edge orbits, |B(6)| = 1");
}

Outcome amalgam_cones() {
  Expect ex;
  auto e = example2();
  auto ka = make_subgroup(e.a, {e.a->parse("a1"), e.a->parse("a2")});
  auto kb = make_subgroup(e.b, {e.b->parse("b1"), e.b->parse("b2")});
  auto x = coned_off(e.a, {ka}, {e.a->parse("a3")}, "X");
  auto y = coned_off(e.b, {kb}, {e.b->parse("b3")}, "Y");
  auto p = c_pushout(x, y, x->vertices()->base(1), y->vertices()->base(1), e.g);
  const auto& zg = p.graph;
  ex(zg->vertices()->orbit_count() == 3, "vertex orbits " + std::to_string(zg->vertices()->orbit_count()));
  ex(zg->edges()->orbit_count() == 4, "edge orbits " + std::to_string(zg->edges()->orbit_count()));

  const GSetElem z = zg->provenance().z;
  auto b = ball_view(zg, {z}, 4, BallOptions{1, 20000});
  bool tree = true;
  for (std::size_t v = 0; v < b.size() && tree; ++v) {
    auto counts = embedded_path_counts_from(v, 2 * b.radius, b);
    for (std::size_t w = 0; w < b.size(); ++w)
      if (w != v && counts[w] > 1) tree = false;
  }
  ex(tree, "ball R=4 has two embedded paths between some pair");
  ex(b.edges.size() + 1 == b.size(), "ball R=4 is not a tree by edge count");

  // <a1, a2, b2> in G: the two side subgroups joined over C = <a1> = <b1>
  auto join = amalgam_join(e.g, ka, kb);
  std::size_t fixing = 0;
  for (const auto& g : group_ball(e.g, 4)) {
    if (zg->vertices()->act(g, z) != z) continue;
    ++fixing;
    const Chain c = chain_factorize(g, z, p.vertex_pushout);
    ex(verify_chain(c, g, p.vertex_pushout), "chain rejected for " + e.g->format(g));
    ex(join->contains(g) == Tri::Yes, e.g->format(g) + " not in <a1,a2,b2>");
  }
  ex(fixing > 1, "no nontrivial element fixes z");
  auto cut = cut_vertex_audit(zg, b);
  ex(cut.pass && !cut.vacuous, "cut_vertex_audit: " + (cut.failures.empty() ? "vacuous" : cut.failures[0]));
  return ex.done("3/4 orbits, tree window, " + std::to_string(fixing) + " stabilizing elements certified, " +
                 std::to_string(cut.components) + " components at z");
}

// Z/2 * Z via h2 = t h1 t^-1: h1 letters cancel in pairs, t against t^-1.
std::vector<int> dihedral_free_form(const Word& w) {
  std::vector<int> out;  // 0 = h1, +1 = t, -1 = t^-1
  auto push = [&](int x) {
    if (!out.empty() && ((x == 0 && out.back() == 0) || (x != 0 && out.back() == -x)))
      out.pop_back();
    else
      out.push_back(x);
  };
  for (Letter l : w) {
    switch (generator_of(l)) {
      case 0: push(0); break;
      case 1: push(1); push(0); push(-1); break;
      default: push(is_inverse(l) ? -1 : 1); break;
    }
  }
  return out;
}

Outcome coalescence_cosets() {
  Expect ex;
  auto a = make_free_product("A", {make_cyclic_group("H1", "h1", 2), make_cyclic_group("H2", "h2", 2)});
  auto h1 = make_subgroup(a, {a->parse("h1")});
  auto h2 = make_subgroup(a, {a->parse("h2")});
  auto g = build_hnn("G", Monomorphism{h1, a, {a->parse("h2")}}, "t");
  auto vs = std::make_shared<GSet>(a, std::vector<Orbit>{{"A/H1", h1}, {"A/H2", h2}});
  auto x = std::make_shared<GGraph>("X", vs, std::make_shared<GSet>(a, std::vector<Orbit>{}), std::vector<Attach>{});
  auto c = coalesce(x, vs->base(0), vs->base(1), g);
  const auto& zs = *c.graph->vertices();
  ex(zs.orbit_count() == 1, "orbits " + std::to_string(zs.orbit_count()));
  const auto xz = c.rho.vertex.apply(c.x_induced.embedding.vertex.apply(vs->base(0)));

  // the coset u H1 is keyed by the reduced form of u with a trailing h1 dropped
  std::map<GSetElem, std::vector<int>> key_of_point;
  std::map<std::vector<int>, GSetElem> point_of_key;
  const auto ball = group_ball(g, 6);
  for (const auto& u : ball) {
    auto key = dihedral_free_form(u);
    if (!key.empty() && key.back() == 0) key.pop_back();
    const GSetElem pt = zs.act(u, xz);
    auto [i, fresh_i] = key_of_point.emplace(pt, key);
    auto [j, fresh_j] = point_of_key.emplace(key, pt);
    ex(i->second == key && j->second == pt, "coset of " + g->format(u) + " disagrees with G/H1");
    ex(zs.equal(pt, zs.act(concat(u, g->parse("h1")), xz)), "u h1 . z != u . z for " + g->format(u));
  }
  return ex.done("1 orbit, " + std::to_string(ball.size()) + " ball elements in " +
                 std::to_string(point_of_key.size()) + " matching cosets");
}

Outcome cone_chain() {
  Expect ex;
  auto g = hnn_ab();
  auto f = g->factor(0);
  auto x = coned_off(f, {make_subgroup(f, {f->parse("a")}), make_subgroup(f, {f->parse("b")})},
                     {f->parse("a"), f->parse("b")}, "X");
  auto c = coalesce(x, x->vertices()->base(1), x->vertices()->base(2), g);
  const auto& zs = *c.graph->vertices();
  const GSetElem z = c.graph->provenance().z;
  const Word b = g->parse("b");
  std::size_t fixing = 0;
  for (const auto& w : group_ball(g, 5)) {
    if (zs.act(w, z) != z) continue;
    ++fixing;
    // oracle: w = b^k with k the exponent sum of w in a, b
    int k = 0;
    for (Letter l : w)
      if (generator_of(l) != 2) k += is_inverse(l) ? -1 : 1;
    Word bk;
    for (int i = 0; i < std::abs(k); ++i) bk.push_back(k < 0 ? -b[0] : b[0]);
    ex(g->equal(w, bk), g->format(w) + " fixes z but is not in <b>");
  }
  ex(fixing == 11, "expected b^-5..b^5 to fix z, found " + std::to_string(fixing));

  std::map<GSetElem, GSetElem> seen;
  std::size_t points = 0;
  for (const auto& w : group_ball(f, 5))
    for (std::size_t o = 0; o < x->vertices()->orbit_count(); ++o) {
      const auto v = x->vertices()->element(o, w);
      const auto img = c.rho.vertex.apply(c.x_induced.embedding.vertex.apply(v));
      auto [it, fresh] = seen.emplace(img, v);
      if (fresh) ++points;
      ex(fresh || it->second == v, "X -> Z identifies " + x->vertices()->format(v) + " and " +
                                       x->vertices()->format(it->second));
    }
  return ex.done(std::to_string(fixing) + " fixing elements in <b>, " + std::to_string(points) +
                 " X-vertices embed");
}

// Multisets of size 1..max_size over indices 0..n-1.
std::vector<std::vector<std::size_t>> multisets(std::size_t n, std::size_t max_size) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> go = [&](std::size_t from) {
    if (!cur.empty()) out.push_back(cur);
    if (cur.size() == max_size) return;
    for (std::size_t i = from; i < n; ++i) {
      cur.push_back(i);
      go(i);
      cur.pop_back();
    }
  };
  go(0);
  return out;
}

Outcome induced_sets() {
  Expect ex;
  std::size_t sets = 0, maps = 0;
  struct Case {
    GroupPtr g;
    std::vector<Word> k;
  };
  auto s3g = s3();
  auto z4 = make_cyclic_group("Z4", "a", 4);
  const std::vector<Case> cases{{s3g, {s3g->parse("u s")}}, {s3g, {s3g->parse("s")}}, {z4, {z4->parse("a^2")}}};
  for (const auto& cs : cases) {
    const GroupPtr& g = cs.g;
    auto k = make_subgroup(g, cs.k);
    const auto g_el = all_elements(g);
    const auto k_set = elements_of(k);
    const std::vector<Word> k_el(k_set.begin(), k_set.end());
    const auto k_lattice = subgroup_lattice(g, k_set);
    const auto g_lattice = subgroup_lattice(g, std::set<Word>(g_el.begin(), g_el.end()));
    std::vector<std::set<Word>> g_lattice_sets;
    for (const auto& h : g_lattice) g_lattice_sets.push_back(elements_of(h));
    std::vector<Word> g_gens;
    for (std::size_t i = 0; i < g->rank(); ++i) g_gens.push_back(Word{letter(i)});

    for (const auto& choice : multisets(k_lattice.size(), 3)) {
      std::vector<Orbit> orbits;
      for (std::size_t i = 0; i < choice.size(); ++i)
        orbits.push_back({"S" + std::to_string(i), k_lattice[choice[i]]});
      auto s = std::make_shared<GSet>(g, orbits, k);
      auto ind = induce_gset(s);
      ++sets;
      const auto s_el = s->elements();
      const auto gs_el = ind.set->elements();

      // item 1: K-orbits of S correspond to G-orbits of G x_K S
      auto k_orb = orbit_classes(*s, s_el, k->generators());
      auto g_orb = orbit_classes(*ind.set, gs_el, g_gens);
      std::map<std::size_t, std::size_t> fwd, back;
      for (const auto& x : s_el) {
        const std::size_t ko = k_orb.at(x), go = g_orb.at(ind.iota.apply(x));
        ex(fwd.emplace(ko, go).first->second == go, "orbit map not well defined");
        ex(back.emplace(go, ko).first->second == ko, "orbit map not injective");
      }
      std::set<std::size_t> g_classes;
      for (const auto& [e, o] : g_orb) g_classes.insert(o);
      ex(back.size() == g_classes.size(), "orbit map not surjective");

      // item 2: K_s = G_iota(s)
      for (const auto& x : s_el) {
        std::set<Word> ks, gs;
        for (const auto& h : k_el)
          if (s->act(h, x) == x) ks.insert(g->normalize(h));
        const auto ix = ind.iota.apply(x);
        for (const auto& h : g_el)
          if (ind.set->act(h, ix) == ix) gs.insert(g->normalize(h));
        ex(ks == gs, "K_s != G_iota(s) at " + s->format(x));
      }

      // item 4: iota(S) meets g.iota(S) only for g in K, and then they coincide
      std::set<GSetElem> image;
      for (const auto& x : s_el) image.insert(ind.iota.apply(x));
      for (const auto& h : g_el) {
        std::set<GSetElem> moved;
        for (const auto& y : image) moved.insert(ind.set->act(h, y));
        bool meets = false;
        for (const auto& y : moved) meets = meets || image.count(y);
        if (!meets) continue;
        ex(k_set.count(g->normalize(h)) == 1, g->format(h) + " moves iota(S) onto itself but is not in K");
        ex(moved == image, "g.iota(S) != iota(S) for " + g->format(h));
      }

      // item 5: stabilizer-preserving K-maps into G-sets with an injective orbit map extend injectively
      std::vector<std::size_t> t_choice(choice.size(), 0);
      for (;;) {
        std::vector<Orbit> t_orbits;
        for (std::size_t i = 0; i < t_choice.size(); ++i)
          t_orbits.push_back({"T" + std::to_string(i), g_lattice[t_choice[i]]});
        auto t = std::make_shared<GSet>(g, t_orbits);
        const auto t_el = t->elements();
        // candidate images of base i: points of T orbit i whose G-stabilizer is exactly K_i
        std::vector<std::vector<GSetElem>> cand(choice.size());
        for (std::size_t i = 0; i < choice.size(); ++i) {
          const auto want = elements_of(k_lattice[choice[i]]);
          for (const auto& p : t_el) {
            if (p.orbit != i) continue;
            std::set<Word> stab;
            for (const auto& h : g_el)
              if (t->act(h, p) == p) stab.insert(g->normalize(h));
            if (stab == want) cand[i].push_back(p);
          }
        }
        std::vector<std::size_t> pick(choice.size(), 0);
        bool any = std::all_of(cand.begin(), cand.end(), [](const auto& v) { return !v.empty(); });
        while (any) {
          std::vector<GSetElem> images;
          for (std::size_t i = 0; i < choice.size(); ++i) images.push_back(cand[i][pick[i]]);
          GMap f = make_gmap(s, t, images);
          GMap ft = extend_map(ind, f);
          ++maps;
          std::set<GSetElem> hit;
          for (const auto& y : gs_el) hit.insert(ft.apply(y));
          ex(hit.size() == gs_el.size(), "extension of a stabilizer-preserving map is not injective");
          for (const auto& xx : s_el) ex(ft.apply(ind.iota.apply(xx)) == f.apply(xx), "extension does not restrict to f");
          std::size_t i = 0;
          while (i < pick.size() && ++pick[i] == cand[i].size()) pick[i++] = 0;
          if (i == pick.size()) break;
        }
        std::size_t i = 0;
        while (i < t_choice.size() && ++t_choice[i] == g_lattice.size()) t_choice[i++] = 0;
        if (i == t_choice.size()) break;
      }
    }
  }
  ex(maps > 0, "no stabilizer-preserving maps were generated");
  return ex.done(std::to_string(sets) + " K-sets, " + std::to_string(maps) + " extended maps");
}

Outcome s3_pushouts() {
  Expect ex;
  auto g = s3();
  const auto g_el = all_elements(g);
  const auto lattice = subgroup_lattice(g, std::set<Word>(g_el.begin(), g_el.end()));
  std::size_t cases = 0, certified = 0;
  for (const auto& k1 : lattice)
    for (const auto& k2 : lattice) {
      const auto e1 = elements_of(k1), e2 = elements_of(k2);
      for (const auto& c : lattice) {
        const auto ec = elements_of(c);
        if (!std::includes(e1.begin(), e1.end(), ec.begin(), ec.end()) ||
            !std::includes(e2.begin(), e2.end(), ec.begin(), ec.end()))
          continue;
        ++cases;
        auto r = std::make_shared<GSet>(g, std::vector<Orbit>{{"R", c}});
        auto s = std::make_shared<GSet>(g, std::vector<Orbit>{{"S", k1}});
        auto t = std::make_shared<GSet>(g, std::vector<Orbit>{{"T", k2}});
        auto p = pushout_gsets(make_gmap(r, s, {s->base(0)}), make_gmap(r, t, {t->base(0)}));
        const GSetElem z = p.iota.apply(s->base(0));
        std::set<Word> stab;
        for (const auto& h : g_el)
          if (p.z->act(h, z) == z) stab.insert(g->normalize(h));
        std::vector<Word> gens = k1->generators();
        gens.insert(gens.end(), k2->generators().begin(), k2->generators().end());
        ex(stab == closure(g, gens), "G_z != <K1, K2> for " + k1->describe() + ", " + k2->describe());
        for (const auto& h : stab) {
          const Chain ch = chain_factorize(h, z, p);
          ex(verify_chain(ch, h, p), "chain rejected for " + g->format(h));
          ++certified;
        }
      }
    }
  return ex.done(std::to_string(cases) + " (K1, K2, C) triples, " + std::to_string(certified) + " chains");
}

Outcome fineness() {
  Expect ex;
  // (a) Bass-Serre tree: no two neighbors are joined avoiding the vertex
  auto tree = bass_serre(z4_z6());
  for (std::size_t o = 0; o < tree->vertices()->orbit_count(); ++o) {
    const GSetElem v = tree->vertices()->base(o);
    auto cert = fineness_probe(ggraph_window(tree, v, 4 / 2 + 2), 4, 6, 10);
    ex(cert.verdict == FineVerdict::LocallyFinite, "tree orbit " + std::to_string(o) + ": " + to_string(cert.verdict));
    auto w = ball_view(tree, {v}, 6);
    const std::size_t c = *w.index_of(v);
    for (auto x : w.adj[c])
      for (auto y : w.adj[c])
        if (x != y) ex(!angle(c, x, y, w).value, "finite angle in the tree");
  }
  // (b) cone over the even integers
  auto zz = z();
  auto zc = coned_off(zz, {make_subgroup(zz, {zz->parse("a^2")})}, {zz->parse("a")});
  auto vb = fineness_probe(ggraph_window(zc, zc->vertices()->base(1), 4 / 2 + 2), 4, 12, 10);
  ex(vb.verdict == FineVerdict::Violation, "Z cone: " + to_string(vb.verdict));
  ex(vb.witness.size() >= 11, "Z cone violation witness too small");
  // (c) cone over <a> in F(a,b)
  auto f = make_free_group("F", {"a", "b"});
  auto fc = coned_off(f, {make_subgroup(f, {f->parse("a")})}, {f->parse("a"), f->parse("b")});
  auto vc = fineness_probe(ggraph_window(fc, fc->vertices()->base(1), 6 / 2 + 2), 6, 8, 10);
  ex(vc.verdict == FineVerdict::LocallyFinite, "F(a,b) cone: " + to_string(vc.verdict));
  return ex.done("tree locally finite, Z cone violation (max count " + std::to_string(vb.max_count) +
                 "), F cone locally finite");
}

Outcome hyperbolicity() {
  Expect ex;
  auto tree = bass_serre(z4_z6());
  auto tb = ball_view(tree, {tree->vertices()->base(0)}, 4);
  ex(delta_estimate(tb).delta == 0, "tree ball delta != 0");
  ex(oracle_delta(cycle_graph(8)) == 2, "oracle: C8 delta != 2");
  ex(delta_estimate(cycle_graph(8)).delta == 2, "C8 delta != 2");
  auto c5 = cycle_graph(5), c7 = cycle_graph(7);
  auto w = wedge(c5, 0, c7, 0);
  const std::size_t pieces = std::max(oracle_delta(c5), oracle_delta(c7));
  const std::size_t dw = delta_estimate(w).delta;
  ex(dw == pieces, "wedge delta " + std::to_string(dw) + " != max of pieces " + std::to_string(pieces));

  auto rep = decomposition_audit(w, {0}, 4, 2);
  ex(rep.pass && rep.pieces == 2, "decomposition_audit failed on the wedge");
  // fine at v in the wedge iff fine at v in every piece holding it
  const auto comps = components_without(w, {0});
  for (std::size_t v = 0; v < w.size(); ++v) {
    bool pieces_fine = true;
    for (const auto& comp : comps) {
      std::vector<std::size_t> keep = comp;
      keep.push_back(0);
      std::sort(keep.begin(), keep.end());
      auto it = std::find(keep.begin(), keep.end(), v);
      if (it == keep.end()) continue;
      pieces_fine = pieces_fine && window_fine_at(induced_subview(w, keep), it - keep.begin(), 4, 2);
    }
    ex(window_fine_at(w, v, 4, 2) == pieces_fine, "fineness equivalence fails at " + std::to_string(v));
  }
  for (auto x : w.adj[0])
    for (auto y : w.adj[0]) {
      const bool apart = (x < c5.size()) != (y < c5.size());
      if (apart) ex(!angle(0, x, y, w).value, "neighbors in different pieces at finite angle");
    }
  return ex.done("tree 0, C8 2, wedge " + std::to_string(dw) + ", decomposition audit passes");
}

RelPresentation toy_pair() {
  RelPresentation p;
  p.group = make_free_group("F", {"a", "b"});
  p.s_names = {"s"};
  p.s_images = {p.group->parse("a")};
  p.h_names = {"K", "L"};
  p.hs = {make_subgroup(p.group, {p.group->parse("a")}), make_subgroup(p.group, {p.group->parse("b")})};
  p.relators = {parse_relword(p, "s K:a^-1"), parse_relword(p, "K:a s K:a^-1 s^-1")};
  return p;
}

RelPresentation free_over_factor(const GroupPtr& g, const std::string& p) {
  RelPresentation r;
  r.group = g;
  r.s_names = {p + "3"};
  r.s_images = {g->parse(p + "3")};
  r.h_names = {"K" + p};
  r.hs = {make_subgroup(g, {g->parse(p + "1"), g->parse(p + "2")})};
  return r;
}

Outcome presentations() {
  Expect ex;
  auto p = toy_pair();
  auto h = hnn_presentation(p, 0, 1, Monomorphism{p.hs[0], p.group, {p.group->parse("b")}});
  const auto& q = h.presentation;
  ex(q.relators.size() == p.relators.size(), "relator count changed");
  for (std::size_t i = 0; i < q.relators.size(); ++i)
    ex(h.group->is_identity(evaluate(q, q.relators[i])), "relator " + format(q, q.relators[i]) + " is not trivial");
  ex(verify_relators(q).pass, "verify_relators on the HNN presentation");

  auto e = example2();
  auto c = make_free_abelian_group("C", {"c"});
  auto am = amalgam_presentation(free_over_factor(e.a, "a"), 0, free_over_factor(e.b, "b"), 0,
                                 make_monomorphism(c, e.a, {e.a->parse("a1")}),
                                 make_monomorphism(c, e.b, {e.b->parse("b1")}));
  ex(verify_relators(am.presentation).pass, "verify_relators on the amalgam presentation");
  return ex.done("|R'| = |R| = " + std::to_string(q.relators.size()) + ", all relators trivial");
}

Outcome dehn() {
  Expect ex;
  RelPresentation p;
  p.group = make_free_abelian_group("Z2", {"a", "b"});
  p.s_names = {"b"};
  p.s_images = {p.group->parse("b")};
  p.h_names = {"A"};
  p.hs = {make_subgroup(p.group, {p.group->parse("a")})};
  p.relators = {parse_relword(p, "A:a b A:a^-1 b^-1")};
  const DehnCaps caps;
  auto t = dehn_bruteforce(p, 6, caps);
  ex(t.entries.size() == 7, "table size");
  if (t.entries.size() < 7) return ex.done("");
  const auto& d4 = t.entries[4];
  ex(d4.value == 1, "Delta(4) = " + std::to_string(d4.value));
  ex(format(p, d4.witness) == "A:a b A:a^-1 b^-1", "witness " + format(p, d4.witness));
  // oracle: a nontrivial reduced word equal to a cyclic shift of a relator needs exactly one relator
  const RelWord wr = reduce(p.group, d4.witness);
  bool shift = false;
  for (const auto& rel : {p.relators[0], inverse(p.relators[0])})
    for (std::size_t k = 0; k < rel.size(); ++k) {
      RelWord rot(rel.begin() + k, rel.end());
      rot.insert(rot.end(), rel.begin(), rel.begin() + k);
      shift = shift || rot == wr;
    }
  ex(!wr.empty() && shift && p.group->is_identity(evaluate(p, wr)), "witness is not a relator conjugate");
  std::string values, capped;
  for (std::size_t m = 0; m < t.entries.size(); ++m) {
    if (m) ex(t.entries[m].value >= t.entries[m - 1].value, "not monotone at " + std::to_string(m));
    values += (m ? "," : "") + std::to_string(t.entries[m].value);
    if (t.entries[m].capped) capped += " " + std::to_string(m);
  }
  return ex.done("Delta(0..6) = " + values + "; caps k=" + std::to_string(t.caps.k_cap) +
                 " conj=" + std::to_string(t.caps.conjugator_cap) + " h=" + std::to_string(t.caps.h_letter_cap) +
                 "; capped:" + (capped.empty() ? " none" : capped));
}

Outcome determinism() {
  Expect ex;
  const std::size_t before = parallelism();
  std::size_t n = 0;
  for (const auto& e : builtin_examples()) {
    PipelineOptions opts;
    opts.write_exports = false;
    set_parallelism(before);
    const std::string a = run_pipeline(e.spec, opts).to_json().dump();
    const std::string b = run_pipeline(e.spec, opts).to_json().dump();
    set_parallelism(1);
    const std::string c = run_pipeline(e.spec, opts).to_json().dump();
    ex(a == b, e.name + ": two runs differ");
    ex(a == c, e.name + ": sequential run differs");
    ++n;
  }
  set_parallelism(before);
  return ex.done(std::to_string(n) + " built-in pipelines byte-identical");
}

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "amalgam of points", 5, amalgam_points},
      {2, "amalgam of coned-off factors", 60, amalgam_cones},
      {3, "coalescence of A/H1 + A/H2", 5, coalescence_cosets},
      {4, "cone points in the HNN extension", 30, cone_chain},
      {5, "induced K-sets", 60, induced_sets},
      {6, "S3 pushout stabilizers", 10, s3_pushouts},
      {7, "fineness probes", 120, fineness},
      {8, "hyperbolicity and decomposition", 5, hyperbolicity},
      {9, "presentation lemmas", 10, presentations},
      {10, "relative Dehn oracle", 60, dehn},
      {11, "determinism", 300, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && s > c.limit_s) o = {false, o.detail + "; over time limit"};
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs/%.0fs", s, c.limit_s);
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << " [" << timing << "]: " << o.detail
              << std::endl;
    failed += !o.pass;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
