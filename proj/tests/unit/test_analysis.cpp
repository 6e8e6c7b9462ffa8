#include <functional>
#include <set>

#include "doctest.h"
#include "forge/analysis.hpp"
#include "forge/errors.hpp"
#include "forge/parallel.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace forge;
using namespace fixtures;
using oracles::oracle_delta;

namespace {

GGraphPtr z_cone() {
  auto zz = z();
  return coned_off(zz, {make_subgroup(zz, {zz->parse("a^2")})}, {zz->parse("a")});
}

GGraphPtr fab_cone() {
  auto f = make_free_group("F", {"a", "b"});
  return coned_off(f, {make_subgroup(f, {f->parse("a")})}, {f->parse("a"), f->parse("b")});
}

BallView path_tree() {
  // a small tree: 0-1, 1-2, 1-3, 3-4, 3-5, 0-6
  return plain_graph(7, {{0, 1}, {1, 2}, {1, 3}, {3, 4}, {3, 5}, {0, 6}});
}

std::size_t find_label(const BallView& b, const std::string& l) {
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.labels[i] == l) return i;
  FAIL("label " << l << " missing");
  return 0;
}

// Brute force: every simple path as an explicit vertex sequence.
std::size_t oracle_paths(const BallView& b, std::size_t x, std::size_t y, std::size_t n) {
  std::size_t count = 0;
  std::vector<std::size_t> path{x};
  std::function<void()> go = [&] {
    if (path.back() == y) ++count;
    if (path.size() - 1 == n) return;
    for (auto w : b.adj[path.back()]) {
      if (std::find(path.begin(), path.end(), w) != path.end()) continue;
      path.push_back(w);
      go();
      path.pop_back();
    }
  };
  go();
  return count;
}

}  // namespace

TEST_CASE("ball_view") {
  auto zz = z();
  auto cay = coned_off(zz, {}, {zz->parse("a")});
  auto b0 = ball_view(cay, {cay->vertices()->base(0)}, 0);
  CHECK(b0.size() == 1);
  auto b3 = ball_view(cay, {cay->vertices()->base(0)}, 3);
  CHECK(b3.size() == 7);
  CHECK(b3.edges.size() == 6);
  CHECK(b3.depth.back() == 3);

  auto cone = z_cone();
  auto b2 = ball_view(cone, {cone->vertices()->base(0)}, 2);
  std::set<GSetElem> want;
  for (int k = -2; k <= 2; ++k) want.insert(cone->vertices()->element(0, zz->parse("a^" + std::to_string(k))));
  want.insert(cone->vertices()->base(1));
  want.insert(cone->vertices()->element(1, zz->parse("a")));
  for (const auto& v : want) CHECK(b2.index_of(v).has_value());

  BallOptions tight;
  tight.max_vertices = 5;
  CHECK_THROWS_AS(ball_view(cay, {cay->vertices()->base(0)}, 3, tight), BudgetExceeded);
}

TEST_CASE("angle") {
  auto c5 = cycle_graph(5);
  CHECK(*angle(0, 1, 4, c5).value == 3);
  CHECK(angle(0, 1, 4, c5).exact);
  auto t = path_tree();
  CHECK_FALSE(angle(1, 0, 2, t).value.has_value());
  CHECK_THROWS_AS(angle(1, 0, 4, t), NotNeighbors);

  auto cone = z_cone();
  auto zz = cone->group();
  auto b = ball_view(cone, {cone->vertices()->base(1)}, 6);
  const auto x = *b.index_of(cone->vertices()->element(0, {}));
  const auto y = *b.index_of(cone->vertices()->element(0, zz->parse("a^2")));
  const auto a = angle(0, x, y, b);
  REQUIRE(a.value.has_value());
  CHECK(*a.value <= 4);
  // symmetry over all neighbor pairs
  for (auto u : b.adj[0])
    for (auto w : b.adj[0]) CHECK(angle(0, u, w, b).value == angle(0, w, u, b).value);
  // enlarging the window never increases a finite angle
  auto big = ball_view(cone, {cone->vertices()->base(1)}, 8);
  CHECK(*angle(0, *big.index_of(b.elems[x]), *big.index_of(b.elems[y]), big).value <= *a.value);
}

TEST_CASE("fineness_probe") {
  SUBCASE("tree") {
    auto c = fineness_probe(fixed_window(path_tree()), 4, 6, 2);
    CHECK(c.verdict == FineVerdict::LocallyFinite);
  }
  SUBCASE("cone over the even integers") {
    auto g = z_cone();
    auto c = fineness_probe(ggraph_window(g, g->vertices()->base(1), 4 / 2 + 2), 4, 12, 10);
    CHECK(c.verdict == FineVerdict::Violation);
    CHECK(c.witness.size() >= 11);
  }
  SUBCASE("cone over <a> in F(a,b)") {
    auto g = fab_cone();
    auto c = fineness_probe(ggraph_window(g, g->vertices()->base(1), 6 / 2 + 2), 6, 8, 10);
    CHECK(c.verdict == FineVerdict::LocallyFinite);
  }
}

TEST_CASE("embedded_path_count") {
  auto t = path_tree();
  CHECK(embedded_path_count(2, 4, 3, t) == 1);
  CHECK(embedded_path_count(2, 4, 2, t) == 0);
  CHECK(embedded_path_count(0, 1, 4, cycle_graph(5)) == 2);
  CHECK(embedded_path_count(0, 1, 3, complete_graph(4)) == 5);
  auto k5 = complete_graph(5);
  for (std::size_t n = 0; n <= 4; ++n)
    for (std::size_t y = 0; y < 5; ++y) CHECK(embedded_path_count(0, y, n, k5) == oracle_paths(k5, 0, y, n));
  CHECK_THROWS_AS(embedded_path_count(0, 1, 6, complete_graph(8), 100), CombinatorialBlowup);
}

TEST_CASE("delta_estimate") {
  CHECK(delta_estimate(path_tree()).delta == 0);
  auto c8 = cycle_graph(8);
  CHECK(oracle_delta(c8) == 2);
  CHECK(delta_estimate(c8).delta == 2);
  auto c5 = cycle_graph(5);
  auto c7 = cycle_graph(7);
  auto w = wedge(c5, 0, c7, 0);
  const std::size_t pieces = std::max(oracle_delta(c5), oracle_delta(c7));
  CHECK(delta_estimate(w).delta == pieces);
  CHECK(oracle_delta(w) == pieces);
  for (std::size_t n = 3; n <= 9; ++n) CHECK(delta_estimate(cycle_graph(n)).delta == oracle_delta(cycle_graph(n)));
  CHECK(delta_estimate(complete_graph(5)).delta == oracle_delta(complete_graph(5)));
  auto grid = plain_graph(9, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {6, 7}, {7, 8}, {0, 3}, {3, 6}, {1, 4}, {4, 7}, {2, 5}, {5, 8}});
  CHECK(delta_estimate(grid).delta == oracle_delta(grid));
  // a coned-off ball of the integers is a tree plus cones
  auto cone = z_cone();
  auto b = ball_view(cone, {cone->vertices()->base(0)}, 3, BallOptions{2, 1000});
  CHECK(delta_estimate(b).delta == oracle_delta(b));
}

TEST_CASE("decomposition_audit") {
  SUBCASE("wedge of cycles") {
    auto w = wedge(cycle_graph(5), 0, cycle_graph(7), 0);
    auto r = decomposition_audit(w, {0}, 4, 2);
    CHECK(r.pass);
    CHECK(r.pieces == 2);
    CHECK(r.non_fine_vertices.empty());
  }
  SUBCASE("tree") {
    auto r = decomposition_audit(path_tree(), {1, 3}, 4, 2);
    CHECK(r.pass);
    CHECK(r.non_fine_vertices.empty());
  }
  SUBCASE("cone wedge cycle") {
    auto g = z_cone();
    auto b = ball_view(g, {g->vertices()->base(1)}, 4, BallOptions{12, 20000});
    auto w = wedge(b, 0, cycle_graph(5), 0);
    auto r = decomposition_audit(w, {0}, 4, 10);
    CHECK(r.pass);
    CHECK(std::find(r.non_fine_vertices.begin(), r.non_fine_vertices.end(), 0u) != r.non_fine_vertices.end());
    // the violation at the cone is attributed to the coned-off piece, which holds vertex 1
    bool attributed = false;
    for (auto [v, p] : r.attributed)
      if (v == 0) attributed = true;
    CHECK(attributed);
    auto comps = components_without(w, {0});
    CHECK(comps.size() == 2);
  }
}

TEST_CASE("cut_vertex_audit") {
  SUBCASE("pushout") {
    auto e = example2();
    auto x = coned_off(e.a, {make_subgroup(e.a, {e.a->parse("a1"), e.a->parse("a2")})}, {e.a->parse("a3")}, "X");
    auto y = coned_off(e.b, {make_subgroup(e.b, {e.b->parse("b1"), e.b->parse("b2")})}, {e.b->parse("b3")}, "Y");
    auto p = c_pushout(x, y, x->vertices()->base(1), y->vertices()->base(1), e.g);
    auto b = ball_view(p.graph, {p.graph->provenance().z}, 4, BallOptions{1, 20000});
    auto r = cut_vertex_audit(p.graph, b);
    CHECK(r.pass);
    CHECK(r.components >= 2);
    std::set<char> sides;
    for (const auto& s : r.pieces) sides.insert(s[0]);
    CHECK(sides == std::set<char>{'X', 'Y'});
    CHECK_THROWS_AS(cut_vertex_audit(p.graph, ball_view(p.graph, {p.graph->provenance().z}, 0)), WindowTooSmall);
  }
  SUBCASE("coalescence") {
    auto g = hnn_ab();
    auto f = g->factor(0);
    auto x = coned_off(f, {make_subgroup(f, {f->parse("a")}), make_subgroup(f, {f->parse("b")})},
                       {f->parse("a"), f->parse("b")}, "X");
    auto c = coalesce(x, x->vertices()->base(1), x->vertices()->base(2), g);
    auto b = ball_view(c.graph, {c.graph->provenance().z}, 3, BallOptions{1, 20000});
    auto r = cut_vertex_audit(c.graph, b);
    CHECK(r.pass);
    CHECK(r.components >= 2);
  }
  SUBCASE("single vertex") {
    auto g = z2_z2();
    auto pt = [](const GroupPtr& a) {
      auto vs = std::make_shared<GSet>(a, std::vector<Orbit>{{"pt", whole_group(a)}});
      return std::make_shared<GGraph>("pt", vs, std::make_shared<GSet>(a, std::vector<Orbit>{}), std::vector<Attach>{});
    };
    auto x = pt(g->factor(0));
    auto y = pt(g->factor(1));
    auto p = c_pushout(x, y, x->vertices()->base(0), y->vertices()->base(0), g);
    auto r = cut_vertex_audit(p.graph, ball_view(p.graph, {p.graph->provenance().z}, 6));
    CHECK(r.pass);
    CHECK(r.vacuous);
  }
}

TEST_CASE("gh_graph_audit") {
  SUBCASE("finite-stabilizer tree") {
    auto t = bass_serre(z4_z6());
    auto r = gh_graph_audit(t, {});
    CHECK(r.all_pass());
  }
  SUBCASE("F(a,b) coned off along <a>") {
    auto g = fab_cone();
    auto r = gh_graph_audit(g, {g->vertices()->orbit(1).stabilizer});
    for (const auto& c : r.conditions) CHECK_MESSAGE(c.verdict == Verdict::Pass, c.name << ": " << c.detail);
  }
  SUBCASE("Z coned off along <a^2>") {
    auto g = z_cone();
    AuditBudgets b;
    b.radius = 12;
    auto r = gh_graph_audit(g, {g->vertices()->orbit(1).stabilizer}, b);
    CHECK(r.conditions[5].verdict == Verdict::Fail);
    CHECK(r.conditions[5].detail.find("witness") != std::string::npos);
  }
  SUBCASE("determinism across schedules") {
    auto g = fab_cone();
    set_parallelism(1);
    auto a = gh_graph_audit(g, {g->vertices()->orbit(1).stabilizer});
    set_parallelism(4);
    auto b = gh_graph_audit(g, {g->vertices()->orbit(1).stabilizer});
    set_parallelism(0);
    REQUIRE(a.conditions.size() == b.conditions.size());
    for (std::size_t i = 0; i < a.conditions.size(); ++i) {
      CHECK(a.conditions[i].detail == b.conditions[i].detail);
      CHECK(a.conditions[i].verdict == b.conditions[i].verdict);
    }
  }
}

TEST_CASE("cayley_abels_audit") {
  SUBCASE("coned-off graphs") {
    auto g = fab_cone();
    CHECK(cayley_abels_audit(g, {g->vertices()->orbit(1).stabilizer}).all_pass());
    auto h = z_cone();
    CHECK(cayley_abels_audit(h, {h->vertices()->orbit(1).stabilizer}).all_pass());
  }
  SUBCASE("two fixed points") {
    auto zz = z();
    auto vs = std::make_shared<GSet>(zz, std::vector<Orbit>{{"p", whole_group(zz)}, {"q", whole_group(zz)}});
    auto es = std::make_shared<GSet>(zz, std::vector<Orbit>{{"pq", whole_group(zz)}});
    auto g = std::make_shared<GGraph>("pq", vs, es, std::vector<Attach>{{vs->base(0), vs->base(1)}});
    auto r = cayley_abels_audit(g, {whole_group(zz)});
    CHECK(r.conditions.back().verdict == Verdict::Fail);
  }
  SUBCASE("edgeless G/A") {
    auto g = z2_z2();
    auto a = factor_subgroup(g, 0, whole_group(g->factor(0)));
    auto vs = std::make_shared<GSet>(g, std::vector<Orbit>{{"G/A", a}});
    auto gr = std::make_shared<GGraph>("GA", vs, std::make_shared<GSet>(g, std::vector<Orbit>{}), std::vector<Attach>{});
    auto r = cayley_abels_audit(gr, {a});
    CHECK(r.conditions[0].verdict == Verdict::Fail);
  }
}
