#include "forge/ggraph.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "forge/errors.hpp"

namespace forge {

GGraph::GGraph(std::string name, GSetPtr vertices, GSetPtr edges, std::vector<Attach> attach, Provenance prov)
    : name_(std::move(name)),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      attach_(std::move(attach)),
      prov_(std::move(prov)) {
  if (vertices_->group() != edges_->group()) throw GroupMismatch("vertex and edge sets over different groups");
  if (attach_.size() != edges_->orbit_count()) throw InvalidSpec("one attaching pair per edge orbit required");
  for (auto& a : attach_) {
    if (a.u.orbit >= vertices_->orbit_count() || a.v.orbit >= vertices_->orbit_count())
      throw InvalidSpec("attaching vertex outside the vertex set");
    a.u = vertices_->element(a.u.orbit, a.u.rep);
    a.v = vertices_->element(a.v.orbit, a.v.rep);
  }
}

Attach GGraph::endpoints(const GSetElem& e) const {
  const Attach& a = attach_.at(e.orbit);
  return Attach{vertices_->act(e.rep, a.u), vertices_->act(e.rep, a.v)};
}

// --- incidence ------------------------------------------------------------------

IncidenceOracle::IncidenceOracle(GGraphPtr graph, std::size_t stab_length, std::size_t stab_cap)
    : graph_(std::move(graph)), stab_length_(stab_length) {
  for (const auto& o : graph_->vertices()->orbits()) {
    const bool finite = o.stabilizer->finite() == Tri::Yes;
    auto elems = o.stabilizer->enumerate(finite ? stab_cap : stab_length, stab_cap);
    truncated_.push_back(!finite || elems.size() >= stab_cap);
    stab_elements_.push_back(std::move(elems));
  }
}

bool IncidenceOracle::any_truncated() const {
  return std::any_of(truncated_.begin(), truncated_.end(), [](bool b) { return b; });
}

std::vector<Incident> IncidenceOracle::incident(const GSetElem& v) const {
  const GGraph& g = *graph_;
  const GroupPtr& grp = g.group();
  std::vector<Incident> out;
  std::unordered_set<GSetElem, GSetElemHash> seen;
  for (std::size_t j = 0; j < g.attach().size(); ++j) {
    const Attach& a = g.attach()[j];
    for (int end = 0; end < 2; ++end) {
      const GSetElem& mine = end == 0 ? a.u : a.v;
      const GSetElem& theirs = end == 0 ? a.v : a.u;
      if (mine.orbit != v.orbit) continue;
      const Word mine_inv = inverse(mine.rep);
      // h . mine = v  <=>  h = v.rep s mine.rep^-1 with s in the orbit stabilizer
      for (const auto& s : stab_elements_[v.orbit]) {
        const Word h = grp->normalize(concat({v.rep, s, mine_inv}));
        GSetElem e = g.edges()->element(j, h);
        if (!seen.insert(e).second) continue;
        out.push_back(Incident{std::move(e), g.vertices()->act(h, theirs)});
      }
    }
  }
  return out;
}

// --- validation -----------------------------------------------------------------

ValidationReport validate_graph(const GGraph& g, std::size_t radius) {
  ValidationReport rep;
  const GSet& vs = *g.vertices();
  const GSet& es = *g.edges();
  const GroupPtr& grp = g.group();
  for (std::size_t j = 0; j < g.attach().size(); ++j) {
    const Attach& a = g.attach()[j];
    if (vs.equal(a.u, a.v)) {
      rep.simplicial = false;
      rep.witnesses.push_back("loop at edge orbit '" + es.orbit(j).id + "'");
    }
    for (const auto& s : es.orbit(j).stabilizer->enumerate(radius, 2000)) {
      const GSetElem su = vs.act(s, a.u);
      const GSetElem sv = vs.act(s, a.v);
      if (su == a.u && sv == a.v) continue;
      if (su == a.v && sv == a.u) {
        if (rep.no_inversions)
          rep.witnesses.push_back("edge orbit '" + es.orbit(j).id + "' inverted by " + grp->format(s));
        rep.no_inversions = false;
        continue;
      }
      rep.equivariant = false;
      rep.witnesses.push_back("edge stabilizer element " + grp->format(s) + " of '" + es.orbit(j).id +
                              "' moves an endpoint");
    }
  }
  // Parallel edges: two distinct edges at a vertex with the same far endpoint.
  auto gg = std::make_shared<GGraph>(g);
  IncidenceOracle inc(gg, radius);
  std::vector<Word> gens;
  for (std::size_t i = 0; i < grp->rank(); ++i) gens.push_back(Word{letter(i)});
  const auto ball = ball_enumerate(grp, gens, radius, 20000);
  for (std::size_t o = 0; o < vs.orbit_count() && rep.simplicial; ++o) {
    for (const auto& h : ball) {
      const GSetElem v = vs.element(o, h);
      std::set<GSetElem> far;
      bool bad = false;
      for (const auto& i : inc.incident(v)) {
        if (i.other == v || !far.insert(i.other).second) {
          rep.witnesses.push_back("parallel edges or loop at " + vs.format(v) + " via " + es.format(i.edge));
          bad = true;
          break;
        }
      }
      if (bad) {
        rep.simplicial = false;
        break;
      }
    }
  }
  return rep;
}

// --- induction ------------------------------------------------------------------

InducedGraph induce_graph(const GGraphPtr& lambda) {
  Induced vi = induce_gset(lambda->vertices());
  Induced ei = induce_gset(lambda->edges());
  auto out = std::make_shared<GGraph>(lambda->name() + "^G", vi.set, ei.set, lambda->attach());
  return InducedGraph{out, GraphMorphism{vi.iota, ei.iota}};
}

GGraphPtr transport_graph(const GGraph& g, const Monomorphism& along) {
  auto vs = transport(*g.vertices(), along);
  auto es = transport(*g.edges(), along);
  std::vector<Attach> att;
  for (const auto& a : g.attach()) {
    att.push_back(Attach{vs->element(a.u.orbit, along.apply(a.u.rep)), vs->element(a.v.orbit, along.apply(a.v.rep))});
  }
  return std::make_shared<GGraph>(g.name(), vs, es, std::move(att));
}

namespace {

GSetElem move_along(const GSet& target, const GSetElem& x, const Monomorphism& along) {
  return target.element(x.orbit, along.apply(x.rep));
}

void require_fixed(const GSet& s, const GSetElem& x, const Subgroup& c, std::size_t offset, const GroupPtr& ambient,
                   const std::string& what) {
  for (const auto& w : c.generators()) {
    const Word gw = shift(w, offset);
    if (s.act(gw, x) != x)
      throw FixedPointViolation(what + " is moved by " + ambient->format(gw));
  }
}

}  // namespace

// --- C-pushout --------------------------------------------------------------------

PushoutGraph c_pushout(const GGraphPtr& x_graph, const GGraphPtr& y_graph, const GSetElem& x, const GSetElem& y,
                       const GroupPtr& amalgam) {
  const auto* am = dynamic_cast<const AmalgamGroup*>(amalgam.get());
  if (!am) throw GroupMismatch("C-pushout needs an amalgamated product");
  if (am->factor(0) != x_graph->group() || am->factor(1) != y_graph->group())
    throw GroupMismatch("input graphs must live over the two factors");
  require_fixed(*x_graph->vertices(), x, *am->edge_handle(0), 0, x_graph->group(), "x");
  require_fixed(*y_graph->vertices(), y, *am->edge_handle(1), 0, y_graph->group(), "y");

  const Monomorphism ia = factor_inclusion(amalgam, 0);
  const Monomorphism ib = factor_inclusion(amalgam, 1);
  InducedGraph xi = induce_graph(transport_graph(*x_graph, ia));
  InducedGraph yi = induce_graph(transport_graph(*y_graph, ib));

  std::vector<Word> cgens;
  for (const auto& w : am->edge_handle(0)->generators()) cgens.push_back(am->to_global(w, 0));
  auto r = std::make_shared<GSet>(amalgam, std::vector<Orbit>{Orbit{"C", make_subgroup(amalgam, cgens)}});
  const GSetElem xg = move_along(*xi.graph->vertices(), x, ia);
  const GSetElem yg = move_along(*yi.graph->vertices(), y, ib);
  GMap phi = make_gmap(r, xi.graph->vertices(), {xg});
  GMap psi = make_gmap(r, yi.graph->vertices(), {yg});
  Pushout p = pushout_gsets(phi, psi, xg.orbit);

  auto edges = disjoint_union(*xi.graph->edges(), *yi.graph->edges());
  std::vector<Attach> att;
  for (const auto& a : xi.graph->attach()) att.push_back(Attach{p.iota.apply(a.u), p.iota.apply(a.v)});
  for (const auto& a : yi.graph->attach()) att.push_back(Attach{p.jota.apply(a.u), p.jota.apply(a.v)});

  Provenance prov;
  prov.kind = Provenance::Kind::Pushout;
  prov.z = p.iota.apply(xg);
  prov.z_orbit = prov.z.orbit;
  const std::size_t nx = xi.graph->vertices()->orbit_count();
  prov.vertex_side.assign(p.z->orbit_count(), -2);
  for (std::size_t m = 0; m < p.class_of.size(); ++m) {
    int& side = prov.vertex_side[p.class_of[m]];
    const int mine = m < nx ? 0 : 1;
    side = side == -2 ? mine : (side == mine ? mine : -1);
  }
  prov.edge_side.assign(xi.graph->edges()->orbit_count(), 0);
  prov.edge_side.resize(edges->orbit_count(), 1);
  prov.x_graph = x_graph;
  prov.y_graph = y_graph;
  prov.x = x;
  prov.y = y;
  prov.side_a = factor_subgroup(amalgam, 0, whole_group(am->factor(0)));
  prov.side_b = factor_subgroup(amalgam, 1, whole_group(am->factor(1)));

  auto z = std::make_shared<GGraph>("pushout(" + x_graph->name() + "," + y_graph->name() + ")", p.z, edges,
                                    std::move(att), std::move(prov));
  std::vector<GSetElem> e1, e2;
  for (std::size_t j = 0; j < xi.graph->edges()->orbit_count(); ++j) e1.push_back(edges->base(j));
  for (std::size_t j = 0; j < yi.graph->edges()->orbit_count(); ++j) e2.push_back(edges->base(j + e1.size()));
  PushoutGraph out{z,
                   GraphMorphism{p.iota, GMap{xi.graph->edges(), edges, std::move(e1)}},
                   GraphMorphism{p.jota, GMap{yi.graph->edges(), edges, std::move(e2)}},
                   std::move(xi),
                   std::move(yi),
                   std::move(p)};
  return out;
}

// --- coalescence ------------------------------------------------------------------

CoalescedGraph coalesce(const GGraphPtr& x_graph, const GSetElem& x, const GSetElem& y, const GroupPtr& hnn,
                        bool require_disjoint) {
  const auto* h = dynamic_cast<const HNNGroup*>(hnn.get());
  if (!h) throw GroupMismatch("coalescence needs an HNN extension");
  if (h->factor(0) != x_graph->group()) throw GroupMismatch("input graph must live over the base group");
  require_fixed(*x_graph->vertices(), x, *h->associated(), 0, x_graph->group(), "x");
  require_fixed(*x_graph->vertices(), y, *h->image(), 0, x_graph->group(), "y");
  if (require_disjoint && x.orbit == y.orbit)
    throw SameOrbitViolation("x and y lie in the same orbit '" + x_graph->vertices()->orbit(x.orbit).id + "'");

  const Monomorphism ia = factor_inclusion(hnn, 0);
  InducedGraph xi = induce_graph(transport_graph(*x_graph, ia));
  const GSet& vi = *xi.graph->vertices();
  const GSetElem xg = move_along(vi, x, ia);
  const GSetElem yg = move_along(vi, y, ia);
  const Word t{h->stable_letter()};
  Quotient q = quotient_gset(xi.graph->vertices(), {{vi.act(t, xg), yg}}, yg.orbit);

  std::vector<Attach> att;
  for (const auto& a : xi.graph->attach()) att.push_back(Attach{q.map.apply(a.u), q.map.apply(a.v)});
  Provenance prov;
  prov.kind = Provenance::Kind::Coalescence;
  prov.z = q.map.apply(yg);
  prov.z_orbit = prov.z.orbit;
  prov.vertex_side.assign(q.set->orbit_count(), 0);
  prov.vertex_side[prov.z_orbit] = -1;
  prov.edge_side.assign(xi.graph->edges()->orbit_count(), 0);
  prov.x_graph = x_graph;
  prov.x = x;
  prov.y = y;
  prov.side_a = factor_subgroup(hnn, 0, whole_group(h->factor(0)));

  auto z = std::make_shared<GGraph>("coalescence(" + x_graph->name() + ")", q.set, xi.graph->edges(), std::move(att),
                                    std::move(prov));
  GraphMorphism rho{q.map, identity_map(xi.graph->edges())};
  return CoalescedGraph{z, std::move(rho), std::move(xi), std::move(q)};
}

// --- coned-off Cayley graphs ----------------------------------------------------

GGraphPtr coned_off(const GroupPtr& g, const std::vector<SubgroupPtr>& peripherals, const std::vector<Word>& s,
                    std::string name) {
  std::vector<Orbit> vorb{Orbit{"G", trivial_subgroup(g)}};
  for (const auto& h : peripherals) {
    if (h->ambient() != g) throw MismatchedAmbient("peripheral subgroup over another group");
    vorb.push_back(Orbit{"G/" + h->describe(), h});
  }
  auto vs = std::make_shared<GSet>(g, vorb);
  std::vector<Orbit> eorb;
  std::vector<Attach> att;
  std::vector<Word> used;
  for (const auto& raw : s) {
    const Word w = g->normalize(raw);
    const Word wi = g->normalize(inverse(w));
    if (w.empty()) continue;
    if (std::find(used.begin(), used.end(), w) != used.end() || std::find(used.begin(), used.end(), wi) != used.end())
      continue;
    used.push_back(w);
    // s^2 = 1 makes {1, s} an inverted edge with stabilizer <s>
    SubgroupPtr stab = w == wi ? make_subgroup(g, {w}) : trivial_subgroup(g);
    eorb.push_back(Orbit{"{1," + g->format(w) + "}", stab});
    att.push_back(Attach{vs->base(0), vs->element(0, w)});
  }
  for (std::size_t i = 0; i < peripherals.size(); ++i) {
    eorb.push_back(Orbit{"{1," + vorb[i + 1].id + "}", trivial_subgroup(g)});
    att.push_back(Attach{vs->base(0), vs->base(i + 1)});
  }
  auto es = std::make_shared<GSet>(g, std::move(eorb));
  return std::make_shared<GGraph>(std::move(name), vs, es, std::move(att));
}

// --- Bass-Serre trees -----------------------------------------------------------

GGraphPtr bass_serre(const GroupPtr& split, std::optional<TreeHooks> hooks) {
  if (const auto* am = dynamic_cast<const AmalgamGroup*>(split.get())) {
    auto a = factor_subgroup(split, 0, whole_group(am->factor(0)));
    auto b = factor_subgroup(split, 1, whole_group(am->factor(1)));
    if (!hooks) {
      auto vs = std::make_shared<GSet>(split, std::vector<Orbit>{{"G/A", a}, {"G/B", b}});
      std::vector<Word> cgens;
      for (const auto& w : am->edge_handle(0)->generators()) cgens.push_back(am->to_global(w, 0));
      auto es = std::make_shared<GSet>(split, std::vector<Orbit>{{"G/C", make_subgroup(split, cgens)}});
      return std::make_shared<GGraph>("T(" + split->name() + ")", vs, es,
                                      std::vector<Attach>{{vs->base(0), vs->base(1)}});
    }
    if (hooks->ax->ambient() != am->factor(0) || hooks->by->ambient() != am->factor(1))
      throw MismatchedAmbient("hook subgroups must live in the factors");
    auto p = amalgam_join(split, hooks->ax, hooks->by);
    auto vs = std::make_shared<GSet>(split, std::vector<Orbit>{{"G/A", a}, {"G/P", p}, {"G/B", b}});
    auto es = std::make_shared<GSet>(split, std::vector<Orbit>{{"{A,P}", factor_subgroup(split, 0, hooks->ax)},
                                                               {"{P,B}", factor_subgroup(split, 1, hooks->by)}});
    return std::make_shared<GGraph>("T(" + split->name() + ")", vs, es,
                                    std::vector<Attach>{{vs->base(0), vs->base(1)}, {vs->base(1), vs->base(2)}});
  }
  if (const auto* h = dynamic_cast<const HNNGroup*>(split.get())) {
    auto a = factor_subgroup(split, 0, whole_group(h->factor(0)));
    auto hh = factor_subgroup(split, 0, h->associated());
    auto ph = factor_subgroup(split, 0, h->image());
    auto vs = std::make_shared<GSet>(split, std::vector<Orbit>{{"G/A", a}, {"G/H", hh}});
    auto es = std::make_shared<GSet>(split, std::vector<Orbit>{{"{A,tH}", ph}, {"{A,H}", hh}});
    const Word t{h->stable_letter()};
    return std::make_shared<GGraph>("T(" + split->name() + ")", vs, es,
                                    std::vector<Attach>{{vs->base(0), vs->element(1, t)}, {vs->base(0), vs->base(1)}});
  }
  throw GroupMismatch("Bass-Serre tree needs an amalgam or HNN extension");
}

// --- projection -----------------------------------------------------------------

Projection project_to_tree(const GGraphPtr& z) {
  const Provenance& pv = z->provenance();
  if (pv.kind == Provenance::Kind::None) throw ProvenanceMissing("graph '" + z->name() + "' has no recorded origin");
  const GroupPtr& g = z->group();
  const GSet& vs = *z->vertices();
  GGraphPtr tree;
  GSetElem zi;
  std::vector<GSetElem> images;
  const Word zinv = inverse(pv.z.rep);
  if (pv.kind == Provenance::Kind::Pushout) {
    TreeHooks hk{pv.x_graph->vertices()->stabilizer_of(pv.x), pv.y_graph->vertices()->stabilizer_of(pv.y)};
    tree = bass_serre(g, hk);
    zi = tree->vertices()->base(1);
    for (std::size_t k = 0; k < vs.orbit_count(); ++k) {
      if (k == pv.z_orbit)
        images.push_back(tree->vertices()->element(1, zinv));
      else
        images.push_back(tree->vertices()->base(pv.vertex_side.at(k) == 0 ? 0 : 2));
    }
  } else {
    const auto* h = static_cast<const HNNGroup*>(g.get());
    tree = bass_serre(g);
    const Word t{h->stable_letter()};
    zi = tree->vertices()->element(1, t);
    for (std::size_t k = 0; k < vs.orbit_count(); ++k) {
      if (k == pv.z_orbit)
        images.push_back(tree->vertices()->element(1, concat(zinv, t)));
      else
        images.push_back(tree->vertices()->base(0));
    }
  }
  GMap m = make_gmap(z->vertices(), tree->vertices(), std::move(images));
  return Projection{tree, std::move(m), zi};
}

}  // namespace forge
