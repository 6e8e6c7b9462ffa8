#include "forge/analysis.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>

#include "forge/errors.hpp"
#include "forge/parallel.hpp"

namespace forge {

namespace {
constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

void add_edge(BallView& b, std::size_t u, std::size_t v) {
  b.edges.emplace_back(std::min(u, v), std::max(u, v));
  b.adj[u].push_back(v);
  b.adj[v].push_back(u);
}

void finish(BallView& b) {
  for (auto& a : b.adj) std::sort(a.begin(), a.end());
}
}  // namespace

std::optional<std::size_t> BallView::index_of(const GSetElem& v) const {
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (elems[i] == v) return i;
  return std::nullopt;
}

bool BallView::adjacent(std::size_t a, std::size_t b) const {
  return std::binary_search(adj.at(a).begin(), adj.at(a).end(), b);
}

// --- balls ------------------------------------------------------------------------

BallView ball_view(const GGraphPtr& g, const std::vector<GSetElem>& base, std::size_t radius, BallOptions opts) {
  const std::size_t stab_length = opts.stab_length ? opts.stab_length : std::max<std::size_t>(radius, 1);
  IncidenceOracle inc(g, stab_length);
  BallView b;
  b.radius = radius;
  std::unordered_map<GSetElem, std::size_t, GSetElemHash> index;
  std::vector<std::vector<Incident>> incident;

  auto add_vertex = [&](const GSetElem& v, std::size_t d) {
    if (b.elems.size() >= opts.max_vertices)
      throw BudgetExceeded("ball exceeds " + std::to_string(opts.max_vertices) + " vertices at radius " +
                           std::to_string(d));
    index.emplace(v, b.elems.size());
    b.elems.push_back(v);
    b.depth.push_back(d);
  };
  std::vector<GSetElem> layer;
  for (const auto& v0 : base) {
    const GSetElem v = g->vertices()->element(v0.orbit, v0.rep);
    if (index.count(v)) continue;
    b.base.push_back(b.elems.size());
    add_vertex(v, 0);
    layer.push_back(v);
  }
  std::size_t d = 0;
  while (!layer.empty()) {
    std::vector<std::vector<Incident>> found(layer.size());
    parallel_for(layer.size(), [&](std::size_t i) { found[i] = inc.incident(layer[i]); });
    for (auto& f : found) incident.push_back(std::move(f));
    if (d == radius) break;
    std::set<GSetElem> next;
    for (std::size_t i = incident.size() - layer.size(); i < incident.size(); ++i)
      for (const auto& e : incident[i])
        if (!index.count(e.other)) next.insert(e.other);
    ++d;
    layer.assign(next.begin(), next.end());
    for (const auto& v : layer) add_vertex(v, d);
  }
  b.exhausted = true;
  for (const auto& list : incident)
    for (const auto& e : list)
      if (!index.count(e.other)) b.exhausted = false;
  b.adj.resize(b.elems.size());
  std::set<GSetElem> seen_edges;
  for (std::size_t u = 0; u < incident.size(); ++u) {
    for (const auto& e : incident[u]) {
      auto it = index.find(e.other);
      if (it == index.end() || !seen_edges.insert(e.edge).second) continue;
      add_edge(b, u, it->second);
      b.edge_elems.push_back(e.edge);
    }
  }
  finish(b);
  for (const auto& v : b.elems) b.labels.push_back(g->vertices()->format(v));
  std::vector<bool> has_edges(g->vertices()->orbit_count(), false);
  for (const auto& a : g->attach()) has_edges[a.u.orbit] = has_edges[a.v.orbit] = true;
  for (std::size_t o = 0; o < has_edges.size(); ++o)
    if (has_edges[o] && inc.truncated(o)) b.stabilizers_truncated = true;
  if (b.stabilizers_truncated) b.exhausted = false;
  return b;
}

BallView plain_graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  BallView b;
  b.adj.resize(n);
  b.depth.assign(n, 0);
  b.exhausted = true;
  for (std::size_t i = 0; i < n; ++i) b.labels.push_back(std::to_string(i));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [u, v] : edges) {
    if (u >= n || v >= n || u == v) throw InvalidSpec("plain graph edge out of range or a loop");
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) continue;
    add_edge(b, u, v);
  }
  finish(b);
  if (n) b.base = {0};
  // depth from vertex 0 so that windows over plain graphs behave like balls
  std::vector<std::size_t> dist(n, kInf);
  std::queue<std::size_t> q;
  if (n) {
    dist[0] = 0;
    q.push(0);
  }
  while (!q.empty()) {
    auto u = q.front();
    q.pop();
    for (auto w : b.adj[u])
      if (dist[w] == kInf) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
  }
  std::size_t r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    b.depth[i] = dist[i] == kInf ? 0 : dist[i];
    if (dist[i] != kInf) r = std::max(r, dist[i]);
  }
  b.radius = r;
  return b;
}

BallView cycle_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return plain_graph(n, e);
}

BallView complete_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return plain_graph(n, e);
}

BallView wedge(const BallView& a, std::size_t va, const BallView& b, std::size_t vb) {
  const std::size_t n = a.size() + b.size() - 1;
  std::vector<std::size_t> map(b.size());
  for (std::size_t i = 0, next = a.size(); i < b.size(); ++i) map[i] = i == vb ? va : next++;
  std::vector<std::pair<std::size_t, std::size_t>> e(a.edges.begin(), a.edges.end());
  for (auto [u, v] : b.edges) e.emplace_back(map[u], map[v]);
  BallView out = plain_graph(n, e);
  for (std::size_t i = 0; i < a.size(); ++i) out.labels[i] = "a" + a.labels[i];
  for (std::size_t i = 0; i < b.size(); ++i)
    if (i != vb) out.labels[map[i]] = "b" + b.labels[i];
  return out;
}

BallView induced_subview(const BallView& b, const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> pos(b.size(), kInf);
  for (std::size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = i;
  BallView out;
  out.radius = b.radius;
  out.adj.resize(keep.size());
  out.exhausted = b.exhausted;
  out.stabilizers_truncated = b.stabilizers_truncated;
  for (std::size_t i : keep) {
    out.labels.push_back(b.labels[i]);
    out.depth.push_back(b.depth[i]);
    if (!b.elems.empty()) out.elems.push_back(b.elems[i]);
  }
  for (std::size_t k = 0; k < b.edges.size(); ++k) {
    auto [u, v] = b.edges[k];
    if (pos[u] == kInf || pos[v] == kInf) continue;
    add_edge(out, pos[u], pos[v]);
    if (!b.edge_elems.empty()) out.edge_elems.push_back(b.edge_elems[k]);
  }
  for (std::size_t x : b.base)
    if (pos[x] != kInf) out.base.push_back(pos[x]);
  finish(out);
  return out;
}

// --- angles -----------------------------------------------------------------------

namespace {

// BFS distances from x in b - v; parent links for witnesses.
void bfs_avoiding(const BallView& b, std::size_t v, std::size_t x, std::vector<std::size_t>& dist,
                  std::vector<std::size_t>& parent) {
  dist.assign(b.size(), kInf);
  parent.assign(b.size(), kInf);
  std::queue<std::size_t> q;
  dist[x] = 0;
  q.push(x);
  while (!q.empty()) {
    auto u = q.front();
    q.pop();
    for (auto w : b.adj[u]) {
      if (w == v || dist[w] != kInf) continue;
      dist[w] = dist[u] + 1;
      parent[w] = u;
      q.push(w);
    }
  }
}

}  // namespace

AngleValue angle(std::size_t v, std::size_t x, std::size_t y, const BallView& b) {
  if (!b.adjacent(v, x) || !b.adjacent(v, y))
    throw NotNeighbors(b.labels.at(x) + " or " + b.labels.at(y) + " is not adjacent to " + b.labels.at(v));
  AngleValue out;
  if (x == y) {
    out.value = 0;
    out.exact = true;
    out.witness = {x};
    return out;
  }
  std::vector<std::size_t> dist, parent;
  bfs_avoiding(b, v, x, dist, parent);
  if (dist[y] == kInf) return out;
  out.value = dist[y];
  for (std::size_t u = y; u != kInf; u = parent[u]) out.witness.push_back(u);
  std::reverse(out.witness.begin(), out.witness.end());
  const bool plain = b.elems.empty();
  out.exact = plain || std::all_of(out.witness.begin(), out.witness.end(),
                                   [&](std::size_t u) { return b.depth[u] < b.radius; });
  return out;
}

std::vector<std::optional<std::size_t>> angles_from(std::size_t v, std::size_t x, const BallView& b) {
  std::vector<std::size_t> dist, parent;
  bfs_avoiding(b, v, x, dist, parent);
  std::vector<std::optional<std::size_t>> out;
  for (auto y : b.adj[v]) out.push_back(dist[y] == kInf ? std::nullopt : std::optional<std::size_t>(dist[y]));
  return out;
}

std::string to_string(FineVerdict v) {
  switch (v) {
    case FineVerdict::LocallyFinite: return "locally-finite";
    case FineVerdict::Violation: return "violation";
    case FineVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

WindowMaker ggraph_window(const GGraphPtr& g, const GSetElem& v, std::size_t hop_cap, std::size_t max_vertices) {
  return [=](std::size_t r) {
    BallOptions o;
    o.stab_length = std::max<std::size_t>(r, 1);
    o.max_vertices = max_vertices;
    return ball_view(g, {v}, std::min(r, hop_cap), o);
  };
}

WindowMaker fixed_window(const BallView& b) {
  return [b](std::size_t) { return b; };
}

namespace {

// Per neighbor of vertex 0: the other neighbors within angle D.
std::map<std::string, std::vector<std::string>> close_families(const BallView& b, const std::set<std::string>& only,
                                                               std::size_t d) {
  const auto& nb = b.adj[0];
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < nb.size(); ++i)
    if (only.count(b.labels[nb[i]])) targets.push_back(i);
  std::vector<std::vector<std::string>> fam(targets.size());
  parallel_for(targets.size(), [&](std::size_t k) {
    const std::size_t x = nb[targets[k]];
    const auto a = angles_from(0, x, b);
    for (std::size_t j = 0; j < nb.size(); ++j)
      if (nb[j] != x && a[j] && *a[j] <= d) fam[k].push_back(b.labels[nb[j]]);
  });
  std::map<std::string, std::vector<std::string>> out;
  for (std::size_t k = 0; k < targets.size(); ++k) out[b.labels[nb[targets[k]]]] = std::move(fam[k]);
  return out;
}

}  // namespace

FinenessCertificate fineness_probe(const WindowMaker& window, std::size_t angle_bound, std::size_t radius,
                                   std::size_t threshold) {
  FinenessCertificate c;
  c.angle_bound = angle_bound;
  c.radius = radius;
  c.threshold = threshold;
  const BallView core_view = window(std::max<std::size_t>(1, radius > angle_bound ? radius - angle_bound : 1));
  std::set<std::string> core;
  for (auto x : core_view.adj.at(0)) core.insert(core_view.labels[x]);
  const BallView at_r = window(radius);
  const BallView at_r2 = window(radius + 2);
  const auto f1 = close_families(at_r, core, angle_bound);
  const auto f2 = close_families(at_r2, core, angle_bound);
  bool stable = true;
  for (const auto& [x, fam] : f1) {
    c.max_count = std::max(c.max_count, fam.size());
    auto it = f2.find(x);
    const std::size_t later = it == f2.end() ? 0 : it->second.size();
    if (later != fam.size()) stable = false;
    if (fam.size() >= threshold && later > fam.size() && c.verdict != FineVerdict::Violation) {
      c.verdict = FineVerdict::Violation;
      c.witness.push_back(x);
      c.witness.insert(c.witness.end(), fam.begin(), fam.end());
      c.note = std::to_string(fam.size()) + " neighbors within angle " + std::to_string(angle_bound) + " of " + x +
               " at radius " + std::to_string(radius) + ", " + std::to_string(later) + " at radius " +
               std::to_string(radius + 2);
    }
  }
  if (c.verdict == FineVerdict::Violation) return c;
  if (stable) {
    c.verdict = FineVerdict::LocallyFinite;
    c.note = "angle counts of " + std::to_string(f1.size()) + " core neighbors unchanged between radii";
  } else {
    c.note = "angle counts still moving below the threshold";
  }
  return c;
}

bool window_fine_at(const BallView& b, std::size_t v, std::size_t angle_bound, std::size_t threshold) {
  const auto& nb = b.adj.at(v);
  std::vector<std::size_t> count(nb.size(), 0);
  parallel_for(nb.size(), [&](std::size_t i) {
    const auto a = angles_from(v, nb[i], b);
    for (std::size_t j = 0; j < nb.size(); ++j)
      if (j != i && a[j] && *a[j] <= angle_bound) ++count[i];
  });
  return std::all_of(count.begin(), count.end(), [&](std::size_t c) { return c < threshold; });
}

// --- embedded paths ---------------------------------------------------------------

std::vector<std::size_t> embedded_path_counts_from(std::size_t x, std::size_t n, const BallView& b, std::size_t cap) {
  std::vector<std::size_t> count(b.size(), 0);
  std::vector<bool> on_path(b.size(), false);
  std::size_t steps = 0;
  // explicit stack of (vertex, next neighbor position)
  std::vector<std::pair<std::size_t, std::size_t>> stack{{x, 0}};
  on_path[x] = true;
  count[x] = 1;
  while (!stack.empty()) {
    auto& [u, pos] = stack.back();
    if (stack.size() - 1 == n || pos == b.adj[u].size()) {
      on_path[u] = false;
      stack.pop_back();
      continue;
    }
    const std::size_t w = b.adj[u][pos++];
    if (on_path[w]) continue;
    if (++steps > cap) throw CombinatorialBlowup("more than " + std::to_string(cap) + " path extensions");
    ++count[w];
    on_path[w] = true;
    stack.emplace_back(w, 0);
  }
  return count;
}

std::size_t embedded_path_count(std::size_t x, std::size_t y, std::size_t n, const BallView& b, std::size_t cap) {
  return embedded_path_counts_from(x, n, b, cap).at(y);
}

// --- hyperbolicity ----------------------------------------------------------------

HyperbolicityEstimate delta_estimate(const BallView& b, std::size_t max_vertices) {
  const std::size_t n = b.size();
  if (n > max_vertices)
    throw BudgetExceeded("delta estimate limited to " + std::to_string(max_vertices) + " vertices, window has " +
                         std::to_string(n));
  HyperbolicityEstimate est;
  est.radius = b.radius;
  est.vertices = n;
  if (n == 0) return est;
  constexpr std::uint8_t kFar = 255;
  std::vector<std::uint8_t> dist(n * n, kFar);
  parallel_for(n, [&](std::size_t s) {
    std::uint8_t* row = &dist[s * n];
    std::queue<std::size_t> q;
    row[s] = 0;
    q.push(s);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto w : b.adj[u])
        if (row[w] == kFar) {
          if (row[u] + 1 >= kFar) throw BudgetExceeded("window diameter too large for delta estimate");
          row[w] = static_cast<std::uint8_t>(row[u] + 1);
          q.push(w);
        }
    }
  });
  auto d = [&](std::size_t u, std::size_t v) { return dist[u * n + v]; };

  // far[(y*n + w)*n + p]: max over geodesics from y to w of the distance from p to the geodesic
  std::vector<std::uint8_t> far(n * n * n, 0);
  parallel_for(n, [&](std::size_t y) {
    std::vector<std::size_t> dag;
    std::vector<std::uint8_t> best(n);
    for (std::size_t w = 0; w < n; ++w) {
      if (d(y, w) == kFar) continue;
      dag.clear();
      for (std::size_t q = 0; q < n; ++q)
        if (d(y, q) != kFar && d(q, w) != kFar && d(y, q) + d(q, w) == d(y, w)) dag.push_back(q);
      // process from w back to y
      std::sort(dag.begin(), dag.end(), [&](std::size_t a, std::size_t c) { return d(y, a) > d(y, c); });
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q : dag) {
          std::uint8_t bottleneck = 0;
          bool has_next = false;
          for (auto nx : b.adj[q]) {
            if (d(y, nx) == d(y, q) + 1 && d(y, nx) != kFar && d(nx, w) != kFar &&
                d(y, nx) + d(nx, w) == d(y, w)) {
              bottleneck = std::max(bottleneck, best[nx]);
              has_next = true;
            }
          }
          best[q] = has_next ? std::min(d(p, q), bottleneck) : d(p, q);
        }
        far[(y * n + w) * n + p] = best[y];
      }
    }
  });

  std::vector<std::size_t> row_best(n, 0);
  std::vector<std::vector<std::size_t>> row_witness(n);
  parallel_for(n, [&](std::size_t x) {
    std::size_t top = 0;
    std::vector<std::size_t> wit;
    for (std::size_t y = 0; y < n; ++y) {
      if (d(x, y) == kFar) continue;
      for (std::size_t p = 0; p < n; ++p) {
        if (d(x, p) == kFar || d(x, p) + d(p, y) != d(x, y)) continue;
        for (std::size_t w = 0; w < n; ++w) {
          if (d(x, w) == kFar) continue;
          const std::size_t a = far[(w * n + x) * n + p];
          if (a <= top) continue;
          const std::size_t v = std::min<std::size_t>(a, far[(y * n + w) * n + p]);
          if (v > top) {
            top = v;
            wit = {x, y, w, p};
          }
        }
      }
    }
    row_best[x] = top;
    row_witness[x] = std::move(wit);
  });
  for (std::size_t x = 0; x < n; ++x)
    if (row_best[x] > est.delta) {
      est.delta = row_best[x];
      est.witness = row_witness[x];
    }
  return est;
}

// --- decompositions ---------------------------------------------------------------

std::vector<std::vector<std::size_t>> components_without(const BallView& b, const std::vector<std::size_t>& removed) {
  std::vector<bool> gone(b.size(), false);
  for (auto r : removed) gone.at(r) = true;
  std::vector<bool> seen(b.size(), false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < b.size(); ++s) {
    if (gone[s] || seen[s]) continue;
    std::vector<std::size_t> comp{s};
    seen[s] = true;
    for (std::size_t k = 0; k < comp.size(); ++k)
      for (auto w : b.adj[comp[k]])
        if (!gone[w] && !seen[w]) {
          seen[w] = true;
          comp.push_back(w);
        }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

CutVertexReport cut_vertex_audit(const GGraphPtr& z, const BallView& b) {
  const Provenance& pv = z->provenance();
  if (pv.kind == Provenance::Kind::None) throw ProvenanceMissing("graph '" + z->name() + "' has no recorded origin");
  CutVertexReport rep;
  if (b.elems.empty()) throw WindowTooSmall("window is not cut from a G-graph");
  auto zi = b.index_of(pv.z);
  if (!zi || b.depth[*zi] + 1 > b.radius) throw WindowTooSmall("window does not contain the neighborhood of z");
  if (z->edges()->orbit_count() == 0) {
    rep.vacuous = true;
    return rep;
  }
  std::vector<std::size_t> removed;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.elems[i].orbit == pv.z_orbit) removed.push_back(i);
  const auto comps = components_without(b, removed);
  rep.components = comps.size();
  std::vector<std::size_t> comp_of(b.size(), kInf);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (auto v : comps[c]) comp_of[v] = c;
  std::vector<std::optional<std::string>> key(comps.size());
  std::vector<bool> bad(comps.size(), false);
  for (std::size_t k = 0; k < b.edges.size(); ++k) {
    auto [u, v] = b.edges[k];
    const std::size_t c = comp_of[u] != kInf ? comp_of[u] : comp_of[v];
    if (c == kInf) {
      rep.pass = false;
      rep.failures.push_back("edge between two translates of z: " + b.labels[u] + " - " + b.labels[v]);
      continue;
    }
    const GSetElem& e = b.edge_elems[k];
    const int side = pv.edge_side.at(e.orbit);
    const SubgroupPtr& h = side == 0 ? pv.side_a : pv.side_b;
    const std::string here = std::string(side == 0 ? "X" : "Y") + "@" + z->group()->format(h->coset_rep(e.rep));
    if (!key[c]) {
      key[c] = here;
    } else if (*key[c] != here && !bad[c]) {
      bad[c] = true;
      rep.pass = false;
      rep.failures.push_back("component of " + b.labels[comps[c].front()] + " meets " + *key[c] + " and " + here);
    }
  }
  for (std::size_t c = 0; c < comps.size(); ++c) rep.pieces.push_back(key[c].value_or("isolated"));
  return rep;
}

DecompositionReport decomposition_audit(const BallView& b, const std::vector<std::size_t>& cut, std::size_t angle_bound,
                                        std::size_t threshold) {
  DecompositionReport rep;
  const auto comps = components_without(b, cut);
  std::vector<std::vector<std::size_t>> pieces;
  std::vector<std::vector<std::size_t>> pieces_of(b.size());
  for (const auto& c : comps) {
    std::set<std::size_t> closure(c.begin(), c.end());
    for (auto v : c)
      for (auto w : b.adj[v]) closure.insert(w);
    pieces.emplace_back(closure.begin(), closure.end());
    for (auto v : closure) pieces_of[v].push_back(pieces.size() - 1);
  }
  rep.pieces = pieces.size();
  std::vector<BallView> views;
  for (const auto& p : pieces) views.push_back(induced_subview(b, p));
  std::vector<char> whole(b.size());
  parallel_for(b.size(), [&](std::size_t v) { whole[v] = window_fine_at(b, v, angle_bound, threshold); });
  for (std::size_t v = 0; v < b.size(); ++v) {
    bool all = true;
    for (auto pi : pieces_of[v]) {
      const auto& p = pieces[pi];
      const std::size_t local = static_cast<std::size_t>(std::lower_bound(p.begin(), p.end(), v) - p.begin());
      if (!window_fine_at(views[pi], local, angle_bound, threshold)) {
        all = false;
        rep.attributed.emplace_back(v, pi);
      }
    }
    if (!whole[v]) rep.non_fine_vertices.push_back(v);
    if (static_cast<bool>(whole[v]) != all) {
      rep.pass = false;
      rep.failures.push_back("fineness at " + b.labels[v] + " differs from its pieces");
    }
  }
  for (auto u : cut) {
    const auto& nb = b.adj[u];
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const auto a = angles_from(u, nb[i], b);
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        const bool shared = std::any_of(pieces_of[nb[i]].begin(), pieces_of[nb[i]].end(), [&](std::size_t p) {
          return std::find(pieces_of[nb[j]].begin(), pieces_of[nb[j]].end(), p) != pieces_of[nb[j]].end();
        });
        if (!shared && a[j]) {
          rep.pass = false;
          rep.failures.push_back("finite angle at cut vertex " + b.labels[u] + " between " + b.labels[nb[i]] +
                                 " and " + b.labels[nb[j]]);
        }
      }
    }
  }
  return rep;
}

}  // namespace forge

// --- audits -----------------------------------------------------------------------

namespace forge {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

bool AuditReport::pass() const {
  return std::none_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.verdict == Verdict::Fail; });
}

bool AuditReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.verdict == Verdict::Pass; });
}

namespace {

std::vector<Word> generator_words(const GroupPtr& g) {
  std::vector<Word> gens;
  for (std::size_t i = 0; i < g->rank(); ++i) gens.push_back(Word{letter(i)});
  return gens;
}

bool all_in(const Subgroup& h, const std::vector<Word>& words, const GroupPtr& g, const Word& conj) {
  return std::all_of(words.begin(), words.end(), [&](const Word& w) {
    return h.contains(g->normalize(concat({conj, w, inverse(conj)}))) == Tri::Yes;
  });
}

// Some x in the conjugator ball with x K x^-1 <= H (and equality when `both`).
std::optional<Word> conjugate_into(const Subgroup& k, const Subgroup& h, const GroupPtr& g, std::size_t budget,
                                   bool both) {
  for (const auto& x : ball_enumerate(g, generator_words(g), budget, 200000)) {
    if (!all_in(h, k.generators(), g, x)) continue;
    if (both && !all_in(k, h.generators(), g, g->normalize(inverse(x)))) continue;
    return x;
  }
  return std::nullopt;
}

Condition edge_stabilizers_finite(const GGraph& g, const std::string& name) {
  Condition c{name, Verdict::Pass, "all edge stabilizers finite"};
  for (const auto& o : g.edges()->orbits()) {
    const Tri f = o.stabilizer->finite();
    if (f == Tri::No) return Condition{name, Verdict::Fail, "edge orbit '" + o.id + "' has infinite stabilizer"};
    if (f == Tri::Unknown) c = Condition{name, Verdict::Inconclusive, "finiteness of '" + o.id + "' undecided"};
  }
  return c;
}

Condition vertex_stabilizers_peripheral(const GGraph& g, const std::vector<SubgroupPtr>& hs, const AuditBudgets& b,
                                        const std::string& name) {
  Condition c{name, Verdict::Pass, ""};
  for (const auto& o : g.vertices()->orbits()) {
    if (o.stabilizer->finite() == Tri::Yes) continue;
    bool found = false;
    for (std::size_t i = 0; i < hs.size() && !found; ++i) {
      if (auto x = conjugate_into(*o.stabilizer, *hs[i], g.group(), b.conjugacy, false)) {
        found = true;
        c.detail += o.id + " -> H" + std::to_string(i) + " via " + g.group()->format(*x) + "; ";
      }
    }
    if (!found) {
      c.verdict = Verdict::Inconclusive;
      c.detail += o.id + ": no conjugator into a peripheral within radius " + std::to_string(b.conjugacy) + "; ";
    }
  }
  if (c.detail.empty()) c.detail = "all vertex stabilizers finite";
  return c;
}

Condition peripherals_realized(const GGraph& g, const std::vector<SubgroupPtr>& hs, const AuditBudgets& b,
                               const std::string& name) {
  Condition c{name, Verdict::Pass, ""};
  for (std::size_t i = 0; i < hs.size(); ++i) {
    bool found = false;
    for (const auto& o : g.vertices()->orbits()) {
      if (auto x = conjugate_into(*o.stabilizer, *hs[i], g.group(), b.conjugacy, true)) {
        c.detail += "H" + std::to_string(i) + " = stabilizer of " + o.id + "; ";
        found = true;
        break;
      }
    }
    if (!found) {
      c.verdict = Verdict::Fail;
      c.detail += "H" + std::to_string(i) + " is no vertex stabilizer up to the conjugacy budget; ";
    }
  }
  if (hs.empty()) c.detail = "no peripheral subgroups";
  return c;
}

}  // namespace

AuditReport gh_graph_audit(const GGraphPtr& g, const std::vector<SubgroupPtr>& hs, const AuditBudgets& b) {
  AuditReport rep;
  rep.conditions.push_back(Condition{"finitely many vertex orbits", Verdict::Pass,
                                     std::to_string(g->vertices()->orbit_count()) + " orbits"});
  rep.conditions.push_back(edge_stabilizers_finite(*g, "finite edge stabilizers"));
  rep.conditions.push_back(vertex_stabilizers_peripheral(*g, hs, b, "vertex stabilizers finite or peripheral"));
  rep.conditions.push_back(peripherals_realized(*g, hs, b, "peripherals are vertex stabilizers"));

  Condition hyp{"hyperbolic", Verdict::Inconclusive, ""};
  if (g->vertices()->orbit_count() > 0) {
    for (std::size_t r = b.delta_radius; r >= 1; --r) {
      try {
        BallOptions o;
        o.stab_length = b.delta_stab_length;
        o.max_vertices = b.delta_max_vertices;
        const auto est = delta_estimate(ball_view(g, {g->vertices()->base(0)}, r, o), b.delta_max_vertices);
        hyp.verdict = est.delta <= b.delta_bound ? Verdict::Pass : Verdict::Inconclusive;
        hyp.detail = "delta=" + std::to_string(est.delta) + " on radius " + std::to_string(r) + " (" +
                     std::to_string(est.vertices) + " vertices)";
        break;
      } catch (const BudgetExceeded&) {
        hyp.detail = "window too large at radius " + std::to_string(r);
      }
    }
  }
  rep.conditions.push_back(hyp);

  Condition fine{"fine at infinite-stabilizer vertices", Verdict::Pass, ""};
  for (std::size_t o = 0; o < g->vertices()->orbit_count(); ++o) {
    const auto& orb = g->vertices()->orbit(o);
    if (orb.stabilizer->finite() == Tri::Yes) continue;
    FinenessCertificate cert;
    try {
      cert = fineness_probe(ggraph_window(g, g->vertices()->base(o), b.angle_bound / 2 + 2, b.max_vertices),
                            b.angle_bound, b.radius, b.threshold);
    } catch (const BudgetExceeded& e) {
      cert.verdict = FineVerdict::Inconclusive;
      cert.note = e.what();
    }
    fine.detail += orb.id + ": " + to_string(cert.verdict) + " (" + cert.note + "); ";
    if (cert.verdict == FineVerdict::Violation) {
      fine.verdict = Verdict::Fail;
      fine.detail += "witness";
      for (const auto& w : cert.witness) fine.detail += " " + w;
      fine.detail += "; ";
    } else if (cert.verdict == FineVerdict::Inconclusive && fine.verdict == Verdict::Pass) {
      fine.verdict = Verdict::Inconclusive;
    }
  }
  if (fine.detail.empty()) fine.detail = "no vertex with infinite stabilizer";
  rep.conditions.push_back(fine);

  Condition proper{"proper pair", Verdict::Pass, "fewer than two infinite peripherals"};
  std::size_t infinite = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (hs[i]->finite() == Tri::Yes) continue;
    ++infinite;
    for (std::size_t j = i + 1; j < hs.size(); ++j) {
      if (hs[j]->finite() == Tri::Yes) continue;
      if (auto x = conjugate_into(*hs[i], *hs[j], g->group(), b.conjugacy, true)) {
        proper = Condition{"proper pair", Verdict::Fail,
                           "H" + std::to_string(i) + " and H" + std::to_string(j) + " are conjugate by " +
                               g->group()->format(*x)};
        rep.conditions.push_back(proper);
        return rep;
      }
    }
  }
  if (infinite >= 2)
    proper = Condition{"proper pair", Verdict::Inconclusive,
                       "no conjugator between infinite peripherals within radius " + std::to_string(b.conjugacy)};
  rep.conditions.push_back(proper);
  return rep;
}

AuditReport cayley_abels_audit(const GGraphPtr& g, const std::vector<SubgroupPtr>& hs, const AuditBudgets& b) {
  AuditReport rep;
  const GSet& vs = *g->vertices();
  Condition conn{"connected", Verdict::Inconclusive, ""};
  if (vs.orbit_count() == 0) {
    conn = Condition{"connected", Verdict::Pass, "empty graph"};
  } else {
    BallOptions o;
    o.stab_length = 1;
    o.max_vertices = b.max_vertices;
    try {
      const BallView ball = ball_view(g, {vs.base(0)}, b.connect_radius, o);
      std::vector<GSetElem> needed;
      for (std::size_t k = 0; k < vs.orbit_count(); ++k) needed.push_back(vs.base(k));
      for (const auto& s : generator_words(g->group())) needed.push_back(vs.act(s, vs.base(0)));
      std::string missing;
      for (const auto& v : needed)
        if (!ball.index_of(v)) missing = vs.format(v);
      if (missing.empty()) {
        conn = Condition{"connected", Verdict::Pass, "generator translates and orbit bases reached"};
      } else if (ball.exhausted) {
        conn = Condition{"connected", Verdict::Fail, "component of the base vertex misses " + missing};
      } else {
        conn.detail = missing + " not reached within radius " + std::to_string(b.connect_radius);
      }
    } catch (const BudgetExceeded& e) {
      conn.detail = e.what();
    }
  }
  rep.conditions.push_back(conn);
  rep.conditions.push_back(Condition{"cocompact", Verdict::Pass,
                                     std::to_string(vs.orbit_count()) + " vertex orbits, " +
                                         std::to_string(g->edges()->orbit_count()) + " edge orbits"});
  const auto val = validate_graph(*g, 2);
  rep.conditions.push_back(Condition{"simplicial", val.simplicial && val.equivariant ? Verdict::Pass : Verdict::Fail,
                                     val.witnesses.empty() ? "" : val.witnesses.front()});
  rep.conditions.push_back(edge_stabilizers_finite(*g, "finite edge stabilizers"));
  rep.conditions.push_back(vertex_stabilizers_peripheral(*g, hs, b, "vertex stabilizers finite or peripheral"));
  rep.conditions.push_back(peripherals_realized(*g, hs, b, "peripherals are vertex stabilizers"));

  Condition same{"equal infinite stabilizers share an orbit", Verdict::Pass, ""};
  for (std::size_t i = 0; i < vs.orbit_count(); ++i) {
    const auto& si = vs.orbit(i).stabilizer;
    if (si->finite() == Tri::Yes) continue;
    for (std::size_t j = i + 1; j < vs.orbit_count(); ++j) {
      const auto& sj = vs.orbit(j).stabilizer;
      if (sj->finite() == Tri::Yes) continue;
      if (auto x = conjugate_into(*si, *sj, g->group(), b.conjugacy, true)) {
        same.verdict = Verdict::Fail;
        same.detail += "'" + vs.orbit(i).id + "' and '" + vs.orbit(j).id + "' have conjugate stabilizers via " +
                       g->group()->format(*x) + "; ";
      }
    }
  }
  rep.conditions.push_back(same);
  return rep;
}

}  // namespace forge
