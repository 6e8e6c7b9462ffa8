#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "forge/ggraph.hpp"

namespace forge {

/// A finite window onto a graph. Vertices are indices; for windows cut out of
/// a G-graph `elems` holds the canonical vertex each index stands for.
struct BallView {
  std::size_t radius = 0;
  std::vector<std::string> labels;
  std::vector<GSetElem> elems;                  // empty for plain graphs
  std::vector<std::size_t> depth;               // hops from the base set
  std::vector<std::vector<std::size_t>> adj;    // sorted
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<GSetElem> edge_elems;             // parallel to `edges` when cut from a G-graph
  std::vector<std::size_t> base;
  bool stabilizers_truncated = false;  // some vertex with edges had its stabilizer cut short
  bool exhausted = false;              // BFS ran out of vertices before the radius

  std::size_t size() const { return adj.size(); }
  std::optional<std::size_t> index_of(const GSetElem& v) const;
  bool adjacent(std::size_t a, std::size_t b) const;
};

struct BallOptions {
  std::size_t stab_length = 0;  // 0: same as the radius
  std::size_t max_vertices = 20000;
};

/// BFS closure of `base` to radius R; edges are those of the induced subgraph.
/// Throws BudgetExceeded past the vertex cap.
BallView ball_view(const GGraphPtr& g, const std::vector<GSetElem>& base, std::size_t radius, BallOptions opts = {});

/// Plain graphs for tests and audits.
BallView plain_graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);
BallView cycle_graph(std::size_t n);
BallView complete_graph(std::size_t n);
/// Glues b's vertex vb onto a's vertex va; b's other vertices follow a's.
BallView wedge(const BallView& a, std::size_t va, const BallView& b, std::size_t vb);
/// Subgraph induced on `keep` (sorted), reindexed in that order.
BallView induced_subview(const BallView& b, const std::vector<std::size_t>& keep);

struct AngleValue {
  std::optional<std::size_t> value;  // nullopt: no path inside the window
  bool exact = false;                // witness path keeps a one-vertex margin from the window boundary
  std::vector<std::size_t> witness;
};
/// Length of a shortest x-y path avoiding v. Throws NotNeighbors.
AngleValue angle(std::size_t v, std::size_t x, std::size_t y, const BallView& b);
/// Angles from x to every neighbor of v (index aligned with b.adj[v]).
std::vector<std::optional<std::size_t>> angles_from(std::size_t v, std::size_t x, const BallView& b);

enum class FineVerdict { LocallyFinite, Violation, Inconclusive };
std::string to_string(FineVerdict v);

struct FinenessCertificate {
  FineVerdict verdict = FineVerdict::Inconclusive;
  std::size_t angle_bound = 0;
  std::size_t radius = 0;
  std::size_t threshold = 0;
  std::size_t max_count = 0;              // largest count at radius R
  std::vector<std::string> witness;       // the center neighbor followed by its angle-close family
  std::string note;
};

/// Produces the window of radius r around the probed vertex; the probed vertex must have index 0.
using WindowMaker = std::function<BallView(std::size_t r)>;
/// Stabilizers are enumerated to length r; hops stop at min(r, hop_cap). Angle
/// witnesses of length <= D between neighbors of v stay within D/2 + 1 hops,
/// so hop_cap = D/2 + 2 loses nothing.
WindowMaker ggraph_window(const GGraphPtr& g, const GSetElem& v, std::size_t hop_cap, std::size_t max_vertices = 20000);
WindowMaker fixed_window(const BallView& b);

/// Counts, for core neighbors x of v, the neighbors y with angle(x, y) <= D at radii R and R+2.
/// Core neighbors are those already present in the window of radius max(1, R - D).
FinenessCertificate fineness_probe(const WindowMaker& window, std::size_t angle_bound, std::size_t radius,
                                   std::size_t threshold);
/// Window-only check: no neighbor of v has `threshold` others within angle D.
bool window_fine_at(const BallView& b, std::size_t v, std::size_t angle_bound, std::size_t threshold);

/// Simple paths of length <= n from x to y. Throws CombinatorialBlowup past `cap` DFS steps.
std::size_t embedded_path_count(std::size_t x, std::size_t y, std::size_t n, const BallView& b,
                                std::size_t cap = 50000000);
/// Simple path counts of length <= n from x to every vertex.
std::vector<std::size_t> embedded_path_counts_from(std::size_t x, std::size_t n, const BallView& b,
                                                   std::size_t cap = 50000000);

struct HyperbolicityEstimate {
  std::size_t delta = 0;
  std::size_t radius = 0;
  std::size_t vertices = 0;
  std::string method = "thin-triangles-exhaustive";
  std::vector<std::size_t> witness;  // x, y, w, p
};
/// Exact thin-triangle constant of the window over all geodesic triangles.
/// Throws BudgetExceeded above `max_vertices`.
HyperbolicityEstimate delta_estimate(const BallView& b, std::size_t max_vertices = 250);

/// Components of b minus `removed`, each sorted; ordered by smallest vertex.
std::vector<std::vector<std::size_t>> components_without(const BallView& b, const std::vector<std::size_t>& removed);

struct CutVertexReport {
  bool pass = true;
  bool vacuous = false;
  std::size_t components = 0;
  std::vector<std::string> pieces;  // per component: "X@coset" or "Y@coset"
  std::vector<std::string> failures;
};
/// Removes the orbit of z from the window and checks that each component's
/// closure stays inside one translate of X or Y. Throws WindowTooSmall.
CutVertexReport cut_vertex_audit(const GGraphPtr& z, const BallView& b);

struct DecompositionReport {
  bool pass = true;
  std::size_t pieces = 0;
  std::vector<std::size_t> non_fine_vertices;          // in the whole window
  std::vector<std::pair<std::size_t, std::size_t>> attributed;  // (vertex, piece) where a piece is not fine
  std::vector<std::string> failures;
};
/// Checks the fineness equivalence over the pieces cut out by `cut` and that
/// neighbors of a cut vertex in different pieces are at infinite angle.
DecompositionReport decomposition_audit(const BallView& b, const std::vector<std::size_t>& cut, std::size_t angle_bound,
                                        std::size_t threshold);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct Condition {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;
};

struct AuditBudgets {
  std::size_t radius = 8;         // fineness window
  std::size_t angle_bound = 4;
  std::size_t threshold = 10;
  std::size_t delta_radius = 3;
  std::size_t delta_stab_length = 1;
  std::size_t delta_bound = 2;
  std::size_t delta_max_vertices = 300;
  std::size_t conjugacy = 4;      // ball radius for conjugator searches
  std::size_t connect_radius = 6;
  std::size_t max_vertices = 20000;
};

struct AuditReport {
  std::vector<Condition> conditions;
  bool pass() const;       // nothing failed
  bool all_pass() const;   // everything passed
};

/// The six conditions of the hyperbolic-embedding criterion, plus a proper-pair probe.
AuditReport gh_graph_audit(const GGraphPtr& g, const std::vector<SubgroupPtr>& peripherals, const AuditBudgets& b = {});
/// Connectedness, cocompactness, simpliciality and the four Cayley-Abels conditions.
AuditReport cayley_abels_audit(const GGraphPtr& g, const std::vector<SubgroupPtr>& peripherals,
                               const AuditBudgets& b = {});

}  // namespace forge
