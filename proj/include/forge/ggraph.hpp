#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "forge/gset.hpp"

namespace forge {

/// Endpoints of the base edge of an edge orbit.
struct Attach {
  GSetElem u;
  GSetElem v;
};

class GGraph;
using GGraphPtr = std::shared_ptr<const GGraph>;

/// Where the orbits of a constructed graph came from; needed by the tree
/// projection and the cut-vertex audit.
struct Provenance {
  enum class Kind { None, Pushout, Coalescence };
  Kind kind = Kind::None;
  std::size_t z_orbit = 0;
  GSetElem z;
  std::vector<int> vertex_side;  // per vertex orbit: 0 = X, 1 = Y, -1 = merged orbit
  std::vector<int> edge_side;    // per edge orbit: 0 = X, 1 = Y
  GGraphPtr x_graph;             // input graphs over their own groups
  GGraphPtr y_graph;
  GSetElem x;
  GSetElem y;
  SubgroupPtr side_a;  // A (and B for pushouts) as handles of G
  SubgroupPtr side_b;
};

struct Incident {
  GSetElem edge;
  GSetElem other;
};

/// A G-graph: vertex set, edge set, and the endpoints of each edge-orbit base edge.
class GGraph {
 public:
  GGraph(std::string name, GSetPtr vertices, GSetPtr edges, std::vector<Attach> attach, Provenance prov = {});

  const std::string& name() const { return name_; }
  const GroupPtr& group() const { return vertices_->group(); }
  const GSetPtr& vertices() const { return vertices_; }
  const GSetPtr& edges() const { return edges_; }
  const std::vector<Attach>& attach() const { return attach_; }
  const Provenance& provenance() const { return prov_; }

  Attach endpoints(const GSetElem& e) const;

 private:
  std::string name_;
  GSetPtr vertices_;
  GSetPtr edges_;
  std::vector<Attach> attach_;
  Provenance prov_;
};

/// Incidence queries with stabilizer elements enumerated once. Infinite
/// stabilizers are cut at `stab_length` generators, which makes the incident
/// edge lists of their vertices partial (`truncated`).
class IncidenceOracle {
 public:
  IncidenceOracle(GGraphPtr graph, std::size_t stab_length, std::size_t stab_cap = 5000);
  std::vector<Incident> incident(const GSetElem& v) const;
  bool truncated(std::size_t vertex_orbit) const { return truncated_.at(vertex_orbit); }
  bool any_truncated() const;
  const GGraphPtr& graph() const { return graph_; }
  std::size_t stab_length() const { return stab_length_; }

 private:
  GGraphPtr graph_;
  std::size_t stab_length_;
  std::vector<std::vector<Word>> stab_elements_;
  std::vector<bool> truncated_;
};

struct GraphMorphism {
  GMap vertex;
  std::optional<GMap> edge;  // absent when edges may collapse to vertices
};

struct ValidationReport {
  bool equivariant = true;
  bool simplicial = true;
  bool no_inversions = true;
  std::vector<std::string> witnesses;
};
/// Checks attaching data on the base edges and on translates by a group ball of radius `radius`.
ValidationReport validate_graph(const GGraph& g, std::size_t radius);

struct InducedGraph {
  GGraphPtr graph;
  GraphMorphism embedding;
};
/// G x_K Lambda for a graph whose vertex and edge sets are K-sets (acting subgroup K).
InducedGraph induce_graph(const GGraphPtr& lambda);
/// Moves a graph over A to a K-graph over G along A -> G.
GGraphPtr transport_graph(const GGraph& g, const Monomorphism& along);

struct PushoutGraph {
  GGraphPtr graph;
  GraphMorphism iota1;  // from G x_A X
  GraphMorphism iota2;  // from G x_B Y
  InducedGraph x_induced;
  InducedGraph y_induced;
  Pushout vertex_pushout;
};
/// C-pushout of G x_A X and G x_B Y identifying g.x with g.y; G must be A *_C B.
PushoutGraph c_pushout(const GGraphPtr& x_graph, const GGraphPtr& y_graph, const GSetElem& x, const GSetElem& y,
                       const GroupPtr& amalgam);

struct CoalescedGraph {
  GGraphPtr graph;
  GraphMorphism rho;  // from G x_A X
  InducedGraph x_induced;
  Quotient vertex_quotient;
};
/// phi-coalescence of an A-graph; G = A *_phi. `require_disjoint` enforces different A-orbits for x and y.
CoalescedGraph coalesce(const GGraphPtr& x_graph, const GSetElem& x, const GSetElem& y, const GroupPtr& hnn,
                        bool require_disjoint = true);

/// Vertices G/1 and G/H_i; edges {g, gs} per s and {g, gH_i}.
GGraphPtr coned_off(const GroupPtr& g, const std::vector<SubgroupPtr>& peripherals, const std::vector<Word>& s,
                    std::string name = "coned-off");

struct TreeHooks {
  SubgroupPtr ax;  // A_x in A
  SubgroupPtr by;  // B_y in B
};
/// Bass-Serre tree of an amalgam (optionally refined by A_x *_C B_y) or the barycentric tree of an HNN extension.
GGraphPtr bass_serre(const GroupPtr& split, std::optional<TreeHooks> hooks = std::nullopt);

struct Projection {
  GGraphPtr tree;
  GMap vertex;            // Z vertices -> tree vertices
  GSetElem z_image;       // distinguished tree vertex
};
/// Tree projection of a pushout or coalescence; throws ProvenanceMissing otherwise.
Projection project_to_tree(const GGraphPtr& z);

}  // namespace forge
