#include "forge/pipeline.hpp"

namespace forge {

namespace {

const char* kAmalgam1 = R"({
  "name": "example-amalgam-1",
  "groups": [
    {"id": "A", "kind": "free_abelian", "generators": ["a1", "a2"]},
    {"id": "B", "kind": "free_abelian", "generators": ["b1", "b2"]},
    {"id": "C", "kind": "free_abelian", "generators": ["c"]},
    {"id": "G", "kind": "amalgam", "maps": ["d1", "d2"]}
  ],
  "monomorphisms": [
    {"id": "d1", "domain": "C", "codomain": "A", "images": ["a1"]},
    {"id": "d2", "domain": "C", "codomain": "B", "images": ["b1"]}
  ],
  "graphs": [
    {"id": "X", "kind": "point", "group": "A"},
    {"id": "Y", "kind": "point", "group": "B"}
  ],
  "pipeline": [
    {"id": "Z", "op": "pushout", "x_graph": "X", "y_graph": "Y", "x": {"orbit": 0}, "y": {"orbit": 0}, "group": "G"},
    {"id": "orbits", "op": "audit", "check": "orbits", "graph": "Z", "expect": {"vertex_orbits": 1, "edge_orbits": 0}},
    {"id": "ball", "op": "audit", "check": "ball", "graph": "Z", "radius": 6, "expect": {"vertices": 1}}
  ]
})";

const char* kAmalgam2 = R"({
  "name": "example-amalgam-2",
  "groups": [
    {"id": "A0", "kind": "free_abelian", "generators": ["a1", "a2"]},
    {"id": "A1", "kind": "free_abelian", "generators": ["a3"]},
    {"id": "A", "kind": "free_product", "factors": ["A0", "A1"]},
    {"id": "B0", "kind": "free_abelian", "generators": ["b1", "b2"]},
    {"id": "B1", "kind": "free_abelian", "generators": ["b3"]},
    {"id": "B", "kind": "free_product", "factors": ["B0", "B1"]},
    {"id": "C", "kind": "free_abelian", "generators": ["c"]},
    {"id": "G", "kind": "amalgam", "maps": ["d1", "d2"]}
  ],
  "subgroups": [
    {"id": "KA", "group": "A", "generators": ["a1", "a2"]},
    {"id": "KB", "group": "B", "generators": ["b1", "b2"]},
    {"id": "P", "group": "G", "join": ["KA", "KB"]}
  ],
  "monomorphisms": [
    {"id": "d1", "domain": "C", "codomain": "A", "images": ["a1"]},
    {"id": "d2", "domain": "C", "codomain": "B", "images": ["b1"]}
  ],
  "graphs": [
    {"id": "X", "kind": "coned_off", "group": "A", "peripherals": ["KA"], "generators": ["a3"]},
    {"id": "Y", "kind": "coned_off", "group": "B", "peripherals": ["KB"], "generators": ["b3"]}
  ],
  "pipeline": [
    {"id": "Z", "op": "pushout", "x_graph": "X", "y_graph": "Y", "x": {"orbit": 1}, "y": {"orbit": 1}, "group": "G"},
    {"id": "orbits", "op": "audit", "check": "orbits", "graph": "Z", "expect": {"vertex_orbits": 3, "edge_orbits": 4}},
    {"id": "tree", "op": "audit", "check": "ball", "graph": "Z", "radius": 4, "stab_length": 1, "expect": {"tree": true}},
    {"id": "stabilizer", "op": "audit", "check": "stabilizer", "graph": "Z", "vertex": "z", "radius": 4,
     "subgroup": "P", "mode": "equal", "chain": true},
    {"id": "cut", "op": "audit", "check": "cut-vertex", "graph": "Z", "radius": 4, "stab_length": 1},
    {"id": "embeddings", "op": "audit", "check": "injective", "step": "Z", "radius": 2}
  ]
})";

const char* kHnnPoint = R"({
  "name": "example-hnn-point",
  "groups": [
    {"id": "A", "kind": "free_abelian", "generators": ["a"]},
    {"id": "G", "kind": "hnn", "map": "phi", "stable_letter": "t"}
  ],
  "monomorphisms": [
    {"id": "phi", "domain": "A", "codomain": "A", "images": ["a^-1"]}
  ],
  "graphs": [
    {"id": "X", "kind": "point", "group": "A"}
  ],
  "pipeline": [
    {"id": "Z", "op": "coalesce", "graph": "X", "x": {"orbit": 0}, "y": {"orbit": 0}, "group": "G",
     "require_disjoint": false},
    {"id": "orbits", "op": "audit", "check": "orbits", "graph": "Z", "expect": {"vertex_orbits": 1, "edge_orbits": 0}},
    {"id": "ball", "op": "audit", "check": "ball", "graph": "Z", "radius": 4, "expect": {"vertices": 1}}
  ]
})";

const char* kHnnCoalesce = R"({
  "name": "example-hnn-coalesce",
  "groups": [
    {"id": "H1", "kind": "cyclic", "generator": "h1", "order": 2},
    {"id": "H2", "kind": "cyclic", "generator": "h2", "order": 2},
    {"id": "A", "kind": "free_product", "factors": ["H1", "H2"]},
    {"id": "G", "kind": "hnn", "map": "phi", "stable_letter": "t"}
  ],
  "subgroups": [
    {"id": "AH1", "group": "A", "generators": ["h1"]},
    {"id": "AH2", "group": "A", "generators": ["h2"]},
    {"id": "GH1", "group": "G", "generators": ["h1"]}
  ],
  "monomorphisms": [
    {"id": "phi", "domain": "AH1", "codomain": "A", "images": ["h2"]}
  ],
  "graphs": [
    {"id": "X", "kind": "cosets", "group": "A",
     "orbits": [{"id": "A/H1", "stabilizer": "AH1"}, {"id": "A/H2", "stabilizer": "AH2"}]}
  ],
  "pipeline": [
    {"id": "Z", "op": "coalesce", "graph": "X", "x": {"orbit": 0}, "y": {"orbit": 1}, "group": "G"},
    {"id": "orbits", "op": "audit", "check": "orbits", "graph": "Z", "expect": {"vertex_orbits": 1, "edge_orbits": 0}},
    {"id": "cosets", "op": "audit", "check": "stabilizer", "graph": "Z", "vertex": {"orbit": 0, "rep": "t^-1"},
     "radius": 6, "subgroup": "GH1", "mode": "equal"},
    {"id": "embedding", "op": "audit", "check": "injective", "step": "Z", "radius": 4}
  ]
})";

const char* kHnnCone = R"({
  "name": "example-hnn-cone",
  "groups": [
    {"id": "F", "kind": "free", "generators": ["a", "b"]},
    {"id": "G", "kind": "hnn", "map": "phi", "stable_letter": "t"}
  ],
  "subgroups": [
    {"id": "Ka", "group": "F", "generators": ["a"]},
    {"id": "Kb", "group": "F", "generators": ["b"]},
    {"id": "Gb", "group": "G", "generators": ["b"]}
  ],
  "monomorphisms": [
    {"id": "phi", "domain": "Ka", "codomain": "F", "images": ["b"]}
  ],
  "graphs": [
    {"id": "X", "kind": "coned_off", "group": "F", "peripherals": ["Ka", "Kb"], "generators": ["a", "b"]}
  ],
  "pipeline": [
    {"id": "Z", "op": "coalesce", "graph": "X", "x": {"orbit": 1}, "y": {"orbit": 2}, "group": "G"},
    {"id": "orbits", "op": "audit", "check": "orbits", "graph": "Z", "expect": {"vertex_orbits": 2}},
    {"id": "stabilizer", "op": "audit", "check": "stabilizer", "graph": "Z", "vertex": "z", "radius": 5,
     "subgroup": "Gb", "mode": "equal"},
    {"id": "embedding", "op": "audit", "check": "injective", "step": "Z", "radius": 5}
  ]
})";

const char* kNegativeFineness = R"({
  "name": "example-negative-fineness",
  "groups": [
    {"id": "Z", "kind": "free_abelian", "generators": ["a"]}
  ],
  "subgroups": [
    {"id": "Z2", "group": "Z", "generators": ["a^2"]}
  ],
  "graphs": [
    {"id": "cone", "kind": "coned_off", "group": "Z", "peripherals": ["Z2"], "generators": ["a"]}
  ],
  "budgets": {"radius": 12, "angle_bound": 4, "threshold": 10},
  "pipeline": [
    {"id": "fine", "op": "audit", "check": "fineness", "graph": "cone", "vertex": {"orbit": 1},
     "expect": "locally-finite"}
  ]
})";

const char* kTreeZ4Z6 = R"({
  "name": "example-tree-z4-z6",
  "groups": [
    {"id": "Z4", "kind": "cyclic", "generator": "a", "order": 4},
    {"id": "Z6", "kind": "cyclic", "generator": "b", "order": 6},
    {"id": "Z2", "kind": "cyclic", "generator": "c", "order": 2},
    {"id": "G", "kind": "amalgam", "maps": ["d1", "d2"]}
  ],
  "monomorphisms": [
    {"id": "d1", "domain": "Z2", "codomain": "Z4", "images": ["a^2"]},
    {"id": "d2", "domain": "Z2", "codomain": "Z6", "images": ["b^3"]}
  ],
  "graphs": [
    {"id": "T", "kind": "bass_serre", "group": "G"}
  ],
  "budgets": {"radius": 6, "angle_bound": 4, "threshold": 10},
  "pipeline": [
    {"id": "orbits", "op": "audit", "check": "orbits", "graph": "T", "expect": {"vertex_orbits": 2, "edge_orbits": 1}},
    {"id": "fine-A", "op": "audit", "check": "fineness", "graph": "T", "vertex": {"orbit": 0}},
    {"id": "fine-B", "op": "audit", "check": "fineness", "graph": "T", "vertex": {"orbit": 1}},
    {"id": "delta", "op": "audit", "check": "delta", "graph": "T", "radius": 3, "expect": 0}
  ]
})";

const char* kConeFree = R"({
  "name": "example-cone-free",
  "groups": [
    {"id": "F", "kind": "free", "generators": ["a", "b"]}
  ],
  "subgroups": [
    {"id": "Ka", "group": "F", "generators": ["a"]}
  ],
  "graphs": [
    {"id": "cone", "kind": "coned_off", "group": "F", "peripherals": ["Ka"], "generators": ["a", "b"]}
  ],
  "budgets": {"radius": 8, "angle_bound": 6, "threshold": 10},
  "pipeline": [
    {"id": "fine", "op": "audit", "check": "fineness", "graph": "cone", "vertex": {"orbit": 1}}
  ]
})";

const char* kPresentations = R"({
  "name": "example-presentations",
  "groups": [
    {"id": "F", "kind": "free", "generators": ["a", "b"]},
    {"id": "A0", "kind": "free_abelian", "generators": ["a1", "a2"]},
    {"id": "A1", "kind": "free_abelian", "generators": ["a3"]},
    {"id": "A", "kind": "free_product", "factors": ["A0", "A1"]},
    {"id": "B0", "kind": "free_abelian", "generators": ["b1", "b2"]},
    {"id": "B1", "kind": "free_abelian", "generators": ["b3"]},
    {"id": "B", "kind": "free_product", "factors": ["B0", "B1"]},
    {"id": "C", "kind": "free_abelian", "generators": ["c"]},
    {"id": "Z2", "kind": "free_abelian", "generators": ["x", "y"]}
  ],
  "subgroups": [
    {"id": "Ka", "group": "F", "generators": ["a"]},
    {"id": "Kb", "group": "F", "generators": ["b"]},
    {"id": "KA", "group": "A", "generators": ["a1", "a2"]},
    {"id": "KB", "group": "B", "generators": ["b1", "b2"]},
    {"id": "X", "group": "Z2", "generators": ["x"]}
  ],
  "monomorphisms": [
    {"id": "phi", "domain": "Ka", "codomain": "F", "images": ["b"]},
    {"id": "d1", "domain": "C", "codomain": "A", "images": ["a1"]},
    {"id": "d2", "domain": "C", "codomain": "B", "images": ["b1"]}
  ],
  "presentations": [
    {"id": "toy", "group": "F", "s": [{"name": "s", "image": "a"}],
     "h": [{"name": "K", "subgroup": "Ka"}, {"name": "L", "subgroup": "Kb"}],
     "relators": ["s K:a^-1", "K:a s K:a^-1 s^-1"]},
    {"id": "PA", "group": "A", "s": [{"name": "a3", "image": "a3"}], "h": [{"name": "KA", "subgroup": "KA"}]},
    {"id": "PB", "group": "B", "s": [{"name": "b3", "image": "b3"}], "h": [{"name": "KB", "subgroup": "KB"}]},
    {"id": "Z2", "group": "Z2", "s": [{"name": "y", "image": "y"}], "h": [{"name": "X", "subgroup": "X"}],
     "relators": ["X:x y X:x^-1 y^-1"]}
  ],
  "pipeline": [
    {"id": "toy-relators", "op": "audit", "check": "relators", "presentation": "toy"},
    {"id": "hnn", "op": "hnn-presentation", "presentation": "toy", "k": "K", "l": "L", "phi": "phi"},
    {"id": "hnn-relators", "op": "audit", "check": "relators", "presentation": "hnn"},
    {"id": "amalgam", "op": "amalgam-presentation", "p1": "PA", "k1": "KA", "p2": "PB", "k2": "KB",
     "d1": "d1", "d2": "d2"},
    {"id": "amalgam-relators", "op": "audit", "check": "relators", "presentation": "amalgam"},
    {"id": "dehn", "op": "audit", "check": "dehn", "presentation": "Z2", "n": 6, "expect": [0, 0, 0, 0, 1]}
  ]
})";

const char* kHnn2 = R"({
  "name": "hnn2-recipe",
  "groups": [
    {"id": "S3", "kind": "permutation", "generators": ["s", "u"], "permutations": [[1, 0, 2], [2, 1, 0]]},
    {"id": "K", "kind": "cyclic", "generator": "k", "order": 2}
  ],
  "monomorphisms": [
    {"id": "iota", "domain": "K", "codomain": "S3", "images": ["s"]}
  ],
  "pipeline": [
    {"id": "G", "op": "hnn2-recipe", "base": "S3", "k": "K", "inclusion": "iota", "c": ["k"], "s": "u",
     "phi": ["u s u^-1"], "radius": 4}
  ]
})";

}  // namespace

std::vector<NamedSpec> builtin_examples() {
  return {
      {"example-amalgam-1", "Z^2 *_Z Z^2 with point graphs: the pushout is a single vertex", Json::parse(kAmalgam1)},
      {"example-amalgam-2", "pushout of two coned-off graphs: three vertex orbits, four edge orbits",
       Json::parse(kAmalgam2)},
      {"example-hnn-point", "coalescence of a point is a point", Json::parse(kHnnPoint)},
      {"example-hnn-coalesce", "A/H1 + A/H2 coalesces to G/H1", Json::parse(kHnnCoalesce)},
      {"example-hnn-cone", "cone points over <a> and <b> in <F(a,b), t | t a t^-1 = b>", Json::parse(kHnnCone)},
      {"example-negative-fineness", "coned-off Z over <a^2> is not fine at the cone vertex (exit 1)",
       Json::parse(kNegativeFineness)},
      {"example-tree-z4-z6", "Bass-Serre tree of Z/4 *_{Z/2} Z/6 is fine", Json::parse(kTreeZ4Z6)},
      {"example-cone-free", "coned-off F(a,b) over <a> is fine at the cone vertex", Json::parse(kConeFree)},
      {"example-presentations", "relative presentations of an HNN extension and an amalgam, Dehn values",
       Json::parse(kPresentations)},
      {"hnn2-recipe", "HNN extension of S3 along C -> K^u as an amalgam S3 *_K (K *_psi)", Json::parse(kHnn2)},
  };
}

std::optional<Json> builtin_example(const std::string& name) {
  for (auto& e : builtin_examples())
    if (e.name == name) return e.spec;
  return std::nullopt;
}

}  // namespace forge
