#include "forge/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "forge/errors.hpp"
#include "forge/relpres.hpp"

namespace forge {

namespace {

using Keys = std::initializer_list<const char*>;

void check_keys(const Json& o, Keys allowed, const std::string& where) {
  if (!o.is_object()) throw InvalidSpec(where + " must be an object");
  for (const auto& [k, v] : o.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      throw InvalidSpec("unknown key '" + k + "' in " + where);
  }
}

const Json& field(const Json& o, const char* key, const std::string& where) {
  auto it = o.find(key);
  if (it == o.end()) throw InvalidSpec("missing '" + std::string(key) + "' in " + where);
  return *it;
}

std::string str(const Json& o, const char* key, const std::string& where) {
  const Json& v = field(o, key, where);
  if (!v.is_string()) throw InvalidSpec("'" + std::string(key) + "' in " + where + " must be a string");
  return v.get<std::string>();
}

std::size_t count(const Json& o, const char* key, std::size_t fallback, const std::string& where) {
  auto it = o.find(key);
  if (it == o.end()) return fallback;
  if (!it->is_number_integer() || it->get<long long>() < 0) throw InvalidSpec("'" + std::string(key) + "' in " + where + " must be a non-negative integer");
  return it->get<std::size_t>();
}

std::vector<std::string> strings(const Json& o, const char* key, const std::string& where, bool required = true) {
  auto it = o.find(key);
  if (it == o.end()) {
    if (required) throw InvalidSpec("missing '" + std::string(key) + "' in " + where);
    return {};
  }
  if (!it->is_array()) throw InvalidSpec("'" + std::string(key) + "' in " + where + " must be an array");
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) throw InvalidSpec("'" + std::string(key) + "' in " + where + " must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<Word> words(const GroupPtr& g, const std::vector<std::string>& text) {
  std::vector<Word> out;
  for (const auto& t : text) out.push_back(g->normalize(g->parse(t)));
  return out;
}

struct Budgets {
  std::size_t radius = 8;
  std::size_t angle_bound = 4;
  std::size_t threshold = 10;
  std::size_t max_vertices = 20000;
  std::size_t stab_length = 0;
  std::size_t monomorphism_budget = 8;
  std::size_t conjugacy = 4;
  std::size_t delta_bound = 2;

  Json to_json() const {
    return Json{{"radius", radius},           {"angle_bound", angle_bound},
                {"threshold", threshold},     {"max_vertices", max_vertices},
                {"stab_length", stab_length}, {"monomorphism_budget", monomorphism_budget},
                {"conjugacy", conjugacy},     {"delta_bound", delta_bound}};
  }
};

Budgets read_budgets(const Json& spec, const PipelineOptions& opts) {
  Budgets b;
  if (auto it = spec.find("budgets"); it != spec.end()) {
    const std::string w = "budgets";
    check_keys(*it, {"radius", "angle_bound", "threshold", "max_vertices", "stab_length", "monomorphism_budget",
                     "conjugacy", "delta_bound"},
               w);
    b.radius = count(*it, "radius", b.radius, w);
    b.angle_bound = count(*it, "angle_bound", b.angle_bound, w);
    b.threshold = count(*it, "threshold", b.threshold, w);
    b.max_vertices = count(*it, "max_vertices", b.max_vertices, w);
    b.stab_length = count(*it, "stab_length", b.stab_length, w);
    b.monomorphism_budget = count(*it, "monomorphism_budget", b.monomorphism_budget, w);
    b.conjugacy = count(*it, "conjugacy", b.conjugacy, w);
    b.delta_bound = count(*it, "delta_bound", b.delta_bound, w);
  }
  if (opts.radius) b.radius = *opts.radius;
  if (opts.angle_bound) b.angle_bound = *opts.angle_bound;
  if (opts.threshold) b.threshold = *opts.threshold;
  if (opts.max_vertices) b.max_vertices = *opts.max_vertices;
  if (b.radius == 0 || b.angle_bound == 0 || b.threshold == 0 || b.max_vertices == 0 || b.monomorphism_budget == 0)
    throw InvalidSpec("budgets must be positive");
  return b;
}

// Declarations are built on first use; `building` catches reference cycles.
class Context {
 public:
  Context(const Json& spec, Budgets budgets, bool trust) : budgets_(budgets) {
    build_.budget = budgets.monomorphism_budget;
    build_.trust = trust;
    collect(spec, "groups", group_decl_);
    collect(spec, "subgroups", sub_decl_);
    collect(spec, "monomorphisms", mono_decl_);
    collect(spec, "graphs", graph_decl_);
    collect(spec, "presentations", pres_decl_);
  }

  void build_all() {
    for (const auto& [id, d] : group_decl_) group(id);
    for (const auto& [id, d] : sub_decl_) subgroup(id);
    for (const auto& [id, d] : mono_decl_) mono(id);
    for (const auto& [id, d] : graph_decl_) graph(id);
    for (const auto& [id, d] : pres_decl_) presentation(id);
  }

  const Budgets& budgets() const { return budgets_; }
  const BuildOptions& build_options() const { return build_; }

  GroupPtr group(const std::string& id) {
    if (auto it = groups_.find(id); it != groups_.end()) return it->second;
    auto d = group_decl_.find(id);
    if (d == group_decl_.end()) throw InvalidSpec("unknown group '" + id + "'");
    Guard guard(*this, "group " + id);
    const Json& o = d->second;
    const std::string w = "group '" + id + "'";
    const std::string kind = str(o, "kind", w);
    GroupPtr g;
    if (kind == "free" || kind == "free_abelian") {
      check_keys(o, {"id", "kind", "generators"}, w);
      g = kind == "free" ? make_free_group(id, strings(o, "generators", w))
                         : make_free_abelian_group(id, strings(o, "generators", w));
    } else if (kind == "cyclic") {
      check_keys(o, {"id", "kind", "generator", "order"}, w);
      const std::size_t n = count(o, "order", 0, w);
      if (n == 0) throw InvalidSpec(w + " needs a positive order");
      g = make_cyclic_group(id, str(o, "generator", w), static_cast<std::uint32_t>(n));
    } else if (kind == "permutation") {
      check_keys(o, {"id", "kind", "generators", "permutations"}, w);
      g = make_permutation_group(id, strings(o, "generators", w),
                                 field(o, "permutations", w).get<std::vector<std::vector<std::uint32_t>>>());
    } else if (kind == "free_product") {
      check_keys(o, {"id", "kind", "factors"}, w);
      std::vector<GroupPtr> fs;
      for (const auto& f : strings(o, "factors", w)) fs.push_back(group(f));
      g = make_free_product(id, fs);
    } else if (kind == "amalgam") {
      check_keys(o, {"id", "kind", "maps"}, w);
      const auto maps = strings(o, "maps", w);
      if (maps.size() != 2) throw InvalidSpec(w + " needs two edge maps");
      g = build_amalgam(id, mono(maps[0]), mono(maps[1]), build_);
    } else if (kind == "hnn") {
      check_keys(o, {"id", "kind", "map", "stable_letter"}, w);
      g = build_hnn(id, mono(str(o, "map", w)), o.contains("stable_letter") ? str(o, "stable_letter", w) : "t", build_);
    } else {
      throw InvalidSpec(w + " has unsupported kind '" + kind + "'");
    }
    groups_[id] = g;
    return g;
  }

  SubgroupPtr subgroup(const std::string& id) {
    if (auto it = subs_.find(id); it != subs_.end()) return it->second;
    auto d = sub_decl_.find(id);
    if (d == sub_decl_.end()) throw InvalidSpec("unknown subgroup '" + id + "'");
    Guard guard(*this, "subgroup " + id);
    const Json& o = d->second;
    const std::string w = "subgroup '" + id + "'";
    check_keys(o, {"id", "group", "generators", "whole", "join", "factor", "inner"}, w);
    GroupPtr g = group(str(o, "group", w));
    SubgroupPtr h;
    if (o.contains("join")) {
      const auto parts = strings(o, "join", w);
      if (parts.size() != 2) throw InvalidSpec(w + " joins exactly two factor subgroups");
      h = amalgam_join(g, subgroup(parts[0]), subgroup(parts[1]));
    } else if (o.contains("factor")) {
      h = factor_subgroup(g, count(o, "factor", 0, w), subgroup(str(o, "inner", w)));
    } else if (o.value("whole", false)) {
      h = whole_group(g);
    } else {
      h = make_subgroup(g, words(g, strings(o, "generators", w)));
    }
    subs_[id] = h;
    return h;
  }

  Monomorphism mono(const std::string& id) {
    if (auto it = monos_.find(id); it != monos_.end()) return it->second;
    auto d = mono_decl_.find(id);
    if (d == mono_decl_.end()) throw InvalidSpec("unknown monomorphism '" + id + "'");
    Guard guard(*this, "monomorphism " + id);
    const Json& o = d->second;
    const std::string w = "monomorphism '" + id + "'";
    check_keys(o, {"id", "domain", "codomain", "images"}, w);
    const std::string dom = str(o, "domain", w);
    GroupPtr cod = group(str(o, "codomain", w));
    const auto images = words(cod, strings(o, "images", w));
    Monomorphism m;
    if (sub_decl_.count(dom)) {
      m = Monomorphism{subgroup(dom), cod, images};
      if (m.images.size() != m.domain->generators().size())
        throw InvalidSpec(w + " needs one image per domain generator");
    } else {
      m = make_monomorphism(group(dom), cod, images);
    }
    monos_[id] = m;
    return m;
  }

  GGraphPtr graph(const std::string& id) {
    if (auto it = graphs_.find(id); it != graphs_.end()) return it->second;
    auto d = graph_decl_.find(id);
    if (d == graph_decl_.end()) throw InvalidSpec("unknown graph '" + id + "'");
    Guard guard(*this, "graph " + id);
    const Json& o = d->second;
    const std::string w = "graph '" + id + "'";
    const std::string kind = str(o, "kind", w);
    GGraphPtr g;
    if (kind == "point") {
      check_keys(o, {"id", "kind", "group", "stabilizer"}, w);
      GroupPtr grp = group(str(o, "group", w));
      SubgroupPtr st = o.contains("stabilizer") ? subgroup(str(o, "stabilizer", w)) : whole_group(grp);
      auto vs = std::make_shared<GSet>(grp, std::vector<Orbit>{{"pt", st}});
      g = std::make_shared<GGraph>(id, vs, std::make_shared<GSet>(grp, std::vector<Orbit>{}), std::vector<Attach>{});
    } else if (kind == "cosets") {
      check_keys(o, {"id", "kind", "group", "orbits"}, w);
      GroupPtr grp = group(str(o, "group", w));
      std::vector<Orbit> orbits;
      for (const auto& ob : field(o, "orbits", w)) {
        check_keys(ob, {"id", "stabilizer"}, w + " orbit");
        orbits.push_back({str(ob, "id", w), subgroup(str(ob, "stabilizer", w))});
      }
      auto vs = std::make_shared<GSet>(grp, orbits);
      g = std::make_shared<GGraph>(id, vs, std::make_shared<GSet>(grp, std::vector<Orbit>{}), std::vector<Attach>{});
    } else if (kind == "coned_off") {
      check_keys(o, {"id", "kind", "group", "peripherals", "generators"}, w);
      GroupPtr grp = group(str(o, "group", w));
      std::vector<SubgroupPtr> ps;
      for (const auto& p : strings(o, "peripherals", w, false)) ps.push_back(subgroup(p));
      g = coned_off(grp, ps, words(grp, strings(o, "generators", w)), id);
    } else if (kind == "bass_serre") {
      check_keys(o, {"id", "kind", "group"}, w);
      g = bass_serre(group(str(o, "group", w)));
    } else {
      throw InvalidSpec(w + " has unsupported kind '" + kind + "'");
    }
    graphs_[id] = g;
    return g;
  }

  RelPresentation presentation(const std::string& id) {
    if (auto it = pres_.find(id); it != pres_.end()) return it->second;
    auto d = pres_decl_.find(id);
    if (d == pres_decl_.end()) throw InvalidSpec("unknown presentation '" + id + "'");
    Guard guard(*this, "presentation " + id);
    const Json& o = d->second;
    const std::string w = "presentation '" + id + "'";
    check_keys(o, {"id", "group", "s", "h", "relators"}, w);
    RelPresentation p;
    p.group = group(str(o, "group", w));
    for (const auto& s : field(o, "s", w)) {
      check_keys(s, {"name", "image"}, w + " letter");
      p.s_names.push_back(str(s, "name", w));
      p.s_images.push_back(p.group->normalize(p.group->parse(str(s, "image", w))));
    }
    if (o.contains("h")) {
      for (const auto& h : o["h"]) {
        check_keys(h, {"name", "subgroup"}, w + " peripheral");
        p.h_names.push_back(str(h, "name", w));
        p.hs.push_back(subgroup(str(h, "subgroup", w)));
        if (p.hs.back()->ambient() != p.group) throw InvalidSpec(w + ": peripherals must be subgroups of its group");
      }
    }
    for (const auto& r : strings(o, "relators", w, false)) p.relators.push_back(parse_relword(p, r));
    pres_[id] = p;
    return p;
  }

  // step outputs
  void put_group(const std::string& id, GroupPtr g) { groups_[id] = std::move(g); }
  void put_subgroup(const std::string& id, SubgroupPtr h) { subs_[id] = std::move(h); }
  void put_graph(const std::string& id, GGraphPtr g) { graphs_[id] = std::move(g); }
  void put_presentation(const std::string& id, RelPresentation p) { pres_[id] = std::move(p); }
  bool has_subgroup_decl(const std::string& id) const { return sub_decl_.count(id) > 0; }

  std::map<std::string, PushoutGraph> pushouts;
  std::map<std::string, CoalescedGraph> coalesced;

 private:
  struct Guard {
    Guard(Context& c, std::string what) : c_(c), what_(std::move(what)) {
      if (!c_.building_.insert(what_).second) throw InvalidSpec("declaration cycle through " + what_);
    }
    ~Guard() { c_.building_.erase(what_); }
    Context& c_;
    std::string what_;
  };

  static void collect(const Json& spec, const char* key, std::map<std::string, Json>& out) {
    auto it = spec.find(key);
    if (it == spec.end()) return;
    if (!it->is_array()) throw InvalidSpec(std::string(key) + " must be an array");
    for (const auto& d : *it) {
      const std::string id = str(d, "id", key);
      if (!out.emplace(id, d).second) throw InvalidSpec("duplicate id '" + id + "' in " + key);
    }
  }

  Budgets budgets_;
  BuildOptions build_;
  std::map<std::string, Json> group_decl_, sub_decl_, mono_decl_, graph_decl_, pres_decl_;
  std::map<std::string, GroupPtr> groups_;
  std::map<std::string, SubgroupPtr> subs_;
  std::map<std::string, Monomorphism> monos_;
  std::map<std::string, GGraphPtr> graphs_;
  std::map<std::string, RelPresentation> pres_;
  std::set<std::string> building_;
};

GSetElem element_ref(const GGraphPtr& g, const Json& ref, const std::string& where) {
  const GSet& vs = *g->vertices();
  if (ref.is_string() && ref.get<std::string>() == "z") {
    if (g->provenance().kind == Provenance::Kind::None) throw InvalidSpec(where + ": graph has no distinguished vertex z");
    return g->provenance().z;
  }
  check_keys(ref, {"orbit", "rep"}, where);
  const Json& ob = field(ref, "orbit", where);
  std::size_t orbit = 0;
  if (ob.is_number_integer() && ob.get<long long>() >= 0) {
    orbit = ob.get<std::size_t>();
  } else if (ob.is_string()) {
    auto f = vs.find_orbit(ob.get<std::string>());
    if (!f) throw InvalidSpec(where + ": no orbit '" + ob.get<std::string>() + "'");
    orbit = *f;
  } else {
    throw InvalidSpec(where + ": orbit must be an index or an id");
  }
  if (orbit >= vs.orbit_count()) throw InvalidSpec(where + ": orbit index out of range");
  const std::string rep = ref.contains("rep") ? str(ref, "rep", where) : "";
  return vs.element(orbit, g->group()->parse(rep));
}

GSetElem default_vertex(const GGraphPtr& g) {
  if (g->provenance().kind != Provenance::Kind::None) return g->provenance().z;
  return g->vertices()->base(0);
}

std::vector<Word> group_ball(const GroupPtr& g, std::size_t radius, std::size_t cap) {
  std::vector<Word> gens;
  for (std::size_t i = 0; i < g->rank(); ++i) gens.push_back(Word{letter(i)});
  return ball_enumerate(g, gens, radius, cap);
}

Json elem_json(const GSet& s, const GSetElem& e) {
  return Json{{"orbit", s.orbit(e.orbit).id}, {"rep", s.group()->format(e.rep)}};
}

class Runner {
 public:
  Runner(Context& ctx, RunReport& report) : ctx_(ctx), report_(report) {}

  void run_step(const Json& step, StepOutcome& out) {
    const std::string w = "step '" + out.id + "'";
    const std::string& op = out.op;
    if (op == "pushout") {
      check_keys(step, {"id", "op", "x_graph", "y_graph", "x", "y", "group"}, w);
      auto xg = ctx_.graph(str(step, "x_graph", w));
      auto yg = ctx_.graph(str(step, "y_graph", w));
      auto p = c_pushout(xg, yg, element_ref(xg, field(step, "x", w), w), element_ref(yg, field(step, "y", w), w),
                         ctx_.group(str(step, "group", w)));
      describe_graph(p.graph, out);
      ctx_.put_graph(out.id, p.graph);
      ctx_.pushouts.emplace(out.id, std::move(p));
    } else if (op == "coalesce") {
      check_keys(step, {"id", "op", "graph", "x", "y", "group", "require_disjoint"}, w);
      auto xg = ctx_.graph(str(step, "graph", w));
      auto c = coalesce(xg, element_ref(xg, field(step, "x", w), w), element_ref(xg, field(step, "y", w), w),
                        ctx_.group(str(step, "group", w)), step.value("require_disjoint", true));
      describe_graph(c.graph, out);
      ctx_.put_graph(out.id, c.graph);
      ctx_.coalesced.emplace(out.id, std::move(c));
    } else if (op == "induce") {
      check_keys(step, {"id", "op", "graph", "group", "factor"}, w);
      auto g = ctx_.group(str(step, "group", w));
      auto lam = transport_graph(*ctx_.graph(str(step, "graph", w)), factor_inclusion(g, count(step, "factor", 0, w)));
      auto ind = induce_graph(lam);
      describe_graph(ind.graph, out);
      ctx_.put_graph(out.id, ind.graph);
    } else if (op == "cone-off") {
      check_keys(step, {"id", "op", "group", "peripherals", "generators"}, w);
      auto g = ctx_.group(str(step, "group", w));
      std::vector<SubgroupPtr> ps;
      for (const auto& p : strings(step, "peripherals", w, false)) ps.push_back(ctx_.subgroup(p));
      auto gr = coned_off(g, ps, words(g, strings(step, "generators", w)), out.id);
      describe_graph(gr, out);
      ctx_.put_graph(out.id, gr);
    } else if (op == "bass-serre") {
      check_keys(step, {"id", "op", "group", "hooks"}, w);
      std::optional<TreeHooks> hooks;
      if (step.contains("hooks")) {
        check_keys(step["hooks"], {"ax", "by"}, w + " hooks");
        hooks = TreeHooks{ctx_.subgroup(str(step["hooks"], "ax", w)), ctx_.subgroup(str(step["hooks"], "by", w))};
      }
      auto t = bass_serre(ctx_.group(str(step, "group", w)), hooks);
      describe_graph(t, out);
      ctx_.put_graph(out.id, t);
    } else if (op == "project") {
      check_keys(step, {"id", "op", "graph"}, w);
      auto pr = project_to_tree(ctx_.graph(str(step, "graph", w)));
      describe_graph(pr.tree, out);
      out.data["z_image"] = elem_json(*pr.tree->vertices(), pr.z_image);
      ctx_.put_graph(out.id, pr.tree);
    } else if (op == "amalgam-presentation") {
      check_keys(step, {"id", "op", "p1", "k1", "p2", "k2", "d1", "d2"}, w);
      auto p1 = ctx_.presentation(str(step, "p1", w));
      auto p2 = ctx_.presentation(str(step, "p2", w));
      auto res = amalgam_presentation(p1, peripheral(p1, str(step, "k1", w)), p2, peripheral(p2, str(step, "k2", w)),
                                      ctx_.mono(str(step, "d1", w)), ctx_.mono(str(step, "d2", w)), ctx_.build_options());
      describe_presentation(res.presentation, out);
      ctx_.put_group(out.id, res.group);
      ctx_.put_presentation(out.id, res.presentation);
    } else if (op == "hnn-presentation") {
      check_keys(step, {"id", "op", "presentation", "k", "l", "phi", "stable_letter"}, w);
      auto p = ctx_.presentation(str(step, "presentation", w));
      auto res = hnn_presentation(p, peripheral(p, str(step, "k", w)), peripheral(p, str(step, "l", w)),
                                  ctx_.mono(str(step, "phi", w)),
                                  step.contains("stable_letter") ? str(step, "stable_letter", w) : "t",
                                  ctx_.build_options());
      describe_presentation(res.presentation, out);
      ctx_.put_group(out.id, res.group);
      ctx_.put_presentation(out.id, res.presentation);
    } else if (op == "hnn2-recipe") {
      hnn2_recipe(step, out);
    } else if (op == "audit") {
      audit(step, out);
    } else {
      throw InvalidSpec(w + " has unknown op '" + op + "'");
    }
  }

 private:
  void verdict(const StepOutcome& out, std::string name, Verdict v, std::string detail) {
    report_.verdicts.push_back({out.id, std::move(name), v, std::move(detail)});
  }

  void expect_count(const StepOutcome& out, const Json& expect, const char* key, std::size_t actual) {
    if (!expect.contains(key)) return;
    const std::size_t want = expect[key].get<std::size_t>();
    verdict(out, key, actual == want ? Verdict::Pass : Verdict::Fail,
            "expected " + std::to_string(want) + ", found " + std::to_string(actual));
  }

  static void describe_graph(const GGraphPtr& g, StepOutcome& out) {
    out.data["group"] = g->group()->name();
    out.data["vertex_orbits"] = g->vertices()->orbit_count();
    out.data["edge_orbits"] = g->edges()->orbit_count();
    Json orbits = Json::array();
    for (const auto& o : g->vertices()->orbits())
      orbits.push_back(Json{{"id", o.id}, {"stabilizer", o.stabilizer->describe()}});
    out.data["vertex_orbit_ids"] = orbits;
    if (g->provenance().kind != Provenance::Kind::None) out.data["z"] = elem_json(*g->vertices(), g->provenance().z);
  }

  static void describe_presentation(const RelPresentation& p, StepOutcome& out) {
    out.data["s"] = p.s_names;
    out.data["h"] = p.h_names;
    Json rel = Json::array();
    for (const auto& r : p.relators) rel.push_back(format(p, r));
    out.data["relators"] = rel;
  }

  static std::size_t peripheral(const RelPresentation& p, const std::string& name) {
    auto it = std::find(p.h_names.begin(), p.h_names.end(), name);
    if (it == p.h_names.end()) throw InvalidSpec("presentation has no peripheral '" + name + "'");
    return static_cast<std::size_t>(it - p.h_names.begin());
  }

  std::vector<SubgroupPtr> subgroups(const Json& step, const std::string& w) {
    std::vector<SubgroupPtr> out;
    for (const auto& id : strings(step, "peripherals", w, false)) out.push_back(ctx_.subgroup(id));
    return out;
  }

  GSetElem vertex_of(const Json& step, const GGraphPtr& g, const std::string& w) {
    return step.contains("vertex") ? element_ref(g, step["vertex"], w) : default_vertex(g);
  }

  BallView window(const Json& step, const GGraphPtr& g, const GSetElem& v, std::size_t radius, const std::string& w) {
    BallOptions bo;
    bo.stab_length = count(step, "stab_length", ctx_.budgets().stab_length, w);
    bo.max_vertices = ctx_.budgets().max_vertices;
    return ball_view(g, {v}, radius, bo);
  }

  void audit(const Json& step, StepOutcome& out) {
    const std::string w = "step '" + out.id + "'";
    const std::string check = str(step, "check", w);
    const Budgets& b = ctx_.budgets();
    out.data["check"] = check;
    if (check == "orbits") {
      check_keys(step, {"id", "op", "check", "graph", "expect"}, w);
      auto g = ctx_.graph(str(step, "graph", w));
      describe_graph(g, out);
      const Json expect = step.value("expect", Json::object());
      check_keys(expect, {"vertex_orbits", "edge_orbits"}, w + " expect");
      expect_count(out, expect, "vertex_orbits", g->vertices()->orbit_count());
      expect_count(out, expect, "edge_orbits", g->edges()->orbit_count());
    } else if (check == "ball") {
      check_keys(step, {"id", "op", "check", "graph", "vertex", "radius", "stab_length", "expect"}, w);
      auto g = ctx_.graph(str(step, "graph", w));
      auto ball = window(step, g, vertex_of(step, g, w), count(step, "radius", b.radius, w), w);
      out.data["vertices"] = ball.size();
      out.data["edges"] = ball.edges.size();
      out.data["stabilizers_truncated"] = ball.stabilizers_truncated;
      const Json expect = step.value("expect", Json::object());
      check_keys(expect, {"vertices", "edges", "tree"}, w + " expect");
      expect_count(out, expect, "vertices", ball.size());
      expect_count(out, expect, "edges", ball.edges.size());
      if (expect.value("tree", false)) {
        // a tree has at most one embedded path between any two vertices
        std::size_t worst = 0;
        for (std::size_t x = 0; x < ball.size(); ++x) {
          const auto c = embedded_path_counts_from(x, ball.size(), ball);
          worst = std::max(worst, *std::max_element(c.begin(), c.end()));
        }
        verdict(out, "tree", worst <= 1 ? Verdict::Pass : Verdict::Fail,
                "largest embedded path count " + std::to_string(worst));
      }
    } else if (check == "stabilizer") {
      check_keys(step, {"id", "op", "check", "graph", "vertex", "radius", "subgroup", "mode", "chain"}, w);
      auto g = ctx_.graph(str(step, "graph", w));
      const GSetElem v = vertex_of(step, g, w);
      auto h = ctx_.subgroup(str(step, "subgroup", w));
      const std::string mode = step.value("mode", std::string("equal"));
      if (mode != "equal" && mode != "within") throw InvalidSpec(w + ": mode is 'equal' or 'within'");
      const bool chain = step.value("chain", false);
      const Pushout* po = nullptr;
      GSetElem zs;
      if (chain) {
        auto it = ctx_.pushouts.find(str(step, "graph", w));
        if (it == ctx_.pushouts.end()) throw InvalidSpec(w + ": chain certificates need a pushout step");
        po = &it->second.vertex_pushout;
        zs = it->second.graph->provenance().z;
      }
      std::size_t fixing = 0, bad = 0, unknown = 0, chained = 0;
      std::string first;
      for (const auto& x : group_ball(g->group(), count(step, "radius", b.radius, w), 1000000)) {
        const bool fixes = g->vertices()->act(x, v) == v;
        const Tri in = h->contains(x);
        fixing += fixes;
        if (in == Tri::Unknown) {
          ++unknown;
          continue;
        }
        const bool ok = mode == "equal" ? fixes == (in == Tri::Yes) : (!fixes || in == Tri::Yes);
        if (!ok) {
          if (bad++ == 0) first = g->group()->format(x);
        }
        if (chain && fixes && v == zs) {
          auto c = chain_factorize(x, zs, *po);
          if (verify_chain(c, x, *po)) ++chained;
          else if (bad++ == 0) first = "chain for " + g->group()->format(x);
        }
      }
      out.data["fixing"] = fixing;
      out.data["unknown"] = unknown;
      if (chain) out.data["chains_verified"] = chained;
      verdict(out, "stabilizer", bad ? Verdict::Fail : (unknown ? Verdict::Inconclusive : Verdict::Pass),
              bad ? "counterexample " + first : std::to_string(fixing) + " fixing elements agree");
    } else if (check == "injective") {
      check_keys(step, {"id", "op", "check", "step", "radius"}, w);
      const std::string src = str(step, "step", w);
      const std::size_t r = count(step, "radius", b.radius, w);
      std::vector<std::pair<const GraphMorphism*, const InducedGraph*>> maps;
      if (auto it = ctx_.pushouts.find(src); it != ctx_.pushouts.end()) {
        maps = {{&it->second.iota1, &it->second.x_induced}, {&it->second.iota2, &it->second.y_induced}};
      } else if (auto jt = ctx_.coalesced.find(src); jt != ctx_.coalesced.end()) {
        maps = {{&jt->second.rho, &jt->second.x_induced}};
      } else {
        throw InvalidSpec(w + ": '" + src + "' is not a pushout or coalesce step");
      }
      std::size_t checked = 0, clashes = 0;
      for (const auto& [m, ind] : maps) {
        // the input graph's vertices, translated by a ball of its own group
        const GSetPtr& xs = ind->embedding.vertex.domain;
        std::map<GSetElem, GSetElem> seen;
        const auto a_ball = xs->acting() ? xs->acting()->enumerate(r, 1000000) : group_ball(xs->group(), r, 1000000);
        for (const auto& word : a_ball) {
          for (std::size_t o = 0; o < xs->orbit_count(); ++o) {
            const GSetElem x = xs->element(o, word);
            const GSetElem img = m->vertex.apply(ind->embedding.vertex.apply(x));
            auto [pos, fresh] = seen.emplace(img, x);
            ++checked;
            if (!fresh && pos->second != x) ++clashes;
          }
        }
      }
      out.data["checked"] = checked;
      verdict(out, "injective", clashes ? Verdict::Fail : Verdict::Pass,
              std::to_string(clashes) + " collisions among " + std::to_string(checked) + " vertices");
    } else if (check == "cut-vertex") {
      check_keys(step, {"id", "op", "check", "graph", "radius", "stab_length"}, w);
      auto g = ctx_.graph(str(step, "graph", w));
      if (g->provenance().kind == Provenance::Kind::None) throw InvalidSpec(w + ": graph has no distinguished vertex");
      auto ball = window(step, g, g->provenance().z, count(step, "radius", 4, w), w);
      auto rep = cut_vertex_audit(g, ball);
      out.data["components"] = rep.components;
      out.data["pieces"] = rep.pieces;
      verdict(out, "cut vertex", rep.pass ? Verdict::Pass : Verdict::Fail,
              rep.vacuous ? "no edges" : (rep.failures.empty() ? std::to_string(rep.components) + " components"
                                                               : rep.failures.front()));
    } else if (check == "fineness") {
      check_keys(step, {"id", "op", "check", "graph", "vertex", "angle_bound", "radius", "threshold", "expect"}, w);
      auto g = ctx_.graph(str(step, "graph", w));
      const std::size_t d = count(step, "angle_bound", b.angle_bound, w);
      auto cert = fineness_probe(ggraph_window(g, vertex_of(step, g, w), d / 2 + 2, b.max_vertices), d,
                                 count(step, "radius", b.radius, w), count(step, "threshold", b.threshold, w));
      out.data["verdict"] = to_string(cert.verdict);
      out.data["max_count"] = cert.max_count;
      out.data["witness"] = cert.witness;
      out.data["note"] = cert.note;
      const std::string expect = step.value("expect", std::string("locally-finite"));
      if (expect != "locally-finite" && expect != "violation")
        throw InvalidSpec(w + ": expect is 'locally-finite' or 'violation'");
      const std::string got = to_string(cert.verdict);
      Verdict v = Verdict::Inconclusive;
      if (cert.verdict != FineVerdict::Inconclusive) v = got == expect ? Verdict::Pass : Verdict::Fail;
      verdict(out, "fineness", v, got + " (expected " + expect + ")");
    } else if (check == "delta") {
      check_keys(step, {"id", "op", "check", "graph", "vertex", "radius", "stab_length", "bound", "expect"}, w);
      auto g = ctx_.graph(str(step, "graph", w));
      auto ball = window(step, g, vertex_of(step, g, w), count(step, "radius", 3, w), w);
      auto est = delta_estimate(ball, 300);
      out.data["delta"] = est.delta;
      out.data["vertices"] = est.vertices;
      if (step.contains("expect")) {
        expect_count(out, Json{{"delta", step["expect"]}}, "delta", est.delta);
      } else {
        const std::size_t bound = count(step, "bound", b.delta_bound, w);
        verdict(out, "delta", est.delta <= bound ? Verdict::Pass : Verdict::Inconclusive,
                "delta " + std::to_string(est.delta) + " against bound " + std::to_string(bound));
      }
    } else if (check == "gh-graph" || check == "cayley-abels") {
      check_keys(step, {"id", "op", "check", "graph", "peripherals"}, w);
      auto g = ctx_.graph(str(step, "graph", w));
      AuditBudgets ab;
      ab.radius = b.radius;
      ab.angle_bound = b.angle_bound;
      ab.threshold = b.threshold;
      ab.max_vertices = b.max_vertices;
      ab.conjugacy = b.conjugacy;
      ab.delta_bound = b.delta_bound;
      auto rep = check == "gh-graph" ? gh_graph_audit(g, subgroups(step, w), ab) : cayley_abels_audit(g, subgroups(step, w), ab);
      for (const auto& c : rep.conditions) verdict(out, c.name, c.verdict, c.detail);
    } else if (check == "validate") {
      check_keys(step, {"id", "op", "check", "graph", "radius"}, w);
      auto rep = validate_graph(*ctx_.graph(str(step, "graph", w)), count(step, "radius", 3, w));
      const bool ok = rep.equivariant && rep.simplicial && rep.no_inversions;
      verdict(out, "graph data", ok ? Verdict::Pass : Verdict::Fail, ok ? "consistent" : rep.witnesses.front());
    } else if (check == "relators") {
      check_keys(step, {"id", "op", "check", "presentation"}, w);
      auto p = ctx_.presentation(str(step, "presentation", w));
      auto rc = verify_relators(p);
      out.data["relators"] = p.relators.size();
      verdict(out, "relators", rc.pass ? Verdict::Pass : Verdict::Fail,
              rc.pass ? std::to_string(p.relators.size()) + " relators hold"
                      : "relator " + std::to_string(rc.failures.front().first) + " evaluates to " +
                            p.group->format(rc.failures.front().second));
    } else if (check == "dehn") {
      check_keys(step, {"id", "op", "check", "presentation", "n", "k_cap", "conjugator_cap", "h_letter_cap", "expect"}, w);
      auto p = ctx_.presentation(str(step, "presentation", w));
      DehnCaps caps;
      caps.k_cap = count(step, "k_cap", caps.k_cap, w);
      caps.conjugator_cap = count(step, "conjugator_cap", caps.conjugator_cap, w);
      caps.h_letter_cap = count(step, "h_letter_cap", caps.h_letter_cap, w);
      auto t = dehn_bruteforce(p, count(step, "n", 4, w), caps);
      Json rows = Json::array();
      bool monotone = true;
      for (const auto& e : t.entries) {
        rows.push_back(Json{{"m", e.m}, {"value", e.value}, {"capped", e.capped}, {"witness", format(p, e.witness)},
                            {"trivial_words", e.trivial_words}});
        if (e.m > 0 && e.value < t.entries[e.m - 1].value) monotone = false;
      }
      out.data["table"] = rows;
      out.data["caps"] = Json{{"k_cap", caps.k_cap}, {"conjugator_cap", caps.conjugator_cap},
                              {"h_letter_cap", caps.h_letter_cap}};
      verdict(out, "monotone", monotone ? Verdict::Pass : Verdict::Fail, "values non-decreasing in m");
      if (step.contains("expect")) {
        const auto want = step["expect"].get<std::vector<std::size_t>>();
        bool ok = want.size() <= t.entries.size();
        bool capped = false;
        for (std::size_t m = 0; ok && m < want.size(); ++m) {
          ok = t.entries[m].value == want[m];
          capped = capped || t.entries[m].capped;
        }
        verdict(out, "values", ok ? (capped ? Verdict::Inconclusive : Verdict::Pass) : Verdict::Fail,
                std::string(ok ? "table matches" : "table differs") + (capped ? " (caps bind)" : ""));
      }
    } else {
      throw InvalidSpec(w + " has unknown check '" + check + "'");
    }
  }

  // Corollary-style reduction: G *_phi with phi: C -> K^s equals G *_psi with psi = s^-1 phi s,
  // which in turn is the amalgam G *_K (K *_psi).
  void hnn2_recipe(const Json& step, StepOutcome& out) {
    const std::string w = "step '" + out.id + "'";
    check_keys(step, {"id", "op", "base", "k", "inclusion", "c", "s", "phi", "stable_letter", "radius"}, w);
    GroupPtr g = ctx_.group(str(step, "base", w));
    GroupPtr k = ctx_.group(str(step, "k", w));
    Monomorphism inc = ctx_.mono(str(step, "inclusion", w));
    if (inc.codomain != g || inc.domain->ambient() != k) throw InvalidSpec(w + ": inclusion must map K into the base");
    const std::string tname = step.contains("stable_letter") ? str(step, "stable_letter", w) : "t";
    const std::vector<Word> c = words(k, strings(step, "c", w));
    const std::vector<Word> phi = words(g, strings(step, "phi", w));
    if (c.size() != phi.size() || c.empty()) throw InvalidSpec(w + ": one phi image per generator of C");
    const Word s = g->normalize(g->parse(step.contains("s") ? str(step, "s", w) : ""));
    const std::size_t r = count(step, "radius", 3, w);

    // psi(c) = s^-1 phi(c) s must lie in K; pull it back along the inclusion
    auto k_in_g = make_subgroup(g, inc.images);
    const auto k_ball = group_ball(k, ctx_.budgets().radius, 200000);
    std::map<Word, Word> preimage;
    for (const auto& x : k_ball) preimage.emplace(g->normalize(inc.apply(x)), x);
    std::vector<Word> psi_k;
    bool into_k = true;
    for (const auto& y : phi) {
      const Word conj = g->normalize(concat({inverse(s), y, s}));
      if (k_in_g->contains(conj) != Tri::Yes) into_k = false;
      auto it = preimage.find(conj);
      if (it == preimage.end()) {
        into_k = false;
        break;
      }
      psi_k.push_back(it->second);
    }
    verdict(out, "psi maps C into K", into_k ? Verdict::Pass : Verdict::Fail,
            into_k ? "s^-1 phi(C) s lies in K" : "some s^-1 phi(c) s is outside K within the ball");
    if (!into_k) return;

    std::vector<Word> c_in_g;
    for (const auto& x : c) c_in_g.push_back(g->normalize(inc.apply(x)));
    GroupPtr g_phi = build_hnn(out.id, Monomorphism{make_subgroup(g, c_in_g), g, phi}, tname, ctx_.build_options());
    GroupPtr l = build_hnn(out.id + ".L", Monomorphism{make_subgroup(k, c), k, psi_k}, tname, ctx_.build_options());
    std::vector<Word> k_gens;
    for (std::size_t i = 0; i < k->rank(); ++i) k_gens.push_back(Word{letter(i)});
    std::vector<Word> k_in_l = k_gens;  // the base of L sits at offset 0
    GroupPtr gl = build_amalgam(out.id + ".amalgam", make_monomorphism(k, g, inc.images),
                                make_monomorphism(k, l, k_in_l), ctx_.build_options());
    const auto* am = static_cast<const AmalgamGroup*>(gl.get());
    const auto* hp = static_cast<const HNNGroup*>(g_phi.get());
    const Letter t_phi = hp->stable_letter();
    const Letter t_l = static_cast<const HNNGroup*>(l.get())->stable_letter();

    // theta: t -> s t_L, identity on G; theta_inv: t_L -> s^-1 t, K -> G along the inclusion
    auto theta = [&](const Word& x) {
      Word outw;
      for (Letter a : x) {
        Word piece;
        if (generator_of(a) == generator_of(t_phi)) {
          piece = concat(am->to_global(s, 0), am->to_global(Word{t_l}, 1));
          if (is_inverse(a)) piece = inverse(piece);
        } else {
          piece = am->to_global(Word{a}, 0);
        }
        outw.insert(outw.end(), piece.begin(), piece.end());
      }
      return gl->normalize(outw);
    };
    auto theta_inv = [&](const Word& y) {
      Word outw;
      for (Letter a : y) {
        const std::size_t f = *gl->factor_of_letter(a);
        const Letter local = am->to_local(a);
        Word piece;
        if (f == 0) {
          piece = Word{local};
        } else if (generator_of(local) == generator_of(t_l)) {
          piece = concat(inverse(s), Word{letter(generator_of(t_phi))});
          if (is_inverse(local)) piece = inverse(piece);
        } else {
          piece = inc.apply(Word{local});
        }
        outw.insert(outw.end(), piece.begin(), piece.end());
      }
      return g_phi->normalize(outw);
    };

    std::size_t checked = 0, bad = 0;
    for (const auto& x : group_ball(g_phi, r, 200000)) {
      ++checked;
      if (theta_inv(theta(x)) != x) ++bad;
    }
    for (const auto& y : group_ball(gl, r, 200000)) {
      ++checked;
      if (theta(theta_inv(y)) != y) ++bad;
    }
    std::size_t relations = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Word rel = concat({Word{t_phi}, c_in_g[i], Word{-t_phi}, inverse(phi[i])});
      relations += theta(rel).empty() ? 0 : 1;
    }
    verdict(out, "relations preserved", relations ? Verdict::Fail : Verdict::Pass,
            std::to_string(c.size() - relations) + " of " + std::to_string(c.size()) + " defining relations map to 1");
    verdict(out, "natural isomorphism on the ball", bad ? Verdict::Fail : Verdict::Pass,
            std::to_string(checked - bad) + " of " + std::to_string(checked) + " round trips are exact");

    std::vector<Word> periph = k_in_l;
    for (auto& x : periph) x = g->normalize(inc.apply(x));
    periph.push_back(g_phi->normalize(concat(inverse(s), Word{t_phi})));
    ctx_.put_group(out.id, g_phi);
    ctx_.put_group(out.id + ".amalgam", gl);
    ctx_.put_subgroup(out.id, make_subgroup(g_phi, periph));
    out.data["group"] = g_phi->name();
    out.data["amalgam"] = gl->name();
    Json pj = Json::array();
    for (const auto& x : periph) pj.push_back(g_phi->format(x));
    out.data["peripheral"] = pj;
  }

  Context& ctx_;
  RunReport& report_;
};

bool is_budget_error(const std::exception& e) {
  return dynamic_cast<const BudgetExceeded*>(&e) || dynamic_cast<const WindowTooSmall*>(&e) ||
         dynamic_cast<const CombinatorialBlowup*>(&e) || dynamic_cast<const CapBound*>(&e);
}

void run_exports(const Json& spec, Context& ctx, RunReport& report) {
  auto it = spec.find("exports");
  if (it == spec.end()) return;
  if (!it->is_array()) throw InvalidSpec("exports must be an array");
  for (const auto& e : *it) {
    check_keys(e, {"graph", "format", "path", "radius", "vertex", "stab_length"}, "export");
    auto g = ctx.graph(str(e, "graph", "export"));
    const std::string fmt = e.contains("format") ? str(e, "format", "export") : "dot";
    if (fmt != "dot" && fmt != "json") throw InvalidSpec("export format is 'dot' or 'json'");
    const GSetElem v = e.contains("vertex") ? element_ref(g, e["vertex"], "export") : default_vertex(g);
    BallOptions bo;
    bo.stab_length = count(e, "stab_length", ctx.budgets().stab_length, "export");
    bo.max_vertices = ctx.budgets().max_vertices;
    auto ball = ball_view(g, {v}, count(e, "radius", 3, "export"), bo);
    std::vector<std::size_t> cut;
    if (g->provenance().kind != Provenance::Kind::None)
      for (std::size_t i = 0; i < ball.size(); ++i)
        if (ball.elems[i].orbit == g->provenance().z_orbit) cut.push_back(i);
    write_text(str(e, "path", "export"), fmt == "dot" ? export_dot(ball, g->name(), cut)
                                                      : export_ball_json(ball).dump(2) + "\n");
    StepOutcome s;
    s.id = "export:" + str(e, "path", "export");
    s.op = "export";
    s.data["vertices"] = ball.size();
    report.steps.push_back(std::move(s));
  }
}

}  // namespace

int RunReport::exit_code() const {
  if (invalid) return 3;
  if (budget_exhausted) return 2;
  for (const auto& v : verdicts)
    if (v.verdict == Verdict::Fail) return 1;
  return 0;
}

Json RunReport::to_json() const {
  Json j;
  j["name"] = name;
  j["budgets"] = budgets;
  Json st = Json::array();
  for (const auto& s : steps)
    st.push_back(Json{{"id", s.id}, {"op", s.op}, {"status", s.status}, {"detail", s.detail}, {"data", s.data}});
  j["steps"] = st;
  Json vs = Json::array();
  for (const auto& v : verdicts)
    vs.push_back(Json{{"step", v.step}, {"name", v.name}, {"verdict", to_string(v.verdict)}, {"detail", v.detail}});
  j["verdicts"] = vs;
  j["timings_ms"] = Json::object();
  for (const auto& [k, t] : timings_ms) j["timings_ms"][k] = t;
  j["budget_exhausted"] = budget_exhausted;
  j["exit_code"] = exit_code();
  if (!error.empty()) j["error"] = error;
  return j;
}

RunReport run_pipeline(const Json& spec, const PipelineOptions& opts) {
  RunReport report;
  std::optional<Context> ctx;
  try {
    check_keys(spec, {"name", "groups", "subgroups", "monomorphisms", "graphs", "presentations", "pipeline", "budgets",
                      "exports"},
               "spec");
    report.name = spec.value("name", std::string("pipeline"));
    const Budgets b = read_budgets(spec, opts);
    report.budgets = b.to_json();
    ctx.emplace(spec, b, opts.trust_monomorphisms);
    ctx->build_all();
    if (spec.contains("pipeline") && !spec["pipeline"].is_array()) throw InvalidSpec("pipeline must be an array");
  } catch (const std::exception& e) {
    report.invalid = true;
    report.error = e.what();
    return report;
  }

  Runner runner(*ctx, report);
  std::set<std::string> seen;
  for (const auto& step : spec.value("pipeline", Json::array())) {
    StepOutcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      out.id = str(step, "id", "pipeline step");
      out.op = str(step, "op", "step '" + out.id + "'");
      if (!seen.insert(out.id).second) throw InvalidSpec("duplicate step id '" + out.id + "'");
      runner.run_step(step, out);
    } catch (const std::exception& e) {
      out.detail = e.what();
      if (is_budget_error(e)) {
        out.status = "budget-exhausted";
        report.budget_exhausted = true;
      } else {
        out.status = "error";
        report.invalid = true;
        report.error = e.what();
      }
    }
    if (opts.timings)
      report.timings_ms[out.id] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const bool stop = out.status != "ok";
    const bool keep = !opts.audits_only || out.op == "audit" || out.op == "hnn2-recipe";
    if (keep || stop) report.steps.push_back(std::move(out));
    if (stop) return report;
  }
  if (!opts.audits_only && opts.write_exports) {
    try {
      run_exports(spec, *ctx, report);
    } catch (const std::exception& e) {
      if (is_budget_error(e)) {
        report.budget_exhausted = true;
      } else {
        report.invalid = true;
      }
      report.error = e.what();
    }
  }
  return report;
}

RunReport run_pipeline_file(const std::string& path, const PipelineOptions& opts) {
  std::ifstream in(path);
  if (!in) {
    RunReport r;
    r.invalid = true;
    r.error = "IOError: cannot read " + path;
    return r;
  }
  Json spec;
  try {
    spec = Json::parse(in);
  } catch (const std::exception& e) {
    RunReport r;
    r.invalid = true;
    r.error = std::string("InvalidSpec: ") + e.what();
    return r;
  }
  return run_pipeline(spec, opts);
}

// --- export ----------------------------------------------------------------------

std::string export_dot(const BallView& b, const std::string& name, const std::vector<std::size_t>& cut) {
  static const char* palette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3",
                                  "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd"};
  std::ostringstream out;
  out << "graph \"" << name << "\" {\n  node [style=filled];\n";
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::size_t orbit = b.elems.empty() ? 0 : b.elems[i].orbit;
    const bool is_cut = std::find(cut.begin(), cut.end(), i) != cut.end();
    std::string label = b.labels.empty() ? std::to_string(i) : b.labels[i];
    std::string escaped;
    for (char ch : label) {
      if (ch == '"' || ch == '\\') escaped += '\\';
      escaped += ch;
    }
    out << "  n" << i << " [label=\"" << escaped << "\", fillcolor=\"" << palette[orbit % 10] << "\", shape="
        << (is_cut ? "doublecircle" : "circle") << "];\n";
  }
  for (const auto& [u, v] : b.edges) out << "  n" << u << " -- n" << v << ";\n";
  out << "}\n";
  return out.str();
}

Json export_ball_json(const BallView& b) {
  Json vs = Json::array();
  for (std::size_t i = 0; i < b.size(); ++i) {
    Json v{{"index", i}, {"label", b.labels.empty() ? std::to_string(i) : b.labels[i]}, {"depth", b.depth.empty() ? 0 : b.depth[i]}};
    if (!b.elems.empty()) v["orbit"] = b.elems[i].orbit;
    vs.push_back(v);
  }
  Json es = Json::array();
  for (const auto& [u, v] : b.edges) es.push_back(Json::array({u, v}));
  return Json{{"radius", b.radius}, {"vertices", vs}, {"edges", es}, {"exhausted", b.exhausted},
              {"stabilizers_truncated", b.stabilizers_truncated}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path);
  out << text;
  if (!out) throw IOError("cannot write " + path);
}

}  // namespace forge
