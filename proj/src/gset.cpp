#include "forge/gset.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "forge/errors.hpp"

namespace forge {

GSet::GSet(GroupPtr group, std::vector<Orbit> orbits, SubgroupPtr acting)
    : group_(std::move(group)), orbits_(std::move(orbits)), acting_(std::move(acting)) {
  std::set<std::string> ids;
  for (const auto& o : orbits_) {
    if (!ids.insert(o.id).second) throw InvalidSpec("duplicate orbit id '" + o.id + "'");
    if (o.stabilizer->ambient() != group_)
      throw MismatchedAmbient("stabilizer of orbit '" + o.id + "' lives in " + o.stabilizer->ambient()->name());
  }
  if (acting_ && acting_->ambient() != group_) throw MismatchedAmbient("acting subgroup lives in another group");
}

std::optional<std::size_t> GSet::find_orbit(const std::string& id) const {
  for (std::size_t i = 0; i < orbits_.size(); ++i)
    if (orbits_[i].id == id) return i;
  return std::nullopt;
}

GSetElem GSet::element(std::size_t orbit, std::span<const Letter> g) const {
  return GSetElem{orbit, orbits_.at(orbit).stabilizer->coset_rep(g)};
}

GSetElem GSet::act(std::span<const Letter> g, const GSetElem& x) const { return element(x.orbit, concat(g, x.rep)); }

bool GSet::equal(const GSetElem& x, const GSetElem& y) const {
  return x.orbit == y.orbit && element(x.orbit, x.rep).rep == element(y.orbit, y.rep).rep;
}

SubgroupPtr GSet::stabilizer_of(const GSetElem& x) const {
  const auto& h = orbits_.at(x.orbit).stabilizer;
  if (group_->normalize(x.rep).empty()) return h;
  std::vector<Word> gens;
  for (const auto& w : h->generators()) gens.push_back(concat({x.rep, w, inverse(x.rep)}));
  return make_subgroup(group_, std::move(gens));
}

std::vector<GSetElem> GSet::elements() const {
  std::vector<Word> group_elements;
  if (acting_) {
    if (acting_->finite() != Tri::Yes) throw BudgetExceeded("acting group is not known to be finite");
    group_elements = acting_->enumerate(static_cast<std::size_t>(-1), 1u << 20);
  } else {
    if (!group_->is_finite()) throw BudgetExceeded(group_->name() + " is infinite");
    std::vector<Word> gens;
    for (std::size_t i = 0; i < group_->rank(); ++i) gens.push_back(Word{letter(i)});
    group_elements = ball_enumerate(group_, gens, static_cast<std::size_t>(-1));
  }
  std::vector<GSetElem> out;
  for (std::size_t i = 0; i < orbits_.size(); ++i) {
    std::set<GSetElem> seen;
    for (const auto& g : group_elements) seen.insert(element(i, g));
    out.insert(out.end(), seen.begin(), seen.end());
  }
  return out;
}

std::string GSet::format(const GSetElem& x) const {
  return orbits_.at(x.orbit).id + ":" + group_->format(x.rep);
}

// --- maps -----------------------------------------------------------------------

GSetElem GMap::apply(const GSetElem& x) const { return codomain->act(x.rep, images.at(x.orbit)); }

std::optional<std::pair<std::size_t, Word>> GMap::equivariance_violation() const {
  for (std::size_t i = 0; i < domain->orbit_count(); ++i) {
    for (const auto& h : domain->orbit(i).stabilizer->generators()) {
      if (codomain->act(h, images[i]) != codomain->element(images[i].orbit, images[i].rep))
        return std::make_pair(i, h);
    }
  }
  return std::nullopt;
}

GMap make_gmap(GSetPtr domain, GSetPtr codomain, std::vector<GSetElem> images) {
  if (domain->group() != codomain->group()) throw GroupMismatch("maps must stay inside one group");
  if (images.size() != domain->orbit_count()) throw InvalidSpec("one image per domain orbit required");
  for (auto& x : images) {
    if (x.orbit >= codomain->orbit_count()) throw InvalidSpec("image orbit out of range");
    x = codomain->element(x.orbit, x.rep);
  }
  GMap m{std::move(domain), std::move(codomain), std::move(images)};
  if (auto v = m.equivariance_violation())
    throw StabilizerNotContained("stabilizer generator " + m.domain->group()->format(v->second) + " of orbit '" +
                                 m.domain->orbit(v->first).id + "' moves its image");
  return m;
}

GMap identity_map(const GSetPtr& s) {
  std::vector<GSetElem> images;
  for (std::size_t i = 0; i < s->orbit_count(); ++i) images.push_back(s->base(i));
  return GMap{s, s, std::move(images)};
}

namespace {

// Handle of `along.codomain` for the image of a handle of `along.domain`'s ambient group.
SubgroupPtr push_forward(const SubgroupPtr& h, const Monomorphism& along) {
  const GroupPtr& a = along.domain->ambient();
  const GroupPtr& g = along.codomain;
  for (std::size_t f = 0; f < g->factor_count(); ++f) {
    if (g->factor(f) != a) continue;
    bool shifted = along.images.size() == a->rank();
    for (std::size_t i = 0; i < along.images.size() && shifted; ++i)
      shifted = along.images[i] == Word{letter(g->factor_offset(f) + i)} &&
                along.domain->generators()[i] == Word{letter(i)};
    if (shifted) return factor_subgroup(g, f, h);
  }
  std::vector<Word> gens;
  for (const auto& w : h->generators()) gens.push_back(along.apply(w));
  return make_subgroup(g, std::move(gens));
}

}  // namespace

GSetPtr transport(const GSet& s, const Monomorphism& along) {
  if (along.domain->ambient() != s.group()) throw GroupMismatch("transport map does not start at the set's group");
  std::vector<Orbit> orbits;
  for (const auto& o : s.orbits()) orbits.push_back(Orbit{o.id, push_forward(o.stabilizer, along)});
  SubgroupPtr acting = push_forward(s.acting() ? s.acting() : whole_group(s.group()), along);
  return std::make_shared<GSet>(along.codomain, std::move(orbits), std::move(acting));
}

Induced induce_gset(const GSetPtr& s) {
  if (s->acting()) {
    for (const auto& o : s->orbits()) {
      const Tri t = s->acting()->contains_subgroup(*o.stabilizer);
      if (t != Tri::Yes)
        throw StabilizerNotContained("stabilizer of orbit '" + o.id + "' is not inside " + s->acting()->describe());
    }
  }
  auto out = std::make_shared<GSet>(s->group(), s->orbits());
  std::vector<GSetElem> images;
  for (std::size_t i = 0; i < s->orbit_count(); ++i) images.push_back(out->base(i));
  return Induced{out, GMap{s, out, std::move(images)}};
}

GMap extend_map(const Induced& induced, const GMap& f) {
  if (f.domain != induced.iota.domain) throw GroupMismatch("map does not start at the induced set's source");
  return make_gmap(induced.set, f.codomain, f.images);
}

GSetPtr disjoint_union(const GSet& a, const GSet& b) {
  if (a.group() != b.group()) throw GroupMismatch("disjoint union of sets over different groups");
  std::vector<Orbit> orbits = a.orbits();
  for (Orbit o : b.orbits()) {
    // clashing ids from the second set get primes
    while (std::any_of(orbits.begin(), orbits.end(), [&](const Orbit& p) { return p.id == o.id; })) o.id += "'";
    orbits.push_back(std::move(o));
  }
  return std::make_shared<GSet>(a.group(), std::move(orbits));
}

// --- quotients ------------------------------------------------------------------

namespace {

SubgroupPtr class_handle(const GSet& s, const std::vector<std::size_t>& members, const std::vector<Word>& offset,
                         const std::vector<Word>& extra, std::size_t root) {
  const GroupPtr& g = s.group();
  if (members.size() == 1 && extra.empty()) return s.orbit(root).stabilizer;
  std::vector<Word> gens;
  for (std::size_t m : members) {
    for (const auto& w : s.orbit(m).stabilizer->generators())
      gens.push_back(g->normalize(concat({inverse(offset[m]), w, offset[m]})));
  }
  gens.insert(gens.end(), extra.begin(), extra.end());
  auto holds_all = [&](const SubgroupPtr& h) {
    return std::all_of(gens.begin(), gens.end(), [&](const Word& w) { return h->contains(w) == Tri::Yes; });
  };
  for (std::size_t m : members)
    if (offset[m].empty() && s.orbit(m).stabilizer->decision_complete() && holds_all(s.orbit(m).stabilizer))
      return s.orbit(m).stabilizer;
  if (g->is_finite()) return make_subgroup(g, std::move(gens));
  if (const auto* a = dynamic_cast<const AmalgamGroup*>(g.get())) {
    std::array<SubgroupPtr, 2> side;
    for (std::size_t m : members) {
      if (!offset[m].empty()) continue;
      auto f = as_factor_subgroup(s.orbit(m).stabilizer);
      if (f && !side[f->first] && f->second->contains_subgroup(*a->edge_handle(f->first)) == Tri::Yes)
        side[f->first] = f->second;
    }
    if (side[0] && side[1]) {
      auto join = amalgam_join(g, side[0], side[1]);
      if (holds_all(join)) return join;
    }
  }
  return make_subgroup(g, std::move(gens));
}

std::string class_id(const GSet& s, const std::vector<std::size_t>& members) {
  std::string id;
  for (std::size_t m : members) {
    if (!id.empty()) id += "~";
    id += s.orbit(m).id;
  }
  return id;
}

}  // namespace

Quotient quotient_gset(const GSetPtr& s, const std::vector<std::pair<GSetElem, GSetElem>>& identify,
                       std::optional<std::size_t> root_hint) {
  const GroupPtr& g = s->group();
  const std::size_t n = s->orbit_count();
  std::vector<std::size_t> root(n);
  std::vector<std::vector<std::size_t>> members(n);
  std::vector<Word> offset(n);
  std::vector<std::vector<Word>> extra(n);
  for (std::size_t i = 0; i < n; ++i) {
    root[i] = i;
    members[i] = {i};
  }
  for (const auto& [x, y] : identify) {
    if (x.orbit >= n || y.orbit >= n) throw InvalidSpec("identified element outside the set");
    const std::size_t ri = root[x.orbit];
    const std::size_t rj = root[y.orbit];
    // x.rep o_i b_ri = y.rep o_j b_rj
    const Word left = concat(x.rep, offset[x.orbit]);
    const Word right = concat(y.rep, offset[y.orbit]);
    if (ri == rj) {
      Word e = g->normalize(concat(inverse(right), left));
      if (!e.empty()) extra[ri].push_back(std::move(e));
      continue;
    }
    bool keep_i = ri < rj;
    if (root_hint && ri == *root_hint) keep_i = true;
    if (root_hint && rj == *root_hint) keep_i = false;
    const std::size_t keep = keep_i ? ri : rj;
    const std::size_t drop = keep_i ? rj : ri;
    // b_drop = shift . b_keep
    const Word shift_word = keep_i ? g->normalize(concat(inverse(right), left)) : g->normalize(concat(inverse(left), right));
    for (std::size_t m : members[drop]) {
      offset[m] = g->normalize(concat(offset[m], shift_word));
      root[m] = keep;
      members[keep].push_back(m);
    }
    for (const auto& e : extra[drop]) extra[keep].push_back(g->normalize(concat({inverse(shift_word), e, shift_word})));
    members[drop].clear();
    extra[drop].clear();
  }
  std::vector<Orbit> orbits;
  std::vector<std::size_t> class_index(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    if (root[r] != r) continue;
    std::vector<std::size_t> mem = members[r];
    std::sort(mem.begin(), mem.end());
    class_index[r] = orbits.size();
    orbits.push_back(Orbit{class_id(*s, mem), class_handle(*s, mem, offset, extra[r], r)});
  }
  auto q = std::make_shared<GSet>(g, std::move(orbits));
  Quotient out;
  out.set = q;
  out.offset = offset;
  std::vector<GSetElem> images;
  for (std::size_t m = 0; m < n; ++m) {
    out.class_of.push_back(class_index[root[m]]);
    images.push_back(q->element(class_index[root[m]], offset[m]));
  }
  out.map = GMap{s, q, std::move(images)};
  return out;
}

// --- pushouts -------------------------------------------------------------------

Pushout pushout_gsets(const GMap& phi, const GMap& psi, std::optional<std::size_t> root_hint) {
  if (phi.domain != psi.domain) throw GroupMismatch("pushout maps must share their domain");
  const GroupPtr& g = phi.domain->group();
  if (phi.codomain->group() != g || psi.codomain->group() != g) throw GroupMismatch("pushout across different groups");
  auto u = disjoint_union(*phi.codomain, *psi.codomain);
  const std::size_t ns = phi.codomain->orbit_count();
  std::vector<std::pair<GSetElem, GSetElem>> ident;
  for (std::size_t r = 0; r < phi.domain->orbit_count(); ++r) {
    GSetElem s = phi.images[r];
    GSetElem t = psi.images[r];
    t.orbit += ns;
    ident.emplace_back(s, t);
  }
  Quotient q = quotient_gset(u, ident, root_hint);
  Pushout p;
  p.z = q.set;
  p.class_of = q.class_of;
  p.offset = q.offset;
  p.phi = phi;
  p.psi = psi;
  std::vector<GSetElem> si(q.map.images.begin(), q.map.images.begin() + static_cast<std::ptrdiff_t>(ns));
  std::vector<GSetElem> ti(q.map.images.begin() + static_cast<std::ptrdiff_t>(ns), q.map.images.end());
  p.iota = GMap{phi.codomain, q.set, std::move(si)};
  p.jota = GMap{psi.codomain, q.set, std::move(ti)};
  return p;
}

GMap pushout_factor(const Pushout& p, const GMap& alpha, const GMap& beta) {
  if (alpha.domain != p.iota.domain || beta.domain != p.jota.domain) throw GroupMismatch("maps do not start at S and T");
  if (alpha.codomain != beta.codomain) throw GroupMismatch("maps must share a target");
  for (std::size_t r = 0; r < p.phi.domain->orbit_count(); ++r) {
    if (alpha.apply(p.phi.images[r]) != beta.apply(p.psi.images[r]))
      throw GroupMismatch("maps disagree on R-orbit '" + p.phi.domain->orbit(r).id + "'");
  }
  const std::size_t ns = p.iota.domain->orbit_count();
  auto image_of = [&](std::size_t m) { return m < ns ? alpha.images[m] : beta.images[m - ns]; };
  std::vector<std::optional<GSetElem>> images(p.z->orbit_count());
  for (std::size_t m = 0; m < p.class_of.size(); ++m) {
    const std::size_t c = p.class_of[m];
    // image(base_c) = offset_m^-1 . image(base_m)
    GSetElem candidate = alpha.codomain->act(inverse(p.offset[m]), image_of(m));
    if (!images[c])
      images[c] = candidate;
    else if (*images[c] != candidate)
      throw GroupMismatch("pushout factorization is not well defined");
  }
  std::vector<GSetElem> out;
  for (auto& x : images) out.push_back(*x);
  return make_gmap(p.z, alpha.codomain, std::move(out));
}

// --- chains ---------------------------------------------------------------------

namespace {

struct ChainSetup {
  Word h;       // z = h . iota(s)
  Word gp;      // h^-1 g h, fixes iota(s)
  GSetElem s;   // in S
  GSetElem t;   // in T
  SubgroupPtr gs;
  SubgroupPtr gt;
};

ChainSetup setup_chain(std::span<const Letter> g, const GSetElem& z, const Pushout& p, std::size_t r_orbit) {
  const GroupPtr& grp = p.z->group();
  if (r_orbit >= p.phi.domain->orbit_count()) throw InvalidSpec("no such R-orbit");
  ChainSetup c;
  c.s = p.phi.images[r_orbit];
  c.t = p.psi.images[r_orbit];
  const GSetElem zs = p.iota.apply(c.s);
  const GSetElem zc = p.z->element(z.orbit, z.rep);
  if (zc.orbit != zs.orbit) throw NotAStabilizer("z is not in the identified orbit");
  if (p.z->act(g, zc) != zc) throw NotAStabilizer(grp->format(g) + " does not fix " + p.z->format(zc));
  c.h = grp->normalize(concat(zc.rep, inverse(zs.rep)));
  c.gp = grp->normalize(concat({inverse(c.h), g, c.h}));
  c.gs = p.iota.domain->stabilizer_of(c.s);
  c.gt = p.jota.domain->stabilizer_of(c.t);
  return c;
}

std::vector<Word> conjugated_chain(const GroupPtr& grp, const std::vector<Word>& plain) {
  std::vector<Word> out;
  Word prefix;
  for (const auto& f : plain) {
    out.push_back(grp->normalize(concat({prefix, f, inverse(prefix)})));
    prefix = grp->normalize(concat(prefix, f));
  }
  return out;
}

}  // namespace

Chain chain_factorize(std::span<const Letter> g, const GSetElem& z, const Pushout& p, std::size_t r_orbit,
                      std::size_t budget) {
  const GroupPtr& grp = p.z->group();
  ChainSetup c = setup_chain(g, z, p, r_orbit);
  Chain out;
  out.conjugator = c.h;
  if (c.gs->contains(c.gp) == Tri::Yes) return out;

  // plain factors f0 f1 ... alternating G_t, G_s, product in gp G_s
  std::vector<Word> plain;
  bool done = false;
  const auto* amalgam = dynamic_cast<const AmalgamGroup*>(grp.get());
  auto fs = as_factor_subgroup(c.gs);
  auto ft = as_factor_subgroup(c.gt);
  if (amalgam && fs && ft && fs->first != ft->first) {
    const auto form = amalgam->structured(c.gp);
    bool in_join = true;
    for (const auto& syl : form.syllables) {
      const auto& inner = syl.factor == ft->first ? ft->second : fs->second;
      in_join = in_join && inner->contains(syl.local) == Tri::Yes;
    }
    if (in_join) {
      for (const auto& syl : form.syllables) {
        const bool t_side = syl.factor == ft->first;
        if (plain.empty() && !t_side) plain.push_back(Word{});
        plain.push_back(amalgam->to_global(syl.local, syl.factor));
      }
      // The trailing edge-group element and a trailing G_s syllable are absorbed by G_s.
      if (!plain.empty() && plain.size() % 2 == 0) plain.pop_back();
      done = true;
    }
  }
  if (!done) {
    const bool finite = c.gs->finite() == Tri::Yes && c.gt->finite() == Tri::Yes;
    const std::size_t len = finite ? static_cast<std::size_t>(-1) : budget;
    const auto ts = c.gt->enumerate(len, 20000);
    const auto ss = c.gs->enumerate(len, 20000);
    struct Node {
      Word elem;
      std::size_t parent;
      Word factor;
      int type;  // 0: G_t, 1: G_s
    };
    std::vector<Node> nodes{{Word{}, 0, {}, 1}};
    std::unordered_set<Word, WordHash> seen{Word{}};
    std::size_t found = static_cast<std::size_t>(-1);
    std::size_t begin = 0;
    for (std::size_t depth = 0; depth < budget && found == static_cast<std::size_t>(-1); ++depth) {
      const std::size_t end = nodes.size();
      if (begin == end) break;
      for (std::size_t k = begin; k < end && found == static_cast<std::size_t>(-1); ++k) {
        const int type = 1 - nodes[k].type;
        for (const auto& f : type == 0 ? ts : ss) {
          Word x = grp->normalize(concat(nodes[k].elem, f));
          if (!seen.insert(x).second) continue;
          nodes.push_back(Node{x, k, f, type});
          if (type == 0 && c.gs->contains(concat(inverse(x), c.gp)) == Tri::Yes) {
            found = nodes.size() - 1;
            break;
          }
        }
      }
      begin = end;
    }
    if (found == static_cast<std::size_t>(-1)) throw BudgetExceeded("no alternating chain within the budget");
    std::vector<Word> rev;
    for (std::size_t k = found; k != 0; k = nodes[k].parent) rev.push_back(nodes[k].factor);
    plain.assign(rev.rbegin(), rev.rend());
  }
  out.factors = conjugated_chain(grp, plain);
  Word prod;
  for (const auto& f : plain) prod = concat(prod, f);
  out.product = grp->normalize(prod);
  return out;
}

bool verify_chain(const Chain& chain, std::span<const Letter> g, const Pushout& p, std::size_t r_orbit) {
  const GroupPtr& grp = p.z->group();
  const GSetElem s = p.phi.images[r_orbit];
  const GSetElem t = p.psi.images[r_orbit];
  const GSet& sset = *p.iota.domain;
  const GSet& tset = *p.jota.domain;
  const Word gp = grp->normalize(concat({inverse(chain.conjugator), g, chain.conjugator}));
  Word pi;
  for (std::size_t i = 0; i < chain.factors.size(); ++i) {
    const Word& x = chain.factors[i];
    if (i % 2 == 0) {
      const GSetElem ti = tset.act(pi, t);
      if (tset.act(x, ti) != ti) return false;
    } else {
      const GSetElem si = sset.act(pi, s);
      if (sset.act(x, si) != si) return false;
    }
    pi = grp->normalize(concat(x, pi));
  }
  if (pi != chain.product) return false;
  return sset.act(pi, s) == sset.act(gp, s);
}

}  // namespace forge
