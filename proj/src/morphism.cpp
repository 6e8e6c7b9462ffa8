#include "forge/morphism.hpp"

#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "forge/errors.hpp"

namespace forge {

Word Monomorphism::apply_sub(std::span<const Letter> sub) const { return codomain->normalize(substitute(sub, images)); }

Word Monomorphism::apply(std::span<const Letter> g) const {
  auto d = domain->decompose(g);
  if (!d) throw BudgetExceeded("cannot express element in " + domain->describe());
  if (!d->rep.empty()) throw GroupMismatch("element " + domain->ambient()->format(g) + " is outside the domain");
  return apply_sub(d->sub);
}

SubgroupPtr Monomorphism::image_handle(std::size_t budget) const { return make_subgroup(codomain, images, budget); }

Monomorphism make_monomorphism(GroupPtr domain, GroupPtr codomain, std::vector<Word> images) {
  if (images.size() != domain->rank())
    throw GroupMismatch("need one image per generator of " + domain->name());
  for (auto& w : images) w = codomain->normalize(w);
  return Monomorphism{whole_group(std::move(domain)), std::move(codomain), std::move(images)};
}

Monomorphism factor_inclusion(const GroupPtr& composite, std::size_t factor) {
  GroupPtr f = composite->factor(factor);
  std::vector<Word> images;
  for (std::size_t i = 0; i < f->rank(); ++i) images.push_back(Word{letter(composite->factor_offset(factor) + i)});
  return Monomorphism{whole_group(f), composite, std::move(images)};
}

std::string to_string(MonoVerdict v) {
  switch (v) {
    case MonoVerdict::Verified: return "verified";
    case MonoVerdict::Refuted: return "refuted";
    case MonoVerdict::Unknown: return "unknown";
  }
  return "?";
}

MonoCheck check_monomorphism(const Monomorphism& f, std::size_t budget, std::size_t cap) {
  MonoCheck out;
  const auto& dom = f.domain;
  const GroupPtr& amb = dom->ambient();
  const auto& gens = dom->generators();
  if (f.images.size() != gens.size()) {
    out.verdict = MonoVerdict::Refuted;
    out.reason = "image count differs from generator count";
    return out;
  }
  struct Entry {
    Word sub;
    Word image;
  };
  std::unordered_map<Word, Entry, WordHash> by_element;
  std::unordered_map<Word, Word, WordHash> by_image;  // image -> domain element
  by_element.emplace(Word{}, Entry{{}, {}});
  by_image.emplace(Word{}, Word{});
  std::vector<Word> layer{Word{}};
  if (amb->is_finite()) budget = std::numeric_limits<std::size_t>::max();
  for (std::size_t len = 0; len < budget; ++len) {
    std::vector<Word> next;
    for (const Word& e : layer) {
      const Entry cur = by_element.at(e);
      for (std::size_t j = 0; j < gens.size(); ++j) {
        for (bool inv : {false, true}) {
          const Letter l = letter(j, inv);
          Word x = amb->normalize(concat(e, inv ? inverse(gens[j]) : gens[j]));
          Word img = f.codomain->normalize(concat(cur.image, inv ? inverse(f.images[j]) : f.images[j]));
          Word sub = cur.sub;
          sub.push_back(l);
          auto it = by_element.find(x);
          if (it != by_element.end()) {
            if (it->second.image != img) {
              out.verdict = MonoVerdict::Refuted;
              out.witness = free_reduce(concat(sub, inverse(it->second.sub)));
              out.reason = "a relation of the domain is not preserved";
              out.examined = by_element.size();
              return out;
            }
            continue;
          }
          auto jt = by_image.find(img);
          if (jt != by_image.end()) {
            out.verdict = MonoVerdict::Refuted;
            out.witness = free_reduce(concat(sub, inverse(by_element.at(jt->second).sub)));
            out.reason = "a nontrivial element maps to the identity";
            out.examined = by_element.size();
            return out;
          }
          by_image.emplace(img, x);
          by_element.emplace(x, Entry{std::move(sub), std::move(img)});
          next.push_back(std::move(x));
          if (by_element.size() > cap) {
            out.verdict = MonoVerdict::Unknown;
            out.reason = "element cap reached";
            out.examined = by_element.size();
            return out;
          }
        }
      }
    }
    layer = std::move(next);
    if (layer.empty()) break;
  }
  out.examined = by_element.size();
  out.exact = layer.empty();
  out.verdict = MonoVerdict::Verified;
  out.reason = out.exact ? "whole domain checked" : "no violation up to length " + std::to_string(budget);
  return out;
}

std::vector<Word> ball_enumerate(const GroupPtr& g, const std::vector<Word>& gens, std::size_t radius,
                                 std::size_t cap) {
  std::vector<Word> out{Word{}};
  std::unordered_set<Word, WordHash> seen{Word{}};
  std::vector<Word> layer{Word{}};
  for (std::size_t r = 0; r < radius && !layer.empty(); ++r) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (const auto& s : gens) {
        for (bool inv : {false, true}) {
          Word x = g->normalize(concat(w, inv ? inverse(s) : s));
          if (!seen.insert(x).second) continue;
          if (seen.size() > cap) throw BudgetExceeded("ball exceeds " + std::to_string(cap) + " elements");
          out.push_back(x);
          next.push_back(std::move(x));
        }
      }
    }
    layer = std::move(next);
  }
  return out;
}

ConjugacyResult conjugacy_probe(const GroupPtr& g, std::span<const Letter> elem, const Subgroup& h,
                                std::size_t budget) {
  ConjugacyResult out;
  std::vector<Word> gens;
  for (std::size_t i = 0; i < g->rank(); ++i) gens.push_back(Word{letter(i)});
  for (const Word& x : ball_enumerate(g, gens, budget)) {
    ++out.searched;
    if (h.contains(concat({x, elem, inverse(x)})) == Tri::Yes) {
      out.found = true;
      out.witness = x;
      return out;
    }
  }
  return out;
}

Tri subgroup_contains(const Subgroup& h, std::span<const Letter> g, const GroupPtr& ambient) {
  if (ambient && ambient != h.ambient()) throw MismatchedAmbient(h.describe() + " is not a subgroup of " + ambient->name());
  return h.contains(g);
}

Word coset_rep(const Subgroup& h, std::span<const Letter> g) { return h.coset_rep(g); }

namespace {

void require_mono(const Monomorphism& f, const BuildOptions& opts, const std::string& what) {
  const MonoCheck c = check_monomorphism(f, opts.budget);
  if (c.verdict == MonoVerdict::Refuted)
    throw MonomorphismUnverified(what + " is not a monomorphism: " + c.reason);
  if (c.verdict == MonoVerdict::Unknown && !opts.trust)
    throw MonomorphismUnverified(what + " could not be verified: " + c.reason);
}

}  // namespace

GroupPtr build_amalgam(std::string name, const Monomorphism& d1, const Monomorphism& d2, BuildOptions opts) {
  if (d1.domain->ambient() != d2.domain->ambient() || d1.domain->generators() != d2.domain->generators())
    throw GroupMismatch("edge maps must share their domain");
  require_mono(d1, opts, "first edge map");
  require_mono(d2, opts, "second edge map");
  auto k1 = make_subgroup(d1.codomain, d1.images, opts.budget);
  auto k2 = make_subgroup(d2.codomain, d2.images, opts.budget);
  return std::make_shared<AmalgamGroup>(std::move(name), d1.codomain, d2.codomain, std::move(k1), std::move(k2));
}

GroupPtr build_hnn(std::string name, const Monomorphism& phi, std::string stable_letter, BuildOptions opts) {
  const GroupPtr& base = phi.codomain;
  if (phi.domain->ambient() != base) throw GroupMismatch("associated subgroup must live in the base group");
  if (base->find_generator(stable_letter))
    throw StableLetterCollision("'" + stable_letter + "' is already a generator of " + base->name());
  require_mono(phi, opts, "associating map");
  auto image = make_subgroup(base, phi.images, opts.budget);
  return std::make_shared<HNNGroup>(std::move(name), base, phi.domain, std::move(image), std::move(stable_letter));
}

}  // namespace forge
