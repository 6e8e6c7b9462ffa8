#include "forge/relpres.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "forge/errors.hpp"

namespace forge {

Token s_token(std::size_t i, bool inv) {
  Token t;
  t.s = letter(i, inv);
  return t;
}

Token h_token(const RelPresentation& p, std::size_t i, std::span<const Letter> g) {
  if (i >= p.hs.size()) throw InvalidSpec("peripheral index out of range");
  Token t;
  t.h = static_cast<int>(i);
  t.value = p.group->normalize(g);
  if (t.value.empty()) throw InvalidSpec("peripheral letters must be nontrivial");
  if (p.hs[i]->contains(t.value) == Tri::No)
    throw InvalidSpec(p.group->format(t.value) + " is not in " + p.h_names.at(i));
  return t;
}

RelWord inverse(const RelWord& w) {
  RelWord out(w.rbegin(), w.rend());
  for (auto& t : out) {
    if (t.h < 0)
      t.s = -t.s;
    else
      t.value = inverse(t.value);
  }
  return out;
}

namespace {

RelWord reduce_with(const RelWord& w, const std::function<Word(const Word&)>& norm) {
  RelWord out;
  for (const Token& t : w) {
    if (!out.empty() && t.h < 0 && out.back().h < 0 && out.back().s == -t.s) {
      out.pop_back();
    } else if (!out.empty() && t.h >= 0 && out.back().h == t.h) {
      Token& top = out.back();
      top.value = norm(concat(top.value, t.value));
      top.symbols += t.symbols;
      if (top.value.empty()) out.pop_back();
    } else if (t.h >= 0) {
      Token c = t;
      c.value = norm(t.value);
      if (!c.value.empty()) out.push_back(std::move(c));
    } else {
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace

RelWord reduce(const GroupPtr& g, const RelWord& w) {
  return reduce_with(w, [&](const Word& x) { return g->normalize(x); });
}

Word evaluate(const RelPresentation& p, const RelWord& w) {
  Word out;
  for (const Token& t : w) {
    if (t.h < 0) {
      const Word& img = p.s_images.at(generator_of(t.s));
      const Word piece = is_inverse(t.s) ? inverse(img) : img;
      out.insert(out.end(), piece.begin(), piece.end());
    } else {
      out.insert(out.end(), t.value.begin(), t.value.end());
    }
  }
  return p.group->normalize(out);
}

std::size_t symbol_count(const RelWord& w) {
  std::size_t n = 0;
  for (const auto& t : w) n += t.symbols;
  return n;
}

std::string format(const RelPresentation& p, const RelWord& w) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& t : w) {
    if (!out.empty()) out += " ";
    if (t.h < 0)
      out += p.s_names.at(generator_of(t.s)) + (is_inverse(t.s) ? "^-1" : "");
    else
      out += p.h_names.at(static_cast<std::size_t>(t.h)) + ":" + p.group->format(t.value);
  }
  return out;
}

RelWord parse_relword(const RelPresentation& p, const std::string& text) {
  RelWord out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "1") continue;
    const auto colon = tok.find(':');
    if (colon != std::string::npos) {
      const std::string name = tok.substr(0, colon);
      auto it = std::find(p.h_names.begin(), p.h_names.end(), name);
      if (it == p.h_names.end()) throw MalformedWord("unknown peripheral '" + name + "'");
      out.push_back(h_token(p, static_cast<std::size_t>(it - p.h_names.begin()), p.group->parse(tok.substr(colon + 1))));
      continue;
    }
    std::string name = tok;
    long power = 1;
    if (const auto caret = tok.find('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      try {
        power = std::stol(tok.substr(caret + 1));
      } catch (const std::exception&) {
        throw MalformedWord("bad exponent in '" + tok + "'");
      }
    }
    auto it = std::find(p.s_names.begin(), p.s_names.end(), name);
    if (it == p.s_names.end()) throw MalformedWord("unknown letter '" + name + "'");
    const auto i = static_cast<std::size_t>(it - p.s_names.begin());
    for (long k = 0; k < std::labs(power); ++k) out.push_back(s_token(i, power < 0));
  }
  return out;
}

RelatorCheck verify_relators(const RelPresentation& p) {
  RelatorCheck c;
  for (std::size_t i = 0; i < p.relators.size(); ++i) {
    Word v = evaluate(p, p.relators[i]);
    if (!v.empty()) {
      c.pass = false;
      c.failures.emplace_back(i, std::move(v));
    }
  }
  return c;
}

// --- absorbing a sub-presentation ---------------------------------------------------

RelPresentation absorb(const RelPresentation& p, const AbsorbData& d) {
  if (!d.p || d.p->ambient() != p.group) throw SubPresentationUnverified("absorbed subgroup must live in the group");
  auto in = [](const std::vector<std::size_t>& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); };
  for (auto s : d.s0)
    if (d.p->contains(p.s_images.at(s)) != Tri::Yes)
      throw SubPresentationUnverified(p.s_names[s] + " is not inside " + d.name);
  for (auto h : d.h0)
    if (d.p->contains_subgroup(*p.hs.at(h)) != Tri::Yes)
      throw SubPresentationUnverified(p.h_names[h] + " is not inside " + d.name);
  for (auto r : d.r0) {
    for (const auto& t : p.relators.at(r)) {
      const bool inside = t.h < 0 ? in(d.s0, generator_of(t.s)) : in(d.h0, static_cast<std::size_t>(t.h));
      if (!inside) throw SubPresentationUnverified("relator " + format(p, p.relators[r]) + " leaves the sub-presentation");
    }
    if (!evaluate(p, p.relators[r]).empty())
      throw SubPresentationUnverified("relator " + format(p, p.relators[r]) + " does not hold");
  }

  RelPresentation out;
  out.group = p.group;
  std::vector<std::size_t> s_map(p.s_names.size(), 0);
  for (std::size_t i = 0; i < p.s_names.size(); ++i) {
    if (in(d.s0, i)) continue;
    s_map[i] = out.s_names.size();
    out.s_names.push_back(p.s_names[i]);
    out.s_images.push_back(p.s_images[i]);
  }
  std::vector<std::size_t> h_map(p.hs.size(), 0);
  for (std::size_t i = 0; i < p.hs.size(); ++i) {
    if (in(d.h0, i)) continue;
    h_map[i] = out.hs.size();
    out.h_names.push_back(p.h_names[i]);
    out.hs.push_back(p.hs[i]);
  }
  const int new_h = static_cast<int>(out.hs.size());
  out.h_names.push_back(d.name);
  out.hs.push_back(d.p);

  for (std::size_t r = 0; r < p.relators.size(); ++r) {
    if (in(d.r0, r)) continue;
    RelWord w;
    for (const auto& t : p.relators[r]) {
      Token n = t;
      if (t.h < 0) {
        const std::size_t s = generator_of(t.s);
        if (in(d.s0, s)) {
          n.h = new_h;
          n.s = 0;
          const Word& img = p.s_images[s];
          n.value = p.group->normalize(is_inverse(t.s) ? inverse(img) : img);
        } else {
          n.s = letter(s_map[s], is_inverse(t.s));
        }
      } else {
        n.h = in(d.h0, static_cast<std::size_t>(t.h)) ? new_h : static_cast<int>(h_map[static_cast<std::size_t>(t.h)]);
      }
      w.push_back(std::move(n));
    }
    w = reduce(p.group, w);
    if (w.empty() || std::find(out.relators.begin(), out.relators.end(), w) != out.relators.end()) continue;
    out.relators.push_back(std::move(w));
  }
  return out;
}

// --- amalgams and HNN extensions -------------------------------------------------

AmalgamPresentation amalgam_presentation(const RelPresentation& p1, std::size_t k1, const RelPresentation& p2,
                                         std::size_t k2, const Monomorphism& d1, const Monomorphism& d2,
                                         BuildOptions opts) {
  if (d1.codomain != p1.group || d2.codomain != p2.group)
    throw GroupMismatch("edge maps must land in the presented groups");
  for (const auto& w : d1.images)
    if (p1.hs.at(k1)->contains(w) != Tri::Yes) throw InvalidSpec("first edge map leaves K1");
  for (const auto& w : d2.images)
    if (p2.hs.at(k2)->contains(w) != Tri::Yes) throw InvalidSpec("second edge map leaves K2");
  GroupPtr g = build_amalgam(p1.group->name() + "*" + p2.group->name(), d1, d2, opts);
  const auto* am = static_cast<const AmalgamGroup*>(g.get());

  RelPresentation all;
  all.group = g;
  const RelPresentation* parts[2] = {&p1, &p2};
  std::size_t s_off[2] = {0, p1.s_names.size()};
  std::size_t h_off[2] = {0, p1.hs.size()};
  for (std::size_t f = 0; f < 2; ++f) {
    const RelPresentation& q = *parts[f];
    for (std::size_t i = 0; i < q.s_names.size(); ++i) {
      all.s_names.push_back(q.s_names[i]);
      all.s_images.push_back(am->to_global(q.s_images[i], f));
    }
    for (std::size_t i = 0; i < q.hs.size(); ++i) {
      all.h_names.push_back(q.h_names[i]);
      all.hs.push_back(factor_subgroup(g, f, q.hs[i]));
    }
  }
  for (std::size_t f = 0; f < 2; ++f) {
    for (const auto& r : parts[f]->relators) {
      RelWord w;
      for (const auto& t : r) {
        Token n = t;
        if (t.h < 0) {
          n.s = letter(generator_of(t.s) + s_off[f], is_inverse(t.s));
        } else {
          n.h = static_cast<int>(static_cast<std::size_t>(t.h) + h_off[f]);
          n.value = g->normalize(am->to_global(t.value, f));
        }
        w.push_back(std::move(n));
      }
      all.relators.push_back(std::move(w));
    }
  }
  AbsorbData ad;
  ad.h0 = {k1, h_off[1] + k2};
  for (std::size_t c = 0; c < d1.images.size(); ++c) {
    const Word a = g->normalize(am->to_global(d1.images[c], 0));
    const Word b = g->normalize(am->to_global(d2.images[c], 1));
    if (a.empty()) continue;
    ad.r0.push_back(all.relators.size());
    all.relators.push_back(RelWord{h_token(all, k1, a), h_token(all, h_off[1] + k2, inverse(b))});
  }
  ad.p = amalgam_join(g, p1.hs[k1], p2.hs[k2]);
  ad.name = "<" + p1.h_names[k1] + "," + p2.h_names[k2] + ">";
  return AmalgamPresentation{absorb(all, ad), g};
}

HNNPresentation hnn_presentation(const RelPresentation& p, std::size_t k, std::size_t l, const Monomorphism& phi,
                                 const std::string& stable_letter, BuildOptions opts) {
  if (k >= p.hs.size() || l >= p.hs.size()) throw InvalidSpec("peripheral index out of range");
  if (k == l || (p.hs[k]->contains_subgroup(*p.hs[l]) == Tri::Yes && p.hs[l]->contains_subgroup(*p.hs[k]) == Tri::Yes))
    throw KLNotDistinct(p.h_names[k] + " and " + p.h_names[l] + " coincide");
  if (phi.codomain != p.group || phi.domain->ambient() != p.group)
    throw GroupMismatch("the HNN map must act inside the presented group");
  if (p.hs[k]->contains_subgroup(*phi.domain) != Tri::Yes) throw InvalidSpec("associated subgroup is not inside K");
  for (const auto& w : phi.images)
    if (p.hs[l]->contains(w) != Tri::Yes) throw InvalidSpec("HNN map leaves L");
  GroupPtr g = build_hnn(p.group->name() + "*", phi, stable_letter, opts);
  const auto* h = static_cast<const HNNGroup*>(g.get());
  const Word t{h->stable_letter()};
  const Word ti = inverse(t);

  RelPresentation out;
  out.group = g;
  out.s_names = p.s_names;
  out.s_images = p.s_images;
  out.s_names.push_back(stable_letter);
  out.s_images.push_back(t);
  const std::size_t t_index = out.s_names.size() - 1;
  std::vector<std::size_t> h_map(p.hs.size(), 0);
  for (std::size_t i = 0; i < p.hs.size(); ++i) {
    if (i == k || i == l) continue;
    h_map[i] = out.hs.size();
    out.h_names.push_back(p.h_names[i]);
    out.hs.push_back(factor_subgroup(g, 0, p.hs[i]));
  }
  std::vector<Word> mgens;
  for (const auto& w : p.hs[k]->generators()) mgens.push_back(g->normalize(concat({t, w, ti})));
  for (const auto& w : p.hs[l]->generators()) mgens.push_back(w);
  const int m = static_cast<int>(out.hs.size());
  out.h_names.push_back("<" + p.h_names[k] + "^t," + p.h_names[l] + ">");
  out.hs.push_back(make_subgroup(g, mgens));

  for (const auto& r : p.relators) {
    RelWord w;
    for (const auto& tok : r) {
      if (tok.h < 0) {
        w.push_back(tok);
      } else if (static_cast<std::size_t>(tok.h) == k) {
        Token j = tok;
        j.h = m;
        j.value = g->normalize(concat({t, tok.value, ti}));
        j.symbols = tok.symbols + 2;
        w.push_back(s_token(t_index, true));
        w.push_back(std::move(j));
        w.push_back(s_token(t_index));
      } else {
        Token n = tok;
        n.h = static_cast<std::size_t>(tok.h) == l ? m : static_cast<int>(h_map[static_cast<std::size_t>(tok.h)]);
        w.push_back(std::move(n));
      }
    }
    out.relators.push_back(reduce(g, w));
  }
  return HNNPresentation{std::move(out), g};
}

// --- Dehn function oracle ---------------------------------------------------------

namespace {

std::string key_of(const RelWord& w) {
  std::string k;
  for (const auto& t : w) {
    k += t.h < 0 ? 's' : 'h';
    k += std::to_string(t.h < 0 ? t.s : t.h);
    for (Letter l : t.value) k += "," + std::to_string(l);
    k += ';';
  }
  return k;
}

class DehnSearch {
 public:
  DehnSearch(const RelPresentation& p, const DehnCaps& caps) : p_(p), caps_(caps) {
    // conjugator ball in F(S, H)
    std::vector<Token> gens;
    for (std::size_t i = 0; i < p.hs.size(); ++i)
      for (const auto& w : p.hs[i]->enumerate(caps.h_letter_cap, 10000))
        if (!w.empty()) gens.push_back(h_token(p, i, w));
    for (std::size_t i = 0; i < p.s_names.size(); ++i) {
      gens.push_back(s_token(i));
      gens.push_back(s_token(i, true));
    }
    letters_ = gens;
    std::vector<RelWord> ball{RelWord{}};
    std::unordered_set<std::string> seen{key_of({})};
    std::vector<RelWord> layer{RelWord{}};
    for (std::size_t r = 0; r < caps.conjugator_cap; ++r) {
      std::vector<RelWord> next;
      for (const auto& w : layer)
        for (const auto& g : gens) {
          RelWord x = w;
          x.push_back(g);
          x = reduce(p.group, x);
          if (seen.insert(key_of(x)).second) {
            ball.push_back(x);
            next.push_back(std::move(x));
          }
        }
      layer = std::move(next);
    }
    std::unordered_set<std::string> q1seen;
    for (const auto& r : p.relators) {
      for (const RelWord& rr : {r, inverse(r)}) {
        for (const auto& f : ball) {
          RelWord c = inverse(f);
          c.insert(c.end(), rr.begin(), rr.end());
          c.insert(c.end(), f.begin(), f.end());
          c = reduce(p.group, c);
          if (q1seen.insert(key_of(c)).second) q1_.push_back(std::move(c));
        }
      }
    }
    for (const auto& a : q1_) l1_.insert(key_of(a));
    if (caps.k_cap >= 2) {
      for (const auto& a : q1_)
        for (const auto& b : q1_) {
          RelWord c = a;
          c.insert(c.end(), b.begin(), b.end());
          c = reduce(p.group, c);
          if (l2_.insert(key_of(c)).second) q2_.push_back(std::move(c));
        }
    }
  }

  const std::vector<Token>& letters() const { return letters_; }

  std::optional<std::size_t> min_k(const RelWord& w) const {
    const RelWord r = reduce(p_.group, w);
    for (std::size_t k = 0; k <= caps_.k_cap; ++k)
      if (can(r, k)) return k;
    return std::nullopt;
  }

 private:
  bool can(const RelWord& w, std::size_t k) const {
    if (k == 0) return w.empty();
    if (k == 1) return l1_.count(key_of(w)) > 0;
    if (k == 2) return l2_.count(key_of(w)) > 0;
    const auto& peel = k >= 4 ? q2_ : q1_;
    const std::size_t used = k >= 4 ? 2 : 1;
    for (const auto& q : peel) {
      RelWord x = inverse(q);
      x.insert(x.end(), w.begin(), w.end());
      if (can(reduce(p_.group, x), k - used)) return true;
    }
    return false;
  }

  const RelPresentation& p_;
  DehnCaps caps_;
  std::vector<Token> letters_;
  std::vector<RelWord> q1_, q2_;
  std::unordered_set<std::string> l1_, l2_;
};

}  // namespace

std::optional<std::size_t> min_relators(const RelPresentation& p, const RelWord& w, const DehnCaps& caps) {
  if (!evaluate(p, w).empty()) throw InvalidSpec("word " + format(p, w) + " is not trivial in " + p.group->name());
  return DehnSearch(p, caps).min_k(w);
}

DehnTable dehn_bruteforce(const RelPresentation& p, std::size_t n, const DehnCaps& caps) {
  DehnSearch search(p, caps);
  const auto& alphabet = search.letters();
  DehnTable table;
  table.caps = caps;
  table.entries.resize(n + 1);
  for (std::size_t m = 0; m <= n; ++m) table.entries[m].m = m;
  table.entries[0].trivial_words = 1;
  // depth-first over all words, carrying the group value of the prefix
  RelWord w;
  std::function<void(const Word&)> go = [&](const Word& value) {
    const std::size_t m = w.size();
    if (m > 0 && value.empty()) {
      DehnEntry& e = table.entries[m];
      ++e.trivial_words;
      const auto k = search.min_k(w);
      if (!k) {
        e.capped = true;
      } else if (*k > e.value) {
        e.value = *k;
        e.witness = w;
      }
    }
    if (m == n) return;
    for (const auto& t : alphabet) {
      w.push_back(t);
      Word next = concat(value, t.h < 0 ? (is_inverse(t.s) ? inverse(p.s_images[generator_of(t.s)])
                                                           : p.s_images[generator_of(t.s)])
                                        : t.value);
      go(p.group->normalize(next));
      w.pop_back();
    }
  };
  go(Word{});
  // Delta(m) is a maximum over all words of length <= m
  for (std::size_t m = 1; m <= n; ++m) {
    DehnEntry& e = table.entries[m];
    const DehnEntry& prev = table.entries[m - 1];
    if (prev.value > e.value) {
      e.value = prev.value;
      e.witness = prev.witness;
    }
    e.capped = e.capped || prev.capped;
    e.trivial_words += prev.trivial_words;
  }
  return table;
}

}  // namespace forge
