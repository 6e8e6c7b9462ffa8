#include "forge/subgroup.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "forge/errors.hpp"

namespace forge {

std::string to_string(Tri t) {
  switch (t) {
    case Tri::No: return "no";
    case Tri::Yes: return "yes";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Trivial: return "Trivial";
    case Strategy::Whole: return "Whole";
    case Strategy::FiniteEnumeration: return "FiniteEnumeration";
    case Strategy::CyclicInAbelian: return "CyclicInAbelian";
    case Strategy::FreeFactor: return "FreeFactor";
    case Strategy::FactorSubgroup: return "FactorSubgroup";
    case Strategy::AmalgamOfHandles: return "AmalgamOfHandles";
    case Strategy::BudgetedSearch: return "BudgetedSearch";
  }
  return "?";
}

namespace {

std::vector<Word> normalized(const GroupPtr& g, std::vector<Word> gens) {
  for (auto& w : gens) w = g->normalize(w);
  return gens;
}

// Letters of a handle with n generators in rank order.
std::vector<Letter> handle_letters(std::size_t n) {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(letter(i));
    out.push_back(letter(i, true));
  }
  return out;
}

Word power(Letter l, std::int64_t k) {
  Word out;
  for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) out.push_back(k < 0 ? -l : l);
  return out;
}

}  // namespace

Subgroup::Subgroup(GroupPtr ambient, std::vector<Word> generators)
    : ambient_(std::move(ambient)), generators_(normalized(ambient_, std::move(generators))) {}

Word Subgroup::coset_rep(std::span<const Letter> g) const {
  auto d = decompose(g);
  if (!d) throw BudgetExceeded("coset representative undecided for " + describe());
  return std::move(d->rep);
}

Word Subgroup::evaluate(std::span<const Letter> sub) const { return ambient_->normalize(substitute(sub, generators_)); }

std::vector<Word> Subgroup::enumerate(std::size_t max_length, std::size_t cap) const {
  std::vector<Word> out{Word{}};
  std::unordered_set<Word, WordHash> seen{Word{}};
  std::vector<Word> layer{Word{}};
  for (std::size_t len = 0; len < max_length && !layer.empty() && out.size() < cap; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (std::size_t j = 0; j < generators_.size(); ++j) {
        for (bool inv : {false, true}) {
          Word x = ambient_->normalize(concat(w, inv ? inverse(generators_[j]) : generators_[j]));
          if (seen.insert(x).second) {
            out.push_back(x);
            next.push_back(std::move(x));
            if (out.size() >= cap) return out;
          }
        }
      }
    }
    layer = std::move(next);
  }
  return out;
}

Tri Subgroup::contains_subgroup(const Subgroup& other) const {
  Tri result = Tri::Yes;
  for (const auto& g : other.generators()) {
    const Tri t = contains(g);
    if (t == Tri::No) return Tri::No;
    if (t == Tri::Unknown) result = Tri::Unknown;
  }
  return result;
}

std::string Subgroup::describe() const {
  std::string out = "<";
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (i) out += ", ";
    out += ambient_->format(generators_[i]);
  }
  return out + "> in " + ambient_->name() + " [" + to_string(strategy()) + "]";
}

// --- strategies ---------------------------------------------------------------

namespace {

class TrivialSubgroup final : public Subgroup {
 public:
  using Subgroup::Subgroup;
  Strategy strategy() const override { return Strategy::Trivial; }
  Tri contains(std::span<const Letter> g) const override { return ambient_->is_identity(g) ? Tri::Yes : Tri::No; }
  std::optional<Decomposition> decompose(std::span<const Letter> g) const override {
    return Decomposition{ambient_->normalize(g), {}};
  }
  Tri finite() const override { return Tri::Yes; }
  std::optional<std::uint64_t> order() const override { return 1; }
};

// Every generator letter of the ambient group occurs among the handle generators.
class WholeGroup final : public Subgroup {
 public:
  WholeGroup(GroupPtr g, std::vector<Word> gens, std::vector<Letter> letter_map)
      : Subgroup(std::move(g), std::move(gens)), letter_map_(std::move(letter_map)) {}
  Strategy strategy() const override { return Strategy::Whole; }
  Tri contains(std::span<const Letter> g) const override {
    ambient_->check_letters(g);
    return Tri::Yes;
  }
  std::optional<Decomposition> decompose(std::span<const Letter> g) const override {
    Word nf = ambient_->normalize(g);
    Word sub;
    sub.reserve(nf.size());
    for (Letter l : nf) {
      const Letter m = letter_map_[generator_of(l)];
      sub.push_back(is_inverse(l) ? -m : m);
    }
    return Decomposition{{}, std::move(sub)};
  }
  Tri finite() const override { return ambient_->is_finite() ? Tri::Yes : Tri::No; }
  std::optional<std::uint64_t> order() const override { return ambient_->order(); }

 private:
  std::vector<Letter> letter_map_;  // ambient generator i -> handle letter
};

// Elements listed exhaustively with shortlex-minimal words over the handle generators.
class FiniteEnumerationSubgroup final : public Subgroup {
 public:
  FiniteEnumerationSubgroup(GroupPtr g, std::vector<Word> gens, std::size_t cap)
      : Subgroup(std::move(g), std::move(gens)) {
    const auto letters = handle_letters(generators_.size());
    sub_of_.emplace(Word{}, Word{});
    elements_.push_back(Word{});
    std::vector<std::pair<Word, Word>> layer{{Word{}, Word{}}};
    while (!layer.empty()) {
      std::vector<std::pair<Word, Word>> next;
      for (const auto& [elem, sub] : layer) {
        for (Letter l : letters) {
          const Word& gen = generators_[generator_of(l)];
          Word x = ambient_->normalize(concat(elem, is_inverse(l) ? inverse(gen) : gen));
          if (sub_of_.count(x)) continue;
          Word s = sub;
          s.push_back(l);
          sub_of_.emplace(x, s);
          elements_.push_back(x);
          next.emplace_back(std::move(x), std::move(s));
          if (elements_.size() > cap) throw BudgetExceeded("subgroup " + describe() + " exceeds enumeration cap");
        }
      }
      layer = std::move(next);
    }
    finite_ambient_ = std::dynamic_pointer_cast<const FiniteGroup>(ambient_);
    if (finite_ambient_) {
      for (const auto& e : elements_) element_ids_.push_back(finite_ambient_->element_of(e));
    }
  }

  Strategy strategy() const override { return Strategy::FiniteEnumeration; }
  Tri contains(std::span<const Letter> g) const override {
    return sub_of_.count(ambient_->normalize(g)) ? Tri::Yes : Tri::No;
  }
  std::optional<Decomposition> decompose(std::span<const Letter> g) const override {
    Word best;
    bool have = false;
    if (finite_ambient_) {
      const std::uint32_t x = finite_ambient_->element_of(g);
      for (std::uint32_t h : element_ids_) {
        const Word& w = finite_ambient_->word_of(finite_ambient_->mul(x, h));
        if (!have || shortlex_less(w, best)) {
          best = w;
          have = true;
        }
      }
    } else {
      for (const auto& h : elements_) {
        Word w = ambient_->normalize(concat(g, h));
        if (!have || shortlex_less(w, best)) {
          best = std::move(w);
          have = true;
        }
      }
    }
    const Word h = ambient_->normalize(concat(inverse(best), g));
    return Decomposition{best, sub_of_.at(h)};
  }
  Tri finite() const override { return Tri::Yes; }
  std::optional<std::uint64_t> order() const override { return elements_.size(); }

 private:
  std::unordered_map<Word, Word, WordHash> sub_of_;
  std::vector<Word> elements_;
  std::shared_ptr<const FiniteGroup> finite_ambient_;
  std::vector<std::uint32_t> element_ids_;
};

// Sublattice of Z^n in Hermite normal form; residues are balanced in (-d/2, d/2].
class LatticeSubgroup final : public Subgroup {
 public:
  LatticeSubgroup(GroupPtr g, std::vector<Word> gens) : Subgroup(std::move(g), std::move(gens)) {
    abelian_ = std::dynamic_pointer_cast<const FreeAbelianGroup>(ambient_);
    if (!abelian_) throw GroupMismatch("lattice subgroups need a free abelian ambient group");
    const std::size_t m = generators_.size();
    const std::size_t n = ambient_->rank();
    std::vector<std::vector<std::int64_t>> rows, u;
    for (std::size_t j = 0; j < m; ++j) {
      rows.push_back(abelian_->exponents(generators_[j]));
      u.emplace_back(m, 0);
      u.back()[j] = 1;
    }
    std::size_t top = 0;
    for (std::size_t col = 0; col < n && top < m; ++col) {
      while (true) {
        std::size_t piv = m;
        for (std::size_t r = top; r < m; ++r)
          if (rows[r][col] != 0 && (piv == m || std::abs(rows[r][col]) < std::abs(rows[piv][col]))) piv = r;
        if (piv == m) break;
        std::swap(rows[top], rows[piv]);
        std::swap(u[top], u[piv]);
        bool clean = true;
        for (std::size_t r = top + 1; r < m; ++r) {
          if (rows[r][col] == 0) continue;
          const std::int64_t q = rows[r][col] / rows[top][col];
          for (std::size_t c = 0; c < n; ++c) rows[r][c] -= q * rows[top][c];
          for (std::size_t c = 0; c < m; ++c) u[r][c] -= q * u[top][c];
          if (rows[r][col] != 0) clean = false;
        }
        if (clean) break;
      }
      if (rows[top][col] == 0) continue;
      if (rows[top][col] < 0) {
        for (auto& x : rows[top]) x = -x;
        for (auto& x : u[top]) x = -x;
      }
      pivots_.push_back({col, rows[top], u[top]});
      ++top;
    }
  }

  Strategy strategy() const override { return Strategy::CyclicInAbelian; }
  Tri contains(std::span<const Letter> g) const override {
    auto [v, coef] = reduce(g);
    return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; }) ? Tri::Yes : Tri::No;
  }
  std::optional<Decomposition> decompose(std::span<const Letter> g) const override {
    auto [v, coef] = reduce(g);
    Word sub;
    for (std::size_t j = 0; j < coef.size(); ++j) {
      Word p = power(letter(j), coef[j]);
      sub.insert(sub.end(), p.begin(), p.end());
    }
    return Decomposition{abelian_->from_exponents(v), std::move(sub)};
  }
  Tri finite() const override { return pivots_.empty() ? Tri::Yes : Tri::No; }
  std::optional<std::uint64_t> order() const override {
    if (pivots_.empty()) return 1;
    return std::nullopt;
  }

 private:
  struct Pivot {
    std::size_t col;
    std::vector<std::int64_t> row;
    std::vector<std::int64_t> u;
  };

  std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> reduce(std::span<const Letter> g) const {
    std::vector<std::int64_t> v = abelian_->exponents(g);
    std::vector<std::int64_t> coef(generators_.size(), 0);
    for (const auto& p : pivots_) {
      const std::int64_t d = p.row[p.col];
      std::int64_t r = ((v[p.col] % d) + d) % d;
      if (2 * r > d) r -= d;
      const std::int64_t q = (v[p.col] - r) / d;
      if (q == 0) continue;
      for (std::size_t c = 0; c < v.size(); ++c) v[c] -= q * p.row[c];
      for (std::size_t c = 0; c < coef.size(); ++c) coef[c] += q * p.u[c];
    }
    return {v, coef};
  }

  std::shared_ptr<const FreeAbelianGroup> abelian_;
  std::vector<Pivot> pivots_;
};

// Generated by distinct basis letters of a free group.
class FreeFactorSubgroup final : public Subgroup {
 public:
  FreeFactorSubgroup(GroupPtr g, std::vector<Word> gens) : Subgroup(std::move(g), std::move(gens)) {
    if (ambient_->kind() != GroupKind::Free) throw GroupMismatch("free factor handles need a free group");
    map_.assign(ambient_->rank(), 0);
    for (std::size_t j = 0; j < generators_.size(); ++j) {
      const Word& w = generators_[j];
      if (w.empty()) continue;
      if (w.size() != 1 || map_[generator_of(w[0])] != 0)
        throw GroupMismatch("free factor generators must be distinct basis letters");
      map_[generator_of(w[0])] = is_inverse(w[0]) ? -letter(j) : letter(j);
    }
  }
  Strategy strategy() const override { return Strategy::FreeFactor; }
  Tri contains(std::span<const Letter> g) const override { return decompose(g)->rep.empty() ? Tri::Yes : Tri::No; }
  std::optional<Decomposition> decompose(std::span<const Letter> g) const override {
    Word nf = ambient_->normalize(g);
    std::size_t cut = nf.size();
    while (cut > 0 && map_[generator_of(nf[cut - 1])] != 0) --cut;
    Word sub;
    for (std::size_t i = cut; i < nf.size(); ++i) {
      const Letter m = map_[generator_of(nf[i])];
      sub.push_back(is_inverse(nf[i]) ? -m : m);
    }
    nf.resize(cut);
    return Decomposition{std::move(nf), std::move(sub)};
  }
  Tri finite() const override {
    return std::all_of(generators_.begin(), generators_.end(), [](const Word& w) { return w.empty(); }) ? Tri::Yes
                                                                                                       : Tri::No;
  }

 private:
  std::vector<Letter> map_;  // ambient generator -> handle letter, 0 if absent
};

class FactorSubgroupImpl final : public Subgroup {
 public:
  FactorSubgroupImpl(GroupPtr g, std::size_t f, SubgroupPtr inner, std::vector<Word> gens)
      : Subgroup(std::move(g), std::move(gens)), factor_(f), inner_(std::move(inner)) {}
  Strategy strategy() const override { return Strategy::FactorSubgroup; }
  Tri contains(std::span<const Letter> g) const override {
    auto [prefix, y] = ambient_->split_last_factor(g, factor_);
    if (!prefix.empty()) return Tri::No;
    return inner_->contains(y);
  }
  std::optional<Decomposition> decompose(std::span<const Letter> g) const override {
    auto [prefix, y] = ambient_->split_last_factor(g, factor_);
    auto d = inner_->decompose(y);
    if (!d) return std::nullopt;
    Word rep = ambient_->normalize(concat(prefix, shift(d->rep, ambient_->factor_offset(factor_))));
    return Decomposition{std::move(rep), std::move(d->sub)};
  }
  Tri finite() const override { return inner_->finite(); }
  std::optional<std::uint64_t> order() const override { return inner_->order(); }
  const SubgroupPtr& inner() const { return inner_; }
  std::size_t factor_index() const { return factor_; }

 private:
  std::size_t factor_;
  SubgroupPtr inner_;
};

// <K1, K2> in A *_C B with the edge group inside both; isomorphic to K1 *_C K2.
class AmalgamJoinSubgroup final : public Subgroup {
 public:
  AmalgamJoinSubgroup(GroupPtr g, SubgroupPtr k1, SubgroupPtr k2, std::vector<Word> gens, std::vector<Word> map1,
                      std::vector<Word> map2)
      : Subgroup(std::move(g), std::move(gens)), k_{std::move(k1), std::move(k2)}, map_{std::move(map1), std::move(map2)} {
    amalgam_ = std::dynamic_pointer_cast<const AmalgamGroup>(ambient_);
    if (!amalgam_) throw GroupMismatch("amalgam join needs an amalgam ambient group");
    for (std::size_t s = 0; s < 2; ++s) {
      if (k_[s]->ambient() != amalgam_->factor(s)) throw MismatchedAmbient("join handle lives in the wrong factor");
      if (!k_[s]->decision_complete()) throw BudgetExceeded("join handles must be decision-complete");
      if (k_[s]->contains_subgroup(*amalgam_->edge_handle(s)) != Tri::Yes)
        throw StabilizerNotContained("edge group is not contained in " + k_[s]->describe());
    }
    for (const auto& c : amalgam_->edge_handle(0)->generators()) c_subs_.push_back(remap(k_[0]->decompose(c)->sub, 0));
  }

  Strategy strategy() const override { return Strategy::AmalgamOfHandles; }

  Tri contains(std::span<const Letter> g) const override {
    const auto form = amalgam_->structured(g);
    for (const auto& s : form.syllables)
      if (k_[s.factor]->contains(s.local) != Tri::Yes) return Tri::No;
    return Tri::Yes;
  }

  std::optional<Decomposition> decompose(std::span<const Letter> g) const override {
    auto form = amalgam_->structured(g);
    std::size_t last = form.syllables.size();
    for (std::size_t i = form.syllables.size(); i-- > 0;) {
      if (k_[form.syllables[i].factor]->contains(form.syllables[i].local) != Tri::Yes) {
        last = i;
        break;
      }
    }
    Word rep;
    if (last < form.syllables.size()) {
      const auto& s = form.syllables[last];
      Word rho = k_[s.factor]->coset_rep(s.local);
      AmalgamGroup::Form head;
      head.syllables.assign(form.syllables.begin(), form.syllables.begin() + static_cast<std::ptrdiff_t>(last));
      rep = ambient_->normalize(concat(amalgam_->flatten(head), amalgam_->to_global(rho, s.factor)));
      form = amalgam_->structured(concat(inverse(rep), g));
    }
    Word sub;
    for (const auto& s : form.syllables) {
      Word part = remap(k_[s.factor]->decompose(s.local)->sub, s.factor);
      sub.insert(sub.end(), part.begin(), part.end());
    }
    Word c = substitute(form.c, c_subs_);
    sub.insert(sub.end(), c.begin(), c.end());
    return Decomposition{std::move(rep), std::move(sub)};
  }

  Tri finite() const override {
    std::array<bool, 2> inside{};
    for (std::size_t s = 0; s < 2; ++s) inside[s] = amalgam_->edge_handle(s)->contains_subgroup(*k_[s]) == Tri::Yes;
    if (inside[0]) return k_[1]->finite();
    if (inside[1]) return k_[0]->finite();
    return Tri::No;
  }

  const SubgroupPtr& side(std::size_t s) const { return k_.at(s); }

 private:
  Word remap(const Word& w, std::size_t side) const {
    Word out;
    out.reserve(w.size());
    for (Letter l : w) {
      const Word& m = map_[side][generator_of(l)];
      if (is_inverse(l)) {
        Word inv = inverse(m);
        out.insert(out.end(), inv.begin(), inv.end());
      } else {
        out.insert(out.end(), m.begin(), m.end());
      }
    }
    return free_reduce(out);
  }

  std::shared_ptr<const AmalgamGroup> amalgam_;
  std::array<SubgroupPtr, 2> k_;
  std::array<std::vector<Word>, 2> map_;  // side handle generator -> word over outer generators
  std::vector<Word> c_subs_;
};

class BudgetedSubgroup final : public Subgroup {
 public:
  BudgetedSubgroup(GroupPtr g, std::vector<Word> gens, std::size_t budget, std::size_t cap)
      : Subgroup(std::move(g), std::move(gens)), budget_(budget) {
    const auto letters = handle_letters(generators_.size());
    sub_of_.emplace(Word{}, Word{});
    std::vector<std::pair<Word, Word>> layer{{Word{}, Word{}}};
    for (std::size_t len = 0; len < budget && !layer.empty(); ++len) {
      std::vector<std::pair<Word, Word>> next;
      for (const auto& [elem, sub] : layer) {
        for (Letter l : letters) {
          const Word& gen = generators_[generator_of(l)];
          Word x = ambient_->normalize(concat(elem, is_inverse(l) ? inverse(gen) : gen));
          if (sub_of_.count(x)) continue;
          Word s = sub;
          s.push_back(l);
          sub_of_.emplace(x, s);
          next.emplace_back(std::move(x), std::move(s));
          if (sub_of_.size() >= cap) break;
        }
        if (sub_of_.size() >= cap) break;
      }
      layer = std::move(next);
      if (sub_of_.size() >= cap) break;
    }
  }
  Strategy strategy() const override { return Strategy::BudgetedSearch; }
  Tri contains(std::span<const Letter> g) const override {
    return sub_of_.count(ambient_->normalize(g)) ? Tri::Yes : Tri::Unknown;
  }
  std::optional<Decomposition> decompose(std::span<const Letter> g) const override {
    auto it = sub_of_.find(ambient_->normalize(g));
    if (it == sub_of_.end()) return std::nullopt;
    return Decomposition{{}, it->second};
  }
  Tri finite() const override { return Tri::Unknown; }

 private:
  std::size_t budget_;
  std::unordered_map<Word, Word, WordHash> sub_of_;
};

bool saturates(const GroupPtr& g, const std::vector<Word>& gens, std::size_t budget, std::size_t cap) {
  std::unordered_set<Word, WordHash> seen{Word{}};
  std::vector<Word> layer{Word{}};
  for (std::size_t len = 0; len <= budget; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (const auto& gen : gens) {
        for (bool inv : {false, true}) {
          Word x = g->normalize(concat(w, inv ? inverse(gen) : gen));
          if (seen.insert(x).second) next.push_back(std::move(x));
          if (seen.size() > cap) return false;
        }
      }
    }
    if (next.empty()) return true;
    layer = std::move(next);
  }
  return false;
}

}  // namespace

SubgroupPtr trivial_subgroup(GroupPtr g) { return std::make_shared<TrivialSubgroup>(std::move(g), std::vector<Word>{}); }

SubgroupPtr whole_group(GroupPtr g) {
  std::vector<Word> gens;
  std::vector<Letter> map;
  for (std::size_t i = 0; i < g->rank(); ++i) {
    gens.push_back(Word{letter(i)});
    map.push_back(letter(i));
  }
  return std::make_shared<WholeGroup>(std::move(g), std::move(gens), std::move(map));
}

SubgroupPtr finite_subgroup(GroupPtr g, std::vector<Word> generators) {
  return std::make_shared<FiniteEnumerationSubgroup>(std::move(g), std::move(generators), 1u << 20);
}

SubgroupPtr lattice_subgroup(GroupPtr g, std::vector<Word> generators) {
  return std::make_shared<LatticeSubgroup>(std::move(g), std::move(generators));
}

SubgroupPtr free_factor_subgroup(GroupPtr g, std::vector<Word> generators) {
  return std::make_shared<FreeFactorSubgroup>(std::move(g), std::move(generators));
}

SubgroupPtr factor_subgroup(GroupPtr g, std::size_t f, SubgroupPtr inner) {
  if (f >= g->factor_count() || inner->ambient() != g->factor(f))
    throw MismatchedAmbient("factor handle does not live in factor " + std::to_string(f) + " of " + g->name());
  std::vector<Word> gens;
  for (const auto& w : inner->generators()) gens.push_back(shift(w, g->factor_offset(f)));
  return std::make_shared<FactorSubgroupImpl>(std::move(g), f, std::move(inner), std::move(gens));
}

SubgroupPtr amalgam_join(GroupPtr amalgam, SubgroupPtr k1, SubgroupPtr k2) {
  const auto* a = dynamic_cast<const AmalgamGroup*>(amalgam.get());
  if (!a) throw GroupMismatch("amalgam join needs an amalgam ambient group");
  std::vector<Word> gens;
  std::vector<Word> map1, map2;
  for (const auto& w : k1->generators()) {
    map1.push_back(Word{letter(gens.size())});
    gens.push_back(a->to_global(w, 0));
  }
  for (const auto& w : k2->generators()) {
    map2.push_back(Word{letter(gens.size())});
    gens.push_back(a->to_global(w, 1));
  }
  return std::make_shared<AmalgamJoinSubgroup>(std::move(amalgam), std::move(k1), std::move(k2), std::move(gens),
                                               std::move(map1), std::move(map2));
}

std::optional<std::pair<std::size_t, SubgroupPtr>> as_factor_subgroup(const SubgroupPtr& h) {
  if (const auto* f = dynamic_cast<const FactorSubgroupImpl*>(h.get())) return std::make_pair(f->factor_index(), f->inner());
  return std::nullopt;
}

std::optional<std::pair<SubgroupPtr, SubgroupPtr>> as_amalgam_join(const SubgroupPtr& h) {
  if (const auto* j = dynamic_cast<const AmalgamJoinSubgroup*>(h.get())) return std::make_pair(j->side(0), j->side(1));
  return std::nullopt;
}

SubgroupPtr budgeted_subgroup(GroupPtr g, std::vector<Word> generators, std::size_t budget, std::size_t cap) {
  return std::make_shared<BudgetedSubgroup>(std::move(g), std::move(generators), budget, cap);
}

namespace {

// Index of a factor that contains every word, if any.
std::optional<std::size_t> common_factor(const GroupPtr& g, const std::vector<Word>& gens) {
  for (std::size_t f = 0; f < g->factor_count(); ++f) {
    bool all = true;
    for (const auto& w : gens) {
      if (w.empty()) continue;
      if (!g->split_last_factor(w, f).first.empty()) {
        all = false;
        break;
      }
    }
    if (all) return f;
  }
  return std::nullopt;
}

}  // namespace

SubgroupPtr make_subgroup(GroupPtr g, std::vector<Word> generators, std::size_t budget) {
  generators = normalized(g, std::move(generators));
  if (std::all_of(generators.begin(), generators.end(), [](const Word& w) { return w.empty(); }))
    return std::make_shared<TrivialSubgroup>(g, std::move(generators));
  if (g->is_finite()) return finite_subgroup(g, std::move(generators));
  if (g->kind() == GroupKind::FreeAbelian) return lattice_subgroup(g, std::move(generators));

  {
    std::vector<Letter> map(g->rank(), 0);
    for (std::size_t j = 0; j < generators.size(); ++j) {
      const Word& w = generators[j];
      if (w.size() == 1 && map[generator_of(w[0])] == 0)
        map[generator_of(w[0])] = is_inverse(w[0]) ? -letter(j) : letter(j);
    }
    if (std::all_of(map.begin(), map.end(), [](Letter l) { return l != 0; }))
      return std::make_shared<WholeGroup>(g, std::move(generators), std::move(map));
  }

  if (g->kind() == GroupKind::Free) {
    std::vector<bool> used(g->rank(), false);
    bool ok = true;
    for (const auto& w : generators) {
      if (w.empty()) continue;
      if (w.size() != 1 || used[generator_of(w[0])]) {
        ok = false;
        break;
      }
      used[generator_of(w[0])] = true;
    }
    if (ok) return free_factor_subgroup(g, std::move(generators));
  }

  if (g->factor_count() > 0) {
    if (auto f = common_factor(g, generators)) {
      std::vector<Word> local;
      for (const auto& w : generators) local.push_back(g->split_last_factor(w, *f).second);
      auto inner = make_subgroup(g->factor(*f), std::move(local), budget);
      if (inner->decision_complete()) {
        std::vector<Word> gens = generators;
        return std::make_shared<FactorSubgroupImpl>(g, *f, std::move(inner), std::move(gens));
      }
    }
  }

  if (const auto* a = dynamic_cast<const AmalgamGroup*>(g.get())) {
    std::array<std::vector<Word>, 2> local;
    std::array<std::vector<Word>, 2> map;
    bool ok = true;
    for (std::size_t j = 0; j < generators.size() && ok; ++j) {
      const Word& w = generators[j];
      std::size_t side = 0;
      if (!w.empty()) {
        if (a->split_last_factor(w, 0).first.empty())
          side = 0;
        else if (a->split_last_factor(w, 1).first.empty())
          side = 1;
        else
          ok = false;
      }
      if (ok) {
        local[side].push_back(a->split_last_factor(w, side).second);
        map[side].push_back(Word{letter(j)});
      }
    }
    if (ok) {
      std::array<SubgroupPtr, 2> k;
      std::array<bool, 2> has_c{};
      for (std::size_t s = 0; s < 2 && ok; ++s) {
        k[s] = make_subgroup(a->factor(s), local[s], budget);
        ok = k[s]->decision_complete();
        if (ok) has_c[s] = k[s]->contains_subgroup(*a->edge_handle(s)) == Tri::Yes;
      }
      // If one side already holds the edge group, the other side may borrow it.
      for (std::size_t s = 0; s < 2 && ok; ++s) {
        if (has_c[s] || !has_c[1 - s]) continue;
        const auto& other = a->edge_handle(1 - s)->generators();
        for (std::size_t i = 0; i < other.size(); ++i) {
          Word sub = k[1 - s]->decompose(other[i])->sub;
          Word outer;
          for (Letter l : sub) {
            const Word& m = map[1 - s][generator_of(l)];
            Word piece = is_inverse(l) ? inverse(m) : m;
            outer.insert(outer.end(), piece.begin(), piece.end());
          }
          local[s].push_back(a->edge_handle(s)->generators()[i]);
          map[s].push_back(free_reduce(outer));
        }
        k[s] = make_subgroup(a->factor(s), local[s], budget);
        ok = k[s]->decision_complete();
        has_c[s] = true;
      }
      if (ok && has_c[0] && has_c[1])
        return std::make_shared<AmalgamJoinSubgroup>(g, k[0], k[1], std::move(generators), std::move(map[0]),
                                                     std::move(map[1]));
    }
  }

  if (saturates(g, generators, budget, 200000)) return finite_subgroup(g, std::move(generators));
  return budgeted_subgroup(g, std::move(generators), budget);
}

}  // namespace forge
