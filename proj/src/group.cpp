#include "forge/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "forge/errors.hpp"
#include "forge/subgroup.hpp"

namespace forge {

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::FiniteTable: return "finite";
    case GroupKind::Free: return "free";
    case GroupKind::FreeAbelian: return "free_abelian";
    case GroupKind::FreeProduct: return "free_product";
    case GroupKind::Amalgam: return "amalgam";
    case GroupKind::HNN: return "hnn";
  }
  return "?";
}

Group::Group(std::string name, GroupKind kind, std::vector<std::string> generators)
    : name_(std::move(name)), kind_(kind), generators_(std::move(generators)) {
  std::set<std::string> seen;
  for (const auto& g : generators_) {
    if (g.empty()) throw MalformedWord("empty generator name in group " + name_);
    if (!seen.insert(g).second) throw MalformedWord("duplicate generator '" + g + "' in group " + name_);
  }
}

GroupPtr Group::factor(std::size_t) const { throw GroupMismatch(name_ + " has no factors"); }
std::size_t Group::factor_offset(std::size_t) const { throw GroupMismatch(name_ + " has no factors"); }
std::optional<std::size_t> Group::factor_of_letter(Letter) const { return std::nullopt; }
std::pair<Word, Word> Group::split_last_factor(std::span<const Letter>, std::size_t) const {
  throw GroupMismatch(name_ + " has no factors");
}

Word Group::multiply(std::span<const Letter> a, std::span<const Letter> b) const { return normalize(concat(a, b)); }
Word Group::invert(std::span<const Letter> w) const { return normalize(inverse(w)); }
bool Group::equal(std::span<const Letter> a, std::span<const Letter> b) const {
  return normalize(concat(a, inverse(b))).empty();
}

std::optional<std::size_t> Group::find_generator(std::string_view name) const {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i] == name) return i;
  return std::nullopt;
}

void Group::check_letters(std::span<const Letter> w) const {
  for (Letter l : w) {
    if (l == 0 || generator_of(l) >= rank())
      throw MalformedWord("letter " + std::to_string(l) + " is not a generator of " + name_);
  }
}

Word Group::parse(std::string_view text) const {
  Word out;
  std::size_t i = 0;
  auto is_sep = [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.' || c == ','; };
  while (i < text.size()) {
    while (i < text.size() && is_sep(text[i])) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !is_sep(text[j]) && text[j] != '^') ++j;
    std::string_view name = text.substr(i, j - i);
    long long power = 1;
    if (j < text.size() && text[j] == '^') {
      std::size_t k = j + 1;
      std::size_t e = k;
      while (e < text.size() && !is_sep(text[e])) ++e;
      std::string_view num = text.substr(k, e - k);
      auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), power);
      if (ec != std::errc() || p != num.data() + num.size())
        throw MalformedWord("bad exponent in '" + std::string(text) + "'");
      j = e;
    }
    i = j;
    if (name == "1" || name == "e") continue;
    auto gen = find_generator(name);
    if (!gen) throw MalformedWord("'" + std::string(name) + "' is not a generator of " + name_);
    for (long long k = 0; k < (power < 0 ? -power : power); ++k) out.push_back(letter(*gen, power < 0));
  }
  return out;
}

std::string Group::format(std::span<const Letter> w) const {
  if (w.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    const auto run = static_cast<long long>(j - i);
    if (!out.empty()) out += ' ';
    out += generators_.at(generator_of(w[i]));
    if (is_inverse(w[i]))
      out += "^" + std::to_string(-run);
    else if (run > 1)
      out += "^" + std::to_string(run);
    i = j;
  }
  return out;
}

// --- free ---------------------------------------------------------------------

FreeGroup::FreeGroup(std::string name, std::vector<std::string> generators)
    : Group(std::move(name), GroupKind::Free, std::move(generators)) {}

Word FreeGroup::normalize(std::span<const Letter> w) const {
  check_letters(w);
  return free_reduce(w);
}

FreeAbelianGroup::FreeAbelianGroup(std::string name, std::vector<std::string> generators)
    : Group(std::move(name), GroupKind::FreeAbelian, std::move(generators)) {}

std::vector<std::int64_t> FreeAbelianGroup::exponents(std::span<const Letter> w) const {
  check_letters(w);
  std::vector<std::int64_t> v(rank(), 0);
  for (Letter l : w) v[generator_of(l)] += is_inverse(l) ? -1 : 1;
  return v;
}

Word FreeAbelianGroup::from_exponents(std::span<const std::int64_t> v) const {
  Word out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::int64_t k = v[i];
    for (std::int64_t j = 0; j < (k < 0 ? -k : k); ++j) out.push_back(letter(i, k < 0));
  }
  return out;
}

Word FreeAbelianGroup::normalize(std::span<const Letter> w) const { return from_exponents(exponents(w)); }

// --- finite -------------------------------------------------------------------

FiniteGroup::FiniteGroup(std::string name, std::vector<std::string> generators,
                         std::vector<std::vector<std::uint32_t>> table, std::vector<std::uint32_t> generator_elements)
    : Group(std::move(name), GroupKind::FiniteTable, std::move(generators)),
      table_(std::move(table)),
      generator_elements_(std::move(generator_elements)) {
  const std::size_t n = table_.size();
  if (n == 0) throw GroupMismatch("empty multiplication table");
  for (std::size_t a = 0; a < n; ++a) {
    if (table_[a].size() != n) throw GroupMismatch("multiplication table is not square");
    if (table_[0][a] != a || table_[a][0] != a) throw GroupMismatch("element 0 must be the identity");
  }
  if (generator_elements_.size() != rank()) throw GroupMismatch("one element per generator required");
  inverses_.assign(n, 0);
  for (std::uint32_t a = 0; a < n; ++a) {
    auto it = std::find(table_[a].begin(), table_[a].end(), 0u);
    if (it == table_[a].end()) throw GroupMismatch("table has an element without inverse");
    inverses_[a] = static_cast<std::uint32_t>(it - table_[a].begin());
  }
  // Shortlex-minimal words: BFS layer by layer, expanding each layer in shortlex order.
  normal_words_.assign(n, Word{});
  std::vector<bool> seen(n, false);
  seen[0] = true;
  std::vector<std::uint32_t> layer{0};
  std::size_t found = 1;
  std::vector<Letter> letters;
  for (std::size_t g = 0; g < rank(); ++g) {
    letters.push_back(letter(g));
    letters.push_back(letter(g, true));
  }
  while (!layer.empty() && found < n) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t e : layer) {
      for (Letter l : letters) {
        std::uint32_t g = generator_elements_[generator_of(l)];
        if (is_inverse(l)) g = inverses_[g];
        const std::uint32_t f = table_[e][g];
        if (seen[f]) continue;
        seen[f] = true;
        normal_words_[f] = normal_words_[e];
        normal_words_[f].push_back(l);
        next.push_back(f);
        ++found;
      }
    }
    layer = std::move(next);
  }
  if (found < n) throw GroupMismatch("generators of " + this->name() + " do not generate the table");
}

std::uint32_t FiniteGroup::element_of(std::span<const Letter> w) const {
  check_letters(w);
  std::uint32_t e = 0;
  for (Letter l : w) {
    std::uint32_t g = generator_elements_[generator_of(l)];
    if (is_inverse(l)) g = inverses_[g];
    e = table_[e][g];
  }
  return e;
}

Word FiniteGroup::normalize(std::span<const Letter> w) const { return normal_words_[element_of(w)]; }

// --- composite ----------------------------------------------------------------

namespace {
std::vector<std::string> joined_generators(const std::vector<GroupPtr>& factors, const std::vector<std::string>& extra) {
  std::vector<std::string> out;
  for (const auto& f : factors) out.insert(out.end(), f->generators().begin(), f->generators().end());
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}
}  // namespace

CompositeGroup::CompositeGroup(std::string name, GroupKind kind, std::vector<GroupPtr> factors,
                               std::vector<std::string> extra_generators)
    : Group(std::move(name), kind, joined_generators(factors, extra_generators)), factors_(std::move(factors)) {
  std::size_t off = 0;
  for (const auto& f : factors_) {
    offsets_.push_back(off);
    off += f->rank();
  }
}

std::optional<std::size_t> CompositeGroup::factor_of_letter(Letter l) const {
  const std::size_t g = generator_of(l);
  for (std::size_t f = factors_.size(); f-- > 0;) {
    if (g >= offsets_[f]) {
      if (g < offsets_[f] + factors_[f]->rank()) return f;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

Letter CompositeGroup::to_local(Letter l) const {
  auto f = factor_of_letter(l);
  if (!f) throw MalformedWord("letter is not in any factor of " + name());
  return letter(generator_of(l) - offsets_[*f], is_inverse(l));
}

FreeProductGroup::FreeProductGroup(std::string name, std::vector<GroupPtr> factors)
    : CompositeGroup(std::move(name), GroupKind::FreeProduct, std::move(factors), {}) {}

std::vector<Syllable> FreeProductGroup::syllables(std::span<const Letter> w) const {
  check_letters(w);
  std::vector<Syllable> stack;
  for (Letter l : w) {
    const std::size_t f = *factor_of_letter(l);
    const Letter ll = to_local(l);
    if (!stack.empty() && stack.back().factor == f) {
      Word merged = stack.back().local;
      merged.push_back(ll);
      stack.back().local = factors_[f]->normalize(merged);
      if (stack.back().local.empty()) stack.pop_back();
    } else {
      Word s = factors_[f]->normalize(Word{ll});
      if (!s.empty()) stack.push_back({f, std::move(s)});
    }
  }
  return stack;
}

Word FreeProductGroup::flatten(const std::vector<Syllable>& s) const {
  Word out;
  for (const auto& syl : s) {
    Word g = to_global(syl.local, syl.factor);
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

Word FreeProductGroup::normalize(std::span<const Letter> w) const { return flatten(syllables(w)); }

bool FreeProductGroup::is_finite() const {
  std::size_t nontrivial = 0;
  bool all_finite = true;
  for (const auto& f : factors_) {
    if (f->is_finite() && f->order() == 1u) continue;
    ++nontrivial;
    all_finite = all_finite && f->is_finite();
  }
  return nontrivial <= 1 && all_finite;
}

std::optional<std::uint64_t> FreeProductGroup::order() const {
  if (!is_finite()) return std::nullopt;
  std::uint64_t n = 1;
  for (const auto& f : factors_) n *= *f->order();
  return n;
}

std::pair<Word, Word> FreeProductGroup::split_last_factor(std::span<const Letter> g, std::size_t f) const {
  auto s = syllables(g);
  Word y;
  if (!s.empty() && s.back().factor == f) {
    y = s.back().local;
    s.pop_back();
  }
  return {flatten(s), y};
}

// --- amalgam ------------------------------------------------------------------

AmalgamGroup::AmalgamGroup(std::string name, GroupPtr a, GroupPtr b, SubgroupPtr k1, SubgroupPtr k2)
    : CompositeGroup(std::move(name), GroupKind::Amalgam, {a, b}, {}), edge_handles_{std::move(k1), std::move(k2)} {
  for (std::size_t s = 0; s < 2; ++s) {
    if (edge_handles_[s]->ambient() != factors_[s]) throw GroupMismatch("edge handle lives in the wrong factor");
    if (!edge_handles_[s]->decision_complete())
      throw BudgetExceeded("edge group image in " + factors_[s]->name() + " has no exact coset procedure");
  }
  if (edge_handles_[0]->generators().size() != edge_handles_[1]->generators().size())
    throw GroupMismatch("edge maps have different numbers of generators");
}

Word AmalgamGroup::c_to_side(std::span<const Letter> c, std::size_t side) const {
  return substitute(c, edge_handles_[side]->generators());
}

AmalgamGroup::Form AmalgamGroup::structured(std::span<const Letter> w) const {
  check_letters(w);
  Form form;
  for (Letter l : w) {
    const std::size_t side = *factor_of_letter(l);
    Word y;
    if (!form.syllables.empty() && form.syllables.back().factor == side) {
      y = concat(form.syllables.back().local, c_to_side(form.c, side));
      form.syllables.pop_back();
    } else {
      y = c_to_side(form.c, side);
    }
    y.push_back(to_local(l));
    auto d = edge_handles_[side]->decompose(y);
    if (!d) throw BudgetExceeded("edge group membership undecided in " + name());
    form.c = free_reduce(d->sub);
    if (!d->rep.empty()) form.syllables.push_back({side, std::move(d->rep)});
  }
  return form;
}

Word AmalgamGroup::flatten(const Form& form) const {
  Word out;
  if (form.syllables.empty()) {
    if (form.c.empty()) return out;
    return to_global(factors_[0]->normalize(c_to_side(form.c, 0)), 0);
  }
  for (std::size_t i = 0; i < form.syllables.size(); ++i) {
    const auto& s = form.syllables[i];
    Word local = (i + 1 == form.syllables.size() && !form.c.empty())
                     ? factors_[s.factor]->normalize(concat(s.local, c_to_side(form.c, s.factor)))
                     : s.local;
    Word g = to_global(local, s.factor);
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

Word AmalgamGroup::normalize(std::span<const Letter> w) const { return flatten(structured(w)); }

bool AmalgamGroup::is_finite() const {
  for (std::size_t s = 0; s < 2; ++s) {
    bool full = true;
    for (std::size_t g = 0; g < factors_[s]->rank(); ++g)
      full = full && edge_handles_[s]->contains(Word{letter(g)}) == Tri::Yes;
    if (full) return factors_[1 - s]->is_finite();
  }
  return false;
}

std::pair<Word, Word> AmalgamGroup::split_last_factor(std::span<const Letter> g, std::size_t f) const {
  Form form = structured(g);
  Word y;
  if (!form.syllables.empty() && form.syllables.back().factor == f) {
    y = factors_[f]->normalize(concat(form.syllables.back().local, c_to_side(form.c, f)));
    form.syllables.pop_back();
  } else {
    y = factors_[f]->normalize(c_to_side(form.c, f));
  }
  form.c.clear();
  return {flatten(form), y};
}

// --- HNN ------------------------------------------------------------------------

HNNGroup::HNNGroup(std::string name, GroupPtr base, SubgroupPtr associated, SubgroupPtr image, std::string stable_letter)
    : CompositeGroup(std::move(name), GroupKind::HNN, {base}, {std::move(stable_letter)}),
      associated_(std::move(associated)),
      image_(std::move(image)) {
  for (const auto* h : {&associated_, &image_}) {
    if ((*h)->ambient() != factors_[0]) throw GroupMismatch("associated subgroups must live in the base group");
    if (!(*h)->decision_complete())
      throw BudgetExceeded("associated subgroup of " + this->name() + " has no exact coset procedure");
  }
  if (associated_->generators().size() != image_->generators().size())
    throw GroupMismatch("associated subgroups have different numbers of generators");
}

HNNGroup::Form HNNGroup::structured(std::span<const Letter> w) const {
  check_letters(w);
  const GroupPtr& base = factors_[0];
  Form form;
  Word tail;
  const std::size_t t_index = rank() - 1;
  for (Letter l : w) {
    if (generator_of(l) != t_index) {
      tail.push_back(to_local(l));
      if (tail.size() > 64) tail = base->normalize(tail);
      continue;
    }
    const int e = is_inverse(l) ? -1 : 1;
    tail = base->normalize(tail);
    if (!form.prefix.empty() && form.prefix.back().second == -e) {
      // t tail t^-1 collapses iff tail in C; t^-1 tail t iff tail in phi(C).
      const bool positive = form.prefix.back().second == 1;
      const SubgroupPtr& from = positive ? associated_ : image_;
      const SubgroupPtr& to = positive ? image_ : associated_;
      auto d = from->decompose(tail);
      if (!d) throw BudgetExceeded("associated subgroup membership undecided in " + name());
      if (d->rep.empty()) {
        tail = base->normalize(concat(form.prefix.back().first, substitute(d->sub, to->generators())));
        form.prefix.pop_back();
        continue;
      }
    }
    // phi(c) t = t c  and  c t^-1 = t^-1 phi(c)
    const SubgroupPtr& left = e == 1 ? image_ : associated_;
    const SubgroupPtr& right = e == 1 ? associated_ : image_;
    auto d = left->decompose(tail);
    if (!d) throw BudgetExceeded("associated subgroup membership undecided in " + name());
    form.prefix.emplace_back(std::move(d->rep), e);
    tail = base->normalize(substitute(d->sub, right->generators()));
  }
  form.tail = base->normalize(tail);
  return form;
}

Word HNNGroup::flatten(const Form& form) const {
  Word out;
  for (const auto& [rep, e] : form.prefix) {
    Word g = to_global(rep, 0);
    out.insert(out.end(), g.begin(), g.end());
    out.push_back(e == 1 ? stable_letter() : -stable_letter());
  }
  Word g = to_global(form.tail, 0);
  out.insert(out.end(), g.begin(), g.end());
  return out;
}

Word HNNGroup::normalize(std::span<const Letter> w) const { return flatten(structured(w)); }

std::pair<Word, Word> HNNGroup::split_last_factor(std::span<const Letter> g, std::size_t f) const {
  if (f != 0) throw GroupMismatch("HNN extensions have a single base factor");
  Form form = structured(g);
  Word y = std::move(form.tail);
  form.tail.clear();
  return {flatten(form), y};
}

// --- constructors ---------------------------------------------------------------

GroupPtr make_free_group(std::string name, std::vector<std::string> generators) {
  return std::make_shared<FreeGroup>(std::move(name), std::move(generators));
}

GroupPtr make_free_abelian_group(std::string name, std::vector<std::string> generators) {
  return std::make_shared<FreeAbelianGroup>(std::move(name), std::move(generators));
}

GroupPtr make_finite_group(std::string name, std::vector<std::string> generators,
                           std::vector<std::vector<std::uint32_t>> table, std::vector<std::uint32_t> generator_elements) {
  return std::make_shared<FiniteGroup>(std::move(name), std::move(generators), std::move(table),
                                       std::move(generator_elements));
}

GroupPtr make_cyclic_group(std::string name, std::string generator, std::uint32_t n) {
  if (n == 0) throw GroupMismatch("cyclic group order must be positive");
  std::vector<std::vector<std::uint32_t>> table(n, std::vector<std::uint32_t>(n));
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  return make_finite_group(std::move(name), {std::move(generator)}, std::move(table), {n > 1 ? 1u : 0u});
}

GroupPtr make_permutation_group(std::string name, std::vector<std::string> generators,
                                const std::vector<std::vector<std::uint32_t>>& permutations) {
  if (permutations.empty()) throw GroupMismatch("need at least one permutation");
  const std::size_t degree = permutations.front().size();
  using Perm = std::vector<std::uint32_t>;
  auto compose = [](const Perm& g, const Perm& h) {
    Perm out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[h[i]];
    return out;
  };
  Perm id(degree);
  for (std::uint32_t i = 0; i < degree; ++i) id[i] = i;
  std::vector<Perm> elements{id};
  std::map<Perm, std::uint32_t> index{{id, 0}};
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& p : permutations) {
      if (p.size() != degree) throw GroupMismatch("permutations of different degree");
      Perm q = compose(elements[i], p);
      if (index.emplace(q, static_cast<std::uint32_t>(elements.size())).second) elements.push_back(q);
    }
  }
  const std::size_t n = elements.size();
  std::vector<std::vector<std::uint32_t>> table(n, std::vector<std::uint32_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a][b] = index.at(compose(elements[a], elements[b]));
  std::vector<std::uint32_t> gens;
  for (const auto& p : permutations) gens.push_back(index.at(p));
  return make_finite_group(std::move(name), std::move(generators), std::move(table), std::move(gens));
}

GroupPtr make_free_product(std::string name, std::vector<GroupPtr> factors) {
  return std::make_shared<FreeProductGroup>(std::move(name), std::move(factors));
}

}  // namespace forge
