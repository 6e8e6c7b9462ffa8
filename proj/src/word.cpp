#include "forge/word.hpp"

#include <algorithm>

namespace forge {

Word inverse(std::span<const Letter> w) {
  Word out(w.rbegin(), w.rend());
  for (Letter& l : out) l = -l;
  return out;
}

Word concat(std::span<const Letter> a, std::span<const Letter> b) {
  Word out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Word concat(std::initializer_list<std::span<const Letter>> parts) {
  Word out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Word free_reduce(std::span<const Letter> w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

bool shortlex_less(std::span<const Letter> a, std::span<const Letter> b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return letter_rank(a[i]) < letter_rank(b[i]);
  }
  return false;
}

Word substitute(std::span<const Letter> w, const std::vector<Word>& images) {
  Word out;
  for (Letter l : w) {
    const Word& img = images.at(generator_of(l));
    if (is_inverse(l)) {
      Word inv = inverse(img);
      out.insert(out.end(), inv.begin(), inv.end());
    } else {
      out.insert(out.end(), img.begin(), img.end());
    }
  }
  return out;
}

Word shift(std::span<const Letter> w, std::size_t offset) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) out.push_back(letter(generator_of(l) + offset, is_inverse(l)));
  return out;
}

}  // namespace forge
