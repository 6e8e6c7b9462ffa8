#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace forge {

/// A letter is a signed generator index: +(i+1) for generator i, -(i+1) for its inverse.
using Letter = int;
using Word = std::vector<Letter>;

inline constexpr Letter letter(std::size_t gen, bool inverse = false) {
  const auto v = static_cast<Letter>(gen + 1);
  return inverse ? -v : v;
}
inline constexpr std::size_t generator_of(Letter l) { return static_cast<std::size_t>((l < 0 ? -l : l) - 1); }
inline constexpr bool is_inverse(Letter l) { return l < 0; }

/// Position of a letter in the declared generator order: g0, g0^-1, g1, g1^-1, ...
inline constexpr std::size_t letter_rank(Letter l) { return 2 * generator_of(l) + (l < 0 ? 1 : 0); }

Word inverse(std::span<const Letter> w);
Word concat(std::span<const Letter> a, std::span<const Letter> b);
Word concat(std::initializer_list<std::span<const Letter>> parts);

/// Free reduction (cancels adjacent x x^-1).
Word free_reduce(std::span<const Letter> w);

/// Shortlex order over the declared generator order.
bool shortlex_less(std::span<const Letter> a, std::span<const Letter> b);

/// Replace every letter +-(i+1) by images[i] (or its inverse).
Word substitute(std::span<const Letter> w, const std::vector<Word>& images);

/// Shift a word over a local alphabet into a global alphabet starting at `offset`.
Word shift(std::span<const Letter> w, std::size_t offset);

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Letter l : w) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(l));
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace forge
