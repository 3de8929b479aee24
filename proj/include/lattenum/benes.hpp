#pragma once

// Bit permutations of packed words realised as Benes networks of masked
// delta swaps: t = ((x >> s) ^ x) & mask; x ^= t ^ (t << s).

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace lattenum {

using PackedWord = unsigned __int128;

template <class Word>
inline constexpr int word_bits = static_cast<int>(sizeof(Word) * 8);

template <class Word>
constexpr Word word_bit(int p) noexcept {
  return Word{1} << p;
}

/// Moves bit p of x to position bit_perm[p]; the reference used to check
/// compiled networks.
template <class Word>
Word permute_bits_directly(Word x, std::span<const int> bit_perm) {
  Word out = 0;
  for (std::size_t p = 0; p < bit_perm.size(); ++p) {
    if ((x >> p) & 1) out |= word_bit<Word>(bit_perm[p]);
  }
  return out;
}

template <class Word>
class BenesNetwork {
 public:
  static constexpr int kMaxStages = 2 * std::bit_width(static_cast<unsigned>(word_bits<Word>)) - 3;

  struct Stage {
    Word mask;
    int shift;
  };

  BenesNetwork() = default;

  /// Network for the bit permutation p -> bit_perm[p] on bit_perm.size() bits.
  static BenesNetwork compile(std::span<const int> bit_perm) {
    const int width = static_cast<int>(bit_perm.size());
    if (width > word_bits<Word>) throw std::invalid_argument("benes: permutation wider than the word");
    std::array<bool, word_bits<Word>> seen{};
    for (int q : bit_perm) {
      if (q < 0 || q >= width || seen[q]) throw std::invalid_argument("benes: map is not a bijection");
      seen[q] = 1;
    }
    BenesNetwork net;
    net.width_ = width;
    if (width <= 1) return net;

    const int padded = static_cast<int>(std::bit_ceil(static_cast<unsigned>(width)));
    const int lg = std::countr_zero(static_cast<unsigned>(padded));
    std::array<Word, kMaxStages + 1> masks{};
    Positions perm{};
    for (int p = 0; p < padded; ++p) perm[p] = p < width ? bit_perm[p] : p;
    route(perm.data(), padded, 0, 0, lg, masks);

    for (int s = 0; s < 2 * lg - 1; ++s) {
      if (masks[s] == 0) continue;
      const int level = s < lg ? s : 2 * lg - 2 - s;
      net.stages_[net.count_++] = Stage{masks[s], padded >> (level + 1)};
    }
    return net;
  }

  Word apply(Word x) const noexcept {
    for (int s = 0; s < count_; ++s) {
      const Stage& st = stages_[s];
      const Word t = ((x >> st.shift) ^ x) & st.mask;
      x ^= t ^ (t << st.shift);
    }
    return x;
  }

  int width() const noexcept { return width_; }
  std::span<const Stage> stages() const noexcept { return {stages_.data(), static_cast<std::size_t>(count_)}; }

 private:
  using Positions = std::array<int, word_bits<Word>>;

  // Splits the permutation of `size` positions starting at `offset` into an
  // outer swap layer, two half-size subnetworks and a closing swap layer.
  static void route(const int* perm, int size, int offset, int level, int lg,
                    std::array<Word, kMaxStages + 1>& masks) {
    if (size == 1) return;
    if (size == 2) {
      if (perm[0] == 1) masks[level] |= word_bit<Word>(offset);
      return;
    }
    const int half = size / 2;
    Positions inverse;
    for (int p = 0; p < size; ++p) inverse[perm[p]] = p;

    // side[p]: which subnetwork input p is routed through. Partners at the
    // input (p, p^half) and at the output (q, q^half) must use different sides.
    std::array<signed char, word_bits<Word>> side;
    std::fill_n(side.begin(), size, -1);
    for (int start = 0; start < size; ++start) {
      if (side[start] >= 0) continue;
      int p = start;
      side[p] = 0;
      while (true) {
        const int partner = p ^ half;
        side[partner] = static_cast<signed char>(side[p] ^ 1);
        const int r = inverse[perm[partner] ^ half];
        if (side[r] >= 0) break;
        side[r] = static_cast<signed char>(side[partner] ^ 1);
        p = r;
      }
    }

    Positions low, high;
    const int closing = 2 * lg - 2 - level;
    for (int p = 0; p < size; ++p) {
      const int q = perm[p];
      if (p < half && side[p] == 1) masks[level] |= word_bit<Word>(offset + p);
      (side[p] == 0 ? low : high)[p & (half - 1)] = q & (half - 1);
      if ((q >= half ? 1 : 0) != side[p]) masks[closing] |= word_bit<Word>(offset + (q & (half - 1)));
    }
    route(low.data(), half, offset, level + 1, lg, masks);
    route(high.data(), half, offset + half, level + 1, lg, masks);
  }

  std::array<Stage, kMaxStages> stages_{};
  int count_ = 0;
  int width_ = 0;
};

}  // namespace lattenum
