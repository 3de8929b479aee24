#pragma once

#include <bit>
#include <cstdint>

#ifndef LATTENUM_MAX_N
#define LATTENUM_MAX_N 24
#endif

namespace lattenum {

/// Largest supported lattice size. Every label set fits into one 32-bit word.
inline constexpr int kMaxSize = LATTENUM_MAX_N;
static_assert(kMaxSize >= 2 && kMaxSize <= 32, "label sets are 32-bit masks");

using Label = int;

/// Set of labels, bit x set iff label x is a member.
using LabelSet = std::uint32_t;

constexpr LabelSet bit(Label x) noexcept { return LabelSet{1} << x; }

constexpr bool contains(LabelSet s, Label x) noexcept { return (s >> x) & 1U; }

constexpr int popcount(LabelSet s) noexcept { return std::popcount(s); }

/// Labels in [lo, hi).
constexpr LabelSet label_range(Label lo, Label hi) noexcept {
  if (hi <= lo) return 0;
  const LabelSet upper = hi >= 32 ? ~LabelSet{0} : (bit(hi) - 1);
  return upper & ~(bit(lo) - 1);
}

template <class F>
constexpr void for_each_label(LabelSet s, F&& f) {
  while (s != 0) {
    f(static_cast<Label>(std::countr_zero(s)));
    s &= s - 1;
  }
}

}  // namespace lattenum
