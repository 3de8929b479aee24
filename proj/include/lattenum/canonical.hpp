#pragma once

// The level-major order on levellised lattices and the level-by-level
// minimality test for a new level of atoms.

#include <compare>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lattenum/benes.hpp"
#include "lattenum/group.hpp"
#include "lattenum/lattice.hpp"

namespace lattenum {

/// Packing of one level's part of the new atoms' shades into one word. Atom i
/// (of first_new..first_new+atoms-1) and level element j occupy bit
/// (first_new + atoms - 1 - i) * width + (j - begin): the first new atom is the
/// most significant block, so integer order is lexicographic order of the
/// per-atom weights.
struct BitLayout {
  int begin = 2;
  int width = 0;
  int first_new = 2;
  int atoms = 0;

  static BitLayout of_level(const LevelledLattice& l, int level, int atoms) {
    return BitLayout{l.level_begin(level), l.level_width(level), l.size(), atoms};
  }

  int word_width() const noexcept { return atoms * width; }
  int bit_index(Label atom, Label element) const noexcept {
    return (first_new + atoms - 1 - atom) * width + (element - begin);
  }
  LabelSet level_mask() const noexcept { return label_range(begin, begin + width); }
  LabelSet new_mask() const noexcept { return label_range(first_new, first_new + atoms); }
};

template <class Word>
Word pack_parts(const BitLayout& layout, std::span<const LabelSet> upsets) {
  Word word = 0;
  const LabelSet lev = layout.level_mask();
  for (int t = 0; t < layout.atoms; ++t) {
    const Word block = static_cast<Word>((upsets[t] & lev) >> layout.begin);
    word |= block << ((layout.atoms - 1 - t) * layout.width);
  }
  return word;
}

/// The level-d part of the upsets as one packed word.
inline PackedWord pack_level(const LevelledLattice& l, int level, int atoms, std::span<const LabelSet> upsets) {
  const BitLayout layout = BitLayout::of_level(l, level, atoms);
  if (layout.word_width() > word_bits<PackedWord>) throw std::length_error("pack_level: word wider than 128 bits");
  if (static_cast<int>(upsets.size()) != atoms) throw std::invalid_argument("pack_level: one upset per atom expected");
  return pack_parts<PackedWord>(layout, upsets);
}

/// Bit map realising the action of a relabelling on packed words of `layout`.
/// Throws if the permutation does not preserve the level or the new atoms.
inline std::vector<int> induced_bit_perm(const LabelPermutation& perm, const BitLayout& layout) {
  const LabelSet lev = layout.level_mask();
  const LabelSet atoms = layout.new_mask();
  if (perm.apply(lev) != lev || perm.apply(atoms) != atoms) {
    throw std::invalid_argument("induced_bit_perm: permutation does not preserve the level and the new atoms");
  }
  std::vector<int> map(layout.word_width());
  for (int i = layout.first_new; i < layout.first_new + layout.atoms; ++i) {
    for (int j = layout.begin; j < layout.begin + layout.width; ++j) {
      map[layout.bit_index(i, j)] = layout.bit_index(perm(i), perm(j));
    }
  }
  return map;
}

template <class Word>
BenesNetwork<Word> compile_action(const LabelPermutation& perm, const BitLayout& layout) {
  return BenesNetwork<Word>::compile(induced_bit_perm(perm, layout));
}

/// Generators of a group S_d acting on the packed words of level `level`.
struct StabiliserLevel {
  int level = 0;
  std::vector<LabelPermutation> generators;
};

/// Generators of Stab(L) x Sym(new atoms); the latter by adjacent transpositions.
inline std::vector<LabelPermutation> initial_generators(std::span<const LabelPermutation> lattice_stabiliser,
                                                        int n, int atoms) {
  std::vector<LabelPermutation> gens(lattice_stabiliser.begin(), lattice_stabiliser.end());
  for (int t = 0; t + 1 < atoms; ++t) gens.push_back(LabelPermutation::transposition(n + atoms, n + t, n + t + 1));
  return gens;
}

/// Accepts iff `word` is minimal in its orbit under S_d; on acceptance returns
/// generators of its stabiliser, the group S_{d-1} for the next level.
inline std::optional<StabiliserLevel> level_min_test(PackedWord word, const StabiliserLevel& group,
                                                     const BitLayout& layout) {
  if (group.generators.empty()) return StabiliserLevel{group.level - 1, {}};
  std::vector<BenesNetwork<PackedWord>> nets;
  nets.reserve(group.generators.size());
  for (const auto& g : group.generators) nets.push_back(compile_action<PackedWord>(g, layout));
  auto stab = orbit_scan<PackedWord>(word, group.generators, nets);
  if (!stab) return std::nullopt;
  return StabiliserLevel{group.level - 1, std::move(*stab)};
}

/// The level-major order: parents first, then the deepest level's covering
/// sets, level by level from the deepest covered level up and element by
/// element within a level. Defined only for equal level profiles.
inline std::strong_ordering compare_lattices(const LevelledLattice& a, const LevelledLattice& b) {
  if (a.size() != b.size() || a.level_widths() != b.level_widths()) {
    throw std::invalid_argument("compare_lattices: level profiles differ");
  }
  const int k = a.depth();
  if (k <= 1) return std::strong_ordering::equal;
  if (auto c = compare_lattices(parent(a), parent(b)); c != 0) return c;
  for (int d = k - 1; d >= 1; --d) {
    const LabelSet lev = a.level_mask(d);
    for (int i = a.level_begin(k); i < a.level_end(k); ++i) {
      if (auto c = (a.covers(i) & lev) <=> (b.covers(i) & lev); c != 0) return c;
    }
  }
  return std::strong_ordering::equal;
}

}  // namespace lattenum
