#pragma once

// Adding one whole level of new atoms below a levellised lattice.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lattenum/lattice.hpp"

namespace lattenum {

/// A new deepest level of m atoms labelled n..n+m-1. Atom n+t is described by
/// the up-closed interior set upsets[t] = shade of its covering set minus the
/// top; an empty set means the atom is covered by the top alone.
struct ExtensionSpec {
  std::vector<LabelSet> upsets;

  int atoms() const noexcept { return static_cast<int>(upsets.size()); }
};

namespace detail {

inline LabelSet zero_meet_mask(const LevelledLattice& l, Label x) {
  LabelSet z = 0;
  for (int y = 2; y < l.size(); ++y) {
    if (l.meet_unchecked(x, y) == 0) z |= bit(y);
  }
  return z;
}

}  // namespace detail

/// Lattice-antichain test. `antichain` may contain the top label 1, which
/// contributes nothing to the interior shade. Only pairs minimal (in the
/// product order) among those with a nonzero meet are inspected: if their
/// meet lies in the shade, so does the meet of every pair above them.
inline bool is_lattice_antichain(const LevelledLattice& l, LabelSet antichain) {
  const LabelSet up = shade_closure(l, antichain & ~bit(1));
  std::vector<LabelSet> below(l.size(), 0);
  std::vector<LabelSet> zero(l.size(), 0);
  for_each_label(up, [&](Label x) {
    below[x] = l.shadow(x) & up;
    zero[x] = detail::zero_meet_mask(l, x);
  });
  bool ok = true;
  for_each_label(up, [&](Label a) {
    for_each_label(up & ~zero[a], [&](Label b) {
      if (!ok) return;
      // (a', b) and (a, b') with a' < a, b' < b inside the shade
      if ((below[a] & ~zero[b]) != 0 || (below[b] & ~zero[a]) != 0) return;
      if (!contains(up, l.meet_unchecked(a, b))) ok = false;
    });
  });
  return ok;
}

/// Two atoms with shades ui and uj may coexist iff no pair drawn from the
/// common part of their shades has the bottom as meet.
inline bool pairwise_compatible(const LevelledLattice& l, LabelSet ui, LabelSet uj) {
  const LabelSet common = ui & uj;
  bool ok = true;
  for_each_label(common, [&](Label a) {
    for_each_label(common, [&](Label b) {
      if (l.meet_unchecked(a, b) == 0) ok = false;
    });
  });
  return ok;
}

/// Checks that an ExtensionSpec yields a levellised lattice with the new atoms forming
/// the deepest level. Returns a description of the first failed condition.
inline std::optional<std::string> check_extension(const LevelledLattice& l, const ExtensionSpec& spec) {
  const int n = l.size();
  const int k = l.depth();
  const int m = spec.atoms();
  if (m < 1) return "at least one new atom is required";
  if (n + m > kMaxSize) return "extension exceeds the maximum lattice size";
  for (int t = 0; t < m; ++t) {
    const LabelSet u = spec.upsets[t];
    if ((u & ~l.interior()) != 0) return "shade of atom " + std::to_string(n + t) + " leaves the interior";
    if (shade_closure(l, u) != u) return "shade of atom " + std::to_string(n + t) + " is not up-closed";
    const bool reaches_deepest = k == 0 ? u == 0 : (u & l.level_mask(k)) != 0;
    if (!reaches_deepest) return "atom " + std::to_string(n + t) + " does not cover the deepest level";
    const LabelSet a = u == 0 ? bit(1) : minimal_elements(l, u);
    if (!is_lattice_antichain(l, a)) return "covering set of atom " + std::to_string(n + t) + " is not a lattice-antichain";
  }
  for (int s = 0; s < m; ++s) {
    for (int t = s + 1; t < m; ++t) {
      if (!pairwise_compatible(l, spec.upsets[s], spec.upsets[t])) {
        return "atoms " + std::to_string(n + s) + " and " + std::to_string(n + t) + " are incompatible";
      }
    }
  }
  return std::nullopt;
}

/// The lattice with the described atoms added as a new deepest level. Throws
/// std::invalid_argument when the ExtensionSpec is not legal for `l`.
inline LevelledLattice extend(const LevelledLattice& l, const ExtensionSpec& spec) {
  if (auto why = check_extension(l, spec)) throw std::invalid_argument("extend: " + *why);
  std::vector<LabelSet> covers(spec.upsets.size());
  for (std::size_t t = 0; t < covers.size(); ++t) {
    const LabelSet u = spec.upsets[t];
    covers[t] = u == 0 ? bit(1) : minimal_elements(l, u);
  }
  return LatticeAssembler::add_level(l, spec.atoms(), covers, spec.upsets);
}

/// For a vertically indecomposable base: whether the child stays indecomposable.
/// It fails exactly when a single new atom sits below every interior element.
inline bool child_is_vi(const LevelledLattice& l, const ExtensionSpec& spec) {
  return !(spec.atoms() == 1 && spec.upsets[0] == l.interior());
}

/// For a graded base: whether the child is graded, i.e. every new atom is
/// covered only by elements of the deepest level and together they cover that
/// level.
inline bool child_is_graded(const LevelledLattice& l, const ExtensionSpec& spec) {
  const int k = l.depth();
  if (k == 0) return true;
  const LabelSet deepest = l.level_mask(k);
  LabelSet covered = 0;
  for (LabelSet u : spec.upsets) {
    const LabelSet a = minimal_elements(l, u);
    if ((a & ~deepest) != 0) return false;
    covered |= a;
  }
  return covered == deepest;
}

}  // namespace lattenum
