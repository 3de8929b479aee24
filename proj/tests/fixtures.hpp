#pragma once

#include <initializer_list>
#include <vector>

#include "lattenum/enumerate.hpp"
#include "lattenum/lattice.hpp"

namespace fixtures {

using lattenum::LabelSet;
using lattenum::LevelledLattice;

inline LabelSet set_of(std::initializer_list<int> labels) {
  LabelSet s = 0;
  for (int x : labels) s |= lattenum::bit(x);
  return s;
}

inline LevelledLattice make(int n, std::vector<int> widths, std::vector<LabelSet> covers) {
  return LevelledLattice::from_covers(n, widths, covers);
}

inline LevelledLattice L2() { return LevelledLattice{}; }
inline LevelledLattice C3() { return make(3, {1}, {set_of({1})}); }
inline LevelledLattice C4() { return make(4, {1, 1}, {set_of({1}), set_of({2})}); }
inline LevelledLattice D4() { return make(4, {2}, {set_of({1}), set_of({1})}); }
inline LevelledLattice N5() { return make(5, {2, 1}, {set_of({1}), set_of({1}), set_of({2})}); }
inline LevelledLattice N5_swapped() { return make(5, {2, 1}, {set_of({1}), set_of({1}), set_of({3})}); }
inline LevelledLattice M3() { return make(5, {3}, {set_of({1}), set_of({1}), set_of({1})}); }
inline LevelledLattice D4b() { return make(5, {2, 1}, {set_of({1}), set_of({1}), set_of({2, 3})}); }
inline LevelledLattice H6() {
  return make(6, {2, 2}, {set_of({1}), set_of({1}), set_of({2}), set_of({3})});
}
inline LevelledLattice H6_swapped() {
  return make(6, {2, 2}, {set_of({1}), set_of({1}), set_of({3}), set_of({2})});
}

inline std::vector<LevelledLattice> all_fixtures() { return {L2(), C3(), C4(), D4(), N5(), M3(), D4b(), H6()}; }

/// Canonical lattices with their stabilisers, all sizes up to max_n, in
/// generation order.
inline std::vector<lattenum::SearchNode> canonical_nodes(int max_n, lattenum::Mode mode = lattenum::Mode::all) {
  std::vector<lattenum::SearchNode> out{lattenum::SearchNode{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int n = out[i].lattice.size();
    for (int m = 1; n + m <= max_n; ++m) {
      for (auto& child : lattenum::children(out[i], m, mode)) out.push_back(std::move(child));
    }
  }
  return out;
}

}  // namespace fixtures
