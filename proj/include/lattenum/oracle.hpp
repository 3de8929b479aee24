#pragma once

// Slow reference implementations for tests: exhaustive generation of labelled
// levellised lattices, isomorphism classes by trying every relabelling, and
// direct predicates computed from the order relation.

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "lattenum/enumerate.hpp"
#include "lattenum/extension.hpp"
#include "lattenum/lattice.hpp"
#include "lattenum/permutation.hpp"

namespace lattenum::oracle {

/// A finite bounded poset on 0..n-1 stored as a reflexive order matrix; 0 is
/// the bottom and 1 the top.
struct Poset {
  int n = 0;
  std::vector<std::vector<char>> leq;  // leq[a][b]: a <= b

  /// From interior covering sets (cov[i - 2] for i = 2..n-1, may contain 1);
  /// elements with nothing below them sit directly above 0.
  static Poset from_covers(int n, const std::vector<LabelSet>& covers) {
    Poset p;
    p.n = n;
    p.leq.assign(n, std::vector<char>(n, 0));
    for (int a = 0; a < n; ++a) {
      p.leq[a][a] = 1;
      p.leq[0][a] = 1;
      p.leq[a][1] = 1;
    }
    for (int i = 2; i < n; ++i) {
      for_each_label(covers[i - 2], [&](Label c) { p.leq[i][c] = 1; });
    }
    for (int via = 0; via < n; ++via) {
      for (int a = 0; a < n; ++a) {
        if (!p.leq[a][via]) continue;
        for (int b = 0; b < n; ++b) {
          if (p.leq[via][b]) p.leq[a][b] = 1;
        }
      }
    }
    return p;
  }

  static Poset of(const LevelledLattice& l) {
    std::vector<LabelSet> covers;
    for (int i = 2; i < l.size(); ++i) covers.push_back(l.covers(i));
    return from_covers(l.size(), covers);
  }

  bool antisymmetric() const {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (leq[a][b] && leq[b][a]) return false;
      }
    }
    return true;
  }

  /// Depth below the top: longest chain from 1 down to a, minus one (0 for the top).
  std::vector<int> depths() const {
    std::vector<int> dep(n, -1);
    std::function<int(int)> depth = [&](int a) {
      if (dep[a] >= 0) return dep[a];
      int best = 0;
      for (int b = 0; b < n; ++b) {
        if (b != a && leq[a][b]) best = std::max(best, depth(b) + 1);
      }
      return dep[a] = best;
    };
    for (int a = 0; a < n; ++a) depth(a);
    return dep;
  }

  bool covered_by(int a, int b) const {
    if (a == b || !leq[a][b]) return false;
    for (int c = 0; c < n; ++c) {
      if (c != a && c != b && leq[a][c] && leq[c][b]) return false;
    }
    return true;
  }
};

/// Every pair has a unique greatest lower bound and a unique least upper
/// bound, found by scanning all common lower and upper bounds.
inline bool is_lattice_naive(const Poset& p) {
  if (!p.antisymmetric()) return false;
  for (int a = 0; a < p.n; ++a) {
    for (int b = a + 1; b < p.n; ++b) {
      int greatest = 0, least = 0;
      for (int c = 0; c < p.n; ++c) {
        if (p.leq[c][a] && p.leq[c][b]) greatest += 1;
        if (p.leq[a][c] && p.leq[b][c]) least += 1;
      }
      // A lower bound that is above all lower bounds exists iff one of them
      // has exactly `greatest` elements below it among the lower bounds.
      bool has_meet = false, has_join = false;
      for (int c = 0; c < p.n && !(has_meet && has_join); ++c) {
        if (p.leq[c][a] && p.leq[c][b]) {
          int below = 0;
          for (int e = 0; e < p.n; ++e) below += (p.leq[e][a] && p.leq[e][b] && p.leq[e][c]) ? 1 : 0;
          if (below == greatest) has_meet = true;
        }
        if (p.leq[a][c] && p.leq[b][c]) {
          int above = 0;
          for (int e = 0; e < p.n; ++e) above += (p.leq[a][e] && p.leq[b][e] && p.leq[c][e]) ? 1 : 0;
          if (above == least) has_join = true;
        }
      }
      if (!has_meet || !has_join) return false;
    }
  }
  return true;
}

/// No interior element is comparable to every other element.
inline bool is_vertically_indecomposable(const LevelledLattice& l) {
  const Poset p = Poset::of(l);
  for (int a = 2; a < p.n; ++a) {
    bool all = true;
    for (int b = 0; b < p.n && all; ++b) all = p.leq[a][b] || p.leq[b][a];
    if (all) return false;
  }
  return true;
}

/// Every cover relation, including those involving 0 and 1, joins adjacent levels.
inline bool is_graded(const LevelledLattice& l) {
  const Poset p = Poset::of(l);
  const std::vector<int> dep = p.depths();
  for (int a = 0; a < p.n; ++a) {
    for (int b = 0; b < p.n; ++b) {
      if (p.covered_by(a, b) && dep[a] != dep[b] + 1) return false;
    }
  }
  return true;
}

inline bool in_mode(const LevelledLattice& l, Mode mode) {
  if (wants_vi(mode) && !is_vertically_indecomposable(l)) return false;
  if (wants_graded(mode) && !is_graded(l)) return false;
  return true;
}

/// Calls f on every relabelling that permutes labels within each level.
inline void for_each_level_preserving(const LevelledLattice& l, const std::function<void(const LabelPermutation&)>& f) {
  std::vector<int> images(l.size());
  std::iota(images.begin(), images.end(), 0);
  const int k = l.depth();
  std::function<void(int)> rec = [&](int d) {
    if (d > k) {
      f(LabelPermutation::from_images(images));
      return;
    }
    auto first = images.begin() + l.level_begin(d);
    auto last = images.begin() + l.level_end(d);
    std::sort(first, last);
    do {
      rec(d + 1);
    } while (std::next_permutation(first, last));
  };
  rec(1);
}

/// The lattice with every label x renamed to perm(x).
inline LevelledLattice relabel(const LevelledLattice& l, const LabelPermutation& perm) {
  std::vector<LabelSet> covers(l.size() - 2);
  for (int i = 2; i < l.size(); ++i) covers[perm(i) - 2] = perm.apply(l.covers(i));
  const std::vector<int> widths = l.level_widths();
  return LevelledLattice::from_covers(l.size(), widths, covers);
}

/// Order key: levels from shallow to deep; within a level, the parts of its
/// covering sets on each shallower level, deepest first, element by element.
inline std::vector<LabelSet> order_key(const LevelledLattice& l) {
  std::vector<LabelSet> key;
  for (int level = 2; level <= l.depth(); ++level) {
    for (int d = level - 1; d >= 1; --d) {
      const LabelSet lev = l.level_mask(d);
      for (int i = l.level_begin(level); i < l.level_end(level); ++i) key.push_back(l.covers(i) & lev);
    }
  }
  return key;
}

inline std::vector<LabelSet> relabelled_key(const LevelledLattice& l, const LabelPermutation& perm) {
  return order_key(relabel(l, perm));
}

/// The relabelling of l with the smallest order key.
inline LevelledLattice canonical_form(const LevelledLattice& l) {
  LevelledLattice best = l;
  std::vector<LabelSet> best_key = order_key(l);
  for_each_level_preserving(l, [&](const LabelPermutation& perm) {
    LevelledLattice r = relabel(l, perm);
    std::vector<LabelSet> key = order_key(r);
    if (key < best_key) {
      best_key = std::move(key);
      best = r;
    }
  });
  return best;
}

/// No levellised relabelling has a smaller order key. Limited to n <= 9.
inline bool is_canonical_exhaustive(const LevelledLattice& l) {
  if (l.size() > 9) throw std::length_error("is_canonical_exhaustive: limited to 9 elements");
  const std::vector<LabelSet> key = order_key(l);
  bool minimal = true;
  for_each_level_preserving(l, [&](const LabelPermutation& perm) {
    if (minimal && relabelled_key(l, perm) < key) minimal = false;
  });
  return minimal;
}

/// Every up-closed subset of the interior of l.
inline std::vector<LabelSet> up_closed_sets(const LevelledLattice& l) {
  std::vector<LabelSet> out;
  const LabelSet interior = l.interior();
  for (LabelSet s = 0;; s = (s - interior) & interior) {
    if (shade_closure(l, s) == s) out.push_back(s);
    if (s == interior) break;
  }
  return out;
}

/// Calls f on every legal ExtensionSpec of l with m new atoms.
inline void for_each_legal_spec(const LevelledLattice& l, int m, const std::function<void(const ExtensionSpec&)>& f) {
  const std::vector<LabelSet> sets = up_closed_sets(l);
  ExtensionSpec spec;
  spec.upsets.assign(m, 0);
  std::function<void(int)> rec = [&](int t) {
    if (t == m) {
      if (!check_extension(l, spec)) f(spec);
      return;
    }
    for (LabelSet u : sets) {
      spec.upsets[t] = u;
      rec(t + 1);
    }
  };
  rec(0);
}

struct BruteResult {
  CountTable counts;
  std::vector<std::vector<LevelledLattice>> representatives;  // by size, sorted by serialized form
};

/// All isomorphism classes of lattices with 2..max_n elements in the given
/// mode, from every labelled levellised lattice. Limited to max_n <= 8.
inline BruteResult brute(int max_n, Mode mode) {
  if (max_n < 2 || max_n > 8) throw std::length_error("brute: sizes 2..8 only");
  std::vector<std::set<std::string>> classes(max_n + 1);
  std::function<void(const LevelledLattice&)> grow = [&](const LevelledLattice& l) {
    if (in_mode(l, mode)) classes[l.size()].insert(serialize(canonical_form(l)));
    for (int m = 1; l.size() + m <= max_n; ++m) {
      for_each_legal_spec(l, m, [&](const ExtensionSpec& spec) { grow(extend(l, spec)); });
    }
  };
  grow(LevelledLattice{});

  BruteResult out;
  out.counts.mode = mode;
  out.counts.max_n = max_n;
  out.counts.counts.assign(max_n + 1, 0);
  out.representatives.resize(max_n + 1);
  for (int n = 2; n <= max_n; ++n) {
    out.counts.counts[n] = classes[n].size();
    for (const std::string& s : classes[n]) out.representatives[n].push_back(deserialize(s));
  }
  return out;
}

/// All elements of the group generated by gens, or an empty vector once more
/// than `limit` elements have been found.
inline std::vector<LabelPermutation> group_closure(const std::vector<LabelPermutation>& gens,
                                                   std::size_t limit = 100000) {
  std::vector<LabelPermutation> elements{LabelPermutation()};
  std::set<std::string> seen{LabelPermutation().to_string()};
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& g : gens) {
      LabelPermutation h = g * elements[i];
      if (seen.insert(h.to_string()).second) {
        elements.push_back(h);
        if (elements.size() > limit) return {};
      }
    }
  }
  return elements;
}

}  // namespace lattenum::oracle
