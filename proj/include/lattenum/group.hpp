#pragma once

// Orbits of packed words under permutation groups given by generators, point
// stabilisers via Schreier generators, and Jerrum's filter to keep generating
// sets small.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lattenum/benes.hpp"
#include "lattenum/permutation.hpp"

namespace lattenum {

/// Keeps a generating set whose "first moved point -> its image" edges form a
/// forest on the moved points, hence at most (moved points - 1) generators.
/// Inserting an element that would close a cycle replaces one cycle edge by
/// the product around the cycle, which fixes a strictly larger initial
/// segment of labels, and re-inserts that product.
class JerrumFilter {
 public:
  void clear() noexcept { edges_.clear(); }

  void insert(LabelPermutation g) {
    while (!g.is_identity()) {
      const int a = g.min_moved_point();
      const int b = g(a);
      for (const Edge& e : edges_) {
        if (e.from == a && e.to == b && e.perm == g) return;
      }
      if (!find_path(b, a)) {
        edges_.push_back(Edge{g, a, b});
        return;
      }
      // Cycle a -g-> b -> ... -> a, as oriented steps.
      steps_.clear();
      steps_.push_back(Step{g, a, -1});
      int at = b;
      for (const auto& [e, forward] : path_) {
        const Edge& edge = edges_[e];
        steps_.push_back(Step{forward ? edge.perm : edge.perm.inverse(), at, e});
        at = forward ? edge.to : edge.from;
      }
      std::size_t start = 0;
      for (std::size_t s = 1; s < steps_.size(); ++s) {
        if (steps_[s].from < steps_[start].from) start = s;
      }
      LabelPermutation product;
      for (std::size_t t = 0; t < steps_.size(); ++t) {
        product = steps_[(start + t) % steps_.size()].perm * product;
      }
      const int removed = steps_[start].edge;
      if (removed >= 0) {
        edges_.erase(edges_.begin() + removed);
        edges_.push_back(Edge{g, a, b});
      }
      g = product;
    }
  }

  std::size_t size() const noexcept { return edges_.size(); }

  std::vector<LabelPermutation> generators() const {
    std::vector<LabelPermutation> out;
    out.reserve(edges_.size());
    for (const Edge& e : edges_) out.push_back(e.perm);
    return out;
  }

  void append_generators(std::vector<LabelPermutation>& out) const {
    for (const Edge& e : edges_) out.push_back(e.perm);
  }

 private:
  struct Edge {
    LabelPermutation perm;  // perm(from) == to, from is its smallest moved point
    int from;
    int to;
  };
  struct Step {
    LabelPermutation perm;  // maps `from` to the next vertex of the cycle
    int from;
    int edge;  // index into edges_, -1 for the element being inserted
  };

  // Fills path_ with (edge, forward) steps leading from src to dst.
  bool find_path(int src, int dst) {
    path_.clear();
    if (src == dst) return true;
    std::array<int, kMaxSize> via_edge;
    std::array<int, kMaxSize> prev;
    via_edge.fill(-1);
    std::array<int, kMaxSize> queue{};
    int head = 0, tail = 0;
    queue[tail++] = src;
    LabelSet reached = bit(src);
    while (head < tail && !contains(reached, dst)) {
      const int v = queue[head++];
      for (std::size_t e = 0; e < edges_.size(); ++e) {
        const int w = edges_[e].from == v ? edges_[e].to : (edges_[e].to == v ? edges_[e].from : -1);
        if (w < 0 || contains(reached, w)) continue;
        reached |= bit(w);
        via_edge[w] = static_cast<int>(e);
        prev[w] = v;
        queue[tail++] = w;
      }
    }
    if (!contains(reached, dst)) return false;
    for (int v = dst; v != src; v = prev[v]) {
      const Edge& e = edges_[via_edge[v]];
      path_.emplace_back(via_edge[v], e.to == v && e.from == prev[v]);
    }
    std::reverse(path_.begin(), path_.end());
    return true;
  }

  std::vector<Edge> edges_;
  std::vector<Step> steps_;
  std::vector<std::pair<int, bool>> path_;
};

/// Same group, at most |moved_points| - 1 generators.
inline std::vector<LabelPermutation> jerrum_reduce(std::span<const LabelPermutation> gens, LabelSet moved_points) {
  JerrumFilter filter;
  for (const auto& g : gens) {
    if ((g.moved_points() & ~moved_points) != 0) {
      throw std::invalid_argument("jerrum_reduce: generator moves a point outside the given set");
    }
    filter.insert(g);
  }
  return filter.generators();
}

/// Open-addressing index from words to their position in an orbit list.
template <class Word>
class WordIndex {
 public:
  void reset(std::size_t expected) {
    std::size_t cap = 64;
    while (cap < 2 * expected) cap *= 2;
    if (slots_.size() < cap) {
      slots_.assign(cap, 0);
      used_.clear();
    } else {
      for (std::size_t s : used_) slots_[s] = 0;
      used_.clear();
    }
  }

  /// Returns the index stored for w, or inserts `fresh` and returns -1.
  int find_or_insert(Word w, int fresh, const std::vector<Word>& orbit) {
    if (2 * (used_.size() + 1) > slots_.size()) grow(orbit);
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t s = hash(w) & mask;; s = (s + 1) & mask) {
      const int v = slots_[s];
      if (v == 0) {
        slots_[s] = fresh + 1;
        used_.push_back(s);
        return -1;
      }
      if (orbit[v - 1] == w) return v - 1;
    }
  }

 private:
  static std::size_t hash(Word w) noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(w);
    if constexpr (sizeof(Word) > 8) h ^= static_cast<std::uint64_t>(w >> 64) * 0xC2B2AE3D27D4EB4FULL;
    h *= 0x9E3779B97F4A7C15ULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }

  void grow(const std::vector<Word>& orbit) {
    std::vector<std::pair<std::size_t, int>> entries;
    for (std::size_t s : used_) entries.emplace_back(s, slots_[s]);
    slots_.assign(slots_.size() * 2, 0);
    used_.clear();
    const std::size_t mask = slots_.size() - 1;
    for (const auto& [_, v] : entries) {
      std::size_t s = hash(orbit[v - 1]) & mask;
      while (slots_[s] != 0) s = (s + 1) & mask;
      slots_[s] = v;
      used_.push_back(s);
    }
  }

  std::vector<int> slots_;
  std::vector<std::size_t> used_;
};

/// A word split into `atoms` blocks of `width` bits, block 0 most significant
/// and belonging to label `first_label`, with the blocks grouped into runs of
/// consecutive blocks. Any rearrangement of blocks inside runs is assumed to
/// lie in the acting group as a normal subgroup; orbits are then scanned on
/// run-sorted representatives only.
struct BlockRuns {
  int first_label = 0;
  int atoms = 0;
  int width = 0;
  std::uint32_t run_start = 0;  // bit t set iff a run starts at block t

  bool all_singletons() const noexcept { return run_start == ((std::uint32_t{1} << atoms) - 1) || atoms <= 1; }
};

/// Sorts the blocks of x ascending within each run. If `order` is non-null it
/// receives, for each position, the block that was moved there.
template <class Word>
Word sort_runs(Word x, const BlockRuns& runs, std::uint8_t* order = nullptr) {
  const int m = runs.atoms;
  const int w = runs.width;
  const Word block_mask = (Word{1} << w) - 1;
  std::array<std::uint32_t, kMaxSize> blocks;
  std::array<std::uint8_t, kMaxSize> idx;
  for (int t = 0; t < m; ++t) {
    blocks[t] = static_cast<std::uint32_t>((x >> ((m - 1 - t) * w)) & block_mask);
    idx[t] = static_cast<std::uint8_t>(t);
  }
  bool moved = false;
  for (int t = 1; t < m; ++t) {
    if ((runs.run_start >> t) & 1U) continue;
    const std::uint32_t b = blocks[t];
    const std::uint8_t i = idx[t];
    int u = t;
    while (u > 0 && !((runs.run_start >> u) & 1U) && blocks[u - 1] > b) {
      blocks[u] = blocks[u - 1];
      idx[u] = idx[u - 1];
      --u;
    }
    if (u != t) {
      moved = true;
      blocks[u] = b;
      idx[u] = i;
    }
  }
  if (order != nullptr) std::copy_n(idx.begin(), m, order);
  if (!moved) return x;
  Word y = 0;
  for (int t = 0; t < m; ++t) y = (y << w) | static_cast<Word>(blocks[t]);
  return y;
}

/// Scratch space for orbit computations; one per worker.
template <class Word>
struct OrbitWorkspace {
  std::vector<Word> orbit;
  std::vector<int> parent;
  std::vector<int> via;
  std::vector<int> image;  // image[p * gens + g] = index of g applied to orbit[p]
  std::vector<LabelPermutation> transversal;
  std::vector<LabelPermutation> inverse;  // inverses of the transversal elements
  WordIndex<Word> index;
  JerrumFilter filter;
};

enum class OrbitVerdict { smaller_found, minimal };

/// Breadth-first scan of the orbit of `word` under the group generated by
/// `perms`, acting through the matching compiled networks `nets`. Stops at the
/// first image smaller than `word` unless `early_abort` is false. On a minimal
/// word and a non-null `stabiliser`, writes Jerrum-filtered Schreier
/// generators of the stabiliser of `word`.
///
/// With `runs`, the group is taken to be generated by `perms` together with
/// all block rearrangements inside runs. Then only run-sorted words are
/// visited, and the stabiliser written is generated, together with the
/// transpositions of equal adjacent blocks inside runs, by the returned list.
template <class Word>
OrbitVerdict orbit_scan(Word word, std::span<const LabelPermutation> perms, std::span<const BenesNetwork<Word>> nets,
                        OrbitWorkspace<Word>& ws, std::vector<LabelPermutation>* stabiliser,
                        bool early_abort = true, const BlockRuns* runs = nullptr) {
  const std::size_t gens = perms.size();
  if (stabiliser != nullptr) stabiliser->clear();
  if (runs != nullptr && runs->all_singletons()) runs = nullptr;
  const auto reduce = [runs](Word x) { return runs == nullptr ? x : sort_runs(x, *runs); };
  std::array<std::uint8_t, kMaxSize> order;
  // The group element taking orbit word x to reduce(g x), as g followed by sorting.
  const auto step = [&](std::size_t g, Word x) {
    if (runs == nullptr) return perms[g];
    sort_runs(nets[g].apply(x), *runs, order.data());
    return LabelPermutation::arranging(runs->first_label, runs->atoms, {order.data(), static_cast<std::size_t>(runs->atoms)}) *
           perms[g];
  };

  if (reduce(word) < word) return OrbitVerdict::smaller_found;

  // Common case: every generator fixes the word.
  bool fixed = true;
  for (std::size_t g = 0; g < gens; ++g) {
    const Word y = reduce(nets[g].apply(word));
    if (y < word && early_abort) return OrbitVerdict::smaller_found;
    if (y != word) fixed = false;
  }
  if (fixed) {
    if (stabiliser != nullptr) {
      ws.filter.clear();
      for (std::size_t g = 0; g < gens; ++g) ws.filter.insert(step(g, word));
      ws.filter.append_generators(*stabiliser);
    }
    return OrbitVerdict::minimal;
  }

  ws.orbit.clear();
  ws.parent.clear();
  ws.via.clear();
  ws.image.clear();
  ws.index.reset(64);
  ws.orbit.push_back(word);
  ws.parent.push_back(-1);
  ws.via.push_back(-1);
  ws.index.find_or_insert(word, 0, ws.orbit);
  const bool want_images = stabiliser != nullptr;
  bool smaller = false;
  for (std::size_t p = 0; p < ws.orbit.size(); ++p) {
    const Word x = ws.orbit[p];
    for (std::size_t g = 0; g < gens; ++g) {
      const Word y = reduce(nets[g].apply(x));
      if (y < word) {
        if (early_abort) return OrbitVerdict::smaller_found;
        smaller = true;
      }
      const int fresh = static_cast<int>(ws.orbit.size());
      const int found = ws.index.find_or_insert(y, fresh, ws.orbit);
      if (found < 0) {
        ws.orbit.push_back(y);
        ws.parent.push_back(static_cast<int>(p));
        ws.via.push_back(static_cast<int>(g));
      }
      if (want_images) ws.image.push_back(found < 0 ? fresh : found);
    }
  }
  if (smaller) return OrbitVerdict::smaller_found;
  if (stabiliser == nullptr) return OrbitVerdict::minimal;

  const std::size_t size = ws.orbit.size();
  ws.transversal.resize(size);
  ws.inverse.resize(size);
  ws.transversal[0] = LabelPermutation();
  ws.inverse[0] = LabelPermutation();
  for (std::size_t p = 1; p < size; ++p) {
    ws.transversal[p] = step(ws.via[p], ws.orbit[ws.parent[p]]) * ws.transversal[ws.parent[p]];
    ws.inverse[p] = ws.transversal[p].inverse();
  }
  ws.filter.clear();
  for (std::size_t p = 0; p < size; ++p) {
    for (std::size_t g = 0; g < gens; ++g) {
      const int q = ws.image[p * gens + g];
      if (ws.parent[q] == static_cast<int>(p) && ws.via[q] == static_cast<int>(g)) continue;
      // t_q^-1 s g t_p fixes the word
      const LabelPermutation s = ws.inverse[q] * (step(g, ws.orbit[p]) * ws.transversal[p]);
      if (!s.is_identity()) ws.filter.insert(s);
    }
  }
  ws.filter.append_generators(*stabiliser);
  return OrbitVerdict::minimal;
}

/// Convenience form returning the stabiliser generators; empty optional when a
/// smaller image exists.
template <class Word>
std::optional<std::vector<LabelPermutation>> orbit_scan(Word word, std::span<const LabelPermutation> perms,
                                                         std::span<const BenesNetwork<Word>> nets) {
  OrbitWorkspace<Word> ws;
  std::vector<LabelPermutation> stab;
  if (orbit_scan(word, perms, nets, ws, &stab) == OrbitVerdict::smaller_found) return std::nullopt;
  return stab;
}

}  // namespace lattenum
