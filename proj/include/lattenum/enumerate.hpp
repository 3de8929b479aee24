#pragma once

// Depth-first generation of canonical lattices, one new level per step.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <sys/resource.h>
#if defined(__x86_64__) || defined(__i386__)
#include <x86intrin.h>
#endif

#include "lattenum/benes.hpp"
#include "lattenum/canonical.hpp"
#include "lattenum/extension.hpp"
#include "lattenum/group.hpp"
#include "lattenum/lattice.hpp"

namespace lattenum {

enum class Mode { all, vi, graded, vi_graded };

constexpr bool wants_vi(Mode m) noexcept { return m == Mode::vi || m == Mode::vi_graded; }
constexpr bool wants_graded(Mode m) noexcept { return m == Mode::graded || m == Mode::vi_graded; }

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::all: return "all";
    case Mode::vi: return "vi";
    case Mode::graded: return "graded";
    case Mode::vi_graded: return "vi-graded";
  }
  return "?";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : {Mode::all, Mode::vi, Mode::graded, Mode::vi_graded}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

/// A canonical lattice together with generators of its automorphism group.
struct SearchNode {
  LevelledLattice lattice;
  std::vector<LabelPermutation> stabiliser;
};

/// Switches for the search; both only affect running time.
struct SearchOptions {
  bool early_abort = true;        // stop an orbit scan at the first smaller image
  bool symmetry_shortcut = true;  // order atoms whose deeper parts coincide
};

/// Backtrack search over the new level's shades, deepest old level first and
/// atom by atom within a level, with the lattice conditions checked as soon as
/// a pair of elements is known and a minimality test after each level.
/// Reusable scratch state; one instance per worker thread.
class ChildSearch {
 public:
  explicit ChildSearch(Mode mode = Mode::all, SearchOptions options = {}) : mode_(mode), options_(options) {}

  /// Calls `on_child(upsets, stabiliser)` for every canonical child of `node`
  /// with `atoms` new elements that passes the mode filter. `stabiliser` is
  /// null unless `want_stabiliser`; both arguments are only valid during the
  /// call.
  template <class OnChild>
  void run(const SearchNode& node, int atoms, bool want_stabiliser, OnChild&& on_child) {
    const LevelledLattice& l = node.lattice;
    if (atoms < 1 || l.size() + atoms > kMaxSize) throw std::invalid_argument("children: bad number of atoms");
    lattice_ = &l;
    n_ = l.size();
    k_ = l.depth();
    m_ = atoms;
    want_stabiliser_ = want_stabiliser;
    std::function<void()> emit = [&] {
      on_child(std::span<const LabelSet>(upsets_.data(), static_cast<std::size_t>(m_)),
               want_stabiliser_ ? &frames_[0].perms : nullptr);
    };
    emit_ = &emit;

    upsets_.fill(0);
    if (k_ == 0) {
      // Below the two-element lattice every atom is covered by the top alone.
      if (wants_vi(mode_) && m_ == 1) return;
      if (want_stabiliser_) frames_[0].perms = initial_generators({}, n_, m_);
      emit();
      return;
    }

    for (int x = 2; x < n_; ++x) {
      up_[x] = l.shade(x);
      LabelSet zero = 0;
      for (int y = 2; y < n_; ++y) {
        const Label z = l.meet_unchecked(x, y);
        meet_bit_[x][y] = z == 0 ? 0 : bit(z);
        if (z == 0) zero |= bit(y);
      }
      zero_meet_[x] = zero;
    }
    interior_ = l.interior();
    forced_.fill(0);
    Frame& top = frames_[k_];
    top.perms = node.stabiliser;  // Sym(new atoms) is handled through runs
    compile_frame(k_);
    tied_[k_] = label_range(1, m_);
    place(k_, 0);
  }

  /// Builds the child node from the arguments passed to `on_child`.
  static SearchNode make_child(const LevelledLattice& l, std::span<const LabelSet> upsets,
                               const std::vector<LabelPermutation>* stabiliser) {
    std::array<LabelSet, kMaxSize> covers{};
    for (std::size_t t = 0; t < upsets.size(); ++t) {
      covers[t] = upsets[t] == 0 ? bit(1) : minimal_elements(l, upsets[t]);
    }
    SearchNode child;
    child.lattice = LatticeAssembler::add_level(l, static_cast<int>(upsets.size()),
                                                std::span<const LabelSet>(covers.data(), upsets.size()), upsets);
    if (stabiliser != nullptr) child.stabiliser = *stabiliser;
    return child;
  }

  std::uint64_t orbit_scans() const noexcept { return orbit_scans_; }

 private:
  struct Frame {
    std::vector<LabelPermutation> perms;
    std::vector<BenesNetwork<std::uint64_t>> narrow;
    std::vector<BenesNetwork<PackedWord>> wide;
  };

  BitLayout layout(int d) const noexcept {
    return BitLayout{lattice_->level_begin(d), lattice_->level_width(d), n_, m_};
  }

  void compile_frame(int d) {
    Frame& f = frames_[d];
    const BitLayout lay = layout(d);
    f.narrow.clear();
    f.wide.clear();
    if (lay.word_width() <= 64) {
      for (const auto& g : f.perms) f.narrow.push_back(compile_action<std::uint64_t>(g, lay));
    } else {
      for (const auto& g : f.perms) f.wide.push_back(compile_action<PackedWord>(g, lay));
    }
  }

  void place(int d, int t) {
    if (t == m_) {
      finish_level(d);
      return;
    }
    const LabelSet lev = lattice_->level_mask(d);
    const LabelSet base = forced_[t] & lev;
    const LabelSet free = (wants_graded(mode_) && d < k_) ? 0 : lev & ~base;
    const LabelSet lower = (options_.symmetry_shortcut && contains(tied_[d], t)) ? part_[t - 1][d] : 0;
    LabelSet sub = 0;
    while (true) {
      const LabelSet p = base | sub;
      if (p >= lower && !(d == k_ && p == 0)) try_part(d, t, p);
      if (sub == free) break;
      sub = (sub - free) & free;
    }
  }

  void try_part(int d, int t, LabelSet p) {
    const LabelSet grown = upsets_[t] | p;
    // Meets of the new elements with the atom's shade must stay in the shade
    // or be the bottom.
    LabelSet meets = 0;
    for_each_label(p, [&](Label x) {
      for_each_label(grown, [&](Label y) { meets |= meet_bit_[x][y]; });
    });
    if ((meets & ~grown) != 0) return;
    // Two atoms must not share a pair of elements whose meet is the bottom.
    for (int s = 0; s < m_; ++s) {
      if (s == t) continue;
      const LabelSet shared_new = p & upsets_[s];
      if (shared_new == 0) continue;
      const LabelSet common = grown & upsets_[s];
      bool clash = false;
      for_each_label(shared_new, [&](Label x) { clash = clash || (common & zero_meet_[x]) != 0; });
      if (clash) return;
    }
    LabelSet above = 0;
    for_each_label(p, [&](Label x) { above |= up_[x]; });

    const LabelSet saved_upset = upsets_[t];
    const LabelSet saved_forced = forced_[t];
    upsets_[t] = grown;
    forced_[t] |= above;
    part_[t][d] = p;
    place(d, t + 1);
    upsets_[t] = saved_upset;
    forced_[t] = saved_forced;
  }

  void finish_level(int d) {
    if (d == k_ && wants_graded(mode_)) {
      LabelSet covered = 0;
      for (int t = 0; t < m_; ++t) covered |= part_[t][d];
      if (covered != lattice_->level_mask(d)) return;
    }
    if (d == 1 && wants_vi(mode_) && m_ == 1 && upsets_[0] == interior_) return;

    const bool last = d == 1;
    Frame& cur = frames_[d];
    Frame& next = frames_[d - 1];
    std::vector<LabelPermutation>* stab = (!last || want_stabiliser_) ? &next.perms : nullptr;
    // Atoms whose parts agree on all levels processed so far may be permuted
    // freely; the scan works modulo those permutations.
    const BitLayout lay = layout(d);
    const BlockRuns runs{n_, m_, lay.width, ~tied_[d] & label_range(0, m_)};
    ++orbit_scans_;
    std::array<LabelSet, kMaxSize> parts{};
    for (int t = 0; t < m_; ++t) parts[t] = part_[t][d];
    const std::span<const LabelSet> view(parts.data(), static_cast<std::size_t>(m_));
    OrbitVerdict verdict;
    if (lay.word_width() <= 64) {
      verdict = orbit_scan<std::uint64_t>(pack_parts<std::uint64_t>(lay, view), cur.perms, cur.narrow, narrow_ws_,
                                          stab, options_.early_abort, &runs);
    } else {
      verdict = orbit_scan<PackedWord>(pack_parts<PackedWord>(lay, view), cur.perms, cur.wide, wide_ws_, stab,
                                       options_.early_abort, &runs);
    }
    if (verdict == OrbitVerdict::smaller_found) return;

    LabelSet tied = 0;
    for (int t = 1; t < m_; ++t) {
      if (contains(tied_[d], t) && part_[t][d] == part_[t - 1][d]) tied |= bit(t);
    }
    tied_[d - 1] = tied;
    if (last) {
      if (want_stabiliser_) {
        for_each_label(tied, [&](Label t) {
          next.perms.push_back(LabelPermutation::transposition(n_ + m_, n_ + t - 1, n_ + t));
        });
      }
      (*emit_)();
      return;
    }
    compile_frame(d - 1);
    place(d - 1, 0);
  }

  Mode mode_;
  SearchOptions options_;
  const LevelledLattice* lattice_ = nullptr;
  int n_ = 0, k_ = 0, m_ = 0;
  bool want_stabiliser_ = false;
  std::function<void()>* emit_ = nullptr;
  LabelSet interior_ = 0;

  std::array<LabelSet, kMaxSize> up_{};
  std::array<LabelSet, kMaxSize> zero_meet_{};
  std::array<std::array<LabelSet, kMaxSize>, kMaxSize> meet_bit_{};

  std::array<LabelSet, kMaxSize> upsets_{};
  std::array<LabelSet, kMaxSize> forced_{};
  std::array<std::array<LabelSet, kMaxSize + 1>, kMaxSize> part_{};  // part_[atom][level]
  std::array<LabelSet, kMaxSize + 1> tied_{};                        // atoms equal to their predecessor below level d
  std::array<Frame, kMaxSize + 1> frames_;                           // frames_[d] holds S_d
  OrbitWorkspace<std::uint64_t> narrow_ws_;
  OrbitWorkspace<PackedWord> wide_ws_;
  std::uint64_t orbit_scans_ = 0;
};

/// All canonical children of `node` with `atoms` new elements, in generation order.
inline std::vector<SearchNode> children(const SearchNode& node, int atoms, Mode mode = Mode::all,
                                        SearchOptions options = {}) {
  std::vector<SearchNode> out;
  ChildSearch search(mode, options);
  search.run(node, atoms, true, [&](std::span<const LabelSet> upsets, const std::vector<LabelPermutation>* stab) {
    out.push_back(ChildSearch::make_child(node.lattice, upsets, stab));
  });
  return out;
}

// ---------------------------------------------------------------------------

/// Exact counts per lattice size. counts[n] for 2 <= n <= max_n; size 1 is the
/// one-element lattice and reported as 1.
struct CountTable {
  Mode mode = Mode::all;
  int max_n = 2;
  std::vector<std::uint64_t> counts;

  std::uint64_t at(int n) const {
    if (n == 1) return 1;
    if (n < 2 || n > max_n) throw std::out_of_range("CountTable: size out of range");
    return counts[n];
  }

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (int n = 2; n <= max_n; ++n) sum += counts[n];
    return sum;
  }

  friend bool operator==(const CountTable&, const CountTable&) = default;
};

using LatticeSink = std::function<void(const LevelledLattice&)>;

struct EnumConfig {
  int max_n = 2;
  Mode mode = Mode::all;
  int threads = 1;
  int seed_size = 0;  // 0 selects min(max_n, 12)
  LatticeSink sink;   // called under a lock, in no particular order
  SearchOptions options;
};

struct EnumStats {
  double wall_seconds = 0;
  double cpu_seconds = 0;       // user + system time of the whole process
  std::uint64_t tsc_ticks = 0;  // time-stamp counter ticks over the run, 0 if unavailable
  std::uint64_t tasks = 0;
  std::uint64_t orbit_scans = 0;

  /// CPU cycles spent per lattice found, taking the time-stamp counter rate
  /// as the clock rate. Zero when no counter is available.
  double cycles_per_lattice(std::uint64_t lattices) const {
    if (tsc_ticks == 0 || wall_seconds <= 0 || lattices == 0) return 0;
    return cpu_seconds * (static_cast<double>(tsc_ticks) / wall_seconds) / static_cast<double>(lattices);
  }
};

namespace detail {

inline std::uint64_t read_tsc() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return __rdtsc();
#else
  return 0;
#endif
}

inline double process_cpu_seconds() noexcept {
  rusage u{};
  if (getrusage(RUSAGE_SELF, &u) != 0) return 0;
  const auto secs = [](const timeval& t) { return static_cast<double>(t.tv_sec) + 1e-6 * static_cast<double>(t.tv_usec); };
  return secs(u.ru_utime) + secs(u.ru_stime);
}

}  // namespace detail

namespace detail {

class Enumerator {
 public:
  explicit Enumerator(const EnumConfig& config) : config_(config) {}

  CountTable run(EnumStats* stats) {
    const auto start = std::chrono::steady_clock::now();
    const double cpu_start = process_cpu_seconds();
    const std::uint64_t tsc_start = read_tsc();
    const int seed = config_.seed_size > 0 ? std::min(config_.seed_size, config_.max_n)
                                           : std::min(config_.max_n, 12);
    CountTable table;
    table.mode = config_.mode;
    table.max_n = config_.max_n;
    table.counts.assign(config_.max_n + 1, 0);

    nodes_.push_back(SearchNode{});
    table.counts[2] = 1;
    emit(nodes_.front().lattice);

    // Serial phase: everything up to the seed size; larger levels become tasks.
    Worker serial(*this);
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
      const std::size_t id = stack.back();
      stack.pop_back();
      const int n = nodes_[id].lattice.size();
      for (int m = 1; n + m <= config_.max_n; ++m) {
        if (n + m > seed) {
          tasks_.push_back(Task{id, m});
          continue;
        }
        const bool leaf = n + m == config_.max_n;
        serial.search.run(nodes_[id], m, !leaf, [&](std::span<const LabelSet> upsets,
                                                    const std::vector<LabelPermutation>* stab) {
          ++serial.counts[n + m];
          if (leaf) {
            if (config_.sink) emit(ChildSearch::make_child(nodes_[id].lattice, upsets, nullptr).lattice);
            return;
          }
          nodes_.push_back(ChildSearch::make_child(nodes_[id].lattice, upsets, stab));
          emit(nodes_.back().lattice);
          stack.push_back(nodes_.size() - 1);
        });
      }
    }

    const int threads = std::max(1, config_.threads);
    std::vector<Worker> workers;
    workers.reserve(threads);
    for (int w = 0; w < threads; ++w) workers.emplace_back(*this);
    if (threads == 1) {
      work(workers[0]);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < threads; ++w) pool.emplace_back([this, &workers, w] { work(workers[w]); });
      for (auto& th : pool) th.join();
    }

    std::uint64_t scans = serial.search.orbit_scans();
    for (int n = 2; n <= config_.max_n; ++n) table.counts[n] += serial.counts[n];
    for (const Worker& w : workers) {
      for (int n = 2; n <= config_.max_n; ++n) table.counts[n] += w.counts[n];
      scans += w.search.orbit_scans();
    }
    if (stats != nullptr) {
      stats->wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      stats->cpu_seconds = process_cpu_seconds() - cpu_start;
      stats->tsc_ticks = read_tsc() - tsc_start;
      stats->tasks = tasks_.size();
      stats->orbit_scans = scans;
    }
    return table;
  }

 private:
  struct Task {
    std::size_t node;
    int atoms;
  };

  struct Worker {
    explicit Worker(const Enumerator& e)
        : search(e.config_.mode, e.config_.options), counts(e.config_.max_n + 1, 0) {}
    ChildSearch search;
    std::vector<std::uint64_t> counts;
  };

  void emit(const LevelledLattice& l) {
    if (!config_.sink) return;
    std::lock_guard lock(sink_mutex_);
    config_.sink(l);
  }

  void work(Worker& w) {
    while (true) {
      const std::size_t i = next_task_.fetch_add(1, std::memory_order_relaxed);
      if (i >= tasks_.size()) return;
      expand(w, nodes_[tasks_[i].node], tasks_[i].atoms);
    }
  }

  void expand(Worker& w, const SearchNode& node, int atoms) {
    const int size = node.lattice.size() + atoms;
    const bool leaf = size == config_.max_n;
    std::vector<SearchNode> inner;
    w.search.run(node, atoms, !leaf, [&](std::span<const LabelSet> upsets, const std::vector<LabelPermutation>* stab) {
      ++w.counts[size];
      if (leaf) {
        if (config_.sink) emit(ChildSearch::make_child(node.lattice, upsets, nullptr).lattice);
        return;
      }
      inner.push_back(ChildSearch::make_child(node.lattice, upsets, stab));
    });
    for (const SearchNode& child : inner) {
      emit(child.lattice);
      for (int m = 1; size + m <= config_.max_n; ++m) expand(w, child, m);
    }
  }

  const EnumConfig& config_;
  std::deque<SearchNode> nodes_;
  std::vector<Task> tasks_;
  std::atomic<std::size_t> next_task_{0};
  std::mutex sink_mutex_;
};

}  // namespace detail

/// Counts canonical lattices of every size up to config.max_n in the given mode.
inline CountTable enumerate(const EnumConfig& config, EnumStats* stats = nullptr) {
  if (config.max_n < 2 || config.max_n > kMaxSize) {
    throw std::out_of_range("enumerate: max_n must lie in 2.." + std::to_string(kMaxSize));
  }
  if (config.threads < 1) throw std::out_of_range("enumerate: at least one thread is required");
  detail::Enumerator e(config);
  return e.run(stats);
}

/// Counts of all lattices from counts of vertically indecomposable ones, by
/// unique decomposition into a vertical sum of indecomposable pieces glued at
/// shared elements: u_1 = i_1, u_n = i_n + sum_{m=2}^{n-1} i_m * u_{n-m+1}.
/// `indecomposable[j]` holds i_{j+1}. Throws std::overflow_error if a value
/// does not fit in 64 bits.
inline std::vector<std::uint64_t> compose_counts(std::span<const std::uint64_t> indecomposable) {
  const std::size_t len = indecomposable.size();
  std::vector<std::uint64_t> u(len, 0);
  if (len == 0) return u;
  if (indecomposable[0] != 1) throw std::invalid_argument("compose_counts: i_1 must be 1");
  u[0] = 1;
  for (std::size_t n = 2; n <= len; ++n) {
    std::uint64_t sum = indecomposable[n - 1];
    for (std::size_t m = 2; m <= n - 1; ++m) {
      std::uint64_t term = 0;
      if (__builtin_mul_overflow(indecomposable[m - 1], u[n - m], &term) || __builtin_add_overflow(sum, term, &sum)) {
        throw std::overflow_error("compose_counts: count exceeds 64 bits at n = " + std::to_string(n));
      }
    }
    u[n - 1] = sum;
  }
  return u;
}

}  // namespace lattenum
