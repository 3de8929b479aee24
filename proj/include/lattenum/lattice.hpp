#pragma once

// Levellised n-lattices: labels 0..n-1 with 0 the bottom and 1 the top, the
// remaining labels grouped into consecutive levels by depth below the top.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lattenum/label_set.hpp"

namespace lattenum {

enum class ViolationKind {
  malformed,           // sizes, ranges or record syntax
  level_inconsistency, // covers disagree with the level structure
  not_a_lattice,       // some pair lacks a unique meet or join
  shade_mismatch,      // stored shade differs from the closure of the covers
  meet_mismatch,       // stored meet differs from the greatest lower bound
};

inline const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::malformed: return "malformed";
    case ViolationKind::level_inconsistency: return "level-inconsistency";
    case ViolationKind::not_a_lattice: return "not-a-lattice";
    case ViolationKind::shade_mismatch: return "shade-mismatch";
    case ViolationKind::meet_mismatch: return "meet-table-mismatch";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::string detail;

  std::string message() const { return std::string(to_string(kind)) + ": " + detail; }
};

class LatticeError : public std::runtime_error {
 public:
  explicit LatticeError(Violation v) : std::runtime_error(v.message()), violation_(std::move(v)) {}
  const Violation& violation() const noexcept { return violation_; }

 private:
  Violation violation_;
};

class LevelledLattice;
std::optional<Violation> validate(const LevelledLattice& lattice);

/// An n-lattice whose interior labels are arranged by level, level 1 directly
/// below the top. Interior level d occupies labels [level_begin(d), level_end(d)).
/// Covers of and by the bottom are implicit: an interior element with an empty
/// strict down-set is an atom. Values are immutable once built.
class LevelledLattice {
 public:
  using MeetTable = std::array<std::array<std::uint8_t, kMaxSize>, kMaxSize>;

  /// The two-element lattice.
  LevelledLattice() {
    n_ = 2;
    depth_ = 0;
    starts_[1] = 2;
    level_of_[0] = 1;
    level_of_[1] = 0;
    meet_[1][1] = 1;
  }

  /// Builds a lattice from level widths and covering sets. `covers[i - 2]` is
  /// cov(i) and may contain label 1. Throws LatticeError if the data does not
  /// describe a levellised lattice.
  static LevelledLattice from_covers(int n, std::span<const int> level_widths,
                                     std::span<const LabelSet> covers) {
    if (n < 2 || n > kMaxSize) {
      throw LatticeError({ViolationKind::malformed, "size " + std::to_string(n) + " out of range"});
    }
    if (covers.size() != static_cast<std::size_t>(n - 2)) {
      throw LatticeError({ViolationKind::malformed, "expected " + std::to_string(n - 2) + " covering sets"});
    }
    int total = 0;
    for (int w : level_widths) {
      if (w <= 0) throw LatticeError({ViolationKind::malformed, "empty level"});
      total += w;
    }
    if (total != n - 2) {
      throw LatticeError({ViolationKind::malformed, "level widths do not sum to n-2"});
    }
    LevelledLattice l;
    l.n_ = static_cast<std::uint8_t>(n);
    l.depth_ = static_cast<std::uint8_t>(level_widths.size());
    int s = 2;
    for (int d = 1; d <= l.depth_; ++d) {
      l.starts_[d] = static_cast<std::uint8_t>(s);
      for (int i = s; i < s + level_widths[d - 1]; ++i) l.level_of_[i] = static_cast<std::uint8_t>(d);
      s += level_widths[d - 1];
    }
    l.starts_[l.depth_ + 1] = static_cast<std::uint8_t>(n);
    l.level_of_[0] = static_cast<std::uint8_t>(l.depth_ + 1);
    l.level_of_[1] = 0;
    const LabelSet allowed = bit(1) | label_range(2, n);
    for (int i = 2; i < n; ++i) {
      const LabelSet c = covers[i - 2];
      if (c == 0 || (c & ~allowed) != 0 || contains(c, i)) {
        throw LatticeError({ViolationKind::malformed, "bad covering set for label " + std::to_string(i)});
      }
      l.cov_[i] = c;
    }
    if (auto v = l.check_levels()) throw LatticeError(*v);
    l.compute_shades();
    if (auto v = l.compute_meets()) throw LatticeError(*v);
    if (auto v = validate(l)) throw LatticeError(*v);
    return l;
  }

  int size() const noexcept { return n_; }
  /// Number of interior levels k (0 for the two-element lattice).
  int depth() const noexcept { return depth_; }
  int level_begin(int d) const noexcept { return starts_[d]; }
  int level_end(int d) const noexcept { return starts_[d + 1]; }
  int level_width(int d) const noexcept { return starts_[d + 1] - starts_[d]; }
  LabelSet level_mask(int d) const noexcept { return label_range(starts_[d], starts_[d + 1]); }
  /// Level index of a label: 0 for the top, depth()+1 for the bottom.
  int level_of(Label x) const noexcept { return level_of_[x]; }
  LabelSet interior() const noexcept { return label_range(2, n_); }

  std::vector<int> level_widths() const {
    std::vector<int> w;
    for (int d = 1; d <= depth_; ++d) w.push_back(level_width(d));
    return w;
  }

  /// cov(i) for an interior label; contains bit 1 when i is covered by the top.
  LabelSet covers(Label i) const noexcept { return cov_[i]; }
  /// Interior labels strictly above i (the top is implied).
  LabelSet shade(Label i) const noexcept { return up_[i]; }
  /// Interior labels strictly below i.
  LabelSet shadow(Label i) const noexcept {
    LabelSet s = 0;
    for (int y = 2; y < n_; ++y) {
      if (contains(up_[y], i)) s |= bit(y);
    }
    return s;
  }

  Label meet(Label a, Label b) const {
    if (a < 0 || b < 0 || a >= n_ || b >= n_) throw std::out_of_range("meet: label out of range");
    return meet_[a][b];
  }
  Label meet_unchecked(Label a, Label b) const noexcept { return meet_[a][b]; }

  /// Copy with one meet entry (and its mirror) overwritten. Only useful for
  /// feeding deliberately broken tables to validate().
  LevelledLattice with_meet_entry(Label a, Label b, Label value) const {
    LevelledLattice l = *this;
    l.meet_[a][b] = static_cast<std::uint8_t>(value);
    l.meet_[b][a] = static_cast<std::uint8_t>(value);
    return l;
  }

  friend bool operator==(const LevelledLattice& x, const LevelledLattice& y) {
    if (x.n_ != y.n_ || x.depth_ != y.depth_) return false;
    for (int d = 1; d <= x.depth_ + 1; ++d) {
      if (x.starts_[d] != y.starts_[d]) return false;
    }
    for (int i = 2; i < x.n_; ++i) {
      if (x.cov_[i] != y.cov_[i]) return false;
    }
    return true;
  }

 private:
  friend std::optional<Violation> validate(const LevelledLattice& lattice);
  friend LevelledLattice parent(const LevelledLattice& lattice);
  friend class LatticeAssembler;

  std::optional<Violation> check_levels() const {
    for (int i = 2; i < n_; ++i) {
      const int d = level_of_[i];
      bool has_parent_level = false;
      std::optional<Violation> bad;
      for_each_label(cov_[i], [&](Label j) {
        const int dj = level_of_[j];
        if (dj >= d) {
          bad = Violation{ViolationKind::level_inconsistency,
                          "label " + std::to_string(i) + " covered by " + std::to_string(j) + " at a level not above it"};
        }
        if (dj == d - 1) has_parent_level = true;
      });
      if (bad) return bad;
      if (!has_parent_level) {
        return Violation{ViolationKind::level_inconsistency,
                         "label " + std::to_string(i) + " has no cover one level up"};
      }
      if (d >= 2 && contains(cov_[i], 1)) {
        return Violation{ViolationKind::level_inconsistency,
                         "label " + std::to_string(i) + " is below another element but claims to be covered by the top"};
      }
    }
    return std::nullopt;
  }

  void compute_shades() {
    // Covers point to strictly smaller labels once check_levels() passed.
    for (int i = 2; i < n_; ++i) {
      LabelSet u = 0;
      for_each_label(cov_[i] & ~bit(1), [&](Label j) { u |= bit(j) | up_[j]; });
      up_[i] = u;
    }
  }

  std::optional<Violation> compute_meets() {
    std::array<LabelSet, kMaxSize> down_incl{};
    for (int i = 2; i < n_; ++i) {
      down_incl[i] |= bit(i);
      for_each_label(up_[i], [&](Label j) { down_incl[j] |= bit(i); });
    }
    for (int x = 0; x < n_; ++x) {
      meet_[0][x] = meet_[x][0] = 0;
      meet_[1][x] = meet_[x][1] = static_cast<std::uint8_t>(x);
    }
    for (int a = 2; a < n_; ++a) {
      for (int b = a; b < n_; ++b) {
        const LabelSet lower = down_incl[a] & down_incl[b];
        int glb = 0;
        if (lower != 0) {
          glb = -1;
          for_each_label(lower, [&](Label z) {
            if ((lower & ~down_incl[z]) == 0) glb = z;
          });
          if (glb < 0) {
            return Violation{ViolationKind::not_a_lattice,
                             "labels " + std::to_string(a) + " and " + std::to_string(b) + " have no unique meet"};
          }
        }
        meet_[a][b] = meet_[b][a] = static_cast<std::uint8_t>(glb);
      }
    }
    return std::nullopt;
  }

  std::uint8_t n_ = 2;
  std::uint8_t depth_ = 0;
  std::array<std::uint8_t, kMaxSize + 2> starts_{};
  std::array<std::uint8_t, kMaxSize> level_of_{};
  std::array<LabelSet, kMaxSize> cov_{};
  std::array<LabelSet, kMaxSize> up_{};
  MeetTable meet_{};
};

/// Internal builder used by extension and parent extraction; assembles a lattice
/// from already-consistent parts without re-validating.
class LatticeAssembler {
 public:
  static LevelledLattice add_level(const LevelledLattice& base, int m, std::span<const LabelSet> covers,
                                   std::span<const LabelSet> upsets) {
    LevelledLattice l = base;
    const int n = base.n_;
    const int k = base.depth_;
    if (m < 1 || n + m > kMaxSize || k + 2 >= static_cast<int>(l.starts_.size())) {
      throw std::length_error("add_level: lattice too large");
    }
    l.n_ = static_cast<std::uint8_t>(n + m);
    l.depth_ = static_cast<std::uint8_t>(k + 1);
    l.starts_[k + 1] = static_cast<std::uint8_t>(n);
    l.starts_[k + 2] = static_cast<std::uint8_t>(n + m);
    l.level_of_[0] = static_cast<std::uint8_t>(k + 2);
    for (int t = 0; t < m; ++t) {
      const int i = n + t;
      l.level_of_[i] = static_cast<std::uint8_t>(k + 1);
      l.cov_[i] = covers[t];
      l.up_[i] = upsets[t];
    }
    const int nn = n + m;
    for (int x = 0; x < nn; ++x) {
      l.meet_[0][x] = l.meet_[x][0] = 0;
      l.meet_[1][x] = l.meet_[x][1] = static_cast<std::uint8_t>(x);
    }
    for (int t = 0; t < m; ++t) {
      const int i = n + t;
      const LabelSet above = upsets[t];
      for (int x = 2; x < nn; ++x) {
        const std::uint8_t v = (x == i || contains(above, x)) ? static_cast<std::uint8_t>(i) : 0;
        l.meet_[i][x] = l.meet_[x][i] = v;
      }
      // Old pairs whose meet was the bottom and which now share the new atom.
      for_each_label(above, [&](Label a) {
        for_each_label(above & ~label_range(0, a + 1), [&](Label b) {
          if (l.meet_[a][b] == 0) {
            l.meet_[a][b] = l.meet_[b][a] = static_cast<std::uint8_t>(i);
          }
        });
      });
    }
    return l;
  }
};

/// Lattice induced by all but the deepest interior level.
inline LevelledLattice parent(const LevelledLattice& lattice) {
  if (lattice.n_ <= 2) throw std::invalid_argument("parent: the two-element lattice has no parent");
  LevelledLattice l = lattice;
  const int k = lattice.depth_;
  const int np = lattice.starts_[k];
  l.n_ = static_cast<std::uint8_t>(np);
  l.depth_ = static_cast<std::uint8_t>(k - 1);
  l.starts_[k + 1] = 0;
  l.level_of_[0] = static_cast<std::uint8_t>(k);
  for (int i = np; i < lattice.n_; ++i) {
    l.cov_[i] = 0;
    l.up_[i] = 0;
    l.level_of_[i] = 0;
  }
  for (int a = 0; a < kMaxSize; ++a) {
    for (int b = 0; b < kMaxSize; ++b) {
      if (a >= np || b >= np) {
        l.meet_[a][b] = 0;
      } else if (l.meet_[a][b] >= np) {
        l.meet_[a][b] = 0;
      }
    }
  }
  return l;
}

/// S together with everything above it, restricted to interior labels.
inline LabelSet shade_closure(const LevelledLattice& lattice, LabelSet s) {
  LabelSet out = s;
  for_each_label(s, [&](Label x) { out |= lattice.shade(x); });
  return out;
}

/// The antichain of minimal elements of an up-closed interior set.
inline LabelSet minimal_elements(const LevelledLattice& lattice, LabelSet upset) {
  LabelSet covered = 0;
  for_each_label(upset, [&](Label x) { covered |= lattice.shade(x); });
  return upset & ~covered;
}

/// Full consistency check, recomputing depths, shades, meets and joins from the
/// covering sets. Returns the first violated invariant.
inline std::optional<Violation> validate(const LevelledLattice& l) {
  const int n = l.n_;
  const int k = l.depth_;
  if (n < 2 || n > kMaxSize) return Violation{ViolationKind::malformed, "size out of range"};
  if (k == 0 ? n != 2 : (l.starts_[1] != 2 || l.starts_[k + 1] != n)) {
    return Violation{ViolationKind::malformed, "level boundaries do not span 2..n-1"};
  }
  for (int d = 1; d <= k; ++d) {
    if (l.starts_[d + 1] <= l.starts_[d]) return Violation{ViolationKind::malformed, "empty or descending level"};
    for (int i = l.starts_[d]; i < l.starts_[d + 1]; ++i) {
      if (l.level_of_[i] != d) return Violation{ViolationKind::level_inconsistency, "level index table out of sync"};
    }
  }
  const LabelSet allowed = bit(1) | label_range(2, n);
  for (int i = 2; i < n; ++i) {
    if (l.cov_[i] == 0 || (l.cov_[i] & ~allowed) != 0) {
      return Violation{ViolationKind::malformed, "bad covering set for label " + std::to_string(i)};
    }
  }

  // Shades: fixpoint closure of the cover relation, independent of label order.
  std::array<LabelSet, kMaxSize> up{};
  for (int i = 2; i < n; ++i) up[i] = l.cov_[i] & ~bit(1);
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 2; i < n; ++i) {
      LabelSet u = up[i];
      for_each_label(up[i], [&](Label j) { u |= up[j]; });
      if (u != up[i]) {
        up[i] = u;
        changed = true;
      }
    }
  }
  for (int i = 2; i < n; ++i) {
    if (contains(up[i], i)) return Violation{ViolationKind::level_inconsistency, "cover relation has a cycle"};
  }
  // Covering sets must be the Hasse relation: pairwise incomparable.
  for (int i = 2; i < n; ++i) {
    const LabelSet c = l.cov_[i] & ~bit(1);
    if (contains(l.cov_[i], 1) && c != 0) {
      return Violation{ViolationKind::level_inconsistency, "label " + std::to_string(i) + " covered by top and by an interior element"};
    }
    LabelSet implied = 0;
    for_each_label(c, [&](Label j) { implied |= up[j]; });
    if ((implied & c) != 0) {
      return Violation{ViolationKind::level_inconsistency, "covering set of " + std::to_string(i) + " is not an antichain"};
    }
  }
  // Depth = longest chain to the top, must match the level index.
  std::array<int, kMaxSize> dep{};
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 2; i < n; ++i) {
      int d = contains(l.cov_[i], 1) ? 1 : 0;
      for_each_label(l.cov_[i] & ~bit(1), [&](Label j) { d = std::max(d, dep[j] + 1); });
      if (d != dep[i]) {
        dep[i] = d;
        changed = true;
      }
    }
  }
  for (int i = 2; i < n; ++i) {
    if (dep[i] != l.level_of_[i]) {
      return Violation{ViolationKind::level_inconsistency,
                       "label " + std::to_string(i) + " has depth " + std::to_string(dep[i]) + " but sits on level " +
                           std::to_string(l.level_of_[i])};
    }
  }
  for (int i = 2; i < n; ++i) {
    if (up[i] != l.up_[i]) return Violation{ViolationKind::shade_mismatch, "label " + std::to_string(i)};
  }

  std::array<LabelSet, kMaxSize> down_incl{};
  std::array<LabelSet, kMaxSize> up_incl{};
  for (int i = 2; i < n; ++i) {
    up_incl[i] = up[i] | bit(i);
    down_incl[i] |= bit(i);
    for_each_label(up[i], [&](Label j) { down_incl[j] |= bit(i); });
  }
  for (int a = 2; a < n; ++a) {
    for (int b = 2; b < n; ++b) {
      const LabelSet lower = down_incl[a] & down_incl[b];
      int glb = lower == 0 ? 0 : -1;
      for_each_label(lower, [&](Label z) {
        if ((lower & ~down_incl[z]) == 0) glb = z;
      });
      const LabelSet upper = up_incl[a] & up_incl[b];
      int lub = upper == 0 ? 1 : -1;
      for_each_label(upper, [&](Label z) {
        if ((upper & ~up_incl[z]) == 0) lub = z;
      });
      if (glb < 0 || lub < 0) {
        return Violation{ViolationKind::not_a_lattice,
                         "pair (" + std::to_string(a) + "," + std::to_string(b) + ") lacks a unique " +
                             (glb < 0 ? "meet" : "join")};
      }
      if (l.meet_[a][b] != glb) {
        return Violation{ViolationKind::meet_mismatch, "meet(" + std::to_string(a) + "," + std::to_string(b) +
                                                           ") stored as " + std::to_string(l.meet_[a][b]) +
                                                           ", expected " + std::to_string(glb)};
      }
    }
  }
  for (int x = 0; x < n; ++x) {
    if (l.meet_[0][x] != 0 || l.meet_[x][0] != 0 || l.meet_[1][x] != x || l.meet_[x][1] != x) {
      return Violation{ViolationKind::meet_mismatch, "meet with a bound of the lattice"};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Text records: `N|w_1,...,w_k|c_2:c_3:...:c_{N-1}`

inline std::string serialize(const LevelledLattice& l) {
  std::string out = std::to_string(l.size());
  out += '|';
  for (int d = 1; d <= l.depth(); ++d) {
    if (d > 1) out += ',';
    out += std::to_string(l.level_width(d));
  }
  out += '|';
  for (int i = 2; i < l.size(); ++i) {
    if (i > 2) out += ':';
    bool first = true;
    for_each_label(l.covers(i), [&](Label j) {
      if (!first) out += ',';
      out += std::to_string(j);
      first = false;
    });
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    parts.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

inline int parse_int(std::string_view s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw LatticeError({ViolationKind::malformed, "not an integer: '" + std::string(s) + "'"});
  }
  return value;
}

}  // namespace detail

inline LevelledLattice deserialize(std::string_view record) {
  if (!record.empty() && record.back() == '\n') record.remove_suffix(1);
  const auto fields = detail::split(record, '|');
  if (fields.size() != 3) throw LatticeError({ViolationKind::malformed, "expected three '|'-separated fields"});
  const int n = detail::parse_int(fields[0]);
  if (n < 2 || n > kMaxSize) throw LatticeError({ViolationKind::malformed, "size out of range"});
  std::vector<int> widths;
  if (!fields[1].empty()) {
    for (auto w : detail::split(fields[1], ',')) widths.push_back(detail::parse_int(w));
  }
  std::vector<LabelSet> covers;
  if (!fields[2].empty()) {
    for (auto c : detail::split(fields[2], ':')) {
      LabelSet set = 0;
      int last = -1;
      for (auto tok : detail::split(c, ',')) {
        const int j = detail::parse_int(tok);
        if (j <= last || j < 1 || j >= n) {
          throw LatticeError({ViolationKind::malformed, "cover labels must be ascending and within 1..n-1"});
        }
        last = j;
        set |= bit(j);
      }
      covers.push_back(set);
    }
  }
  return LevelledLattice::from_covers(n, widths, covers);
}

}  // namespace lattenum
