#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lattenum/label_set.hpp"

namespace lattenum {

/// A permutation of the labels 0..degree-1. Labels at or beyond the degree are
/// fixed, so permutations of different degrees compose as if padded.
class LabelPermutation {
 public:
  /// The identity.
  LabelPermutation() : LabelPermutation(0) {}

  explicit LabelPermutation(int degree) : degree_(static_cast<std::uint8_t>(degree)) {
    if (degree < 0 || degree > kMaxSize) throw std::out_of_range("permutation degree out of range");
    for (int x = 0; x < kMaxSize; ++x) image_[x] = static_cast<std::uint8_t>(x);
  }

  /// From an image list: x -> images[x]. Throws if the list is not a bijection.
  static LabelPermutation from_images(const std::vector<int>& images) {
    LabelPermutation p(static_cast<int>(images.size()));
    LabelSet seen = 0;
    for (std::size_t x = 0; x < images.size(); ++x) {
      const int y = images[x];
      if (y < 0 || y >= static_cast<int>(images.size()) || contains(seen, y)) {
        throw std::invalid_argument("image list is not a permutation");
      }
      seen |= bit(y);
      p.image_[x] = static_cast<std::uint8_t>(y);
    }
    return p;
  }

  /// Product of disjoint cycles, e.g. from_cycles(6, {{2, 3}, {4, 5}}).
  static LabelPermutation from_cycles(int degree, std::initializer_list<std::initializer_list<int>> cycles) {
    LabelPermutation p(degree);
    for (const auto& cycle : cycles) {
      for (int x : cycle) {
        if (x < 0 || x >= degree) throw std::out_of_range("cycle label outside the degree");
      }
      const int* first = cycle.begin();
      for (const int* it = cycle.begin(); it != cycle.end(); ++it) {
        const int next = (it + 1 == cycle.end()) ? *first : *(it + 1);
        p.image_[*it] = static_cast<std::uint8_t>(next);
      }
    }
    return p;
  }

  /// Permutation of the labels first..first+count-1 sending first+order[p] to
  /// first+p. `order` must list 0..count-1 in some order.
  static LabelPermutation arranging(int first, int count, std::span<const std::uint8_t> order) {
    LabelPermutation p(first + count);
    for (int q = 0; q < count; ++q) p.image_[first + order[q]] = static_cast<std::uint8_t>(first + q);
    return p;
  }

  static LabelPermutation transposition(int degree, Label a, Label b) {
    if (a < 0 || b < 0 || a >= degree || b >= degree) throw std::out_of_range("transposition label outside the degree");
    LabelPermutation p(degree);
    p.image_[a] = static_cast<std::uint8_t>(b);
    p.image_[b] = static_cast<std::uint8_t>(a);
    return p;
  }

  int degree() const noexcept { return degree_; }
  Label operator()(Label x) const noexcept { return image_[x]; }

  /// Image of a label set.
  LabelSet apply(LabelSet s) const noexcept {
    LabelSet out = 0;
    for_each_label(s, [&](Label x) { out |= bit(image_[x]); });
    return out;
  }

  /// Composition: (*this * rhs)(x) = (*this)(rhs(x)).
  LabelPermutation operator*(const LabelPermutation& rhs) const noexcept {
    LabelPermutation p;
    p.degree_ = degree_ > rhs.degree_ ? degree_ : rhs.degree_;
    for (int x = 0; x < p.degree_; ++x) p.image_[x] = image_[rhs.image_[x]];
    return p;
  }

  LabelPermutation inverse() const noexcept {
    LabelPermutation p;
    p.degree_ = degree_;
    for (int x = 0; x < degree_; ++x) p.image_[image_[x]] = static_cast<std::uint8_t>(x);
    return p;
  }

  bool is_identity() const noexcept {
    for (int x = 0; x < degree_; ++x) {
      if (image_[x] != x) return false;
    }
    return true;
  }

  LabelSet moved_points() const noexcept {
    LabelSet s = 0;
    for (int x = 0; x < degree_; ++x) {
      if (image_[x] != x) s |= bit(x);
    }
    return s;
  }

  /// Smallest moved label, or -1 for the identity.
  int min_moved_point() const noexcept {
    for (int x = 0; x < degree_; ++x) {
      if (image_[x] != x) return x;
    }
    return -1;
  }

  friend bool operator==(const LabelPermutation& a, const LabelPermutation& b) noexcept {
    return a.image_ == b.image_;
  }

  std::string to_string() const {
    std::string out;
    LabelSet done = 0;
    for (int x = 0; x < degree_; ++x) {
      if (contains(done, x) || image_[x] == x) continue;
      out += '(';
      for (int y = x; !contains(done, y); y = image_[y]) {
        if (y != x) out += ' ';
        out += std::to_string(y);
        done |= bit(y);
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

 private:
  std::array<std::uint8_t, kMaxSize> image_{};
  std::uint8_t degree_ = kMaxSize;
};

}  // namespace lattenum
