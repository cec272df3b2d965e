#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace etale {

/// Upper bound on the number of points of any space handled by the kernel.
inline constexpr std::size_t kMaxPoints = 256;

/// Fixed-capacity set of point indices.
///
/// Ordering compares the ascending element lists lexicographically, so a
/// sorted container of PointSets matches the canonical serialization order.
class PointSet {
 public:
  PointSet() = default;

  static PointSet singleton(std::size_t i) {
    PointSet s;
    s.insert(i);
    return s;
  }

  /// {0, ..., n-1}
  static PointSet prefix(std::size_t n) {
    PointSet s;
    for (std::size_t i = 0; i < n; ++i) s.insert(i);
    return s;
  }

  bool contains(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void insert(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void erase(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t size() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }

  bool subset_of(const PointSet& o) const {
    for (std::size_t k = 0; k < kWords; ++k)
      if (words_[k] & ~o.words_[k]) return false;
    return true;
  }
  bool intersects(const PointSet& o) const {
    for (std::size_t k = 0; k < kWords; ++k)
      if (words_[k] & o.words_[k]) return true;
    return false;
  }

  PointSet operator|(const PointSet& o) const {
    PointSet r;
    for (std::size_t k = 0; k < kWords; ++k) r.words_[k] = words_[k] | o.words_[k];
    return r;
  }
  PointSet operator&(const PointSet& o) const {
    PointSet r;
    for (std::size_t k = 0; k < kWords; ++k) r.words_[k] = words_[k] & o.words_[k];
    return r;
  }
  PointSet operator-(const PointSet& o) const {
    PointSet r;
    for (std::size_t k = 0; k < kWords; ++k) r.words_[k] = words_[k] & ~o.words_[k];
    return r;
  }
  PointSet& operator|=(const PointSet& o) { return *this = *this | o; }
  PointSet& operator&=(const PointSet& o) { return *this = *this & o; }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < kWords; ++k) {
      std::uint64_t w = words_[k];
      while (w != 0) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(w));
        f(k * 64 + bit);
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  /// Smallest element; undefined on the empty set.
  std::size_t front() const {
    for (std::size_t k = 0; k < kWords; ++k)
      if (words_[k] != 0) return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    return kMaxPoints;
  }

  friend bool operator==(const PointSet&, const PointSet&) = default;

  friend bool operator<(const PointSet& a, const PointSet& b) {
    const PointSet diff = (a - b) | (b - a);
    if (diff.empty()) return false;
    const std::size_t d = diff.front();
    const PointSet& without = a.contains(d) ? b : a;
    bool tail = false;
    for (std::size_t k = 0; k < kWords && !tail; ++k) {
      std::uint64_t w = without.words_[k];
      if (k * 64 + 63 <= d) continue;
      if (k == d / 64) w &= ~((std::uint64_t{2} << (d & 63)) - 1);
      tail = w != 0;
    }
    // The set holding d is smaller exactly when the other continues past d.
    return a.contains(d) ? tail : !tail;
  }

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto w : words_) {
      h ^= w;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }

 private:
  static constexpr std::size_t kWords = kMaxPoints / 64;
  std::array<std::uint64_t, kWords> words_{};
};

struct PointSetHash {
  std::size_t operator()(const PointSet& s) const { return s.hash(); }
};

/// Hash for index tuples used as keys of families and sections.
struct IndexVectorHash {
  template <class T>
  std::size_t operator()(const std::vector<T>& v) const {
    std::uint64_t h = 1469598103934665603ULL ^ v.size();
    for (auto x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace etale
