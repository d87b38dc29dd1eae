#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <vector>

namespace knnq {

// Join outputs are keyed by point identifiers and compared as sorted,
// duplicate-free tuple lists.

struct Pair {
  std::int64_t outer = -1;
  std::int64_t inner = -1;
  auto operator<=>(const Pair&) const = default;
};

struct Triplet {
  std::int64_t a = -1;
  std::int64_t b = -1;
  std::int64_t c = -1;
  auto operator<=>(const Triplet&) const = default;
};

using PairSet = std::vector<Pair>;
using TripletSet = std::vector<Triplet>;

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace knnq
