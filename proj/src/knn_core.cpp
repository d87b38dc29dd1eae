#include "knnq/knn_core.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace knnq {
namespace {

// Reusable per-thread visited-marking over block ids; epoch bump instead of a
// clear per call.
struct BlockStamps {
  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;

  void begin(int blocks) {
    if (static_cast<int>(stamp.size()) < blocks) stamp.assign(blocks, 0);
    ++epoch;
  }
  void mark(int b) { stamp[b] = epoch; }
  bool marked(int b) const { return stamp[b] == epoch; }
};

thread_local BlockStamps t_stamps;
thread_local std::vector<Neighbor> t_candidates;

}  // namespace

Locality build_locality(const GridIndex& index, int rel, double fx, double fy,
                        int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const GridGeometry& g = index.geometry();
  BlockStamps& stamps = t_stamps;
  stamps.begin(g.block_count());

  Locality loc;
  std::int64_t count = 0;
  bool reached = false;

  BlockStream max_order(g, fx, fy, BlockStream::Order::MaxDist);
  int block;
  double key;
  while (max_order.next(block, key)) {
    stamps.mark(block);
    count += index.count(block, rel);
    if (index.count(block, rel) > 0) loc.blocks.push_back(block);
    if (count >= k) {
      loc.watermark = key;
      reached = true;
      break;
    }
  }
  if (!reached) {
    // Fewer than k points in the relation: every non-empty block is in.
    loc.watermark = std::numeric_limits<double>::infinity();
    return loc;
  }

  BlockStream min_order(g, fx, fy, BlockStream::Order::MinDist);
  while (min_order.next(block, key)) {
    if (key > loc.watermark) break;
    if (stamps.marked(block)) continue;
    if (index.count(block, rel) > 0) loc.blocks.push_back(block);
  }
  return loc;
}

Neighborhood knn_from_blocks(const GridIndex& index, int rel, double fx,
                             double fy, int k, std::span<const int> blocks) {
  std::vector<Neighbor>& cand = t_candidates;
  cand.clear();
  for (int b : blocks) {
    for (const Point& p : index.bucket(b, rel)) {
      cand.push_back(Neighbor{p, std::sqrt(dist_sq(fx, fy, p.x, p.y))});
    }
  }
  Neighborhood nbr{fx, fy, k, {}};
  if (cand.size() > static_cast<std::size_t>(k)) {
    std::nth_element(cand.begin(), cand.begin() + k, cand.end(), neighbor_less);
    cand.resize(k);
  }
  std::sort(cand.begin(), cand.end(), neighbor_less);
  nbr.members.assign(cand.begin(), cand.end());
  return nbr;
}

Neighborhood get_knn(const GridIndex& index, int rel, double fx, double fy,
                     int k) {
  const Locality loc = build_locality(index, rel, fx, fy, k);
  return knn_from_blocks(index, rel, fx, fy, k, loc.blocks);
}

std::vector<Point> intersect(const Neighborhood& a, const Neighborhood& b) {
  std::vector<std::int64_t> ids;
  ids.reserve(a.members.size());
  for (const Neighbor& n : a.members) ids.push_back(n.point.id);
  std::sort(ids.begin(), ids.end());

  std::vector<Point> out;
  for (const Neighbor& n : b.members) {
    if (std::binary_search(ids.begin(), ids.end(), n.point.id))
      out.push_back(n.point);
  }
  std::sort(out.begin(), out.end(),
            [](const Point& p, const Point& q) { return p.id < q.id; });
  return out;
}

}  // namespace knnq
