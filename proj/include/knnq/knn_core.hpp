#pragma once

#include <span>
#include <vector>

#include "knnq/grid_index.hpp"

namespace knnq {

struct Neighbor {
  Point point;
  double distance = 0.0;
};

// Neighbors are ordered by (distance, id), which makes ties deterministic.
inline bool neighbor_less(const Neighbor& a, const Neighbor& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.point.id < b.point.id;
}

// The k nearest points to a focal location, distance-sorted. Holds fewer than
// k members when the relation is smaller than k.
struct Neighborhood {
  double fx = 0.0;
  double fy = 0.0;
  int k = 0;
  std::vector<Neighbor> members;

  bool empty() const { return members.empty(); }
  double farthest_distance() const {
    return members.empty() ? 0.0 : members.back().distance;
  }
};

// A set of blocks guaranteed to contain the focal location's neighborhood.
// `watermark` is the MAXDIST recorded when the scan's accumulated count first
// reached k (infinity when the relation holds fewer than k points).
struct Locality {
  std::vector<int> blocks;  // non-empty blocks only
  double watermark = 0.0;
};

// MAXDIST-ordered scan until the accumulated count reaches k, then a
// MINDIST-ordered sweep of the remaining blocks up to the watermark.
Locality build_locality(const GridIndex& index, int rel, double fx, double fy,
                        int k);

// Best k points of `blocks`' buckets under (distance, id) order.
Neighborhood knn_from_blocks(const GridIndex& index, int rel, double fx,
                             double fy, int k, std::span<const int> blocks);

// Exact kNN via the locality scan; equals brute force on every instance.
Neighborhood get_knn(const GridIndex& index, int rel, double fx, double fy,
                     int k);

// Points (by id) present in both neighborhoods, sorted by id.
std::vector<Point> intersect(const Neighborhood& a, const Neighborhood& b);

}  // namespace knnq
