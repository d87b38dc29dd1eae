#pragma once

#include <span>
#include <vector>

#include "knnq/geometry.hpp"
#include "knnq/knn_core.hpp"
#include "knnq/result_sets.hpp"

// Serial brute-force implementations of every query class. They are the
// correctness oracles for the grid-backed kernels and the baseline side of
// the kernel benchmark; keep them free of any index machinery.
namespace knnq::ref {

// Full-sort kNN under (distance, id) order.
std::vector<Neighbor> knn(std::span<const Point> pts, double fx, double fy,
                          int k);

// Nested-loop kNN-join: (o, i) for each i among o's k nearest inner points.
PairSet knn_join(std::span<const Point> outer, std::span<const Point> inner,
                 int k);

// Join filtered to pairs whose inner point is among f's k_select nearest.
PairSet select_join_inner(std::span<const Point> outer,
                          std::span<const Point> inner, int k_join,
                          int k_select, double fx, double fy);

// Independent joins (A join B) and (C join B), matched on the shared inner b.
TripletSet unchained(std::span<const Point> a, std::span<const Point> b,
                     std::span<const Point> c, int k_ab, int k_cb);

// Chain A -> B -> C: (a, b) from the first join, (b, c) from the second.
TripletSet chained(std::span<const Point> a, std::span<const Point> b,
                   std::span<const Point> c, int k_ab, int k_bc);

// Intersection of the two focal neighborhoods, sorted by id.
std::vector<Point> two_select(std::span<const Point> pts, double f1x,
                              double f1y, int k1, double f2x, double f2y,
                              int k2);

}  // namespace knnq::ref
