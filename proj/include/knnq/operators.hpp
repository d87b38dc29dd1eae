#pragma once

#include <span>

#include "knnq/knn_core.hpp"
#include "knnq/result_sets.hpp"

namespace knnq {

// A kNN-select on the inner relation of a kNN-join: pairs (e1, e2) such that
// e2 is k_join-closest to e1 and k_select-closest to the focal point.
struct SelectJoinQuery {
  int outer = 0;  // E1
  int inner = 0;  // E2
  int k_join = 1;
  int k_select = 1;
  double fx = 0.0;
  double fy = 0.0;
};

Neighborhood knn_select(const GridIndex& index, int rel, double fx, double fy,
                        int k);

// (outer join inner): for every outer point, pairs with its k nearest inner
// points. Outer points are independent; evaluated in parallel.
PairSet knn_join(const GridIndex& index, int outer, int inner, int k);

// Same join restricted to an explicit outer iteration set. The inner side
// still sees the full index, which is what makes outer pushdown valid.
PairSet knn_join_over(const GridIndex& index, std::span<const Point> outer_pts,
                      int inner, int k);

// All (a, b, c) with (a, b) in ab and (c, b) in cb, matched on the shared
// inner relation.
TripletSet intersect_pairs_on_inner(const PairSet& ab, const PairSet& cb);

// Conceptually correct plan: full join, then filter on membership in the
// focal neighborhood. Correctness oracle for the optimized algorithms.
PairSet baseline_select_join_inner(const GridIndex& index,
                                   const SelectJoinQuery& q);

// The select pushed below the inner relation. Intentionally wrong; kept as a
// negative control.
PairSet invalid_inner_pushdown(const GridIndex& index, const SelectJoinQuery& q);

}  // namespace knnq
