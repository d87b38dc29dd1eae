#pragma once

#include <cstdint>
#include <vector>

#include "knnq/operators.hpp"

namespace knnq {

struct SelectJoinStats {
  std::int64_t outer_points = 0;
  std::int64_t threshold_scans = 0;   // Counting: one per outer point
  std::int64_t skipped_points = 0;    // Counting: pruned without a neighborhood
  std::int64_t scanned_blocks = 0;    // Block-Marking: blocks visited before the contour closed
  std::int64_t center_knn = 0;        // Block-Marking: center neighborhoods computed
  std::int64_t contributing_blocks = 0;
  std::int64_t non_contributing_blocks = 0;
};

// Per-block verdict of the Block-Marking preprocessing. Blocks never reached
// by the scan (outside the closed contour) stay Non-Contributing.
struct BlockMarks {
  std::vector<std::uint8_t> non_contributing;  // per block, 1 = pruned
  std::vector<int> contributing;               // scan order
};

// Counting algorithm: per outer point, count the inner points in blocks
// completely included within the point's search threshold; more than k_join
// such points proves the neighborhoods cannot intersect.
PairSet counting_select_join(const GridIndex& index, const SelectJoinQuery& q,
                             SelectJoinStats* stats = nullptr);

// Block-Marking preprocessing: scan the grid in MINDIST order from the focal
// point, marking a block Non-Contributing when
//   r + added_distance_factor * diagonal + f_farthest < f_center,
// and stop once an unbroken Non-Contributing contour closes. The factor is
// 1.0 (the full diagonal) in the algorithm proper; smaller values are unsound
// and exist for the tightness demonstration.
BlockMarks block_marking_preprocess(const GridIndex& index,
                                    const SelectJoinQuery& q,
                                    const Neighborhood& nbr_f,
                                    double added_distance_factor = 1.0,
                                    SelectJoinStats* stats = nullptr);

// Block-Marking algorithm: join only the points of Contributing blocks.
PairSet block_marking_select_join(const GridIndex& index,
                                  const SelectJoinQuery& q,
                                  SelectJoinStats* stats = nullptr,
                                  double added_distance_factor = 1.0);

// The valid plan for a select on the OUTER relation: restrict the outer
// iteration set to the focal neighborhood, join each against the full inner.
PairSet outer_pushdown_select_join(const GridIndex& index, int outer, int inner,
                                   int k_join, int k_select, double fx,
                                   double fy);

}  // namespace knnq
