#pragma once

#include <cstdint>
#include <vector>

#include "knnq/knn_core.hpp"

namespace knnq {

// Two focal predicates over one relation, intersected.
struct TwoSelectQuery {
  int relation = 0;
  double f1x = 0.0;
  double f1y = 0.0;
  double f2x = 0.0;
  double f2y = 0.0;
  int k1 = 1;
  int k2 = 1;
};

struct TwoSelectStats {
  std::int64_t locality_blocks = 0;  // truncated locality of the second focal
  std::int64_t scanned_blocks = 0;
};

// Each predicate evaluated independently, results intersected; the oracle.
std::vector<Point> baseline_two_select(const GridIndex& index,
                                       const TwoSelectQuery& q);

// Threshold-truncated plan. Normalizes so k1 <= k2, evaluates the smaller
// predicate fully, then builds a locality for the second focal truncated at
//   searchThreshold = max over m in nbr1 of dist(f2, m).
// The truncated second neighborhood can differ from the true one, but its
// intersection with nbr1 is exact; the result equals the baseline.
std::vector<Point> two_knn_select(const GridIndex& index,
                                  const TwoSelectQuery& q,
                                  TwoSelectStats* stats = nullptr);

// Selects k1 near f1, then k2 near f2 from the reduced set (or the mirror
// order). Intentionally wrong; negative control.
std::vector<Point> sequential_two_select(const GridIndex& index,
                                         const TwoSelectQuery& q,
                                         bool first_predicate_first);

}  // namespace knnq
