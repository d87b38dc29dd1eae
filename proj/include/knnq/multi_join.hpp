#pragma once

#include <cstdint>
#include <vector>

#include "knnq/operators.hpp"

namespace knnq {

// Two joins sharing B as the inner relation: (A join B) and (C join B).
struct UnchainedQuery {
  int a = 0;
  int b = 0;
  int c = 0;
  int k_ab = 1;
  int k_cb = 1;
};

// Chain A -> B -> C: B is inner of the first join and outer of the second.
struct ChainedQuery {
  int a = 0;
  int b = 0;
  int c = 0;
  int k_ab = 1;
  int k_bc = 1;
};

enum class FirstJoin { AB, CB };

enum class JoinOrderAdvice { StartAB, StartCB, Baseline };

struct MultiJoinStats {
  std::int64_t candidate_blocks = 0;
  std::int64_t safe_blocks = 0;
  std::int64_t contributing_blocks = 0;
  std::int64_t non_contributing_blocks = 0;  // pruned second-outer blocks
  std::int64_t center_knn = 0;
  std::int64_t cache_computations = 0;       // neighborhoods computed toward C
  std::int64_t cache_hits = 0;
};

// Independent joins intersected on B; the correctness oracle.
TripletSet unchained_baseline(const GridIndex& index, const UnchainedQuery& q);

// Procedure: run the first join, mark B-occupancy blocks of its output
// Candidate, then prune second-outer blocks whose search disc touches only
// Safe blocks. Output equals the baseline for either evaluation order.
TripletSet unchained_block_marking(const GridIndex& index,
                                   const UnchainedQuery& q, FirstJoin first,
                                   MultiJoinStats* stats = nullptr,
                                   std::vector<std::uint8_t>*
                                       second_outer_non_contributing = nullptr);

// One join consuming the other's filtered B output. Intentionally wrong;
// negative control for the independence requirement.
TripletSet unchained_filtered(const GridIndex& index, const UnchainedQuery& q,
                              FirstJoin first);

// Start with the outer relation of strictly smaller block coverage; when the
// coverages are within `ratio` of each other, recommend the independent
// baseline plan.
JoinOrderAdvice advise_join_order(const GridIndex& index,
                                  const UnchainedQuery& q, double ratio = 1.1);

// QEP1: materialize (B join C) fully, then probe it per (a, b) pair.
TripletSet chained_right_deep(const GridIndex& index, const ChainedQuery& q);

// QEP2: both joins fully, matched on b (inner of the first, outer of the
// second).
TripletSet chained_join_intersection(const GridIndex& index,
                                     const ChainedQuery& q);

// QEP3: compute b's neighborhood toward C only when b surfaces as a neighbor
// of some a; optionally cache it per b. The cached run is single-threaded so
// each distinct b is computed at most once.
TripletSet chained_nested_join(const GridIndex& index, const ChainedQuery& q,
                               bool caching, MultiJoinStats* stats = nullptr);

}  // namespace knnq
