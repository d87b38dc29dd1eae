#include "knnq/multi_join.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace knnq {
namespace {

// True when any Candidate block intersects the disc of radius `threshold`
// around (x, y); block-disc intersection is MINDIST <= radius.
bool candidate_within(const GridIndex& index,
                      const std::vector<std::uint8_t>& candidate, double x,
                      double y, double threshold) {
  const GridGeometry& g = index.geometry();
  const int G = g.resolution;
  const double cell_min = std::min(g.cell_width(), g.cell_height());
  const double thr_sq = threshold * threshold;
  const int cr = g.row_of(std::clamp(y, g.extent.y_min, g.extent.y_max));
  const int cc = g.col_of(std::clamp(x, g.extent.x_min, g.extent.x_max));
  const int max_ring =
      std::max(std::max(cr, G - 1 - cr), std::max(cc, G - 1 - cc));

  bool found = false;
  auto visit = [&](int row, int col) {
    const int b = g.block_at(row, col);
    if (candidate[b] && mindist_sq(x, y, g.block_rect(b)) <= thr_sq)
      found = true;
  };
  for (int R = 0; R <= max_ring && !found; ++R) {
    if (R >= 1) {
      const double lb = (R - 1) * cell_min;
      if (lb > threshold) break;
    }
    if (R == 0) {
      visit(cr, cc);
    } else {
      const int r0 = cr - R, r1 = cr + R, c0 = cc - R, c1 = cc + R;
      for (int c = std::max(c0, 0); c <= std::min(c1, G - 1); ++c) {
        if (r0 >= 0) visit(r0, c);
        if (r1 < G) visit(r1, c);
      }
      for (int r = std::max(r0 + 1, 0); r <= std::min(r1 - 1, G - 1); ++r) {
        if (c0 >= 0) visit(r, c0);
        if (c1 < G) visit(r, c1);
      }
    }
  }
  return found;
}

// For the chained plans: b is the OUTER of the (B join C) pairs.
std::unordered_map<std::int64_t, std::vector<std::int64_t>> group_by_outer(
    const PairSet& pairs) {
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> by_outer;
  for (const Pair& p : pairs) by_outer[p.outer].push_back(p.inner);
  return by_outer;
}

}  // namespace

TripletSet unchained_baseline(const GridIndex& index, const UnchainedQuery& q) {
  const PairSet ab = knn_join(index, q.a, q.b, q.k_ab);
  const PairSet cb = knn_join(index, q.c, q.b, q.k_cb);
  return intersect_pairs_on_inner(ab, cb);
}

TripletSet unchained_block_marking(
    const GridIndex& index, const UnchainedQuery& q, FirstJoin first,
    MultiJoinStats* stats,
    std::vector<std::uint8_t>* second_outer_non_contributing) {
  const int first_outer = first == FirstJoin::AB ? q.a : q.c;
  const int first_k = first == FirstJoin::AB ? q.k_ab : q.k_cb;
  const int second_outer = first == FirstJoin::AB ? q.c : q.a;
  const int second_k = first == FirstJoin::AB ? q.k_cb : q.k_ab;

  // Phase 1: the first join; its B output marks Candidate blocks.
  const PairSet first_pairs = knn_join(index, first_outer, q.b, first_k);
  const GridGeometry& g = index.geometry();
  std::vector<std::uint8_t> candidate(g.block_count(), 0);
  for (const Pair& p : first_pairs)
    candidate[index.block_of_id(q.b, p.inner)] = 1;

  if (stats) {
    for (std::uint8_t c : candidate)
      c ? ++stats->candidate_blocks : ++stats->safe_blocks;
  }

  // Phase 2: mark second-outer blocks. A Candidate block contributes without
  // a center computation; a Safe block contributes only when its search disc
  // touches a Candidate block.
  std::vector<std::uint8_t> non_contributing(g.block_count(), 1);
  std::vector<int> contributing;
  const double diagonal = g.block_rect(0).diagonal();
  for (int b = 0; b < g.block_count(); ++b) {
    if (index.count(b, second_outer) == 0) continue;
    bool keep;
    if (candidate[b]) {
      keep = true;
    } else {
      const auto [cx, cy] = g.block_center(b);
      const Neighborhood nbr = get_knn(index, q.b, cx, cy, second_k);
      if (stats) ++stats->center_knn;
      const double threshold = nbr.farthest_distance() + diagonal;
      keep = candidate_within(index, candidate, cx, cy, threshold);
    }
    if (keep) {
      non_contributing[b] = 0;
      contributing.push_back(b);
    } else if (stats) {
      ++stats->non_contributing_blocks;
    }
  }
  if (stats) stats->contributing_blocks += static_cast<std::int64_t>(contributing.size());
  if (second_outer_non_contributing)
    *second_outer_non_contributing = non_contributing;

  // Phase 3: join only the surviving second-outer points, intersect on B.
  std::vector<Point> survivors;
  for (int b : contributing) {
    const auto& bucket = index.bucket(b, second_outer);
    survivors.insert(survivors.end(), bucket.begin(), bucket.end());
  }
  const PairSet second_pairs = knn_join_over(index, survivors, q.b, second_k);

  const PairSet& ab = first == FirstJoin::AB ? first_pairs : second_pairs;
  const PairSet& cb = first == FirstJoin::AB ? second_pairs : first_pairs;
  return intersect_pairs_on_inner(ab, cb);
}

TripletSet unchained_filtered(const GridIndex& index, const UnchainedQuery& q,
                              FirstJoin first) {
  const int first_outer = first == FirstJoin::AB ? q.a : q.c;
  const int first_k = first == FirstJoin::AB ? q.k_ab : q.k_cb;
  const int second_outer = first == FirstJoin::AB ? q.c : q.a;
  const int second_k = first == FirstJoin::AB ? q.k_cb : q.k_ab;

  const PairSet first_pairs = knn_join(index, first_outer, q.b, first_k);
  std::unordered_set<std::int64_t> surviving_b;
  for (const Pair& p : first_pairs) surviving_b.insert(p.inner);
  std::vector<Point> reduced;
  for (const Point& p : index.points(q.b))
    if (surviving_b.count(p.id)) reduced.push_back(p);

  // Second join over the filtered B; this is precisely the invalid pushdown.
  PairSet second_pairs;
  for (const Point& o : index.points(second_outer)) {
    std::vector<Neighbor> cand;
    cand.reserve(reduced.size());
    for (const Point& p : reduced) cand.push_back(Neighbor{p, dist(o, p)});
    std::sort(cand.begin(), cand.end(), neighbor_less);
    if (cand.size() > static_cast<std::size_t>(second_k))
      cand.resize(second_k);
    for (const Neighbor& n : cand) second_pairs.push_back(Pair{o.id, n.point.id});
  }
  sort_unique(second_pairs);

  const PairSet& ab = first == FirstJoin::AB ? first_pairs : second_pairs;
  const PairSet& cb = first == FirstJoin::AB ? second_pairs : first_pairs;
  return intersect_pairs_on_inner(ab, cb);
}

JoinOrderAdvice advise_join_order(const GridIndex& index,
                                  const UnchainedQuery& q, double ratio) {
  const double cov_a = index.coverage(q.a);
  const double cov_c = index.coverage(q.c);
  if (cov_a <= cov_c * ratio && cov_c <= cov_a * ratio)
    return JoinOrderAdvice::Baseline;
  return cov_a < cov_c ? JoinOrderAdvice::StartAB : JoinOrderAdvice::StartCB;
}

TripletSet chained_right_deep(const GridIndex& index, const ChainedQuery& q) {
  const auto c_by_b = group_by_outer(knn_join(index, q.b, q.c, q.k_bc));

  TripletSet out;
  const std::vector<Point>& a_pts = index.points(q.a);
  const std::int64_t n = static_cast<std::int64_t>(a_pts.size());
#pragma omp parallel
  {
    TripletSet local;
#pragma omp for schedule(dynamic, 256) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      const Point& a = a_pts[i];
      const Neighborhood nbr = get_knn(index, q.b, a.x, a.y, q.k_ab);
      for (const Neighbor& bn : nbr.members) {
        auto it = c_by_b.find(bn.point.id);
        if (it == c_by_b.end()) continue;
        for (std::int64_t cid : it->second)
          local.push_back(Triplet{a.id, bn.point.id, cid});
      }
    }
#pragma omp critical
    out.insert(out.end(), local.begin(), local.end());
  }
  sort_unique(out);
  return out;
}

TripletSet chained_join_intersection(const GridIndex& index,
                                     const ChainedQuery& q) {
  const PairSet ab = knn_join(index, q.a, q.b, q.k_ab);
  const auto c_by_b = group_by_outer(knn_join(index, q.b, q.c, q.k_bc));

  // Match on b: inner key of the first join, outer key of the second.
  TripletSet out;
  for (const Pair& p : ab) {
    auto it = c_by_b.find(p.inner);
    if (it == c_by_b.end()) continue;
    for (std::int64_t cid : it->second)
      out.push_back(Triplet{p.outer, p.inner, cid});
  }
  sort_unique(out);
  return out;
}

TripletSet chained_nested_join(const GridIndex& index, const ChainedQuery& q,
                               bool caching, MultiJoinStats* stats) {
  TripletSet out;
  if (caching) {
    std::unordered_map<std::int64_t, std::vector<std::int64_t>> cache;
    for (const Point& a : index.points(q.a)) {
      const Neighborhood nbr = get_knn(index, q.b, a.x, a.y, q.k_ab);
      for (const Neighbor& bn : nbr.members) {
        auto it = cache.find(bn.point.id);
        if (it == cache.end()) {
          const Neighborhood nbr_c =
              get_knn(index, q.c, bn.point.x, bn.point.y, q.k_bc);
          if (stats) ++stats->cache_computations;
          std::vector<std::int64_t> cids;
          cids.reserve(nbr_c.members.size());
          for (const Neighbor& cn : nbr_c.members) cids.push_back(cn.point.id);
          it = cache.emplace(bn.point.id, std::move(cids)).first;
        } else if (stats) {
          ++stats->cache_hits;
        }
        for (std::int64_t cid : it->second)
          out.push_back(Triplet{a.id, bn.point.id, cid});
      }
    }
  } else {
    const std::vector<Point>& a_pts = index.points(q.a);
    const std::int64_t n = static_cast<std::int64_t>(a_pts.size());
    std::int64_t computations = 0;
#pragma omp parallel reduction(+ : computations)
    {
      TripletSet local;
#pragma omp for schedule(dynamic, 256) nowait
      for (std::int64_t i = 0; i < n; ++i) {
        const Point& a = a_pts[i];
        const Neighborhood nbr = get_knn(index, q.b, a.x, a.y, q.k_ab);
        for (const Neighbor& bn : nbr.members) {
          const Neighborhood nbr_c =
              get_knn(index, q.c, bn.point.x, bn.point.y, q.k_bc);
          ++computations;
          for (const Neighbor& cn : nbr_c.members)
            local.push_back(Triplet{a.id, bn.point.id, cn.point.id});
        }
      }
#pragma omp critical
      out.insert(out.end(), local.begin(), local.end());
    }
    if (stats) stats->cache_computations += computations;
  }
  sort_unique(out);
  return out;
}

}  // namespace knnq
