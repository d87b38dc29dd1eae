#include "knnq/select_join.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace knnq {
namespace {

// True when more than k inner points lie in blocks completely included within
// radius theta of (x, y). Decision-equivalent to the MAXDIST-ordered prefix
// scan: in MAXDIST order the scan stops at the first block past theta, so the
// counted set is exactly the blocks with MAXDIST <= theta, visited here ring
// by ring with the same early exit on count.
bool over_count_within(const GridIndex& index, int rel, double x, double y,
                       double theta_sq, int k) {
  const GridGeometry& g = index.geometry();
  const int G = g.resolution;
  const double cell_min = std::min(g.cell_width(), g.cell_height());
  const int cr = g.row_of(std::clamp(y, g.extent.y_min, g.extent.y_max));
  const int cc = g.col_of(std::clamp(x, g.extent.x_min, g.extent.x_max));
  const int max_ring =
      std::max(std::max(cr, G - 1 - cr), std::max(cc, G - 1 - cc));

  std::int64_t count = 0;
  auto visit = [&](int row, int col) {
    const int b = g.block_at(row, col);
    if (maxdist_sq(x, y, g.block_rect(b)) <= theta_sq)
      count += index.count(b, rel);
  };
  for (int R = 0; R <= max_ring; ++R) {
    if (R >= 1) {
      const double lb = (R - 1) * cell_min;
      if (lb * lb > theta_sq) break;  // no farther block fits entirely
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
    if (count > k) return true;
  }
  return count > k;
}

void emit_intersection(const Point& e1, const Neighborhood& nbr_e1,
                       const std::vector<std::int64_t>& f_ids_sorted,
                       PairSet& out) {
  for (const Neighbor& m : nbr_e1.members) {
    if (std::binary_search(f_ids_sorted.begin(), f_ids_sorted.end(),
                           m.point.id))
      out.push_back(Pair{e1.id, m.point.id});
  }
}

std::vector<std::int64_t> sorted_ids(const Neighborhood& nbr) {
  std::vector<std::int64_t> ids;
  ids.reserve(nbr.members.size());
  for (const Neighbor& n : nbr.members) ids.push_back(n.point.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

PairSet counting_select_join(const GridIndex& index, const SelectJoinQuery& q,
                             SelectJoinStats* stats) {
  PairSet out;
  const Neighborhood nbr_f = get_knn(index, q.inner, q.fx, q.fy, q.k_select);
  if (nbr_f.empty()) return out;
  const std::vector<std::int64_t> f_ids = sorted_ids(nbr_f);

  const std::vector<Point>& outer = index.points(q.outer);
  const std::int64_t n = static_cast<std::int64_t>(outer.size());
  std::atomic<std::int64_t> skipped{0};

#pragma omp parallel
  {
    PairSet local;
    std::int64_t local_skipped = 0;
#pragma omp for schedule(dynamic, 256) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      const Point& e1 = outer[i];
      // Distance from e1 to the nearest point of f's neighborhood.
      double theta_sq = dist_sq(e1.x, e1.y, nbr_f.members.front().point.x,
                                nbr_f.members.front().point.y);
      for (std::size_t j = 1; j < nbr_f.members.size(); ++j) {
        const Point& m = nbr_f.members[j].point;
        theta_sq = std::min(theta_sq, dist_sq(e1.x, e1.y, m.x, m.y));
      }
      if (over_count_within(index, q.inner, e1.x, e1.y, theta_sq, q.k_join)) {
        ++local_skipped;
        continue;
      }
      const Neighborhood nbr_e1 = get_knn(index, q.inner, e1.x, e1.y, q.k_join);
      emit_intersection(e1, nbr_e1, f_ids, local);
    }
#pragma omp critical
    out.insert(out.end(), local.begin(), local.end());
    skipped += local_skipped;
  }

  if (stats) {
    stats->outer_points += n;
    stats->threshold_scans += n;
    stats->skipped_points += skipped.load();
  }
  sort_unique(out);
  return out;
}

BlockMarks block_marking_preprocess(const GridIndex& index,
                                    const SelectJoinQuery& q,
                                    const Neighborhood& nbr_f,
                                    double added_distance_factor,
                                    SelectJoinStats* stats) {
  const GridGeometry& g = index.geometry();
  BlockMarks marks;
  marks.non_contributing.assign(g.block_count(), 1);

  const double f_farthest = nbr_f.farthest_distance();
  const double added = added_distance_factor * g.block_rect(0).diagonal();

  // Contour scan: M is the MAXDIST of the first Non-Contributing block of the
  // current unbroken run; a block at MINDIST >= M closes the contour.
  double M = 0.0;
  BlockStream min_order(g, q.fx, q.fy, BlockStream::Order::MinDist);
  int block;
  double key;
  while (min_order.next(block, key)) {
    if (M > 0.0 && key >= M) break;  // all remaining blocks are Non-Contributing
    if (stats) ++stats->scanned_blocks;

    const auto [cx, cy] = g.block_center(block);
    const Neighborhood nbr = get_knn(index, q.inner, cx, cy, q.k_join);
    if (stats) ++stats->center_knn;
    const double r = nbr.farthest_distance();
    const double f_center = std::sqrt(dist_sq(q.fx, q.fy, cx, cy));

    if (r + added + f_farthest < f_center) {
      if (M == 0.0) M = std::sqrt(maxdist_sq(q.fx, q.fy, g.block_rect(block)));
    } else {
      marks.non_contributing[block] = 0;
      marks.contributing.push_back(block);
      M = 0.0;  // run broken, start another cycle
    }
  }

  if (stats) {
    stats->contributing_blocks += static_cast<std::int64_t>(marks.contributing.size());
    stats->non_contributing_blocks +=
        g.block_count() - static_cast<std::int64_t>(marks.contributing.size());
  }
  return marks;
}

PairSet block_marking_select_join(const GridIndex& index,
                                  const SelectJoinQuery& q,
                                  SelectJoinStats* stats,
                                  double added_distance_factor) {
  PairSet out;
  const Neighborhood nbr_f = get_knn(index, q.inner, q.fx, q.fy, q.k_select);
  if (nbr_f.empty()) return out;
  const std::vector<std::int64_t> f_ids = sorted_ids(nbr_f);

  const BlockMarks marks = block_marking_preprocess(
      index, q, nbr_f, added_distance_factor, stats);

  const std::int64_t nblocks =
      static_cast<std::int64_t>(marks.contributing.size());
#pragma omp parallel
  {
    PairSet local;
#pragma omp for schedule(dynamic, 8) nowait
    for (std::int64_t i = 0; i < nblocks; ++i) {
      for (const Point& e1 : index.bucket(marks.contributing[i], q.outer)) {
        const Neighborhood nbr_e1 =
            get_knn(index, q.inner, e1.x, e1.y, q.k_join);
        emit_intersection(e1, nbr_e1, f_ids, local);
      }
    }
#pragma omp critical
    out.insert(out.end(), local.begin(), local.end());
  }

  if (stats) stats->outer_points += index.cardinality(q.outer);
  sort_unique(out);
  return out;
}

PairSet outer_pushdown_select_join(const GridIndex& index, int outer, int inner,
                                   int k_join, int k_select, double fx,
                                   double fy) {
  const Neighborhood sel = get_knn(index, outer, fx, fy, k_select);
  std::vector<Point> restricted;
  restricted.reserve(sel.members.size());
  for (const Neighbor& n : sel.members) restricted.push_back(n.point);
  return knn_join_over(index, restricted, inner, k_join);
}

}  // namespace knnq
