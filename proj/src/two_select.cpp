#include "knnq/two_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace knnq {

std::vector<Point> baseline_two_select(const GridIndex& index,
                                       const TwoSelectQuery& q) {
  const Neighborhood n1 = get_knn(index, q.relation, q.f1x, q.f1y, q.k1);
  const Neighborhood n2 = get_knn(index, q.relation, q.f2x, q.f2y, q.k2);
  return intersect(n1, n2);
}

std::vector<Point> two_knn_select(const GridIndex& index,
                                  const TwoSelectQuery& q,
                                  TwoSelectStats* stats) {
  double f1x = q.f1x, f1y = q.f1y, f2x = q.f2x, f2y = q.f2y;
  int k1 = q.k1, k2 = q.k2;
  if (k1 > k2) {
    std::swap(f1x, f2x);
    std::swap(f1y, f2y);
    std::swap(k1, k2);
  }

  const Neighborhood nbr1 = get_knn(index, q.relation, f1x, f1y, k1);
  if (nbr1.empty()) return {};

  // Farthest-to-f2 member of nbr1, not the farthest from f1.
  double threshold = 0.0;
  for (const Neighbor& m : nbr1.members)
    threshold = std::max(threshold,
                         std::sqrt(dist_sq(f2x, f2y, m.point.x, m.point.y)));

  const GridGeometry& g = index.geometry();
  std::vector<std::uint8_t> in_locality(g.block_count(), 0);
  std::vector<int> locality;

  // Watermark: the MAXDIST value at which the running block counts first
  // reach k2. Found by a ring-wise count scan rather than an exact MAXDIST
  // ordering: rings are walked until the accumulated count reaches k2, then
  // until the ring lower bound passes the provisional maximum, which
  // guarantees every block at or below the watermark has been seen; the
  // exact value is the k2 prefix of the collected entries sorted by MAXDIST.
  std::int64_t count = 0;
  double max_dist_so_far = 0.0;
  {
    const int G = g.resolution;
    const double cell_min = std::min(g.cell_width(), g.cell_height());
    const int cr = g.row_of(std::clamp(f2y, g.extent.y_min, g.extent.y_max));
    const int cc = g.col_of(std::clamp(f2x, g.extent.x_min, g.extent.x_max));
    const int max_ring =
        std::max(std::max(cr, G - 1 - cr), std::max(cc, G - 1 - cc));
    std::vector<std::pair<double, int>> entries;  // (maxdist, block count)
    double provisional = 0.0;
    auto scan = [&](int row, int col) {
      const int block = g.block_at(row, col);
      if (stats) ++stats->scanned_blocks;
      const int n = index.count(block, q.relation);
      if (n == 0) return;
      const double d = std::sqrt(maxdist_sq(f2x, f2y, g.block_rect(block)));
      entries.emplace_back(d, n);
      // the provisional bound freezes once the count is satisfied; later
      // blocks can only lie above the final watermark
      if (count < k2) provisional = std::max(provisional, d);
      count += n;
    };
    for (int R = 0; R <= max_ring; ++R) {
      if (count >= k2 && (R - 1) * cell_min > provisional) break;
      if (R == 0) {
        scan(cr, cc);
        continue;
      }
      const int r0 = cr - R, r1 = cr + R, c0 = cc - R, c1 = cc + R;
      for (int c = std::max(c0, 0); c <= std::min(c1, G - 1); ++c) {
        if (r0 >= 0) scan(r0, c);
        if (r1 < G) scan(r1, c);
      }
      for (int r = std::max(r0 + 1, 0); r <= std::min(r1 - 1, G - 1); ++r) {
        if (c0 >= 0) scan(r, c0);
        if (c1 < G) scan(r, c1);
      }
    }
    if (count >= k2) {
      std::sort(entries.begin(), entries.end());
      std::int64_t running = 0;
      for (const auto& [d, n] : entries) {
        running += n;
        max_dist_so_far = d;
        if (running >= k2) break;
      }
    } else {
      // fewer than k2 points in the relation: the second predicate is
      // vacuous and only the threshold bounds the locality
      max_dist_so_far = std::numeric_limits<double>::infinity();
    }
  }

  // Both bounds are terminal in the MINDIST sweep.
  const double bound = std::min(max_dist_so_far, threshold);
  {
    BlockStream min_order(g, f2x, f2y, BlockStream::Order::MinDist);
    int block;
    double key;
    while (min_order.next(block, key)) {
      if (key > bound) break;
      if (stats) ++stats->scanned_blocks;
      if (!in_locality[block] && index.count(block, q.relation) > 0) {
        in_locality[block] = 1;
        locality.push_back(block);
      }
    }
  }
  if (stats) stats->locality_blocks += static_cast<std::int64_t>(locality.size());

  const Neighborhood nbr2 =
      knn_from_blocks(index, q.relation, f2x, f2y, k2, locality);
  return intersect(nbr1, nbr2);
}

std::vector<Point> sequential_two_select(const GridIndex& index,
                                         const TwoSelectQuery& q,
                                         bool first_predicate_first) {
  const double ax = first_predicate_first ? q.f1x : q.f2x;
  const double ay = first_predicate_first ? q.f1y : q.f2y;
  const int ak = first_predicate_first ? q.k1 : q.k2;
  const double bx = first_predicate_first ? q.f2x : q.f1x;
  const double by = first_predicate_first ? q.f2y : q.f1y;
  const int bk = first_predicate_first ? q.k2 : q.k1;

  const Neighborhood first = get_knn(index, q.relation, ax, ay, ak);
  std::vector<Neighbor> cand;
  cand.reserve(first.members.size());
  for (const Neighbor& m : first.members)
    cand.push_back(
        Neighbor{m.point, std::sqrt(dist_sq(bx, by, m.point.x, m.point.y))});
  std::sort(cand.begin(), cand.end(), neighbor_less);
  if (cand.size() > static_cast<std::size_t>(bk)) cand.resize(bk);

  std::vector<Point> out;
  out.reserve(cand.size());
  for (const Neighbor& n : cand) out.push_back(n.point);
  std::sort(out.begin(), out.end(),
            [](const Point& a, const Point& b) { return a.id < b.id; });
  return out;
}

}  // namespace knnq
