#include "knnq/operators.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace knnq {

Neighborhood knn_select(const GridIndex& index, int rel, double fx, double fy,
                        int k) {
  return get_knn(index, rel, fx, fy, k);
}

PairSet knn_join_over(const GridIndex& index, std::span<const Point> outer_pts,
                      int inner, int k) {
  PairSet out;
  const std::int64_t n = static_cast<std::int64_t>(outer_pts.size());
#pragma omp parallel
  {
    PairSet local;
#pragma omp for schedule(dynamic, 256) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      const Point& o = outer_pts[i];
      const Neighborhood nbr = get_knn(index, inner, o.x, o.y, k);
      for (const Neighbor& m : nbr.members)
        local.push_back(Pair{o.id, m.point.id});
    }
#pragma omp critical
    out.insert(out.end(), local.begin(), local.end());
  }
  sort_unique(out);
  return out;
}

PairSet knn_join(const GridIndex& index, int outer, int inner, int k) {
  return knn_join_over(index, index.points(outer), inner, k);
}

TripletSet intersect_pairs_on_inner(const PairSet& ab, const PairSet& cb) {
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> a_by_b;
  for (const Pair& p : ab) a_by_b[p.inner].push_back(p.outer);
  TripletSet out;
  for (const Pair& p : cb) {
    auto it = a_by_b.find(p.inner);
    if (it == a_by_b.end()) continue;
    for (std::int64_t aid : it->second)
      out.push_back(Triplet{aid, p.inner, p.outer});
  }
  sort_unique(out);
  return out;
}

PairSet baseline_select_join_inner(const GridIndex& index,
                                   const SelectJoinQuery& q) {
  const Neighborhood nbr_f = get_knn(index, q.inner, q.fx, q.fy, q.k_select);
  std::unordered_set<std::int64_t> selected;
  for (const Neighbor& n : nbr_f.members) selected.insert(n.point.id);

  PairSet out;
  for (const Pair& p : knn_join(index, q.outer, q.inner, q.k_join))
    if (selected.count(p.inner)) out.push_back(p);
  return out;
}

PairSet invalid_inner_pushdown(const GridIndex& index,
                               const SelectJoinQuery& q) {
  const Neighborhood nbr_f = get_knn(index, q.inner, q.fx, q.fy, q.k_select);
  std::vector<Point> reduced;
  reduced.reserve(nbr_f.members.size());
  for (const Neighbor& n : nbr_f.members) reduced.push_back(n.point);

  // Join against only the selected points; a brute-force pass is fine for a
  // negative control.
  PairSet out;
  for (const Point& o : index.points(q.outer)) {
    std::vector<Neighbor> cand;
    cand.reserve(reduced.size());
    for (const Point& p : reduced)
      cand.push_back(Neighbor{p, dist(o, p)});
    std::sort(cand.begin(), cand.end(), neighbor_less);
    if (cand.size() > static_cast<std::size_t>(q.k_join))
      cand.resize(q.k_join);
    for (const Neighbor& n : cand) out.push_back(Pair{o.id, n.point.id});
  }
  sort_unique(out);
  return out;
}

}  // namespace knnq
