#include "knnq/reference.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace knnq::ref {

std::vector<Neighbor> knn(std::span<const Point> pts, double fx, double fy,
                          int k) {
  std::vector<Neighbor> all;
  all.reserve(pts.size());
  for (const Point& p : pts)
    all.push_back(Neighbor{p, std::sqrt(dist_sq(fx, fy, p.x, p.y))});
  std::sort(all.begin(), all.end(), neighbor_less);
  if (all.size() > static_cast<std::size_t>(k)) all.resize(k);
  return all;
}

PairSet knn_join(std::span<const Point> outer, std::span<const Point> inner,
                 int k) {
  PairSet out;
  for (const Point& o : outer) {
    for (const Neighbor& n : knn(inner, o.x, o.y, k))
      out.push_back(Pair{o.id, n.point.id});
  }
  sort_unique(out);
  return out;
}

PairSet select_join_inner(std::span<const Point> outer,
                          std::span<const Point> inner, int k_join,
                          int k_select, double fx, double fy) {
  std::unordered_set<std::int64_t> selected;
  for (const Neighbor& n : knn(inner, fx, fy, k_select))
    selected.insert(n.point.id);
  PairSet out;
  for (const Pair& p : knn_join(outer, inner, k_join))
    if (selected.count(p.inner)) out.push_back(p);
  return out;
}

TripletSet unchained(std::span<const Point> a, std::span<const Point> b,
                     std::span<const Point> c, int k_ab, int k_cb) {
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> a_by_b;
  for (const Pair& p : knn_join(a, b, k_ab)) a_by_b[p.inner].push_back(p.outer);
  TripletSet out;
  for (const Pair& p : knn_join(c, b, k_cb)) {
    auto it = a_by_b.find(p.inner);
    if (it == a_by_b.end()) continue;
    for (std::int64_t aid : it->second)
      out.push_back(Triplet{aid, p.inner, p.outer});
  }
  sort_unique(out);
  return out;
}

TripletSet chained(std::span<const Point> a, std::span<const Point> b,
                   std::span<const Point> c, int k_ab, int k_bc) {
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> c_by_b;
  for (const Pair& p : knn_join(b, c, k_bc)) c_by_b[p.outer].push_back(p.inner);
  TripletSet out;
  for (const Pair& p : knn_join(a, b, k_ab)) {
    auto it = c_by_b.find(p.inner);
    if (it == c_by_b.end()) continue;
    for (std::int64_t cid : it->second)
      out.push_back(Triplet{p.outer, p.inner, cid});
  }
  sort_unique(out);
  return out;
}

std::vector<Point> two_select(std::span<const Point> pts, double f1x,
                              double f1y, int k1, double f2x, double f2y,
                              int k2) {
  std::unordered_set<std::int64_t> first;
  for (const Neighbor& n : knn(pts, f1x, f1y, k1)) first.insert(n.point.id);
  std::vector<Point> out;
  for (const Neighbor& n : knn(pts, f2x, f2y, k2))
    if (first.count(n.point.id)) out.push_back(n.point);
  std::sort(out.begin(), out.end(),
            [](const Point& p, const Point& q) { return p.id < q.id; });
  return out;
}

}  // namespace knnq::ref
