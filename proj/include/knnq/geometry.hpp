#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace knnq {

// A point of a relation. `id` is unique within its relation.
struct Point {
  std::int64_t id = -1;
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned rectangle, x_min <= x_max and y_min <= y_max.
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double diagonal() const { return std::sqrt(width() * width() + height() * height()); }
  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
};

inline double dist_sq(double ax, double ay, double bx, double by) {
  const double dx = ax - bx;
  const double dy = ay - by;
  return dx * dx + dy * dy;
}

inline double dist(double ax, double ay, double bx, double by) {
  return std::sqrt(dist_sq(ax, ay, bx, by));
}

inline double dist(const Point& p, const Point& q) {
  return std::sqrt(dist_sq(p.x, p.y, q.x, q.y));
}

// Squared minimum distance from (x, y) to any location in r; 0 inside.
inline double mindist_sq(double x, double y, const Rect& r) {
  double dx = 0.0;
  if (x < r.x_min)
    dx = r.x_min - x;
  else if (x > r.x_max)
    dx = x - r.x_max;
  double dy = 0.0;
  if (y < r.y_min)
    dy = r.y_min - y;
  else if (y > r.y_max)
    dy = y - r.y_max;
  return dx * dx + dy * dy;
}

// Squared maximum distance from (x, y) to any location in r. The maximum is
// attained at one of the four corners; enumerate them.
inline double maxdist_sq(double x, double y, const Rect& r) {
  double best = dist_sq(x, y, r.x_min, r.y_min);
  best = std::max(best, dist_sq(x, y, r.x_min, r.y_max));
  best = std::max(best, dist_sq(x, y, r.x_max, r.y_min));
  best = std::max(best, dist_sq(x, y, r.x_max, r.y_max));
  return best;
}

inline double mindist(double x, double y, const Rect& r) {
  return std::sqrt(mindist_sq(x, y, r));
}

inline double maxdist(double x, double y, const Rect& r) {
  return std::sqrt(maxdist_sq(x, y, r));
}

inline double mindist(const Point& p, const Rect& r) {
  return mindist(p.x, p.y, r);
}

inline double maxdist(const Point& p, const Rect& r) {
  return maxdist(p.x, p.y, r);
}

}  // namespace knnq
