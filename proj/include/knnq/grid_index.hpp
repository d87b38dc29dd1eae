#pragma once

#include <cstdint>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "knnq/geometry.hpp"

namespace knnq {

using RelationId = std::string;

// A G x G uniform grid over `extent`. Cells are half-open in both axes; the
// maximal row/column is closed on its far edge, so every point of the extent
// falls in exactly one cell.
struct GridGeometry {
  Rect extent;
  int resolution = 1;

  int block_count() const { return resolution * resolution; }
  double cell_width() const { return extent.width() / resolution; }
  double cell_height() const { return extent.height() / resolution; }

  int col_of(double x) const {
    int c = static_cast<int>((x - extent.x_min) / cell_width());
    return std::clamp(c, 0, resolution - 1);
  }
  int row_of(double y) const {
    int r = static_cast<int>((y - extent.y_min) / cell_height());
    return std::clamp(r, 0, resolution - 1);
  }
  int block_at(int row, int col) const { return row * resolution + col; }
  int row_of_block(int block) const { return block / resolution; }
  int col_of_block(int block) const { return block % resolution; }

  Rect block_rect(int block) const {
    const int row = row_of_block(block);
    const int col = col_of_block(block);
    const double cw = cell_width();
    const double ch = cell_height();
    return Rect{extent.x_min + col * cw, extent.y_min + row * ch,
                extent.x_min + (col + 1) * cw, extent.y_min + (row + 1) * ch};
  }
  std::pair<double, double> block_center(int block) const {
    const Rect r = block_rect(block);
    return {0.5 * (r.x_min + r.x_max), 0.5 * (r.y_min + r.y_max)};
  }
};

// Streams every block of a grid exactly once, in non-decreasing MINDIST or
// MAXDIST from a focal location, ties broken by (row, col).
//
// Blocks are discovered lazily, ring by ring around the focal cell, so a
// consumer that stops early never pays for ordering the whole grid. A block
// in the Chebyshev ring R around the focal cell has MINDIST (and hence
// MAXDIST) at least (R - 1) * min(cell_width, cell_height), which bounds the
// keys of undiscovered blocks.
class BlockStream {
 public:
  enum class Order { MinDist, MaxDist };

  BlockStream(const GridGeometry& g, double fx, double fy, Order order)
      : geom_(&g),
        fx_(fx),
        fy_(fy),
        order_(order),
        center_row_(g.row_of(std::clamp(fy, g.extent.y_min, g.extent.y_max))),
        center_col_(g.col_of(std::clamp(fx, g.extent.x_min, g.extent.x_max))) {
    const int G = g.resolution;
    max_ring_ = std::max(std::max(center_row_, G - 1 - center_row_),
                         std::max(center_col_, G - 1 - center_col_));
    cell_min_ = std::min(g.cell_width(), g.cell_height());
  }

  // Emits the next block; false once the grid is exhausted.
  bool next(int& block, double& key) {
    for (;;) {
      if (next_ring_ <= max_ring_ &&
          (heap_.empty() || heap_.top().key >= ring_lower_bound(next_ring_))) {
        expand_ring();
        continue;
      }
      if (heap_.empty()) return false;
      const Entry e = heap_.top();
      heap_.pop();
      block = geom_->block_at(e.row, e.col);
      key = e.key;
      return true;
    }
  }

 private:
  struct Entry {
    double key;
    int row;
    int col;
    bool operator>(const Entry& o) const {
      if (key != o.key) return key > o.key;
      if (row != o.row) return row > o.row;
      return col > o.col;
    }
  };

  double ring_lower_bound(int ring) const {
    return ring <= 0 ? 0.0 : (ring - 1) * cell_min_;
  }

  void push(int row, int col) {
    const Rect r = geom_->block_rect(geom_->block_at(row, col));
    const double k2 = order_ == Order::MinDist ? mindist_sq(fx_, fy_, r)
                                               : maxdist_sq(fx_, fy_, r);
    heap_.push(Entry{std::sqrt(k2), row, col});
  }

  void expand_ring() {
    const int R = next_ring_++;
    const int G = geom_->resolution;
    if (R == 0) {
      push(center_row_, center_col_);
      return;
    }
    const int r0 = center_row_ - R, r1 = center_row_ + R;
    const int c0 = center_col_ - R, c1 = center_col_ + R;
    for (int c = std::max(c0, 0); c <= std::min(c1, G - 1); ++c) {
      if (r0 >= 0) push(r0, c);
      if (r1 < G) push(r1, c);
    }
    for (int r = std::max(r0 + 1, 0); r <= std::min(r1 - 1, G - 1); ++r) {
      if (c0 >= 0) push(r, c0);
      if (c1 < G) push(r, c1);
    }
  }

  const GridGeometry* geom_;
  double fx_, fy_;
  Order order_;
  int center_row_, center_col_;
  int max_ring_;
  double cell_min_;
  int next_ring_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
};

// Immutable uniform-grid index over a shared extent, with per-relation point
// buckets and cached per-block counts.
class GridIndex {
 public:
  // Bounding box of all relations, inflated by 1% per side; G targets ~64
  // points per block of the largest relation unless overridden.
  static GridGeometry default_geometry(
      const std::vector<std::pair<RelationId, std::vector<Point>>>& relations,
      int resolution_override = 0);

  GridIndex(GridGeometry geometry,
            std::vector<std::pair<RelationId, std::vector<Point>>> relations);

  const GridGeometry& geometry() const { return geom_; }
  int relation_count() const { return static_cast<int>(names_.size()); }
  const RelationId& relation_name(int rel) const { return names_[rel]; }

  // Numeric handle for a relation; throws on unknown names.
  int relation(const RelationId& name) const;

  // Block containing p under the half-open cell rule; throws outside extent.
  int locate(const Point& p) const;

  int count(int block, int rel) const { return counts_[rel][block]; }
  const std::vector<Point>& bucket(int block, int rel) const {
    return buckets_[rel][block];
  }
  const std::vector<Point>& points(int rel) const { return points_[rel]; }
  std::int64_t cardinality(int rel) const {
    return static_cast<std::int64_t>(points_[rel].size());
  }
  int block_of_id(int rel, std::int64_t id) const { return id_block_[rel].at(id); }

  // Fraction of grid blocks holding at least one point of rel.
  double coverage(int rel) const;

  // Materialized orderings (full permutations of the block set).
  std::vector<int> blocks_by_mindist(double fx, double fy) const;
  std::vector<int> blocks_by_maxdist(double fx, double fy) const;

 private:
  std::vector<int> drain(BlockStream::Order order, double fx, double fy) const;

  GridGeometry geom_;
  std::vector<RelationId> names_;
  std::unordered_map<RelationId, int> name_to_rel_;
  std::vector<std::vector<Point>> points_;                 // rel -> all points
  std::vector<std::vector<std::vector<Point>>> buckets_;   // rel -> block -> points
  std::vector<std::vector<int>> counts_;                   // rel -> block -> count
  std::vector<std::unordered_map<std::int64_t, int>> id_block_;
};

}  // namespace knnq
