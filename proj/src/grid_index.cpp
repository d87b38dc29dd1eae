#include "knnq/grid_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace knnq {

GridGeometry GridIndex::default_geometry(
    const std::vector<std::pair<RelationId, std::vector<Point>>>& relations,
    int resolution_override) {
  bool any = false;
  Rect box{0.0, 0.0, 1.0, 1.0};
  std::size_t n_max = 0;
  for (const auto& [name, pts] : relations) {
    n_max = std::max(n_max, pts.size());
    for (const Point& p : pts) {
      if (!any) {
        box = Rect{p.x, p.y, p.x, p.y};
        any = true;
      } else {
        box.x_min = std::min(box.x_min, p.x);
        box.y_min = std::min(box.y_min, p.y);
        box.x_max = std::max(box.x_max, p.x);
        box.y_max = std::max(box.y_max, p.y);
      }
    }
  }
  // Inflate 1% per side; keep a nonzero extent for degenerate inputs.
  double pad_x = 0.01 * box.width();
  double pad_y = 0.01 * box.height();
  if (pad_x == 0.0) pad_x = 0.5;
  if (pad_y == 0.0) pad_y = 0.5;
  box.x_min -= pad_x;
  box.x_max += pad_x;
  box.y_min -= pad_y;
  box.y_max += pad_y;

  int G = resolution_override;
  if (G <= 0)
    G = std::max(1, static_cast<int>(std::ceil(
                        std::sqrt(static_cast<double>(n_max) / 64.0))));
  return GridGeometry{box, G};
}

GridIndex::GridIndex(
    GridGeometry geometry,
    std::vector<std::pair<RelationId, std::vector<Point>>> relations)
    : geom_(geometry) {
  if (geom_.resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
  const int blocks = geom_.block_count();
  for (auto& [name, pts] : relations) {
    if (name_to_rel_.count(name))
      throw std::invalid_argument("duplicate relation id: " + name);
    const int rel = static_cast<int>(names_.size());
    name_to_rel_.emplace(name, rel);
    names_.push_back(name);
    buckets_.emplace_back(blocks);
    counts_.emplace_back(blocks, 0);
    id_block_.emplace_back();
    id_block_[rel].reserve(pts.size());
    for (const Point& p : pts) {
      if (!geom_.extent.contains(p.x, p.y))
        throw std::invalid_argument("point " + std::to_string(p.id) +
                                    " of relation " + name +
                                    " lies outside the grid extent");
      const int b = geom_.block_at(geom_.row_of(p.y), geom_.col_of(p.x));
      if (!id_block_[rel].emplace(p.id, b).second)
        throw std::invalid_argument("duplicate point id " + std::to_string(p.id) +
                                    " in relation " + name);
      buckets_[rel][b].push_back(p);
      ++counts_[rel][b];
    }
    points_.push_back(std::move(pts));
  }
}

int GridIndex::relation(const RelationId& name) const {
  auto it = name_to_rel_.find(name);
  if (it == name_to_rel_.end())
    throw std::invalid_argument("unknown relation id: " + name);
  return it->second;
}

int GridIndex::locate(const Point& p) const {
  if (!geom_.extent.contains(p.x, p.y))
    throw std::invalid_argument("point outside the grid extent");
  return geom_.block_at(geom_.row_of(p.y), geom_.col_of(p.x));
}

double GridIndex::coverage(int rel) const {
  int occupied = 0;
  for (int c : counts_[rel])
    if (c > 0) ++occupied;
  return static_cast<double>(occupied) / geom_.block_count();
}

std::vector<int> GridIndex::drain(BlockStream::Order order, double fx,
                                  double fy) const {
  std::vector<int> out;
  out.reserve(geom_.block_count());
  BlockStream stream(geom_, fx, fy, order);
  int block;
  double key;
  while (stream.next(block, key)) out.push_back(block);
  return out;
}

std::vector<int> GridIndex::blocks_by_mindist(double fx, double fy) const {
  return drain(BlockStream::Order::MinDist, fx, fy);
}

std::vector<int> GridIndex::blocks_by_maxdist(double fx, double fy) const {
  return drain(BlockStream::Order::MaxDist, fx, fy);
}

}  // namespace knnq
