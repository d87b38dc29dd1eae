#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "knnq/geometry.hpp"

namespace knnq {

enum class GenKind { Uniform, Clustered };

struct GenSpec {
  GenKind kind = GenKind::Uniform;
  std::int64_t n = 0;  // total (uniform) or n_clusters * points_per_cluster
  Rect extent{0.0, 0.0, 1.0, 1.0};
  double cluster_radius = 0.0;
  int n_clusters = 1;
  std::uint64_t seed = 0;
};

// Points i.i.d. uniform over the extent, ids 0..n-1, deterministic per seed.
std::vector<Point> gen_uniform(const GenSpec& spec);

// Disc-shaped clusters with rejection-sampled centers spaced at least
// 2 * cluster_radius apart; throws when the spacing cannot be met after
// bounded retries.
std::vector<Point> gen_clustered(const GenSpec& spec);

std::vector<Point> generate(const GenSpec& spec);

// One point per line, "id,x,y", LF endings, no header.
std::vector<Point> read_points(const std::string& path);
void write_points(const std::string& path, const std::vector<Point>& points);

}  // namespace knnq
