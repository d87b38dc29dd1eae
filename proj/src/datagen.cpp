#include "knnq/datagen.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace knnq {
namespace {

constexpr int kPlacementRetries = 10000;

}  // namespace

std::vector<Point> gen_uniform(const GenSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> ux(spec.extent.x_min,
                                            spec.extent.x_max);
  std::uniform_real_distribution<double> uy(spec.extent.y_min,
                                            spec.extent.y_max);
  std::vector<Point> out;
  out.reserve(spec.n);
  for (std::int64_t i = 0; i < spec.n; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    out.push_back(Point{i, x, y});
  }
  return out;
}

std::vector<Point> gen_clustered(const GenSpec& spec) {
  if (spec.n_clusters < 1)
    throw std::invalid_argument("clustered generation needs n_clusters >= 1");
  if (spec.cluster_radius <= 0.0)
    throw std::invalid_argument("clustered generation needs a positive radius");
  const double r = spec.cluster_radius;
  if (spec.extent.width() < 2.0 * r || spec.extent.height() < 2.0 * r)
    throw std::invalid_argument("cluster radius exceeds the extent");

  std::mt19937_64 rng(spec.seed);
  // Centers stay a full radius inside the extent so discs never spill out.
  std::uniform_real_distribution<double> cx(spec.extent.x_min + r,
                                            spec.extent.x_max - r);
  std::uniform_real_distribution<double> cy(spec.extent.y_min + r,
                                            spec.extent.y_max - r);

  std::vector<std::pair<double, double>> centers;
  centers.reserve(spec.n_clusters);
  while (static_cast<int>(centers.size()) < spec.n_clusters) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementRetries; ++attempt) {
      const double x = cx(rng);
      const double y = cy(rng);
      bool ok = true;
      for (const auto& [ox, oy] : centers)
        if (dist_sq(x, y, ox, oy) < 4.0 * r * r) {
          ok = false;
          break;
        }
      if (ok) {
        centers.emplace_back(x, y);
        placed = true;
        break;
      }
    }
    if (!placed)
      throw std::runtime_error(
          "could not place non-overlapping clusters; try a smaller "
          "cluster_radius or fewer clusters");
  }

  const std::int64_t per_cluster = spec.n / spec.n_clusters;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> out;
  out.reserve(per_cluster * spec.n_clusters);
  std::int64_t id = 0;
  for (const auto& [ox, oy] : centers) {
    for (std::int64_t i = 0; i < per_cluster; ++i) {
      // sqrt keeps the density uniform over the disc area.
      const double a = angle(rng);
      const double d = r * std::sqrt(unit(rng));
      out.push_back(Point{id++, ox + d * std::cos(a), oy + d * std::sin(a)});
    }
  }
  return out;
}

std::vector<Point> generate(const GenSpec& spec) {
  return spec.kind == GenKind::Uniform ? gen_uniform(spec)
                                       : gen_clustered(spec);
}

std::vector<Point> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Point> out;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Point p;
    char c1 = 0, c2 = 0;
    std::istringstream ss(line);
    if (!(ss >> p.id >> c1 >> p.x >> c2 >> p.y) || c1 != ',' || c2 != ',')
      throw std::runtime_error(path + ": malformed line " +
                               std::to_string(lineno));
    out.push_back(p);
  }
  return out;
}

void write_points(const std::string& path, const std::vector<Point>& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  for (const Point& p : points)
    out << p.id << ',' << p.x << ',' << p.y << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace knnq
