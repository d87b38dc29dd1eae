#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "knnq/datagen.hpp"
#include "knnq/grid_index.hpp"

namespace fixtures {

using knnq::GridGeometry;
using knnq::GridIndex;
using knnq::Point;
using knnq::Rect;

using Relations = std::vector<std::pair<knnq::RelationId, std::vector<Point>>>;

inline GridIndex make_index(Relations rels, int resolution = 0) {
  GridGeometry geom = GridIndex::default_geometry(rels, resolution);
  return GridIndex(geom, std::move(rels));
}

inline std::vector<Point> uniform_points(std::int64_t n, std::uint64_t seed,
                                         Rect extent = Rect{0, 0, 1, 1}) {
  knnq::GenSpec s;
  s.kind = knnq::GenKind::Uniform;
  s.n = n;
  s.extent = extent;
  s.seed = seed;
  return knnq::gen_uniform(s);
}

// Residential layout behind the select-join counterexample: houses h1, h2 sit
// by the focal point, three decoys far out; the four outer points each have a
// near house. Baseline yields 5 pairs, the inner pushdown 8.
struct SelectJoinCounterexample {
  std::vector<Point> outer{{0, 3, 3}, {1, 0, 1}, {2, -3, 3}, {3, 3, -3}};
  std::vector<Point> inner{
      {0, 0.1, 0}, {1, -0.1, 0}, {2, 5, 5}, {3, -5, 5}, {4, 5, -5}};
  double fx = 0.0;
  double fy = 0.0;
  int k_join = 2;
  int k_select = 2;
};

// Three-relation layout for the unchained counterexample: b2 is the only B
// point shared by both joins. The independent baseline yields 4 triplets;
// either filtered plan yields 8.
struct UnchainedCounterexample {
  std::vector<Point> a{{0, 0, 0.1}, {1, 0, -0.1}};
  std::vector<Point> b{{0, -1, 0}, {1, 0, 0}, {2, 1, 0}};
  std::vector<Point> c{{0, 2, 0.1}, {1, 2, -0.1}};
  int k_ab = 2;
  int k_cb = 2;
};

// Chain layout where b2, b3 each surface in both A-neighborhoods: 8 triplets,
// 2 distinct B points, so caching halves the neighborhood computations.
struct ChainedExample {
  std::vector<Point> a{{0, 0, 0.1}, {1, 0, -0.1}};
  std::vector<Point> b{{0, 5, 5}, {1, 0.5, 0.05}, {2, 0.5, -0.05}};
  std::vector<Point> c{
      {0, 0.5, 1}, {1, 0.5, 0.5}, {2, 5, -5}, {3, 0.5, -1}};
  int k_ab = 2;
  int k_bc = 2;
};

// Two focal points with private satellite triples and a shared middle pair
// {x, y}; intersection of the 5-neighborhoods is exactly the shared pair.
struct TwoSelectExample {
  std::vector<Point> pts{{0, 0, 0.1},     {1, 0, -0.1},   {2, -1.2, 0.3},
                         {3, -1.3, -0.2}, {4, -0.8, 0.4}, {5, 1.2, 0.3},
                         {6, 1.3, -0.2},  {7, 0.8, 0.4}};
  double f1x = -1.0, f1y = 0.0;
  double f2x = 1.0, f2y = 0.0;
  int k1 = 5;
  int k2 = 5;
  std::vector<std::int64_t> shared{0, 1};  // x, y
};

// Tightness construction for the marking inequality: a corner point t' of the
// block [0,1]^2 has its nearest inner point b outside the block, just past
// the distance the 0.9-diagonal rule can account for. The full-diagonal rule
// keeps the block; the 0.9 rule drops it and loses the pair (t', b).
struct TightnessExample {
  GridGeometry geom{Rect{-2, -2, 2, 2}, 4};
  std::vector<Point> outer{{0, 1e-9, 1.0 - 1e-9}};                 // t'
  std::vector<Point> inner{{0, 0.5707, 0.4293}, {1, -0.5636, 1.5636}};  // a, b
  double fx = -0.5636;  // f coincides with b
  double fy = 1.5636;
  int k_join = 1;
  int k_select = 1;
};

}  // namespace fixtures
