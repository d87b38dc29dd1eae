#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "knnq/reference.hpp"
#include "knnq/two_select.hpp"

using namespace knnq;

namespace {

std::vector<std::int64_t> ids(const std::vector<Point>& pts) {
  std::vector<std::int64_t> out;
  out.reserve(pts.size());
  for (const Point& p : pts) out.push_back(p.id);
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("two_select");

TEST_CASE("baseline: identical predicates give the full neighborhood") {
  auto pts = fixtures::uniform_points(200, 91);
  auto idx = fixtures::make_index({{"e", pts}}, 8);
  TwoSelectQuery q{idx.relation("e"), 0.3, 0.3, 0.3, 0.3, 7, 7};
  const auto got = baseline_two_select(idx, q);
  CHECK(got.size() == 7);
  CHECK(ids(got) == ids(ref::two_select(pts, 0.3, 0.3, 7, 0.3, 0.3, 7)));
}

TEST_CASE("baseline: opposite extremes with disjoint neighborhoods") {
  std::vector<Point> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(Point{i, 0.01 * i, 0.0});
  for (int i = 10; i < 20; ++i)
    pts.push_back(Point{i, 10.0 + 0.01 * (i - 10), 0.0});
  auto idx = fixtures::make_index({{"e", pts}}, 4);
  TwoSelectQuery q{idx.relation("e"), 0.0, 0.0, 10.0, 0.0, 5, 5};
  CHECK(baseline_two_select(idx, q).empty());
  CHECK(ref::two_select(pts, 0, 0, 5, 10, 0, 5).empty());
}

TEST_CASE("baseline: twin-satellite topology yields the shared pair") {
  fixtures::TwoSelectExample fig;
  auto idx = fixtures::make_index({{"e", fig.pts}}, 4);
  TwoSelectQuery q{idx.relation("e"), fig.f1x, fig.f1y,
                   fig.f2x, fig.f2y,    fig.k1,  fig.k2};
  CHECK(ids(baseline_two_select(idx, q)) == fig.shared);
}

TEST_CASE("empty relation gives empty results") {
  auto idx =
      fixtures::make_index({{"e", {}}, {"f", {Point{0, 0.5, 0.5}}}}, 4);
  TwoSelectQuery q{idx.relation("e"), 0.1, 0.1, 0.9, 0.9, 3, 3};
  CHECK(baseline_two_select(idx, q).empty());
  CHECK(two_knn_select(idx, q).empty());
}

TEST_CASE("truncated plan: k1 = k2 still matches the baseline") {
  auto pts = fixtures::uniform_points(500, 92);
  auto idx = fixtures::make_index({{"e", pts}}, 8);
  TwoSelectQuery q{idx.relation("e"), 0.2, 0.2, 0.7, 0.8, 9, 9};
  CHECK(ids(two_knn_select(idx, q)) == ids(baseline_two_select(idx, q)));
}

TEST_CASE("truncated plan: vacuous second predicate returns nbr1") {
  auto pts = fixtures::uniform_points(100, 93);
  auto idx = fixtures::make_index({{"e", pts}}, 8);
  TwoSelectQuery q{idx.relation("e"), 0.2, 0.2, 0.9, 0.1, 4, 100};
  const auto got = two_knn_select(idx, q);
  CHECK(got.size() == 4);
  CHECK(ids(got) == ids(baseline_two_select(idx, q)));
}

TEST_CASE("truncated plan equals baseline over 100 instances, all k ratios") {
  std::mt19937_64 rng(94);
  const int ratios[] = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  for (int inst = 0; inst < 100; ++inst) {
    auto pts = fixtures::uniform_points(50 + rng() % 2000, rng());
    auto idx = fixtures::make_index({{"e", pts}});
    const int e = idx.relation("e");
    const int k1 = 1 + static_cast<int>(rng() % 4);
    const int k2 = k1 * ratios[inst % 9];
    std::uniform_real_distribution<double> u(0, 1);
    TwoSelectQuery q{e, u(rng), u(rng), u(rng), u(rng), k1, k2};

    TwoSelectStats stats;
    CHECK(ids(two_knn_select(idx, q, &stats)) ==
          ids(baseline_two_select(idx, q)));

    // truncated locality never exceeds the untruncated one
    const Locality full = build_locality(idx, e, q.f2x, q.f2y, k2);
    CHECK(stats.locality_blocks <=
          static_cast<std::int64_t>(full.blocks.size()));
  }
}

TEST_CASE("query symmetry: swapping predicates leaves the result unchanged") {
  auto pts = fixtures::uniform_points(800, 95);
  auto idx = fixtures::make_index({{"e", pts}}, 8);
  TwoSelectQuery q{idx.relation("e"), 0.1, 0.8, 0.9, 0.2, 3, 48};
  TwoSelectQuery swapped{idx.relation("e"), 0.9, 0.2, 0.1, 0.8, 48, 3};
  CHECK(ids(two_knn_select(idx, q)) == ids(two_knn_select(idx, swapped)));
  CHECK(ids(baseline_two_select(idx, q)) ==
        ids(baseline_two_select(idx, swapped)));
}

TEST_CASE("sequential plan is a working negative control") {
  fixtures::TwoSelectExample fig;
  auto idx = fixtures::make_index({{"e", fig.pts}}, 4);
  TwoSelectQuery q{idx.relation("e"), fig.f1x, fig.f1y,
                   fig.f2x, fig.f2y,    fig.k1,  fig.k2};
  const auto forward = sequential_two_select(idx, q, true);
  const auto backward = sequential_two_select(idx, q, false);
  // both sequential orders keep the focal's private satellites
  CHECK(forward.size() == 5);
  CHECK(backward.size() == 5);
  CHECK(ids(forward) != fig.shared);
  CHECK(ids(backward) != fig.shared);
  CHECK(ids(forward) != ids(backward));
}

TEST_SUITE_END();
