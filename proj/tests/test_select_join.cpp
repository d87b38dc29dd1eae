#include <random>
#include <unordered_set>

#include "doctest.h"
#include "fixtures.hpp"
#include "knnq/reference.hpp"
#include "knnq/select_join.hpp"

using namespace knnq;

TEST_SUITE_BEGIN("select_join");

TEST_CASE("counting: vacuous select equals the full join") {
  auto outer = fixtures::uniform_points(100, 51);
  auto inner = fixtures::uniform_points(80, 52);
  auto idx = fixtures::make_index({{"o", outer}, {"i", inner}}, 4);
  SelectJoinQuery q{idx.relation("o"), idx.relation("i"), 3, 80, 0.5, 0.5};
  CHECK(counting_select_join(idx, q) ==
        knn_join(idx, q.outer, q.inner, q.k_join));
}

TEST_CASE("counting: single outer point colocated with the focal point") {
  std::vector<Point> outer{{0, 0.5, 0.5}};
  auto inner = fixtures::uniform_points(50, 53);
  auto idx = fixtures::make_index({{"o", outer}, {"i", inner}}, 4);
  for (int kj : {1, 3, 7})
    for (int ks : {1, 3, 7}) {
      SelectJoinQuery q{idx.relation("o"), idx.relation("i"), kj, ks, 0.5, 0.5};
      CHECK(counting_select_join(idx, q).size() ==
            static_cast<std::size_t>(std::min(kj, ks)));
    }
}

TEST_CASE("counting equals baseline over 100 random instances") {
  std::mt19937_64 rng(54);
  for (int inst = 0; inst < 100; ++inst) {
    auto outer = fixtures::uniform_points(1 + rng() % 2000, rng());
    auto inner = fixtures::uniform_points(1 + rng() % 2000, rng());
    auto idx = fixtures::make_index({{"o", outer}, {"i", inner}});
    SelectJoinQuery q{idx.relation("o"), idx.relation("i"),
                      1 + static_cast<int>(rng() % 16),
                      1 + static_cast<int>(rng() % 16), 0.4, 0.6};
    CHECK(counting_select_join(idx, q) == baseline_select_join_inner(idx, q));
  }
}

TEST_CASE("counting prune soundness: skipped points have empty intersections") {
  std::mt19937_64 rng(55);
  for (int inst = 0; inst < 10; ++inst) {
    auto outer = fixtures::uniform_points(200, rng());
    auto inner = fixtures::uniform_points(200, rng());
    auto idx = fixtures::make_index({{"o", outer}, {"i", inner}}, 8);
    SelectJoinQuery q{idx.relation("o"), idx.relation("i"), 2, 2, 0.1, 0.1};
    // equality with the brute-force oracle implies every pruned point
    // contributed nothing; assert it directly as well
    const PairSet got = counting_select_join(idx, q);
    const PairSet expect =
        ref::select_join_inner(outer, inner, q.k_join, q.k_select, q.fx, q.fy);
    CHECK(got == expect);
  }
}

TEST_CASE("block-marking preprocess: huge f_farthest keeps all blocks") {
  auto outer = fixtures::uniform_points(100, 56);
  auto inner = fixtures::uniform_points(100, 57);
  auto idx = fixtures::make_index({{"o", outer}, {"i", inner}}, 4);
  SelectJoinQuery q{idx.relation("o"), idx.relation("i"), 2, 100, 0.5, 0.5};
  const Neighborhood nbr_f = get_knn(idx, q.inner, q.fx, q.fy, q.k_select);
  const BlockMarks marks = block_marking_preprocess(idx, q, nbr_f);
  CHECK(marks.contributing.size() ==
        static_cast<std::size_t>(idx.geometry().block_count()));
}

TEST_CASE("block-marking preprocess: G=1 keeps the single block") {
  auto outer = fixtures::uniform_points(30, 58);
  auto inner = fixtures::uniform_points(30, 59);
  auto idx = fixtures::make_index({{"o", outer}, {"i", inner}}, 1);
  SelectJoinQuery q{idx.relation("o"), idx.relation("i"), 2, 2, 0.5, 0.5};
  const PairSet expect =
      ref::select_join_inner(outer, inner, q.k_join, q.k_select, q.fx, q.fy);
  CHECK(block_marking_select_join(idx, q) == expect);
  if (!expect.empty()) {
    const Neighborhood nbr_f = get_knn(idx, q.inner, q.fx, q.fy, q.k_select);
    CHECK(!block_marking_preprocess(idx, q, nbr_f).contributing.empty());
  }
}

TEST_CASE("block-marking prunes distant clusters soundly") {
  // outer cluster far from f, inner dense around the cluster
  std::vector<Point> outer, inner;
  std::mt19937_64 rng(60);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  for (int i = 0; i < 200; ++i)
    outer.push_back(Point{i, 0.9 + u(rng), 0.9 + u(rng)});
  for (int i = 0; i < 200; ++i)
    inner.push_back(Point{i, 0.9 + u(rng), 0.9 + u(rng)});
  for (int i = 200; i < 210; ++i)
    inner.push_back(Point{i, 0.05 + u(rng), 0.05 + u(rng)});
  auto idx = fixtures::make_index({{"o", outer}, {"i", inner}}, 8);
  SelectJoinQuery q{idx.relation("o"), idx.relation("i"), 2, 2, 0.05, 0.05};

  SelectJoinStats stats;
  const PairSet got = block_marking_select_join(idx, q, &stats);
  CHECK(stats.non_contributing_blocks > 0);
  CHECK(got == ref::select_join_inner(outer, inner, q.k_join, q.k_select,
                                      q.fx, q.fy));

  // every point of every pruned block is individually non-contributing
  const Neighborhood nbr_f = get_knn(idx, q.inner, q.fx, q.fy, q.k_select);
  std::unordered_set<std::int64_t> f_ids;
  for (const Neighbor& n : nbr_f.members) f_ids.insert(n.point.id);
  const BlockMarks marks = block_marking_preprocess(idx, q, nbr_f);
  for (int b = 0; b < idx.geometry().block_count(); ++b) {
    if (!marks.non_contributing[b]) continue;
    for (const Point& e1 : idx.bucket(b, q.outer))
      for (const Neighbor& n : ref::knn(inner, e1.x, e1.y, q.k_join))
        CHECK(f_ids.count(n.point.id) == 0);
  }
}

TEST_CASE("block-marking: empty outer relation") {
  auto inner = fixtures::uniform_points(30, 61);
  auto idx = fixtures::make_index({{"o", {}}, {"i", inner}}, 4);
  SelectJoinQuery q{idx.relation("o"), idx.relation("i"), 2, 2, 0.5, 0.5};
  CHECK(block_marking_select_join(idx, q).empty());
}

TEST_CASE("block-marking: residential topology yields the 5 pairs") {
  fixtures::SelectJoinCounterexample fig;
  auto idx = fixtures::make_index({{"o", fig.outer}, {"i", fig.inner}}, 4);
  SelectJoinQuery q{idx.relation("o"), idx.relation("i"), fig.k_join,
                    fig.k_select, fig.fx, fig.fy};
  const PairSet expect{{0, 0}, {1, 0}, {1, 1}, {2, 1}, {3, 0}};
  CHECK(block_marking_select_join(idx, q) == expect);
}

TEST_CASE("all three select-join plans agree over 100 random instances") {
  std::mt19937_64 rng(62);
  for (int inst = 0; inst < 100; ++inst) {
    auto outer = fixtures::uniform_points(1 + rng() % 1000, rng());
    auto inner = fixtures::uniform_points(1 + rng() % 1000, rng());
    auto idx = fixtures::make_index({{"o", outer}, {"i", inner}});
    SelectJoinQuery q{idx.relation("o"), idx.relation("i"),
                      1 + static_cast<int>(rng() % 16),
                      1 + static_cast<int>(rng() % 16), 0.2, 0.9};
    const PairSet base = baseline_select_join_inner(idx, q);
    CHECK(counting_select_join(idx, q) == base);
    CHECK(block_marking_select_join(idx, q) == base);
  }
}

TEST_CASE("per-tuple vs per-block cost counters") {
  auto outer = fixtures::uniform_points(2000, 63);
  auto inner = fixtures::uniform_points(2000, 64);
  auto idx = fixtures::make_index({{"o", outer}, {"i", inner}}, 8);
  SelectJoinQuery q{idx.relation("o"), idx.relation("i"), 4, 4, 0.5, 0.5};

  SelectJoinStats counting_stats;
  counting_select_join(idx, q, &counting_stats);
  CHECK(counting_stats.threshold_scans == 2000);

  SelectJoinStats marking_stats;
  block_marking_select_join(idx, q, &marking_stats);
  CHECK(marking_stats.center_knn <= idx.geometry().block_count());
}

TEST_CASE("tightness: 0.9 diagonal misclassifies, 1.0 does not") {
  fixtures::TightnessExample fig;
  GridIndex idx(fig.geom, {{"o", fig.outer}, {"i", fig.inner}});
  SelectJoinQuery q{idx.relation("o"), idx.relation("i"), fig.k_join,
                    fig.k_select, fig.fx, fig.fy};
  const PairSet base = baseline_select_join_inner(idx, q);
  REQUIRE(base.size() == 1);  // (t', b)
  CHECK(block_marking_select_join(idx, q) == base);
  CHECK(block_marking_select_join(idx, q, nullptr, 0.9) != base);
}

TEST_SUITE_END();
