// Compares the grid-backed parallel kernels against the serial brute-force
// reference on the same instances. Prints one line per kernel with both
// timings; the outputs are asserted equal before timing is reported.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "knnq/datagen.hpp"
#include "knnq/multi_join.hpp"
#include "knnq/reference.hpp"
#include "knnq/select_join.hpp"
#include "knnq/two_select.hpp"

using namespace knnq;

namespace {

template <typename F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double grid_ms, double ref_ms, bool equal) {
  std::printf("%-16s grid %8.2f ms   serial %8.2f ms   speedup %6.2fx   %s\n",
              name, grid_ms, ref_ms, ref_ms / grid_ms,
              equal ? "outputs equal" : "OUTPUT MISMATCH");
  if (!equal) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
  const std::int64_t n = argc > 1 ? std::atoll(argv[1]) : 20000;

  GenSpec s;
  s.n = n;
  s.seed = 1;
  const auto e1 = gen_uniform(s);
  s.seed = 2;
  const auto e2 = gen_uniform(s);
  s.seed = 3;
  s.n = n / 4;
  const auto e3 = gen_uniform(s);

  const GridIndex idx = [&] {
    std::vector<std::pair<RelationId, std::vector<Point>>> rels{
        {"a", e1}, {"b", e2}, {"c", e3}};
    const GridGeometry geom = GridIndex::default_geometry(rels);
    return GridIndex(geom, std::move(rels));
  }();
  const int a = idx.relation("a"), b = idx.relation("b"),
            c = idx.relation("c");

  {
    PairSet grid, serial;
    const double tg = time_ms([&] { grid = knn_join(idx, a, b, 4); });
    const double tr = time_ms([&] { serial = ref::knn_join(e1, e2, 4); });
    report("knn-join", tg, tr, grid == serial);
  }
  {
    SelectJoinQuery q{a, b, 4, 8, 0.5, 0.5};
    PairSet grid, serial;
    const double tg = time_ms([&] { grid = block_marking_select_join(idx, q); });
    const double tr = time_ms(
        [&] { serial = ref::select_join_inner(e1, e2, 4, 8, 0.5, 0.5); });
    report("select-join", tg, tr, grid == serial);
  }
  {
    UnchainedQuery q{a, b, c, 2, 2};
    TripletSet grid, serial;
    const double tg =
        time_ms([&] { grid = unchained_block_marking(idx, q, FirstJoin::CB); });
    const double tr =
        time_ms([&] { serial = ref::unchained(e1, e2, e3, 2, 2); });
    report("unchained", tg, tr, grid == serial);
  }
  {
    ChainedQuery q{a, b, c, 2, 2};
    TripletSet grid, serial;
    const double tg =
        time_ms([&] { grid = chained_nested_join(idx, q, true); });
    const double tr = time_ms([&] { serial = ref::chained(e1, e2, e3, 2, 2); });
    report("chained", tg, tr, grid == serial);
  }
  {
    TwoSelectQuery q{a, 0.2, 0.2, 0.8, 0.8, 8, 64};
    std::vector<Point> grid, serial;
    const double tg = time_ms([&] { grid = two_knn_select(idx, q); });
    const double tr =
        time_ms([&] { serial = ref::two_select(e1, 0.2, 0.2, 8, 0.8, 0.8, 64); });
    bool equal = grid.size() == serial.size();
    for (std::size_t i = 0; equal && i < grid.size(); ++i)
      equal = grid[i].id == serial[i].id;
    report("two-select", tg, tr, equal);
  }
  return 0;
}
