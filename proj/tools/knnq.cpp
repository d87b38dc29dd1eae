// Command-line front end: generate point sets, run a plan, verify plan
// equivalence over seeded instances, and benchmark plan pairs into CSV.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "knnq/datagen.hpp"
#include "knnq/multi_join.hpp"
#include "knnq/select_join.hpp"
#include "knnq/two_select.hpp"

using namespace knnq;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

struct Focal {
  double x = 0.0;
  double y = 0.0;
};

Focal parse_focal(const std::string& s) {
  Focal f;
  char comma = 0;
  std::istringstream ss(s);
  if (!(ss >> f.x >> comma >> f.y) || comma != ',')
    throw CLI::ValidationError("focal", "expected X,Y");
  return f;
}

struct RunConfig {
  std::string query;
  std::string plan;
  std::string rel_a, rel_b, rel_c;
  int k_join = 1, k_select = 1, k1 = 1, k2 = 1;
  int k_ab = 1, k_cb = 1, k_bc = 1;
  std::string focal = "0,0", focal2 = "0,0";
  std::string first = "ab";
  std::string cache = "on";
  int grid = 0;
};

// A result set in its on-disk form: sorted comma-separated id tuples.
using Rows = std::vector<std::string>;

Rows rows_of(const PairSet& ps) {
  Rows r;
  r.reserve(ps.size());
  for (const Pair& p : ps)
    r.push_back(std::to_string(p.outer) + "," + std::to_string(p.inner));
  return r;
}

Rows rows_of(const TripletSet& ts) {
  Rows r;
  r.reserve(ts.size());
  for (const Triplet& t : ts)
    r.push_back(std::to_string(t.a) + "," + std::to_string(t.b) + "," +
                std::to_string(t.c));
  return r;
}

Rows rows_of(const std::vector<Point>& pts) {
  Rows r;
  r.reserve(pts.size());
  for (const Point& p : pts) r.push_back(std::to_string(p.id));
  return r;
}

struct RunOutcome {
  Rows rows;
  std::string counters;  // "name=value ..." prune counters, may be empty
};

struct Instance {
  GridIndex index;
  std::vector<std::string> names;  // relation names present
};

GridIndex load_index(const RunConfig& c, int relations_needed) {
  std::vector<std::pair<RelationId, std::vector<Point>>> rels;
  rels.emplace_back("a", read_points(c.rel_a));
  if (relations_needed >= 2) rels.emplace_back("b", read_points(c.rel_b));
  if (relations_needed >= 3) rels.emplace_back("c", read_points(c.rel_c));
  const GridGeometry geom = GridIndex::default_geometry(rels, c.grid);
  return GridIndex(geom, std::move(rels));
}

RunOutcome run_plan(const GridIndex& idx, const RunConfig& c) {
  const std::string& q = c.query;
  const std::string& plan = c.plan;
  const Focal f = parse_focal(c.focal);

  if (q == "select-join-inner") {
    SelectJoinQuery sj{idx.relation("a"), idx.relation("b"), c.k_join,
                       c.k_select, f.x, f.y};
    if (plan == "baseline") return {rows_of(baseline_select_join_inner(idx, sj)), ""};
    if (plan == "counting") {
      SelectJoinStats st;
      auto r = counting_select_join(idx, sj, &st);
      return {rows_of(r),
              "skipped=" + std::to_string(st.skipped_points)};
    }
    if (plan == "block-marking") {
      SelectJoinStats st;
      auto r = block_marking_select_join(idx, sj, &st);
      return {rows_of(r),
              "non_contributing=" + std::to_string(st.non_contributing_blocks)};
    }
    if (plan == "invalid-inner-pushdown")
      return {rows_of(invalid_inner_pushdown(idx, sj)), ""};
  } else if (q == "select-join-outer") {
    if (plan == "pushdown")
      return {rows_of(outer_pushdown_select_join(idx, idx.relation("a"),
                                                 idx.relation("b"), c.k_join,
                                                 c.k_select, f.x, f.y)),
              ""};
    if (plan == "post-filter") {
      const Neighborhood sel =
          get_knn(idx, idx.relation("a"), f.x, f.y, c.k_select);
      std::vector<std::int64_t> ids;
      for (const Neighbor& n : sel.members) ids.push_back(n.point.id);
      std::sort(ids.begin(), ids.end());
      PairSet out;
      for (const Pair& p :
           knn_join(idx, idx.relation("a"), idx.relation("b"), c.k_join))
        if (std::binary_search(ids.begin(), ids.end(), p.outer))
          out.push_back(p);
      return {rows_of(out), ""};
    }
  } else if (q == "unchained") {
    UnchainedQuery uq{idx.relation("a"), idx.relation("b"), idx.relation("c"),
                      c.k_ab, c.k_cb};
    const FirstJoin first = c.first == "cb" ? FirstJoin::CB : FirstJoin::AB;
    if (plan == "baseline") return {rows_of(unchained_baseline(idx, uq)), ""};
    if (plan == "block-marking") {
      MultiJoinStats st;
      auto r = unchained_block_marking(idx, uq, first, &st);
      return {rows_of(r),
              "non_contributing=" + std::to_string(st.non_contributing_blocks)};
    }
    if (plan == "filtered")
      return {rows_of(unchained_filtered(idx, uq, first)), ""};
    if (plan == "advised") {
      const JoinOrderAdvice advice = advise_join_order(idx, uq);
      if (advice == JoinOrderAdvice::Baseline)
        return {rows_of(unchained_baseline(idx, uq)), "advice=baseline"};
      const FirstJoin adv_first = advice == JoinOrderAdvice::StartAB
                                      ? FirstJoin::AB
                                      : FirstJoin::CB;
      auto r = unchained_block_marking(idx, uq, adv_first);
      return {rows_of(r), advice == JoinOrderAdvice::StartAB ? "advice=ab"
                                                             : "advice=cb"};
    }
  } else if (q == "chained") {
    ChainedQuery cq{idx.relation("a"), idx.relation("b"), idx.relation("c"),
                    c.k_ab, c.k_bc};
    if (plan == "qep1") return {rows_of(chained_right_deep(idx, cq)), ""};
    if (plan == "qep2")
      return {rows_of(chained_join_intersection(idx, cq)), ""};
    if (plan == "qep3") {
      MultiJoinStats st;
      auto r = chained_nested_join(idx, cq, c.cache == "on", &st);
      return {rows_of(r),
              "computations=" + std::to_string(st.cache_computations) +
                  " cache_hits=" + std::to_string(st.cache_hits)};
    }
  } else if (q == "two-select") {
    const Focal f2 = parse_focal(c.focal2);
    TwoSelectQuery tq{idx.relation("a"), f.x, f.y, f2.x, f2.y, c.k1, c.k2};
    if (plan == "baseline") return {rows_of(baseline_two_select(idx, tq)), ""};
    if (plan == "truncated") {
      TwoSelectStats st;
      auto r = two_knn_select(idx, tq, &st);
      return {rows_of(r),
              "locality_blocks=" + std::to_string(st.locality_blocks)};
    }
    if (plan == "sequential")
      return {rows_of(sequential_two_select(idx, tq, true)), ""};
  }
  throw CLI::ValidationError("plan", "plan '" + plan +
                                         "' is not valid for query '" + q +
                                         "'");
}

int relations_for(const std::string& query) {
  if (query == "two-select") return 1;
  if (query == "select-join-inner" || query == "select-join-outer") return 2;
  return 3;
}

std::vector<std::string> plans_for(const std::string& query) {
  if (query == "select-join-inner")
    return {"baseline", "counting", "block-marking"};
  if (query == "select-join-outer") return {"pushdown", "post-filter"};
  if (query == "unchained") return {"baseline", "block-marking"};
  if (query == "chained") return {"qep1", "qep2", "qep3"};
  if (query == "two-select") return {"baseline", "truncated"};
  return {};
}

// Seeded random instance for the verify suite.
RunConfig random_instance(const RunConfig& base, std::uint64_t seed,
                          const std::string& dir) {
  std::mt19937_64 rng(seed);
  RunConfig c = base;
  const int nrels = relations_for(base.query);
  const char* names[3] = {"a", "b", "c"};
  std::string paths[3];
  for (int r = 0; r < nrels; ++r) {
    GenSpec s;
    s.n = 2 + rng() % 500;
    s.seed = rng();
    auto pts = gen_uniform(s);
    paths[r] = dir + "/verify_" + names[r] + ".csv";
    write_points(paths[r], pts);
  }
  c.rel_a = paths[0];
  if (nrels >= 2) c.rel_b = paths[1];
  if (nrels >= 3) c.rel_c = paths[2];
  auto k = [&] { return 1 + static_cast<int>(rng() % 8); };
  c.k_join = k();
  c.k_select = k();
  c.k_ab = k();
  c.k_cb = k();
  c.k_bc = k();
  c.k1 = k();
  c.k2 = c.k1 * (1 << (rng() % 6));
  std::uniform_real_distribution<double> u(0, 1);
  c.focal = std::to_string(u(rng)) + "," + std::to_string(u(rng));
  c.focal2 = std::to_string(u(rng)) + "," + std::to_string(u(rng));
  return c;
}

void write_rows(const std::string& path, const Rows& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const std::string& r : rows) out << r << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spatial kNN query plans: generate, run, verify, bench"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a point-set file");
  std::string gen_kind = "uniform", gen_out;
  std::int64_t gen_n = 0;
  int gen_clusters = 1;
  std::int64_t gen_per_cluster = 0;
  double gen_radius = 0.05;
  std::uint64_t gen_seed = 0;
  std::vector<double> gen_extent{0, 0, 1, 1};
  gen->add_option("--kind", gen_kind)
      ->check(CLI::IsMember({"uniform", "clustered"}));
  gen->add_option("--n", gen_n);
  gen->add_option("--clusters", gen_clusters);
  gen->add_option("--per-cluster", gen_per_cluster);
  gen->add_option("--radius", gen_radius);
  gen->add_option("--seed", gen_seed);
  gen->add_option("--extent", gen_extent)->expected(4);
  gen->add_option("--out", gen_out)->required();

  // shared run/verify/bench configuration
  RunConfig cfg;
  std::uint64_t seed = 0;
  int reps = 3;
  std::string out_path;
  auto add_common = [&](CLI::App* sub, bool need_plan) {
    sub->add_option("--query", cfg.query)
        ->required()
        ->check(CLI::IsMember({"select-join-inner", "select-join-outer",
                               "unchained", "chained", "two-select"}));
    if (need_plan) sub->add_option("--plan", cfg.plan)->required();
    sub->add_option("--rel-a", cfg.rel_a);
    sub->add_option("--rel-b", cfg.rel_b);
    sub->add_option("--rel-c", cfg.rel_c);
    sub->add_option("--kjoin", cfg.k_join);
    sub->add_option("--kselect", cfg.k_select);
    sub->add_option("--k1", cfg.k1);
    sub->add_option("--k2", cfg.k2);
    sub->add_option("--kab", cfg.k_ab);
    sub->add_option("--kcb", cfg.k_cb);
    sub->add_option("--kbc", cfg.k_bc);
    sub->add_option("--focal", cfg.focal);
    sub->add_option("--focal2", cfg.focal2);
    sub->add_option("--first", cfg.first)
        ->check(CLI::IsMember({"ab", "cb"}));
    sub->add_option("--cache", cfg.cache)->check(CLI::IsMember({"on", "off"}));
    sub->add_option("--grid", cfg.grid);
    sub->add_option("--seed", seed);
    sub->add_option("--reps", reps);
    sub->add_option("--out", out_path);
  };

  auto* run = app.add_subcommand("run", "run one plan and write its result");
  add_common(run, true);

  auto* verify = app.add_subcommand(
      "verify", "run several plans over seeded instances; exit 1 on mismatch");
  std::vector<std::string> verify_plans;
  int verify_instances = 100;
  add_common(verify, false);
  verify->add_option("--plans", verify_plans)->delimiter(',');
  verify->add_option("--instances", verify_instances);

  auto* bench =
      app.add_subcommand("bench", "sweep a parameter and emit timing CSV");
  std::string bench_sweep = "kratio";
  add_common(bench, false);
  bench->add_option("--sweep", bench_sweep)
      ->check(CLI::IsMember({"kratio", "size", "clusters"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      GenSpec s;
      s.kind = gen_kind == "uniform" ? GenKind::Uniform : GenKind::Clustered;
      s.extent = Rect{gen_extent[0], gen_extent[1], gen_extent[2],
                      gen_extent[3]};
      s.seed = gen_seed;
      s.n_clusters = gen_clusters;
      s.cluster_radius = gen_radius;
      s.n = s.kind == GenKind::Clustered && gen_per_cluster > 0
                ? gen_clusters * gen_per_cluster
                : gen_n;
      write_points(gen_out, generate(s));
      return 0;
    }

    if (run->parsed()) {
      const GridIndex idx = load_index(cfg, relations_for(cfg.query));
      const double t0 = now_ms();
      const RunOutcome r = run_plan(idx, cfg);
      const double elapsed = now_ms() - t0;
      if (!out_path.empty()) write_rows(out_path, r.rows);
      std::cout << "plan=" << cfg.plan << " time_ms=" << elapsed
                << " cardinality=" << r.rows.size()
                << (r.counters.empty() ? "" : " " + r.counters) << "\n";
      return 0;
    }

    if (verify->parsed()) {
      if (verify_plans.empty()) verify_plans = plans_for(cfg.query);
      if (verify_plans.size() < 2)
        throw CLI::ValidationError("plans", "verify needs at least two plans");
      for (int i = 0; i < verify_instances; ++i) {
        RunConfig inst = random_instance(cfg, seed + i, ".");
        const GridIndex idx = load_index(inst, relations_for(inst.query));
        std::optional<Rows> first_rows;
        std::string first_plan;
        for (const std::string& plan : verify_plans) {
          inst.plan = plan;
          const Rows rows = run_plan(idx, inst).rows;
          if (!first_rows) {
            first_rows = rows;
            first_plan = plan;
          } else if (rows != *first_rows) {
            // keep the differing instance on disk for inspection
            write_rows("mismatch_" + first_plan + ".txt", *first_rows);
            write_rows("mismatch_" + plan + ".txt", rows);
            std::cout << "MISMATCH instance=" << i << " plans=" << first_plan
                      << "," << plan << "\n";
            return 1;
          }
        }
      }
      std::cout << "OK instances=" << verify_instances << "\n";
      return 0;
    }

    if (bench->parsed()) {
      std::vector<std::string> plans = plans_for(cfg.query);
      std::ostringstream csv;
      csv << "sweep_value,plan,median_time_ms,result_cardinality,counters\n";
      std::vector<std::int64_t> sweep;
      if (bench_sweep == "kratio")
        for (int i = 0; i <= 8; ++i) sweep.push_back(std::int64_t(1) << i);
      else if (bench_sweep == "size")
        for (std::int64_t n : {1000, 2000, 4000, 8000, 16000}) sweep.push_back(n);
      else
        for (std::int64_t d : {1, 2, 4, 6, 8, 10}) sweep.push_back(d);

      for (std::int64_t v : sweep) {
        RunConfig c = cfg;
        std::string dir = ".";
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(v));
        if (bench_sweep == "kratio") {
          c.k1 = cfg.k1 > 0 ? cfg.k1 : 10;
          c.k2 = static_cast<int>(c.k1 * v);
          if (c.rel_a.empty()) {
            GenSpec s;
            s.n = 50000;
            s.seed = seed;
            c.rel_a = dir + "/bench_a.csv";
            write_points(c.rel_a, gen_uniform(s));
          }
        } else if (bench_sweep == "size") {
          GenSpec s;
          s.n = v;
          s.seed = rng();
          c.rel_a = dir + "/bench_a.csv";
          write_points(c.rel_a, gen_uniform(s));
          if (relations_for(c.query) >= 2) {
            s.n = 10000;
            s.seed = rng();
            c.rel_b = dir + "/bench_b.csv";
            write_points(c.rel_b, gen_uniform(s));
          }
        } else {  // clusters: A gets 3+v clusters, C gets 3
          GenSpec s;
          s.kind = GenKind::Clustered;
          s.cluster_radius = 0.03;
          s.n_clusters = 3 + static_cast<int>(v);
          s.n = s.n_clusters * 500;
          s.seed = rng();
          c.rel_a = dir + "/bench_a.csv";
          write_points(c.rel_a, gen_clustered(s));
          GenSpec sb;
          sb.n = 10000;
          sb.seed = rng();
          c.rel_b = dir + "/bench_b.csv";
          write_points(c.rel_b, gen_uniform(sb));
          GenSpec sc = s;
          sc.n_clusters = 3;
          sc.n = 3 * 500;
          sc.seed = rng();
          c.rel_c = dir + "/bench_c.csv";
          write_points(c.rel_c, gen_clustered(sc));
        }
        const GridIndex idx = load_index(c, relations_for(c.query));
        for (const std::string& plan : plans) {
          c.plan = plan;
          std::vector<double> times;
          RunOutcome last;
          for (int r = 0; r < std::max(reps, 3); ++r) {
            const double t0 = now_ms();
            last = run_plan(idx, c);
            times.push_back(now_ms() - t0);
          }
          std::sort(times.begin(), times.end());
          csv << v << ',' << plan << ',' << times[times.size() / 2] << ','
              << last.rows.size() << ','
              << (last.counters.empty() ? "-" : last.counters) << "\n";
        }
      }
      if (out_path.empty())
        std::cout << csv.str();
      else {
        std::ofstream out(out_path);
        out << csv.str();
      }
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
