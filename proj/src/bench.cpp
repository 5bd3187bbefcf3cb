#include "rangesum/bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "rangesum/dst.hpp"

namespace rangesum::bench {

namespace {

constexpr int kBatches = 5;

volatile double g_sink = 0.0;

struct Query {
  std::uint64_t a, b;
};

std::vector<Query> random_queries(int universe_log, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pos(0, universe_size(universe_log));
  std::vector<Query> q(count);
  for (auto& x : q) {
    auto a = pos(rng), b = pos(rng);
    if (a > b) std::swap(a, b);
    x = {a, b};
  }
  return q;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// Returns elapsed nanoseconds; `splits` receives the split count.
double run_batch(const Dst& tree, const std::vector<Query>& queries, std::uint64_t& splits,
                 double& sink) {
  splits = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& q : queries) {
    std::uint64_t s = 0;
    sink += tree.range_sum(q.a, q.b, s);
    splits += s;
  }
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::nano>(t1 - t0).count();
}

DstConfig bench_config(Distribution d, int universe_log, std::uint64_t seed) {
  DstConfig c;
  c.universe_log = universe_log;
  c.distribution = d;
  c.master_seed = seed;
  return c;
}

}  // namespace

SplitTiming time_splits(Distribution d, int universe_log, std::uint64_t min_splits,
                        std::uint64_t seed) {
  const Dst tree(bench_config(d, universe_log, seed));
  // A random range needs about 2 log2(U) - 4 splits.
  const auto per_query = static_cast<std::uint64_t>(std::max(1, 2 * universe_log - 4));
  auto queries = random_queries(universe_log, min_splits / per_query + 1, seed + 1);
  double sink = 0.0;
  std::uint64_t splits = 0;
  run_batch(tree, queries, splits, sink);  // warmup
  while (splits < min_splits) {
    const auto more = random_queries(universe_log, queries.size() / 8 + 1,
                                     seed + queries.size());
    queries.insert(queries.end(), more.begin(), more.end());
    run_batch(tree, queries, splits, sink);
  }
  SplitTiming out;
  out.distribution = d;
  out.universe_log = universe_log;
  out.splits_per_batch = splits;
  for (int i = 0; i < kBatches; ++i) {
    const double ns = run_batch(tree, queries, splits, sink);
    out.batches.push_back(ns / static_cast<double>(splits));
  }
  out.ns_per_split = median(out.batches);
  g_sink = sink;
  return out;
}

std::vector<SplitTiming> compare_splits(int universe_log, std::uint64_t min_splits,
                                        std::uint64_t seed, int rounds) {
  const Distribution all[] = {Distribution::Gaussian, Distribution::Cauchy,
                              Distribution::RandomWalk};
  const auto per_query = static_cast<std::uint64_t>(std::max(1, 2 * universe_log - 4));
  const auto queries = random_queries(universe_log, min_splits / per_query + 1, seed + 1);
  std::vector<Dst> trees;
  std::vector<SplitTiming> out;
  double sink = 0.0;
  for (auto d : all) {
    trees.emplace_back(bench_config(d, universe_log, seed));
    SplitTiming t;
    t.distribution = d;
    t.universe_log = universe_log;
    run_batch(trees.back(), queries, t.splits_per_batch, sink);  // warmup
    out.push_back(t);
  }
  for (int r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < trees.size(); ++i) {
      const double ns = run_batch(trees[i], queries, out[i].splits_per_batch, sink);
      out[i].batches.push_back(ns / static_cast<double>(out[i].splits_per_batch));
    }
  }
  for (auto& t : out) t.ns_per_split = *std::min_element(t.batches.begin(), t.batches.end());
  g_sink = sink;
  return out;
}

std::vector<RangeTiming> time_range_sums(Distribution d, const std::vector<int>& ulogs,
                                         std::uint64_t queries, std::uint64_t seed) {
  std::vector<RangeTiming> out;
  double sink = 0.0;
  for (int L : ulogs) {
    const Dst tree(bench_config(d, L, seed));
    const auto qs = random_queries(L, queries, seed + static_cast<std::uint64_t>(L));
    std::uint64_t splits = 0;
    run_batch(tree, qs, splits, sink);
    std::vector<double> batches;
    for (int i = 0; i < kBatches; ++i) {
      batches.push_back(run_batch(tree, qs, splits, sink) / static_cast<double>(queries));
    }
    out.push_back({L, median(batches)});
  }
  g_sink = sink;
  return out;
}

}  // namespace rangesum::bench
