#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>

#include "samplemine/cmsketch.hpp"
#include "samplemine/dataset.hpp"
#include "samplemine/miner.hpp"
#include "samplemine/progressive.hpp"
#include "samplemine/rng.hpp"
#include "samplemine/schedule.hpp"

namespace sm = samplemine;

namespace {

// Mildly skewed synthetic data: item i present with probability 0.6/(i+1)^0.85.
sm::TransactionDataset make_skewed(std::uint64_t seed, std::uint32_t n, std::uint64_t txns) {
  sm::TransactionDataset d;
  d.universe_size = n;
  d.transactions.reserve(txns);
  sm::Rng rng(seed);
  while (d.transactions.size() < txns) {
    sm::Transaction t;
    for (std::uint32_t i = 0; i < n; ++i) {
      const double p = 0.6 / std::pow(static_cast<double>(i + 1), 0.85);
      if (rng.unit() < p) t.push_back(i);
    }
    if (!t.empty()) d.transactions.push_back(std::move(t));
  }
  return d;
}

const sm::TransactionDataset& corpus() {
  static const sm::TransactionDataset d = make_skewed(17, 40, 5000);
  return d;
}

}  // namespace

static void BM_CountItemsets(benchmark::State& state) {
  const auto w = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    auto table = sm::count_itemsets(corpus(), w);
    benchmark::DoNotOptimize(table);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(corpus().size()));
}
BENCHMARK(BM_CountItemsets)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_SampleWithReplacement(benchmark::State& state) {
  const auto t = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto s = sm::sample_with_replacement(corpus(), t, seed++);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(t));
}
BENCHMARK(BM_SampleWithReplacement)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

static void BM_TopK(benchmark::State& state) {
  const auto table = sm::count_itemsets(corpus(), 2);
  for (auto _ : state) {
    auto r = sm::top_k(table, 25, 2, corpus().universe_size);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_TopK)->Unit(benchmark::kMicrosecond);

static void BM_FilterPopulate(benchmark::State& state) {
  const auto sample = sm::sample_with_replacement(corpus(), 1000, 3);
  const sm::big_int m = sm::universe_count(corpus().universe_size, 2);
  const auto cp = sm::cm_params(0.05, 0.05, sample, 2, m);
  for (auto _ : state) {
    sm::CountMinFilter f(cp.k_b, cp.c, 99);
    sm::cm_populate(f, sample, 2);
    benchmark::DoNotOptimize(f);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(cp.c_s));
}
BENCHMARK(BM_FilterPopulate)->Unit(benchmark::kMillisecond);

static void BM_BuildEnvelope(benchmark::State& state) {
  const auto sample = sm::sample_with_replacement(corpus(), 1000, 3);
  const sm::big_int m = sm::universe_count(corpus().universe_size, 2);
  const auto cp = sm::cm_params(0.05, 0.05, sample, 2, m);
  sm::CountMinFilter f(cp.k_b, cp.c, 99);
  sm::cm_populate(f, sample, 2);
  for (auto _ : state) {
    auto fh = sm::build_fhat(f, sample, 2, cp, m);
    benchmark::DoNotOptimize(fh);
  }
}
BENCHMARK(BM_BuildEnvelope)->Unit(benchmark::kMillisecond);

static void BM_ProgressiveRun(benchmark::State& state) {
  const auto d = sm::gen_planted_dataset(3, 300, 3000);
  const sm::PhaseSchedule sched =
      sm::make_schedule({6, 2, 0.25, 0.1}, d.universe_size, d.size());
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto out = sm::run_progressive(d, sched, seed++);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ProgressiveRun)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
