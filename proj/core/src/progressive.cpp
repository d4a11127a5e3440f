#include "samplemine/progressive.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>

#include "samplemine/rng.hpp"

namespace samplemine {

namespace {

using clock = std::chrono::steady_clock;

double ms_since(clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
}

void check_compatible(const TransactionDataset& d, const PhaseSchedule& sched) {
  if (sched.dataset_size != d.size())
    throw std::invalid_argument("schedule was built for a different dataset size");
  if (sched.universe_size != d.universe_size)
    throw std::invalid_argument("schedule was built for a different universe");
}

}  // namespace

const char* to_string(Terminal t) {
  switch (t) {
    case Terminal::stopped_early: return "stopped_early";
    case Terminal::hit_bound: return "hit_bound";
    case Terminal::exhausted_dataset: return "exhausted_dataset";
  }
  return "unknown";
}

double PhaseTrace::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : margins) m = std::min(m, v);
  return m;
}

StopCheck stopping_condition(const CountTable& sample_table, const PhaseSchedule& sched,
                             std::uint32_t j) {
  if (sample_table.total == 0) throw std::invalid_argument("empty sample table");
  const BucketWidths bw = bucket_widths(sched, j);
  const RankView view = make_rank_view(sample_table);
  const std::uint64_t sup_k = view.support_at(big_int(sched.params.k));
  const double f_k = view.frequency_at(big_int(sched.params.k));

  StopCheck check;
  check.satisfied = true;
  check.margins.reserve(bw.h);
  for (std::uint32_t i = 1; i <= bw.h; ++i) {
    const big_int rank = bw.S[i - 1] + 1;  // <= m by the definition of h
    const std::uint64_t sup_r = view.support_at(rank);
    const bool ok = frequency_gap_exceeds(sup_k, sup_r, sample_table.total, i + 1,
                                          sched.params.eps);
    check.satisfied = check.satisfied && ok;
    const double f_r = view.frequency_at(rank);
    check.margins.push_back(f_k - f_r - static_cast<double>(i + 1) * sched.params.eps);
  }
  return check;
}

std::vector<std::pair<big_int, big_int>> bucketize(const CountTable& ground_truth,
                                                   const PhaseSchedule& sched,
                                                   std::uint32_t j) {
  if (ground_truth.total == 0) throw std::invalid_argument("empty ground-truth table");
  const BucketWidths bw = bucket_widths(sched, j);
  std::vector<std::pair<big_int, big_int>> intervals;
  intervals.reserve(bw.h + 1);
  big_int lo = 1;
  for (std::uint32_t i = 0; i <= bw.h; ++i) {
    const big_int hi = bw.S[i] < sched.m ? bw.S[i] : sched.m;
    intervals.emplace_back(lo, hi);
    lo = hi + 1;
  }
  return intervals;
}

MiningOutcome run_progressive(const TransactionDataset& d, const PhaseSchedule& sched,
                              std::uint64_t seed, const ProgressiveOptions& opts) {
  check_compatible(d, sched);
  MiningOutcome out;

  TransactionDataset sample;
  sample.universe_size = d.universe_size;
  CountTable table;
  Rng extend_rng(derive_seed(seed, 0));

  auto grow_sample_to = [&](std::uint32_t stream, std::uint64_t t) {
    if (opts.extend) {
      // one continuous stream; earlier draws stay in place
      const std::uint64_t from = sample.size();
      for (std::uint64_t i = from; i < t; ++i)
        sample.transactions.push_back(d.transactions[extend_rng.bounded(d.size())]);
      count_itemsets_into(table, sample, from, t, sched.params.w, opts.count);
    } else {
      sample = sample_with_replacement(d, t, derive_seed(seed, stream));
      table = CountTable{};
      count_itemsets_into(table, sample, 0, t, sched.params.w, opts.count);
    }
  };

  for (std::uint32_t j = 0; j < sched.j_max; ++j) {
    const auto t0 = clock::now();
    grow_sample_to(j, sched.phase_size(j));
    StopCheck check = stopping_condition(table, sched, j);
    PhaseTrace trace;
    trace.phase = j;
    trace.sample_size = sample.size();
    trace.evaluated = true;
    trace.stopped = check.satisfied;
    trace.margins = std::move(check.margins);
    trace.elapsed_ms = ms_since(t0);
    if (opts.on_phase) opts.on_phase(trace);
    out.trace.push_back(std::move(trace));
    if (out.trace.back().stopped) {
      out.result = top_k(table, sched.params.k, sched.params.w, d.universe_size);
      out.terminal = Terminal::stopped_early;
      return out;
    }
  }

  // no phase stopped: one sample at the bound, or the dataset itself
  const auto t0 = clock::now();
  PhaseTrace trace;
  trace.phase = sched.j_max;
  if (sched.bound < d.size()) {
    grow_sample_to(sched.j_max, sched.bound);
    out.result = top_k(table, sched.params.k, sched.params.w, d.universe_size);
    out.terminal = Terminal::hit_bound;
    trace.sample_size = sample.size();
  } else {
    CountTable full = count_itemsets(d, sched.params.w, opts.count);
    out.result = top_k(full, sched.params.k, sched.params.w, d.universe_size);
    out.terminal = Terminal::exhausted_dataset;
    trace.sample_size = d.size();
  }
  trace.elapsed_ms = ms_since(t0);
  if (opts.on_phase) opts.on_phase(trace);
  out.trace.push_back(std::move(trace));
  return out;
}

}  // namespace samplemine
