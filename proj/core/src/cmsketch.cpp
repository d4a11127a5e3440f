#include "samplemine/cmsketch.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>

#include "samplemine/errors.hpp"
#include "samplemine/rng.hpp"

namespace samplemine {

namespace {

constexpr std::uint64_t kMersenne61 = (1ULL << 61) - 1;

std::uint64_t mod_mersenne61(__uint128_t x) {
  // fold twice: x < 2^122, each fold removes 61 bits
  std::uint64_t lo = static_cast<std::uint64_t>(x & kMersenne61);
  std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
  std::uint64_t r = lo + hi;
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

std::uint64_t itemset_fingerprint(const Itemset& x) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;  // arbitrary non-zero start
  for (item_id v : x) h = splitmix64(h ^ v);
  return h;
}

std::uint64_t total_occurrences(const TransactionDataset& sample, std::uint32_t w,
                                std::uint64_t budget) {
  std::uint64_t total = 0;
  for (const auto& t : sample.transactions) {
    const std::uint64_t c = subset_count(t.size(), w);
    if (c > budget - total) {
      throw resource_error("subset enumeration budget exceeded while sizing the filter");
    }
    total += c;
  }
  return total;
}

using clock = std::chrono::steady_clock;

double ms_since(clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
}

}  // namespace

CMParams cm_params(double eps_b, double delta_b, const TransactionDataset& sample,
                   std::uint32_t w, const big_int& m, std::uint64_t max_counters) {
  if (!(eps_b > 0.0) || !(eps_b < 1.0)) throw std::invalid_argument("eps_b must lie in (0, 1)");
  if (!(delta_b > 0.0) || !(delta_b < 1.0))
    throw std::invalid_argument("delta_b must lie in (0, 1)");
  if (w == 0) throw std::invalid_argument("w must be at least 1");
  if (sample.size() == 0) throw std::invalid_argument("empty sample");
  if (m < 1) throw std::invalid_argument("empty itemset universe");

  CMParams p;
  p.eps_b = eps_b;
  p.delta_b = delta_b;
  p.sample_size = sample.size();
  p.c_s = total_occurrences(sample, w, ~0ULL);
  if (p.c_s == 0) throw std::invalid_argument("sample contains no itemsets");
  p.eps_c = eps_b * static_cast<double>(p.sample_size) / static_cast<double>(p.c_s);

  using boost::multiprecision::ceil;
  using boost::multiprecision::log;
  // k_b = ceil(ln(m / delta_b)); m is exact, delta_b is read at its binary value
  const big_float ln_inv_dc = log(big_float(m) / big_float(delta_b));
  const big_float kb_f = ceil(ln_inv_dc);
  if (kb_f > big_float(1'000'000)) throw resource_error("filter would need too many hash groups");
  p.k_b = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(static_cast<big_int>(kb_f)));

  const big_float e = boost::math::constants::e<big_float>();
  const big_float per_group = ceil(e * big_float(p.c_s) /
                                   (big_float(eps_b) * big_float(p.sample_size)));
  if (per_group > big_float(static_cast<double>(max_counters)))
    throw resource_error("filter counter array would exceed the configured cap");
  p.c = static_cast<std::uint64_t>(static_cast<big_int>(per_group)) * p.k_b;
  if (p.c / p.k_b != static_cast<std::uint64_t>(static_cast<big_int>(per_group)) ||
      p.c > max_counters) {
    std::ostringstream msg;
    msg << "filter needs " << per_group << " counters x " << p.k_b
        << " groups, above the cap of " << max_counters;
    throw resource_error(msg.str());
  }
  return p;
}

CountMinFilter::CountMinFilter(std::uint32_t k_b, std::uint64_t c, std::uint64_t seed)
    : k_b_(k_b) {
  if (k_b == 0 || c == 0) throw std::invalid_argument("filter dimensions must be positive");
  if (c % k_b != 0) throw std::invalid_argument("counter count must be a multiple of the groups");
  width_ = c / k_b;
  counters_.assign(c, 0);
  Rng rng(seed);
  a_.resize(k_b);
  b_.resize(k_b);
  for (std::uint32_t g = 0; g < k_b; ++g) {
    a_[g] = 1 + rng.bounded(kMersenne61 - 1);  // a in [1, p-1]
    b_[g] = rng.bounded(kMersenne61);          // b in [0, p-1]
  }
}

std::uint64_t CountMinFilter::slot(std::uint32_t g, const Itemset& x) const {
  const std::uint64_t fp = itemset_fingerprint(x) % kMersenne61;
  const std::uint64_t h =
      mod_mersenne61(static_cast<__uint128_t>(a_[g]) * fp + b_[g]);
  return static_cast<std::uint64_t>(g) * width_ + h % width_;
}

void CountMinFilter::add(const Itemset& x) {
  for (std::uint32_t g = 0; g < k_b_; ++g) ++counters_[slot(g, x)];
}

std::uint64_t CountMinFilter::min_counter(const Itemset& x) const {
  std::uint64_t best = ~0ULL;
  for (std::uint32_t g = 0; g < k_b_; ++g) best = std::min(best, counters_[slot(g, x)]);
  return best;
}

std::uint64_t CountMinFilter::min_counter_index(const Itemset& x) const {
  std::uint64_t best_idx = slot(0, x);
  std::uint64_t best = counters_[best_idx];
  for (std::uint32_t g = 1; g < k_b_; ++g) {
    const std::uint64_t idx = slot(g, x);
    // strict comparison: ties stay at the lowest counter index, and group g's
    // slots all lie above group g-1's
    if (counters_[idx] < best) {
      best = counters_[idx];
      best_idx = idx;
    }
  }
  return best_idx;
}

std::uint64_t CountMinFilter::group_sum(std::uint32_t g) const {
  if (g >= k_b_) throw std::invalid_argument("no such group");
  std::uint64_t sum = 0;
  for (std::uint64_t i = g * width_; i < (g + 1) * width_; ++i) sum += counters_[i];
  return sum;
}

void cm_populate(CountMinFilter& f, const TransactionDataset& sample, std::uint32_t w,
                 const CountOptions& opts) {
  total_occurrences(sample, w, opts.max_enumerated);  // guard before the pass
  for (const auto& t : sample.transactions) {
    for_each_itemset(t, w, [&](const Itemset& x) { f.add(x); });
  }
}

double cm_frequency(const CountMinFilter& f, const Itemset& x, std::uint64_t sample_size) {
  if (sample_size == 0) throw std::invalid_argument("empty sample");
  return static_cast<double>(f.min_counter(x)) / static_cast<double>(sample_size);
}

FHatDistribution build_fhat(const CountMinFilter& f, const TransactionDataset& sample,
                            std::uint32_t w, const CMParams& params, const big_int& m,
                            const CountOptions& opts) {
  total_occurrences(sample, w, opts.max_enumerated);
  if (sample.size() != params.sample_size)
    throw std::invalid_argument("filter parameters were sized for a different sample");

  // v[l] = total occurrences of the itemsets whose min counter is l
  std::vector<std::uint64_t> v(f.size(), 0);
  for (const auto& t : sample.transactions) {
    for_each_itemset(t, w, [&](const Itemset& x) { ++v[f.min_counter_index(x)]; });
  }

  // eps_b * |S| compared exactly; value <= threshold makes the level's
  // multiplicity formula degenerate, in which case v itself bounds how many
  // itemsets share the level (every member contributes at least one occurrence)
  const big_rational slack = big_rational(params.eps_b) * big_int(params.sample_size);
  std::map<std::uint64_t, big_int, std::greater<>> merged;
  for (std::uint64_t l = 0; l < f.size(); ++l) {
    if (v[l] == 0) continue;
    const std::uint64_t value = f.counter(l);
    big_int r;
    if (big_rational(big_int(value)) > slack) {
      const big_rational q = big_rational(big_int(v[l])) / (big_rational(big_int(value)) - slack);
      r = boost::multiprecision::numerator(q) / boost::multiprecision::denominator(q);
    } else {
      r = big_int(v[l]);
    }
    if (r > m) r = m;
    merged[value] += r;
  }

  FHatDistribution fh;
  fh.sample_size = params.sample_size;
  fh.total_mass = 0;
  for (const auto& [value, mult] : merged) {
    fh.levels.push_back({value, mult});
    fh.total_mass += mult;
    fh.cumulative.push_back(fh.total_mass);
  }
  return fh;
}

std::uint64_t FHatDistribution::support_at(const big_int& rank) const {
  if (rank < 1) throw std::invalid_argument("rank is 1-based");
  if (rank > total_mass) return 0;
  const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), rank);
  return levels[static_cast<std::size_t>(it - cumulative.begin())].support_value;
}

double FHatDistribution::frequency_at(const big_int& rank) const {
  return sample_size == 0
             ? 0.0
             : static_cast<double>(support_at(rank)) / static_cast<double>(sample_size);
}

StopCheck cm_stopping_condition(std::uint64_t top_k_support, std::uint64_t sample_size,
                                const FHatDistribution& fhat, const PhaseSchedule& sched,
                                std::uint32_t j) {
  if (sample_size == 0) throw std::invalid_argument("empty sample");
  const BucketWidths bw = bucket_widths(sched, j);
  StopCheck check;
  check.satisfied = true;
  check.margins.reserve(bw.h);
  for (std::uint32_t i = 1; i <= bw.h; ++i) {
    const big_int rank = bw.S[i - 1] + 1;
    const std::uint64_t env = fhat.support_at(rank);
    const bool ok =
        frequency_gap_exceeds(top_k_support, env, sample_size, i + 1, sched.params.eps);
    check.satisfied = check.satisfied && ok;
    check.margins.push_back((static_cast<double>(top_k_support) - static_cast<double>(env)) /
                                static_cast<double>(sample_size) -
                            static_cast<double>(i + 1) * sched.params.eps);
  }
  return check;
}

DeltaSplit split_failure_budget(double delta, double delta1) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("delta must lie in (0, 1)");
  const double d1 = delta1 > 0.0 ? delta1 : 1.0 - std::sqrt(1.0 - delta);
  const double d2 = 1.0 - (1.0 - delta) / (1.0 - d1);
  if (!(d1 > 0.0) || !(d1 < 1.0) || !(d2 > 0.0) || !(d2 < 1.0))
    throw std::invalid_argument("failure-budget split leaves no room for both halves");
  return {d1, d2};
}

MiningOutcome run_progressive_cm(const TransactionDataset& d, const PhaseSchedule& sched,
                                 const CmDriverOptions& cm_opts, std::uint64_t seed,
                                 const ProgressiveOptions& opts) {
  if (sched.dataset_size != d.size())
    throw std::invalid_argument("schedule was built for a different dataset size");
  if (sched.universe_size != d.universe_size)
    throw std::invalid_argument("schedule was built for a different universe");
  if (!(cm_opts.eps_b > 0.0) || !(cm_opts.eps_b < 1.0))
    throw std::invalid_argument("eps_b must lie in (0, 1)");
  if (!(cm_opts.delta_b > 0.0) || !(cm_opts.delta_b < 1.0))
    throw std::invalid_argument("delta_b must lie in (0, 1)");

  MiningOutcome out;
  TransactionDataset sample;
  sample.universe_size = d.universe_size;
  CountTable table;
  Rng extend_rng(derive_seed(seed, 0));

  // sample streams match run_progressive's phase for phase, so a fixed master
  // seed pairs the two drivers on identical samples; hash seeds come from a
  // disjoint stream range
  auto grow_sample_to = [&](std::uint32_t stream, std::uint64_t t) {
    if (opts.extend) {
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

    const CMParams params = cm_params(cm_opts.eps_b, cm_opts.delta_b, sample, sched.params.w,
                                      sched.m, cm_opts.max_counters);
    CountMinFilter filter(params.k_b, params.c, derive_seed(seed, (1ULL << 32) + j));
    cm_populate(filter, sample, sched.params.w, opts.count);
    const FHatDistribution fhat =
        build_fhat(filter, sample, sched.params.w, params, sched.m, opts.count);

    const RankView view = make_rank_view(table);
    const std::uint64_t sup_k = view.support_at(big_int(sched.params.k));
    StopCheck check = cm_stopping_condition(sup_k, sample.size(), fhat, sched, j);

    PhaseTrace trace;
    trace.phase = j;
    trace.sample_size = sample.size();
    trace.evaluated = true;
    trace.stopped = check.satisfied;
    trace.margins = std::move(check.margins);
    trace.cm = CmPhaseInfo{params.c, params.k_b, fhat.levels.size()};
    trace.elapsed_ms = ms_since(t0);
    if (opts.on_phase) opts.on_phase(trace);
    out.trace.push_back(std::move(trace));
    if (out.trace.back().stopped) {
      out.result = top_k(table, sched.params.k, sched.params.w, d.universe_size);
      out.terminal = Terminal::stopped_early;
      return out;
    }
  }

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
