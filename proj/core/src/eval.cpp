#include "samplemine/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "samplemine/errors.hpp"
#include "samplemine/rng.hpp"

namespace samplemine {

namespace {

using clock = std::chrono::steady_clock;

double ms_since(clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
}

// |a/b - c/d| <= eps, exactly
bool within_eps(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d, double eps) {
  const big_rational lhs =
      boost::multiprecision::abs(big_rational(big_int(a), big_int(b)) -
                                 big_rational(big_int(c), big_int(d)));
  return lhs <= big_rational(eps);
}

void run_indexed(std::uint64_t n, unsigned jobs, const std::function<void(std::uint64_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mu;
  const unsigned count = static_cast<unsigned>(std::min<std::uint64_t>(jobs, n));
  for (unsigned t = 0; t < count; ++t) {
    workers.emplace_back([&] {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t dataset_hash(const TransactionDataset& d) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(d.universe_size);
  mix(d.size());
  for (const auto& t : d.transactions) {
    mix(t.size());
    for (item_id v : t) mix(v);
  }
  return h;
}

constexpr char kCacheMagic[4] = {'S', 'M', 'G', 'T'};
constexpr std::uint32_t kCacheVersion = 1;

bool try_load_cache(const std::string& path, std::uint32_t w, std::uint64_t hash,
                    CountTable& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[4];
  std::uint32_t version = 0, file_w = 0;
  std::uint64_t file_hash = 0, total = 0, entries = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&file_w), sizeof file_w);
  in.read(reinterpret_cast<char*>(&file_hash), sizeof file_hash);
  in.read(reinterpret_cast<char*>(&total), sizeof total);
  in.read(reinterpret_cast<char*>(&entries), sizeof entries);
  if (!in || std::memcmp(magic, kCacheMagic, 4) != 0 || version != kCacheVersion ||
      file_w != w || file_hash != hash) {
    return false;
  }
  CountTable table;
  table.total = total;
  table.support.reserve(entries);
  for (std::uint64_t i = 0; i < entries; ++i) {
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof len);
    if (!in || len == 0 || len > 1'000'000) return false;
    Itemset items(len);
    in.read(reinterpret_cast<char*>(items.data()), len * sizeof(item_id));
    std::uint64_t support = 0;
    in.read(reinterpret_cast<char*>(&support), sizeof support);
    if (!in) return false;
    table.support.emplace(std::move(items), support);
  }
  out = std::move(table);
  return true;
}

void save_cache(const std::string& path, std::uint32_t w, std::uint64_t hash,
                const CountTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return;  // cache write failures are non-fatal
  out.write(kCacheMagic, 4);
  out.write(reinterpret_cast<const char*>(&kCacheVersion), sizeof kCacheVersion);
  out.write(reinterpret_cast<const char*>(&w), sizeof w);
  out.write(reinterpret_cast<const char*>(&hash), sizeof hash);
  out.write(reinterpret_cast<const char*>(&table.total), sizeof table.total);
  const std::uint64_t entries = table.support.size();
  out.write(reinterpret_cast<const char*>(&entries), sizeof entries);
  for (const auto& [items, support] : table.support) {
    const std::uint32_t len = static_cast<std::uint32_t>(items.size());
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(reinterpret_cast<const char*>(items.data()), len * sizeof(item_id));
    out.write(reinterpret_cast<const char*>(&support), sizeof support);
  }
}

}  // namespace

ApproxVerdict verify_approximation(const TopKResult& candidate, const CountTable& ground_truth,
                                   const ApproxParams& params, std::uint64_t universe_size) {
  params.validate();
  if (ground_truth.total == 0) throw std::invalid_argument("empty ground truth");
  const TopKResult exact = top_k(ground_truth, params.k, params.w, universe_size);
  const RankView truth_view = make_rank_view(ground_truth);
  const std::uint64_t sup_dk = truth_view.support_at(big_int(params.k));
  const std::uint64_t td = ground_truth.total;
  const big_rational eps_r(params.eps);  // exact binary value
  const big_rational f_dk{big_int(sup_dk), big_int(td)};

  ApproxVerdict v;
  v.size_ok = candidate.entries.size() >= params.k;

  std::unordered_set<Itemset, ItemsetHash> in_candidate;
  in_candidate.reserve(candidate.entries.size());
  for (const auto& e : candidate.entries) in_candidate.insert(e.items);

  // P1 and P3 quantify over the candidate's pairs
  v.p1_ok = true;
  v.p3_ok = true;
  v.worst_p3_error = 0.0;
  for (const auto& e : candidate.entries) {
    const std::uint64_t sup_d = ground_truth.support_of(e.items);
    const big_rational f_d{big_int(sup_d), big_int(td)};
    if (f_d < f_dk - eps_r) {
      v.p1_ok = false;
      if (v.violations.size() < 8) v.violations.push_back(e.items);
    }
    if (candidate.total == 0) throw std::invalid_argument("candidate carries no sample size");
    if (!within_eps(e.support, candidate.total, sup_d, td, params.eps)) {
      v.p3_ok = false;
      if (v.violations.size() < 8) v.violations.push_back(e.items);
    }
    const double err = std::abs(static_cast<double>(e.support) / candidate.total -
                                static_cast<double>(sup_d) / td);
    v.worst_p3_error = std::max(v.worst_p3_error, err);
  }

  // P2 by contraposition: only itemsets at or above f_D^(K) + eps can violate
  // it, and those all occur in the ground-truth table
  v.p2_ok = true;
  for (const auto& [items, sup_d] : ground_truth.support) {
    const big_rational f_d{big_int(sup_d), big_int(td)};
    if (f_d >= f_dk + eps_r && !in_candidate.count(items)) {
      v.p2_ok = false;
      if (v.violations.size() < 8) v.violations.push_back(items);
    }
  }

  std::uint64_t recovered = 0;
  for (const auto& e : exact.entries) {
    if (in_candidate.count(e.items)) ++recovered;
  }
  v.recovery_fraction =
      exact.entries.empty() ? 1.0 : static_cast<double>(recovered) / exact.entries.size();
  v.exact_match = in_candidate.size() == exact.entries.size() && recovered == exact.entries.size();
  return v;
}

ExperimentSummary summarize(const std::vector<TrialReport>& reports) {
  ExperimentSummary s;
  s.trials = reports.size();
  double err_sum = 0.0, rec_sum = 0.0;
  for (const auto& r : reports) {
    if (r.verdict.ok()) ++s.successes;
    if (r.verdict.exact_match) ++s.exact_matches;
    err_sum += r.verdict.worst_p3_error;
    rec_sum += r.verdict.recovery_fraction;
    s.max_worst_p3_error = std::max(s.max_worst_p3_error, r.verdict.worst_p3_error);
  }
  if (s.trials) {
    s.success_rate = static_cast<double>(s.successes) / s.trials;
    s.exact_match_rate = static_cast<double>(s.exact_matches) / s.trials;
    s.mean_worst_p3_error = err_sum / s.trials;
    s.mean_recovery_fraction = rec_sum / s.trials;
  }
  return s;
}

CountTable load_or_build_ground_truth(const TransactionDataset& d, std::uint32_t w,
                                      const std::optional<std::string>& cache_path,
                                      const CountOptions& opts) {
  if (!cache_path) return count_itemsets(d, w, opts);
  const std::uint64_t hash = dataset_hash(d);
  CountTable table;
  if (try_load_cache(*cache_path, w, hash, table)) return table;
  table = count_itemsets(d, w, opts);
  save_cache(*cache_path, w, hash, table);
  return table;
}

StaticExperimentResult run_static_experiment(const TransactionDataset& d,
                                             const CountTable& ground_truth,
                                             const ApproxParams& params, std::uint64_t trials,
                                             std::uint64_t seed, unsigned jobs,
                                             const CountOptions& opts) {
  params.validate();
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  StaticExperimentResult res;
  const big_int m = universe_count(d.universe_size, params.w);
  res.sample_size = sufficient_sample_size(params, m);
  if (res.sample_size > d.size()) {
    std::ostringstream msg;
    msg << "one-shot bound " << res.sample_size << " exceeds the dataset size " << d.size()
        << "; mining the dataset directly would be exact and cheaper";
    res.warnings.push_back(msg.str());
  }
  res.reports.resize(trials);
  run_indexed(trials, jobs, [&](std::uint64_t i) {
    const auto t0 = clock::now();
    TrialReport r;
    r.trial = i;
    r.seed = derive_seed(seed, i);
    const TransactionDataset sample = sample_with_replacement(d, res.sample_size, r.seed);
    const CountTable table = count_itemsets(sample, params.w, opts);
    const TopKResult mined = top_k(table, params.k, params.w, d.universe_size);
    r.verdict = verify_approximation(mined, ground_truth, params, d.universe_size);
    r.sample_size = res.sample_size;
    r.elapsed_ms = ms_since(t0);
    res.reports[i] = std::move(r);
  });
  res.summary = summarize(res.reports);
  return res;
}

ProgressiveExperimentResult run_progressive_experiment(
    const TransactionDataset& d, const CountTable& ground_truth, const ApproxParams& params,
    std::uint64_t trials, std::uint64_t seed, const ProgressiveExperimentConfig& cfg,
    unsigned jobs, const CountOptions& opts) {
  params.validate();
  if (trials == 0) throw std::invalid_argument("need at least one trial");

  ApproxParams sched_params = params;
  CmDriverOptions cm;
  if (cfg.sketch) {
    const DeltaSplit split = split_failure_budget(params.delta, cfg.delta1);
    sched_params.delta = split.schedule;
    cm.delta_b = split.filter;
    cm.eps_b = cfg.eps_b > 0.0 ? cfg.eps_b : params.eps / 4.0;
  }
  const PhaseSchedule sched =
      make_schedule(sched_params, d.universe_size, d.size(), cfg.geometric_factor);

  ProgressiveExperimentResult res;
  res.bound = sched.bound;
  res.reports.resize(trials);
  run_indexed(trials, jobs, [&](std::uint64_t i) {
    const auto t0 = clock::now();
    TrialReport r;
    r.trial = i;
    r.seed = derive_seed(seed, i);
    ProgressiveOptions popts;
    popts.extend = cfg.extend;
    popts.count = opts;
    const MiningOutcome out = cfg.sketch ? run_progressive_cm(d, sched, cm, r.seed, popts)
                                         : run_progressive(d, sched, r.seed, popts);
    r.verdict = verify_approximation(out.result, ground_truth, params, d.universe_size);
    r.sample_size = out.final_sample_size();
    r.terminal = out.terminal;
    r.phases = static_cast<std::uint32_t>(out.trace.size());
    r.elapsed_ms = ms_since(t0);
    res.reports[i] = std::move(r);
  });
  res.summary = summarize(res.reports);

  res.stop_size_min = ~0ULL;
  double sum = 0.0;
  for (const auto& r : res.reports) {
    sum += static_cast<double>(r.sample_size);
    res.stop_size_min = std::min(res.stop_size_min, r.sample_size);
    res.stop_size_max = std::max(res.stop_size_max, r.sample_size);
    switch (*r.terminal) {
      case Terminal::stopped_early: ++res.stopped_early; break;
      case Terminal::hit_bound: ++res.hit_bound; break;
      case Terminal::exhausted_dataset: ++res.exhausted; break;
    }
  }
  res.stop_size_mean = sum / static_cast<double>(trials);
  return res;
}

LowerboundResult run_lowerbound_experiment(const LowerboundConfig& cfg, std::uint64_t seed,
                                           unsigned jobs) {
  if (cfg.sizes.empty()) throw std::invalid_argument("no undersample sizes given");
  if (cfg.trials == 0) throw std::invalid_argument("need at least one trial");
  const TransactionDataset d = gen_lowerbound_dataset(cfg.k, cfg.ell, cfg.p_k, cfg.eps,
                                                      cfg.n_transactions, derive_seed(seed, 0));
  const ApproxParams params{cfg.k, 1, cfg.eps, cfg.delta};
  params.validate();
  const CountTable truth = count_itemsets(d, 1);

  LowerboundResult res;
  res.sufficient = sufficient_sample_size(params, universe_count(d.universe_size, 1));
  res.curve.resize(cfg.sizes.size());
  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    const std::uint64_t size = cfg.sizes[si];
    if (size == 0) throw std::invalid_argument("undersample size must be positive");
    std::vector<std::uint8_t> failed(cfg.trials, 0);
    run_indexed(cfg.trials, jobs, [&](std::uint64_t t) {
      const std::uint64_t s = derive_seed(seed, 1 + si * cfg.trials + t);
      const TransactionDataset sample = sample_with_replacement(d, size, s);
      const CountTable table = count_itemsets(sample, 1);
      const TopKResult mined = top_k(table, cfg.k, 1, d.universe_size);
      failed[t] = verify_approximation(mined, truth, params, d.universe_size).ok() ? 0 : 1;
    });
    LowerboundPoint p;
    p.size = size;
    for (auto f : failed) p.failures += f;
    p.failure_rate = static_cast<double>(p.failures) / static_cast<double>(cfg.trials);
    res.curve[si] = p;
  }
  return res;
}

}  // namespace samplemine
