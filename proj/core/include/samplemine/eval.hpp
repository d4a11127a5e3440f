#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "samplemine/cmsketch.hpp"
#include "samplemine/miner.hpp"
#include "samplemine/progressive.hpp"
#include "samplemine/schedule.hpp"

namespace samplemine {

// Outcome of checking one candidate result against exact ground truth.  All
// three properties are decided in exact rational arithmetic:
//   size: the candidate carries at least K pairs;
//   p1:   every reported itemset's true frequency reaches f_D^(K) - eps;
//   p2:   nothing outside the candidate reaches f_D^(K) + eps;
//   p3:   every reported frequency is within eps of the true one.
struct ApproxVerdict {
  bool size_ok = false;
  bool p1_ok = false;
  bool p2_ok = false;
  bool p3_ok = false;
  double worst_p3_error = 0.0;
  double recovery_fraction = 0.0;  // |candidate ∩ exact top-K| / |exact top-K|
  bool exact_match = false;        // candidate itemset set == exact top-K itemset set
  std::vector<Itemset> violations; // up to a few offending itemsets, diagnostics

  bool ok() const { return size_ok && p1_ok && p2_ok && p3_ok; }
};

ApproxVerdict verify_approximation(const TopKResult& candidate, const CountTable& ground_truth,
                                   const ApproxParams& params, std::uint64_t universe_size);

struct TrialReport {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  ApproxVerdict verdict;
  std::uint64_t sample_size = 0;
  std::optional<Terminal> terminal;      // progressive runs only
  std::optional<std::uint32_t> phases;   // number of phases run
  double elapsed_ms = 0.0;
};

struct ExperimentSummary {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t exact_matches = 0;
  double success_rate = 0.0;
  double exact_match_rate = 0.0;
  double mean_worst_p3_error = 0.0;
  double max_worst_p3_error = 0.0;
  double mean_recovery_fraction = 0.0;
};

// Order-independent fold over the reports (reports are indexed by trial).
ExperimentSummary summarize(const std::vector<TrialReport>& reports);

// Full pass over the dataset, cached to a sidecar file when a path is given.
// The cache is keyed on a dataset content hash and w; stale or foreign caches
// are silently rebuilt.
CountTable load_or_build_ground_truth(const TransactionDataset& d, std::uint32_t w,
                                      const std::optional<std::string>& cache_path,
                                      const CountOptions& opts = {});

struct StaticExperimentResult {
  std::uint64_t sample_size = 0;  // the one-shot bound used for every trial
  std::vector<TrialReport> reports;
  ExperimentSummary summary;
  std::vector<std::string> warnings;
};

// `trials` one-shot runs: sample at the bound, mine, verify.  Trials run on
// `jobs` workers; trial i always uses the seed derived from (seed, i), so the
// outcome is independent of the worker count.
StaticExperimentResult run_static_experiment(const TransactionDataset& d,
                                             const CountTable& ground_truth,
                                             const ApproxParams& params, std::uint64_t trials,
                                             std::uint64_t seed, unsigned jobs = 1,
                                             const CountOptions& opts = {});

struct ProgressiveExperimentConfig {
  bool sketch = false;
  double eps_b = 0.0;             // 0 -> eps / 4
  double delta1 = 0.0;            // 0 -> 1 - sqrt(1 - delta)
  double geometric_factor = 1.0;
  bool extend = false;
};

struct ProgressiveExperimentResult {
  std::vector<TrialReport> reports;
  ExperimentSummary summary;
  std::uint64_t bound = 0;
  double stop_size_mean = 0.0;
  std::uint64_t stop_size_min = 0;
  std::uint64_t stop_size_max = 0;
  std::uint64_t stopped_early = 0;
  std::uint64_t hit_bound = 0;
  std::uint64_t exhausted = 0;
};

ProgressiveExperimentResult run_progressive_experiment(
    const TransactionDataset& d, const CountTable& ground_truth, const ApproxParams& params,
    std::uint64_t trials, std::uint64_t seed, const ProgressiveExperimentConfig& cfg = {},
    unsigned jobs = 1, const CountOptions& opts = {});

struct LowerboundConfig {
  std::uint64_t k = 0;
  std::uint64_t ell = 0;
  double p_k = 0.0;
  double eps = 0.0;
  std::uint64_t n_transactions = 0;
  std::vector<std::uint64_t> sizes;  // undersample sizes to probe
  std::uint64_t trials = 0;
  double delta = 0.1;  // completes the params for verification; unused by the checks
};

struct LowerboundPoint {
  std::uint64_t size = 0;
  std::uint64_t failures = 0;
  double failure_rate = 0.0;
};

struct LowerboundResult {
  std::vector<LowerboundPoint> curve;
  std::uint64_t sufficient = 0;  // the bound the probed sizes undercut
};

// Generates the planted-gap dataset once, then measures how often mining an
// undersized sample fails to be an eps-approximation, per probed size.
LowerboundResult run_lowerbound_experiment(const LowerboundConfig& cfg, std::uint64_t seed,
                                           unsigned jobs = 1);

}  // namespace samplemine
