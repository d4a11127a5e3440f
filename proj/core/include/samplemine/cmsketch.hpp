#pragma once

#include <cstdint>
#include <vector>

#include "samplemine/bigint.hpp"
#include "samplemine/dataset.hpp"
#include "samplemine/miner.hpp"
#include "samplemine/progressive.hpp"
#include "samplemine/schedule.hpp"

namespace samplemine {

// Sizing of the counting filter for one sample.  Derived so that, with
// probability >= 1 - delta_b, no itemset's filter estimate overshoots its
// sample frequency by eps_b or more.
struct CMParams {
  double eps_b = 0.0;        // additive frequency slack of the filter
  double delta_b = 0.0;      // failure budget for the whole itemset universe
  double eps_c = 0.0;        // per-counter slack: eps_b * |S| / C_S
  std::uint64_t c_s = 0;     // total itemset occurrences in the sample
  std::uint64_t sample_size = 0;
  std::uint32_t k_b = 0;     // hash groups: ceil(ln(m / delta_b))
  std::uint64_t c = 0;       // total counters: k_b * ceil(e / eps_c)
};

// Upper limit on counter-array size; derived filters above it raise
// resource_error rather than allocating silently (2^26 counters = 512 MiB of
// u64 plus the same again transiently while building the envelope).
inline constexpr std::uint64_t kDefaultMaxCounters = 1ULL << 26;

CMParams cm_params(double eps_b, double delta_b, const TransactionDataset& sample,
                   std::uint32_t w, const big_int& m,
                   std::uint64_t max_counters = kDefaultMaxCounters);

// Counting filter with k_b hash groups over disjoint counter ranges of width
// c / k_b.  Each group hashes with an independent pairwise-independent
// function ((a*fp + b) mod p) mod width, p = 2^61 - 1, seeded deterministically.
// An itemset's estimate is the minimum of its k_b counters and never
// undershoots its true count.
class CountMinFilter {
 public:
  CountMinFilter(std::uint32_t k_b, std::uint64_t c, std::uint64_t seed);

  void add(const Itemset& x);
  std::uint64_t min_counter(const Itemset& x) const;
  // Position of the minimum counter (ties resolve to the lowest index); this
  // fixes which level an itemset contributes to in the second pass.
  std::uint64_t min_counter_index(const Itemset& x) const;

  std::uint64_t counter(std::uint64_t i) const { return counters_[i]; }
  std::uint64_t group_sum(std::uint32_t g) const;
  std::uint32_t groups() const { return k_b_; }
  std::uint64_t size() const { return counters_.size(); }
  std::uint64_t group_width() const { return width_; }

 private:
  std::uint64_t slot(std::uint32_t g, const Itemset& x) const;

  std::uint32_t k_b_;
  std::uint64_t width_;
  std::vector<std::uint64_t> counters_;
  std::vector<std::uint64_t> a_, b_;  // per-group hash coefficients
};

// First pass: every (transaction, contained itemset) occurrence of the sample
// bumps the itemset's k_b counters.  Afterwards every group's counters sum to
// C_S.
void cm_populate(CountMinFilter& f, const TransactionDataset& sample, std::uint32_t w,
                 const CountOptions& opts = {});

// min-counter estimate as a frequency; >= the itemset's sample frequency.
double cm_frequency(const CountMinFilter& f, const Itemset& x, std::uint64_t sample_size);

// A compact upper envelope of the sample's frequency-by-rank profile, built
// from the filter alone plus one more streaming pass.  Level values are
// counter values; multiplicities bound how many itemsets can live at each
// level (capped at the universe count m).
struct FHatDistribution {
  struct Level {
    std::uint64_t support_value = 0;  // shared min-counter value of the level
    big_int multiplicity;             // rank mass granted to the level
  };
  std::vector<Level> levels;  // sorted by support_value descending
  std::vector<big_int> cumulative;
  std::uint64_t sample_size = 0;
  big_int total_mass;

  std::uint64_t support_at(const big_int& rank) const;  // 1-based; 0 past total_mass
  double frequency_at(const big_int& rank) const;
};

FHatDistribution build_fhat(const CountMinFilter& f, const TransactionDataset& sample,
                            std::uint32_t w, const CMParams& params, const big_int& m,
                            const CountOptions& opts = {});

// The sketch-side stopping rule: like stopping_condition, but ranks past K are
// read from the envelope instead of the exact table.  Since the envelope
// never underestimates, this rule firing implies the exact rule fires on the
// same sample.
StopCheck cm_stopping_condition(std::uint64_t top_k_support, std::uint64_t sample_size,
                                const FHatDistribution& fhat, const PhaseSchedule& sched,
                                std::uint32_t j);

// Failure-budget split between the phase schedule and the counting filters:
// (1 - schedule)(1 - filter) = 1 - delta, so one schedule failure budget plus
// one filter budget spent per run compose to the caller's overall delta.
// delta1 = 0 selects the symmetric split 1 - sqrt(1 - delta).
struct DeltaSplit {
  double schedule = 0.0;
  double filter = 0.0;
};
DeltaSplit split_failure_budget(double delta, double delta1 = 0.0);

struct CmDriverOptions {
  double eps_b = 0.0;    // filter slack, typically eps / 4
  double delta_b = 0.0;  // per-phase filter failure budget (the second split of delta)
  std::uint64_t max_counters = kDefaultMaxCounters;
};

// Multi-phase driver that sizes, fills, and consults a counting filter per
// phase instead of ranking the exact table's tail.  The schedule must be built
// with the first split of the caller's overall failure budget; opts.delta_b
// carries the second split.  Exact mining of the sample still provides the
// returned top-K (the filter only powers the stopping rule).
MiningOutcome run_progressive_cm(const TransactionDataset& d, const PhaseSchedule& sched,
                                 const CmDriverOptions& cm_opts, std::uint64_t seed,
                                 const ProgressiveOptions& opts = {});

}  // namespace samplemine
