#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "samplemine/bigint.hpp"

namespace samplemine {

// Parameters of one approximation task: the K most frequent itemsets of size
// <= w, frequencies within eps, failure probability at most delta.
struct ApproxParams {
  std::uint64_t k = 0;
  std::uint32_t w = 0;
  double eps = 0.0;
  double delta = 0.0;

  void validate() const;  // throws std::invalid_argument
};

// Number of distinct non-empty itemsets of size <= w over n items:
// sum_{i=1..w} C(n, i), exact.  Requires 1 <= w <= n.
big_int universe_count(std::uint64_t n, std::uint32_t w);

// Real-valued sample size (2/eps^2) * ln((2m + K(m-K)) / delta): with this
// many independent draws, the mined top-K of the sample is an
// eps-approximation of the dataset's top-K with probability >= 1 - delta.
// Requires K <= m.
double sufficient_sample_size_real(const ApproxParams& p, const big_int& m);

// Ceiling of the above, the integer bound actually used.
std::uint64_t sufficient_sample_size(const ApproxParams& p, const big_int& m);

// Tail bounds for a fixed pair of itemsets whose true frequencies differ by
// at least eps, after t draws: `swap` bounds the probability that the lower
// one overtakes the higher in the sample; `deviation` bounds the probability
// that a fixed itemset's sample frequency misses its true one by >= eps.
// Both clamped to 1.
struct TailBounds {
  double swap;
  double deviation;
};
TailBounds tail_bounds(double eps, std::uint64_t t);

// Exact test of (sup_hi - sup_lo) / total > factor * eps, with eps read at its
// exact binary value.  Keeps stopping decisions free of floating-point ties.
bool frequency_gap_exceeds(std::uint64_t sup_hi, std::uint64_t sup_lo, std::uint64_t total,
                           std::uint64_t factor, double eps);

constexpr std::uint64_t kNoDatasetSize = std::numeric_limits<std::uint64_t>::max();

// The full multi-phase sampling plan for one task over one dataset.
struct PhaseSchedule {
  ApproxParams params;
  std::uint64_t universe_size = 0;
  big_int m;                       // universe_count(universe_size, w)
  std::uint64_t sufficient = 0;    // one-shot sample bound
  std::uint64_t dataset_size = kNoDatasetSize;
  std::uint64_t bound = 0;         // min(dataset_size, sufficient)
  double geometric_factor = 1.0;   // >= 1; 1 means the plain schedule
  std::uint32_t j_max = 0;         // smallest j with phase_size(j) >= bound

  // ceil((8/eps^2) * (ln(8K/delta) + j)), inflated to ceil(t_0 * g^j) when a
  // geometric factor g > 1 is configured.
  std::uint64_t phase_size(std::uint32_t j) const;
};

PhaseSchedule make_schedule(const ApproxParams& p, std::uint64_t universe_size,
                            std::uint64_t dataset_size = kNoDatasetSize,
                            double geometric_factor = 1.0);

// Rank-space bucket layout for phase j.  Bucket i covers canonical ranks
// [S[i-1]+1, S[i]] (S[-1] = 0), clipped to [1, m]; h is the last bucket index
// whose start rank still lies within the universe.  Values are exact until
// the running sum passes m; the final entry may be clamped to m when its
// exact value is astronomically beyond the universe.
struct BucketWidths {
  double sigma = 0.0;        // K * (e/2)^j, the phase's base width
  std::vector<big_int> s;    // s[i] = floor((2*sigma)^((i+1)^2) / 2), i = 0..h
  std::vector<big_int> S;    // prefix sums of s
  std::uint32_t h = 0;
};

BucketWidths bucket_widths(const PhaseSchedule& sched, std::uint32_t j);

}  // namespace samplemine
