#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "samplemine/miner.hpp"
#include "samplemine/schedule.hpp"

namespace samplemine {

enum class Terminal {
  stopped_early,       // a phase's stopping rule fired before the bound
  hit_bound,           // mined one sample at the one-shot bound
  exhausted_dataset,   // the bound reached the dataset itself; result is exact
};

const char* to_string(Terminal t);

// Filter dimensions recorded when the sketch-based driver ran a phase.
struct CmPhaseInfo {
  std::uint64_t counters = 0;
  std::uint32_t groups = 0;
  std::uint64_t fhat_levels = 0;
};

struct PhaseTrace {
  std::uint32_t phase = 0;
  std::uint64_t sample_size = 0;
  bool evaluated = false;  // stopping rule checked this phase (false for the final fallback)
  bool stopped = false;
  std::vector<double> margins;  // per-i slack of the stopping rule, diagnostics only
  double elapsed_ms = 0.0;
  std::optional<CmPhaseInfo> cm;

  double min_margin() const;
};

struct MiningOutcome {
  TopKResult result;
  std::vector<PhaseTrace> trace;  // one entry per phase, in order
  Terminal terminal = Terminal::stopped_early;

  std::uint64_t final_sample_size() const {
    return trace.empty() ? 0 : trace.back().sample_size;
  }
};

struct StopCheck {
  bool satisfied = false;
  std::vector<double> margins;
};

// The phase-j stopping rule: for every bucket index i in 1..h(j), the sample's
// K-th frequency must exceed the frequency at rank S_j(i-1)+1 by more than
// (i+1)*eps.  Comparisons are exact (integer supports against eps's binary
// value); the returned margins are double-precision diagnostics.
StopCheck stopping_condition(const CountTable& sample_table, const PhaseSchedule& sched,
                             std::uint32_t j);

// Rank intervals [S_j(i-1)+1, S_j(i)] clipped to [1, m], i = 0..h(j).  The
// ground-truth table fixes the canonical order the ranks refer to; it must be
// non-empty.  Together the intervals cover [1, m] exactly once.
std::vector<std::pair<big_int, big_int>> bucketize(const CountTable& ground_truth,
                                                   const PhaseSchedule& sched, std::uint32_t j);

struct ProgressiveOptions {
  // Reuse the previous phase's sample and top it up instead of drawing fresh.
  // Cheaper, but the early-stop guarantee is proven for fresh per-phase
  // samples; extension is offered as a documented heuristic.
  bool extend = false;
  CountOptions count;
  std::function<void(const PhaseTrace&)> on_phase;  // progress reporting
};

// Multi-phase mining: grows samples along the schedule, stops as soon as a
// phase's stopping rule fires, and otherwise falls back to one sample at the
// bound (or to the full dataset when the bound reaches it).
MiningOutcome run_progressive(const TransactionDataset& d, const PhaseSchedule& sched,
                              std::uint64_t seed, const ProgressiveOptions& opts = {});

}  // namespace samplemine
