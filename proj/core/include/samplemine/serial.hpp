#pragma once

#include <iosfwd>

#include <json.hpp>

#include "samplemine/eval.hpp"
#include "samplemine/miner.hpp"
#include "samplemine/progressive.hpp"
#include "samplemine/schedule.hpp"

namespace samplemine {

// Every top-level JSON document carries this version so downstream consumers
// can detect format changes.
inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const TopKResult& r);
nlohmann::json to_json(const ApproxParams& p);
// Deterministic for a fixed seed: timings are deliberately left to the CSV.
nlohmann::json to_json(const MiningOutcome& o);
nlohmann::json to_json(const ApproxVerdict& v);
nlohmann::json to_json(const ExperimentSummary& s);

// Trace CSV: j, sample_size, stopped, min_margin, elapsed_ms.
void write_trace_csv(const std::vector<PhaseTrace>& trace, std::ostream& out);

// Per-trial CSV for experiment runs.
void write_trials_csv(const std::vector<TrialReport>& reports, std::ostream& out);

// Stop-size summary CSV: K, w, stop_size_mean, stop_size_min, bound.
void write_stop_size_csv(const ApproxParams& params, const ProgressiveExperimentResult& r,
                         std::ostream& out);

// Undersampling curve CSV: size, failure_rate.
void write_lowerbound_csv(const LowerboundResult& r, std::ostream& out);

}  // namespace samplemine
