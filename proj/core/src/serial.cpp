#include "samplemine/serial.hpp"

#include <ostream>

namespace samplemine {

using nlohmann::json;

json to_json(const TopKResult& r) {
  json pairs = json::array();
  for (const auto& e : r.entries) {
    pairs.push_back({{"items", e.items},
                     {"support", e.support},
                     {"frequency", r.total ? static_cast<double>(e.support) / r.total : 0.0}});
  }
  return {{"pairs", std::move(pairs)},
          {"total", r.total},
          {"threshold", r.threshold()},
          {"deficient", r.deficient}};
}

json to_json(const ApproxParams& p) {
  return {{"k", p.k}, {"w", p.w}, {"eps", p.eps}, {"delta", p.delta}};
}

json to_json(const MiningOutcome& o) {
  json trace = json::array();
  for (const auto& t : o.trace) {
    json entry = {{"phase", t.phase},
                  {"sample_size", t.sample_size},
                  {"evaluated", t.evaluated},
                  {"stopped", t.stopped},
                  {"margins", t.margins}};
    if (t.cm) {
      entry["filter"] = {{"counters", t.cm->counters},
                         {"groups", t.cm->groups},
                         {"envelope_levels", t.cm->fhat_levels}};
    }
    trace.push_back(std::move(entry));
  }
  return {{"result", to_json(o.result)},
          {"terminal", to_string(o.terminal)},
          {"trace", std::move(trace)}};
}

json to_json(const ApproxVerdict& v) {
  return {{"ok", v.ok()},
          {"size_ok", v.size_ok},
          {"p1_ok", v.p1_ok},
          {"p2_ok", v.p2_ok},
          {"p3_ok", v.p3_ok},
          {"worst_p3_error", v.worst_p3_error},
          {"recovery_fraction", v.recovery_fraction},
          {"exact_match", v.exact_match}};
}

json to_json(const ExperimentSummary& s) {
  return {{"trials", s.trials},
          {"successes", s.successes},
          {"success_rate", s.success_rate},
          {"exact_matches", s.exact_matches},
          {"exact_match_rate", s.exact_match_rate},
          {"mean_worst_p3_error", s.mean_worst_p3_error},
          {"max_worst_p3_error", s.max_worst_p3_error},
          {"mean_recovery_fraction", s.mean_recovery_fraction}};
}

void write_trace_csv(const std::vector<PhaseTrace>& trace, std::ostream& out) {
  out << "j,sample_size,stopped,min_margin,elapsed_ms\n";
  for (const auto& t : trace) {
    out << t.phase << ',' << t.sample_size << ',' << (t.stopped ? 1 : 0) << ',';
    if (t.margins.empty())
      out << "";
    else
      out << t.min_margin();
    out << ',' << t.elapsed_ms << '\n';
  }
}

void write_trials_csv(const std::vector<TrialReport>& reports, std::ostream& out) {
  out << "trial,seed,ok,p1,p2,p3,size_ok,worst_p3_error,recovery_fraction,exact_match,"
         "sample_size,terminal,phases,elapsed_ms\n";
  for (const auto& r : reports) {
    out << r.trial << ',' << r.seed << ',' << r.verdict.ok() << ',' << r.verdict.p1_ok << ','
        << r.verdict.p2_ok << ',' << r.verdict.p3_ok << ',' << r.verdict.size_ok << ','
        << r.verdict.worst_p3_error << ',' << r.verdict.recovery_fraction << ','
        << r.verdict.exact_match << ',' << r.sample_size << ','
        << (r.terminal ? to_string(*r.terminal) : "") << ','
        << (r.phases ? std::to_string(*r.phases) : "") << ',' << r.elapsed_ms << '\n';
  }
}

void write_stop_size_csv(const ApproxParams& params, const ProgressiveExperimentResult& r,
                         std::ostream& out) {
  out << "K,w,stop_size_mean,stop_size_min,bound\n";
  out << params.k << ',' << params.w << ',' << r.stop_size_mean << ',' << r.stop_size_min << ','
      << r.bound << '\n';
}

void write_lowerbound_csv(const LowerboundResult& r, std::ostream& out) {
  out << "size,failure_rate\n";
  for (const auto& p : r.curve) out << p.size << ',' << p.failure_rate << '\n';
}

}  // namespace samplemine
