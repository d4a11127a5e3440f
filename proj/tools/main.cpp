// samplemine: approximate top-K frequent itemset mining from random samples.
//
// Subcommands wire the library into batch workflows; all of them print one
// JSON document (stdout or --output) plus a short human summary on stderr.
// No mining or schedule math lives here.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "samplemine/cmsketch.hpp"
#include "samplemine/dataset.hpp"
#include "samplemine/errors.hpp"
#include "samplemine/eval.hpp"
#include "samplemine/miner.hpp"
#include "samplemine/progressive.hpp"
#include "samplemine/rng.hpp"
#include "samplemine/schedule.hpp"
#include "samplemine/serial.hpp"

namespace sm = samplemine;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::string output;   // JSON sink; empty = stdout
  bool progress = false;
};

// Relative paths that do not resolve from the working directory fall back to
// $SAMPLEMINE_DATA_DIR, so batch scripts can keep datasets in one place.
std::string resolve_dataset_path(const std::string& given) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::exists(given, ec)) return given;
  const fs::path p(given);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("SAMPLEMINE_DATA_DIR")) {
      fs::path alt = fs::path(dir) / p;
      if (fs::exists(alt, ec)) return alt.string();
    }
  }
  return given;  // let the loader report the original path
}

sm::TransactionDataset load_dataset(const std::string& given) {
  return sm::load_fimi(resolve_dataset_path(given));
}

void emit_json(const json& doc, const GlobalOpts& g) {
  const std::string text = doc.dump(2) + "\n";
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output);
  if (!out) throw sm::data_error("cannot open output file: " + g.output);
  out << text;
  if (!out) throw sm::data_error("write failed: " + g.output);
}

template <typename WriteFn>
void emit_csv(const std::string& path, WriteFn&& write) {
  std::ofstream out(path);
  if (!out) throw sm::data_error("cannot open output file: " + path);
  write(out);
  if (!out) throw sm::data_error("write failed: " + path);
}

json dataset_json(const std::string& path, const sm::TransactionDataset& d) {
  return json{{"path", path},
              {"transactions", d.size()},
              {"universe_size", d.universe_size}};
}

json params_json(const sm::ApproxParams& p) { return sm::to_json(p); }

json schedule_json(const sm::PhaseSchedule& sched) {
  json phases = json::array();
  for (std::uint32_t j = 0; j <= sched.j_max; ++j) {
    const sm::BucketWidths bw = sm::bucket_widths(sched, j);
    phases.push_back(json{{"j", j},
                          {"size", sched.phase_size(j)},
                          {"sigma", bw.sigma},
                          {"buckets", bw.h + 1}});
  }
  json doc{{"m", sched.m.str()},
           {"sufficient", sched.sufficient},
           {"bound", sched.bound},
           {"j_max", sched.j_max},
           {"geometric_factor", sched.geometric_factor},
           {"phases", std::move(phases)}};
  if (sched.dataset_size != sm::kNoDatasetSize) doc["dataset_size"] = sched.dataset_size;
  return doc;
}

json tail_json(double eps, std::uint64_t t) {
  const sm::TailBounds tb = sm::tail_bounds(eps, t);
  return json{{"swap", tb.swap}, {"deviation", tb.deviation}};
}

void progress_line(const sm::PhaseTrace& t) {
  std::fprintf(stderr, "[phase %u] sample_size=%llu %s\n", t.phase,
               static_cast<unsigned long long>(t.sample_size),
               !t.evaluated       ? "final (no stop check)"
               : t.stopped        ? "stopping rule satisfied"
                                  : "stopping rule not satisfied");
}

sm::ProgressiveOptions make_progressive_opts(const GlobalOpts& g, bool extend) {
  sm::ProgressiveOptions opts;
  opts.extend = extend;
  if (g.progress) opts.on_phase = progress_line;
  return opts;
}

unsigned default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

// ---------------------------------------------------------------- mine-exact

struct MineExactCfg {
  std::string dataset;
  std::uint64_t k = 0;
  std::uint32_t w = 1;
  std::string cache;
};

void run_mine_exact(const MineExactCfg& c, const GlobalOpts& g) {
  const auto d = load_dataset(c.dataset);
  const std::optional<std::string> cache =
      c.cache.empty() ? std::nullopt : std::optional<std::string>(c.cache);
  const sm::CountTable table = sm::load_or_build_ground_truth(d, c.w, cache);
  const sm::TopKResult r = sm::top_k(table, c.k, c.w, d.universe_size);

  json doc{{"schema_version", sm::kSchemaVersion},
           {"command", "mine-exact"},
           {"dataset", dataset_json(c.dataset, d)},
           {"k", c.k},
           {"w", c.w},
           {"m", sm::universe_count(d.universe_size, c.w).str()},
           {"result", sm::to_json(r)}};
  emit_json(doc, g);
  std::fprintf(stderr, "mine-exact: %zu itemsets at threshold frequency %.6f (|D|=%llu, n=%llu)\n",
               r.entries.size(), r.threshold(),
               static_cast<unsigned long long>(d.size()),
               static_cast<unsigned long long>(d.universe_size));
}

// --------------------------------------------------------------------- bound

struct BoundCfg {
  std::uint64_t n = 0;
  sm::ApproxParams params;
  std::uint64_t dataset_size = 0;  // 0 = unknown
  double geom = 1.0;
};

void run_bound(const BoundCfg& c, const GlobalOpts& g) {
  const std::uint64_t dsz = c.dataset_size == 0 ? sm::kNoDatasetSize : c.dataset_size;
  const sm::PhaseSchedule sched = sm::make_schedule(c.params, c.n, dsz, c.geom);

  json doc{{"schema_version", sm::kSchemaVersion},
           {"command", "bound"},
           {"n", c.n},
           {"params", params_json(c.params)},
           {"m", sched.m.str()},
           {"t", sched.sufficient},
           {"tail_at_t", tail_json(c.params.eps, sched.sufficient)},
           {"schedule", schedule_json(sched)}};
  emit_json(doc, g);
  std::fprintf(stderr, "bound: m=%s, one-shot sample size t=%llu, j_max=%u\n",
               sched.m.str().c_str(), static_cast<unsigned long long>(sched.sufficient),
               sched.j_max);
}

// --------------------------------------------------------------- sample-mine

struct SampleMineCfg {
  std::string dataset;
  sm::ApproxParams params;
  std::uint64_t seed = 0;
  std::uint64_t size = 0;  // 0 = derive from the guarantee
};

void run_sample_mine(const SampleMineCfg& c, const GlobalOpts& g) {
  const auto d = load_dataset(c.dataset);
  const sm::PhaseSchedule sched = sm::make_schedule(c.params, d.universe_size);
  const std::uint64_t t = c.size > 0 ? c.size : sched.sufficient;

  const auto sample = sm::sample_with_replacement(d, t, sm::derive_seed(c.seed, 0));
  const sm::CountTable table = sm::count_itemsets(sample, c.params.w);
  const sm::TopKResult r = sm::top_k(table, c.params.k, c.params.w, d.universe_size);

  json doc{{"schema_version", sm::kSchemaVersion},
           {"command", "sample-mine"},
           {"dataset", dataset_json(c.dataset, d)},
           {"params", params_json(c.params)},
           {"m", sched.m.str()},
           {"seed", c.seed},
           {"sample_size", t},
           {"derived_size", sched.sufficient},
           {"tail_at_sample_size", tail_json(c.params.eps, t)},
           {"result", sm::to_json(r)}};
  emit_json(doc, g);
  std::fprintf(stderr, "sample-mine: drew %llu transactions, %zu itemsets at threshold %.6f\n",
               static_cast<unsigned long long>(t), r.entries.size(),
               r.threshold());
}

// --------------------------------------------------------------- progressive

struct ProgressiveCfg {
  std::string dataset;
  sm::ApproxParams params;
  std::uint64_t seed = 0;
  bool sketch = false;
  double eps_b = 0.0;
  double delta1 = 0.0;
  double geom = 1.0;
  bool extend = false;
  std::uint64_t max_counters = sm::kDefaultMaxCounters;
  std::string trace_csv;
};

void run_progressive_cmd(const ProgressiveCfg& c, const GlobalOpts& g) {
  const auto d = load_dataset(c.dataset);
  const sm::ProgressiveOptions opts = make_progressive_opts(g, c.extend);

  sm::ApproxParams sched_params = c.params;
  sm::CmDriverOptions cm;
  json filter_cfg;
  if (c.sketch) {
    const sm::DeltaSplit split = sm::split_failure_budget(c.params.delta, c.delta1);
    sched_params.delta = split.schedule;
    cm.delta_b = split.filter;
    cm.eps_b = c.eps_b > 0.0 ? c.eps_b : c.params.eps / 4.0;
    cm.max_counters = c.max_counters;
    filter_cfg = json{{"eps_b", cm.eps_b},
                      {"delta_schedule", split.schedule},
                      {"delta_filter", split.filter}};
  }
  const sm::PhaseSchedule sched = sm::make_schedule(sched_params, d.universe_size, d.size(), c.geom);

  const sm::MiningOutcome outcome = c.sketch ? sm::run_progressive_cm(d, sched, cm, c.seed, opts)
                                             : sm::run_progressive(d, sched, c.seed, opts);

  json doc{{"schema_version", sm::kSchemaVersion},
           {"command", "progressive"},
           {"dataset", dataset_json(c.dataset, d)},
           {"params", params_json(c.params)},
           {"seed", c.seed},
           {"sketch", c.sketch},
           {"extend", c.extend},
           {"schedule", schedule_json(sched)},
           {"outcome", sm::to_json(outcome)}};
  if (c.sketch) doc["filter"] = filter_cfg;
  emit_json(doc, g);

  if (!c.trace_csv.empty())
    emit_csv(c.trace_csv, [&](std::ostream& out) { sm::write_trace_csv(outcome.trace, out); });

  std::fprintf(stderr, "progressive: %s after %zu phase(s), final sample %llu, %zu itemsets\n",
               sm::to_string(outcome.terminal), outcome.trace.size(),
               static_cast<unsigned long long>(outcome.final_sample_size()),
               outcome.result.entries.size());
}

// ----------------------------------------------------------------------- gen

struct GenLowerboundCfg {
  std::uint64_t k = 0;
  std::uint64_t ell = 0;
  double p_k = 0.0;
  double eps = 0.0;
  std::uint64_t transactions = 0;
  std::uint64_t seed = 0;
  std::string out;
};

void run_gen_lowerbound(const GenLowerboundCfg& c, const GlobalOpts& g) {
  const auto d = sm::gen_lowerbound_dataset(c.k, c.ell, c.p_k, c.eps, c.transactions, c.seed);
  sm::save_fimi(d, c.out);

  std::uint64_t empty = 0;
  for (const auto& t : d.transactions)
    if (t.empty()) ++empty;

  json doc{{"schema_version", sm::kSchemaVersion},
           {"command", "gen-lowerbound"},
           {"out", c.out},
           {"k", c.k},
           {"ell", c.ell},
           {"p_k", c.p_k},
           {"eps", c.eps},
           {"seed", c.seed},
           {"transactions", d.size()},
           {"empty_transactions", empty},
           {"universe_size", d.universe_size}};
  emit_json(doc, g);
  std::fprintf(stderr, "gen lowerbound: wrote %llu transactions over %llu items to %s\n",
               static_cast<unsigned long long>(d.size()),
               static_cast<unsigned long long>(d.universe_size), c.out.c_str());
  if (empty > 0)
    std::fprintf(stderr,
                 "warning: %llu empty transactions become blank lines, which a reload skips; "
                 "reloaded frequencies will differ\n",
                 static_cast<unsigned long long>(empty));
}

struct GenPlantedCfg {
  std::uint64_t ell = 0;
  std::uint64_t n = 0;
  std::uint64_t copies = 0;
  std::string out;
};

void run_gen_planted(const GenPlantedCfg& c, const GlobalOpts& g) {
  const auto d = sm::gen_planted_dataset(c.ell, c.n, c.copies);
  sm::save_fimi(d, c.out);

  json doc{{"schema_version", sm::kSchemaVersion},
           {"command", "gen-planted"},
           {"out", c.out},
           {"ell", c.ell},
           {"n", c.n},
           {"copies", c.copies},
           {"transactions", d.size()},
           {"universe_size", d.universe_size}};
  emit_json(doc, g);
  std::fprintf(stderr, "gen planted: wrote %llu transactions over %llu items to %s\n",
               static_cast<unsigned long long>(d.size()),
               static_cast<unsigned long long>(d.universe_size), c.out.c_str());
}

// ---------------------------------------------------------------- experiment

struct ExperimentCommonCfg {
  std::string dataset;
  sm::ApproxParams params;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  unsigned jobs = 0;  // 0 = hardware concurrency
  std::string cache;
  std::string per_trial_csv;
};

json summary_json(const sm::ExperimentSummary& s) { return sm::to_json(s); }

void run_experiment_static(const ExperimentCommonCfg& c, const GlobalOpts& g) {
  const auto d = load_dataset(c.dataset);
  const std::optional<std::string> cache =
      c.cache.empty() ? std::nullopt : std::optional<std::string>(c.cache);
  const sm::CountTable gt = sm::load_or_build_ground_truth(d, c.params.w, cache);
  const unsigned jobs = c.jobs == 0 ? default_jobs() : c.jobs;

  const sm::StaticExperimentResult res =
      sm::run_static_experiment(d, gt, c.params, c.trials, c.seed, jobs);

  json doc{{"schema_version", sm::kSchemaVersion},
           {"command", "experiment-static"},
           {"dataset", dataset_json(c.dataset, d)},
           {"params", params_json(c.params)},
           {"seed", c.seed},
           {"sample_size", res.sample_size},
           {"summary", summary_json(res.summary)},
           {"warnings", res.warnings}};
  emit_json(doc, g);
  for (const auto& w : res.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

  if (!c.per_trial_csv.empty())
    emit_csv(c.per_trial_csv,
             [&](std::ostream& out) { sm::write_trials_csv(res.reports, out); });

  std::fprintf(stderr,
               "experiment static: %llu/%llu trials produced a valid approximation "
               "(exact-match %.3f, mean recovery %.3f, worst frequency error %.5f)\n",
               static_cast<unsigned long long>(res.summary.successes),
               static_cast<unsigned long long>(res.summary.trials), res.summary.exact_match_rate,
               res.summary.mean_recovery_fraction, res.summary.max_worst_p3_error);
}

struct ExperimentProgressiveCfg {
  ExperimentCommonCfg common;
  bool sketch = false;
  double eps_b = 0.0;
  double delta1 = 0.0;
  double geom = 1.0;
  bool extend = false;
  std::string stop_csv;
};

void run_experiment_progressive(const ExperimentProgressiveCfg& c, const GlobalOpts& g) {
  const auto d = load_dataset(c.common.dataset);
  const std::optional<std::string> cache =
      c.common.cache.empty() ? std::nullopt : std::optional<std::string>(c.common.cache);
  const sm::CountTable gt = sm::load_or_build_ground_truth(d, c.common.params.w, cache);
  const unsigned jobs = c.common.jobs == 0 ? default_jobs() : c.common.jobs;

  sm::ProgressiveExperimentConfig cfg;
  cfg.sketch = c.sketch;
  cfg.eps_b = c.eps_b;
  cfg.delta1 = c.delta1;
  cfg.geometric_factor = c.geom;
  cfg.extend = c.extend;

  const sm::ProgressiveExperimentResult res = sm::run_progressive_experiment(
      d, gt, c.common.params, c.common.trials, c.common.seed, cfg, jobs);

  json doc{{"schema_version", sm::kSchemaVersion},
           {"command", "experiment-progressive"},
           {"dataset", dataset_json(c.common.dataset, d)},
           {"params", params_json(c.common.params)},
           {"seed", c.common.seed},
           {"sketch", c.sketch},
           {"extend", c.extend},
           {"bound", res.bound},
           {"summary", summary_json(res.summary)},
           {"stop_size", json{{"mean", res.stop_size_mean},
                              {"min", res.stop_size_min},
                              {"max", res.stop_size_max}}},
           {"terminals", json{{"stopped_early", res.stopped_early},
                              {"hit_bound", res.hit_bound},
                              {"exhausted_dataset", res.exhausted}}}};
  emit_json(doc, g);

  if (!c.common.per_trial_csv.empty())
    emit_csv(c.common.per_trial_csv,
             [&](std::ostream& out) { sm::write_trials_csv(res.reports, out); });
  if (!c.stop_csv.empty())
    emit_csv(c.stop_csv,
             [&](std::ostream& out) { sm::write_stop_size_csv(c.common.params, res, out); });

  std::fprintf(stderr,
               "experiment progressive: %llu/%llu valid; stop size mean %.1f (bound %llu); "
               "early=%llu bound=%llu exhausted=%llu\n",
               static_cast<unsigned long long>(res.summary.successes),
               static_cast<unsigned long long>(res.summary.trials), res.stop_size_mean,
               static_cast<unsigned long long>(res.bound),
               static_cast<unsigned long long>(res.stopped_early),
               static_cast<unsigned long long>(res.hit_bound),
               static_cast<unsigned long long>(res.exhausted));
}

struct ExperimentLowerboundCfg {
  sm::LowerboundConfig cfg;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::string curve_csv;
};

void run_experiment_lowerbound(const ExperimentLowerboundCfg& c, const GlobalOpts& g) {
  const unsigned jobs = c.jobs == 0 ? default_jobs() : c.jobs;
  const sm::LowerboundResult res = sm::run_lowerbound_experiment(c.cfg, c.seed, jobs);

  json curve = json::array();
  for (const auto& pt : res.curve)
    curve.push_back(json{{"size", pt.size},
                         {"failures", pt.failures},
                         {"trials", c.cfg.trials},
                         {"failure_rate", pt.failure_rate}});

  json doc{{"schema_version", sm::kSchemaVersion},
           {"command", "experiment-lowerbound"},
           {"k", c.cfg.k},
           {"ell", c.cfg.ell},
           {"p_k", c.cfg.p_k},
           {"eps", c.cfg.eps},
           {"delta", c.cfg.delta},
           {"transactions", c.cfg.n_transactions},
           {"trials", c.cfg.trials},
           {"seed", c.seed},
           {"sufficient", res.sufficient},
           {"curve", std::move(curve)}};
  emit_json(doc, g);

  if (!c.curve_csv.empty())
    emit_csv(c.curve_csv, [&](std::ostream& out) { sm::write_lowerbound_csv(res, out); });

  std::fprintf(stderr, "experiment lowerbound: probed %zu sizes against the %llu-sample bound\n",
               res.curve.size(), static_cast<unsigned long long>(res.sufficient));
}

// --------------------------------------------------------------------- wiring

void add_approx_flags(CLI::App* cmd, sm::ApproxParams& p, bool defaults) {
  cmd->add_option("-k,--k", p.k, "Number of top itemsets K")->required();
  cmd->add_option("-w,--w", p.w, "Maximum itemset size w")->capture_default_str();
  auto* eps = cmd->add_option("--eps", p.eps, "Frequency accuracy eps in (0,1)");
  auto* delta = cmd->add_option("--delta", p.delta, "Failure probability delta in (0,1)");
  if (!defaults) {
    eps->required();
    delta->required();
  } else {
    eps->capture_default_str();
    delta->capture_default_str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximate top-K frequent itemset mining from random samples"};
  app.require_subcommand(1);
  app.get_formatter()->column_width(34);

  GlobalOpts g;
  app.add_option("-o,--output", g.output, "Write the JSON document here instead of stdout");
  app.add_flag("--progress", g.progress, "Emit phase-by-phase progress lines to stderr");

  // mine-exact
  MineExactCfg mx;
  mx.w = 1;
  auto* mine_exact = app.add_subcommand("mine-exact", "Exact top-K of a full dataset");
  mine_exact->add_option("--dataset", mx.dataset, "FIMI transaction file")->required();
  mine_exact->add_option("-k,--k", mx.k, "Number of top itemsets K")->required();
  mine_exact->add_option("-w,--w", mx.w, "Maximum itemset size w")->capture_default_str();
  mine_exact->add_option("--cache", mx.cache, "Ground-truth sidecar cache path");
  mine_exact->callback([&] { run_mine_exact(mx, g); });

  // bound
  BoundCfg bc;
  bc.params = {0, 1, 0.02, 0.1};
  auto* bound = app.add_subcommand("bound", "Sample-size bound and phase schedule math");
  bound->add_option("-n,--n", bc.n, "Universe size (number of distinct items)")->required();
  add_approx_flags(bound, bc.params, /*defaults=*/true);
  bound->add_option("--dataset-size", bc.dataset_size, "Cap the schedule at this dataset size");
  bound->add_option("--geom", bc.geom, "Geometric phase growth factor (>= 1)")
      ->capture_default_str();
  bound->callback([&] { run_bound(bc, g); });

  // sample-mine
  SampleMineCfg smc;
  smc.params = {0, 1, 0.02, 0.1};
  auto* sample_mine =
      app.add_subcommand("sample-mine", "Mine the top-K of one random sample");
  sample_mine->add_option("--dataset", smc.dataset, "FIMI transaction file")->required();
  add_approx_flags(sample_mine, smc.params, /*defaults=*/true);
  sample_mine->add_option("--seed", smc.seed, "Master seed")->capture_default_str();
  sample_mine->add_option("--size", smc.size,
                          "Sample size override (default: the derived bound)");
  sample_mine->callback([&] { run_sample_mine(smc, g); });

  // progressive
  ProgressiveCfg pc;
  pc.params = {0, 1, 0.02, 0.1};
  auto* progressive =
      app.add_subcommand("progressive", "Multi-phase progressive sampling driver");
  progressive->add_option("--dataset", pc.dataset, "FIMI transaction file")->required();
  add_approx_flags(progressive, pc.params, /*defaults=*/true);
  progressive->add_option("--seed", pc.seed, "Master seed")->capture_default_str();
  progressive->add_flag("--sketch", pc.sketch,
                        "Use the counting-filter stopping rule instead of exact tail ranks");
  progressive->add_option("--eps-b", pc.eps_b, "Filter slack (default eps/4)");
  progressive->add_option("--delta1", pc.delta1,
                          "Schedule share of delta (default 1 - sqrt(1 - delta))");
  progressive->add_option("--geom", pc.geom, "Geometric phase growth factor (>= 1)")
      ->capture_default_str();
  progressive->add_flag("--extend", pc.extend,
                        "Top up the previous phase's sample instead of drawing fresh");
  progressive->add_option("--max-counters", pc.max_counters,
                          "Resource guard on filter counters")
      ->capture_default_str();
  progressive->add_option("--trace-csv", pc.trace_csv, "Write the per-phase trace CSV here");
  progressive->callback([&] { run_progressive_cmd(pc, g); });

  // gen
  auto* gen = app.add_subcommand("gen", "Generate synthetic datasets");
  gen->require_subcommand(1);

  GenLowerboundCfg glb;
  auto* gen_lb = gen->add_subcommand(
      "lowerbound", "Planted-gap dataset: K itemsets at p_k, ell at p_k - 2*eps");
  gen_lb->add_option("-k,--k", glb.k, "Number of planted frequent items")->required();
  gen_lb->add_option("--ell", glb.ell, "Number of planted near-threshold items")->required();
  gen_lb->add_option("--p-k", glb.p_k, "Frequency of the planted frequent items")->required();
  gen_lb->add_option("--eps", glb.eps, "Gap parameter")->required();
  gen_lb->add_option("--transactions", glb.transactions, "Dataset size")->required();
  gen_lb->add_option("--seed", glb.seed, "Generator seed")->capture_default_str();
  gen_lb->add_option("--out", glb.out, "FIMI output path")->required();
  gen_lb->callback([&] { run_gen_lowerbound(glb, g); });

  GenPlantedCfg gpl;
  auto* gen_pl = gen->add_subcommand(
      "planted", "Early-stop dataset: copies of one wide transaction plus singleton noise");
  gen_pl->add_option("--ell", gpl.ell, "Width of the planted transaction")->required();
  gen_pl->add_option("-n,--n", gpl.n, "Universe size (planted items + singletons)")->required();
  gen_pl->add_option("--copies", gpl.copies, "Copies of the planted transaction")->required();
  gen_pl->add_option("--out", gpl.out, "FIMI output path")->required();
  gen_pl->callback([&] { run_gen_planted(gpl, g); });

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Multi-trial statistical harnesses");
  experiment->require_subcommand(1);

  ExperimentCommonCfg exs;
  exs.params = {0, 1, 0.02, 0.1};
  auto* exp_static = experiment->add_subcommand(
      "static", "Repeated one-shot sampling at the derived bound, verified against ground truth");
  exp_static->add_option("--dataset", exs.dataset, "FIMI transaction file")->required();
  add_approx_flags(exp_static, exs.params, /*defaults=*/true);
  exp_static->add_option("--trials", exs.trials, "Trial count")->capture_default_str();
  exp_static->add_option("--seed", exs.seed, "Master seed")->capture_default_str();
  exp_static->add_option("--jobs", exs.jobs, "Worker threads (default: logical cores)");
  exp_static->add_option("--cache", exs.cache, "Ground-truth sidecar cache path");
  exp_static->add_option("--per-trial-csv", exs.per_trial_csv, "Write per-trial CSV here");
  exp_static->callback([&] { run_experiment_static(exs, g); });

  ExperimentProgressiveCfg exp;
  exp.common.params = {0, 1, 0.02, 0.1};
  auto* exp_prog = experiment->add_subcommand(
      "progressive", "Repeated progressive runs, verified against ground truth");
  exp_prog->add_option("--dataset", exp.common.dataset, "FIMI transaction file")->required();
  add_approx_flags(exp_prog, exp.common.params, /*defaults=*/true);
  exp_prog->add_option("--trials", exp.common.trials, "Trial count")->capture_default_str();
  exp_prog->add_option("--seed", exp.common.seed, "Master seed")->capture_default_str();
  exp_prog->add_option("--jobs", exp.common.jobs, "Worker threads (default: logical cores)");
  exp_prog->add_option("--cache", exp.common.cache, "Ground-truth sidecar cache path");
  exp_prog->add_option("--per-trial-csv", exp.common.per_trial_csv, "Write per-trial CSV here");
  exp_prog->add_flag("--sketch", exp.sketch, "Use the counting-filter stopping rule");
  exp_prog->add_option("--eps-b", exp.eps_b, "Filter slack (default eps/4)");
  exp_prog->add_option("--delta1", exp.delta1,
                       "Schedule share of delta (default 1 - sqrt(1 - delta))");
  exp_prog->add_option("--geom", exp.geom, "Geometric phase growth factor (>= 1)")
      ->capture_default_str();
  exp_prog->add_flag("--extend", exp.extend, "Top up samples instead of drawing fresh");
  exp_prog->add_option("--stop-csv", exp.stop_csv, "Write the stop-size summary CSV here");
  exp_prog->callback([&] { run_experiment_progressive(exp, g); });

  ExperimentLowerboundCfg exl;
  exl.cfg.trials = 100;
  auto* exp_lb = experiment->add_subcommand(
      "lowerbound", "Failure-rate curve of undersized samples on a planted-gap dataset");
  exp_lb->add_option("-k,--k", exl.cfg.k, "Number of planted frequent items")->required();
  exp_lb->add_option("--ell", exl.cfg.ell, "Number of planted near-threshold items")->required();
  exp_lb->add_option("--p-k", exl.cfg.p_k, "Frequency of the planted frequent items")->required();
  exp_lb->add_option("--eps", exl.cfg.eps, "Gap parameter")->required();
  exp_lb->add_option("--delta", exl.cfg.delta, "Failure probability for the reference bound")
      ->capture_default_str();
  exp_lb->add_option("--transactions", exl.cfg.n_transactions, "Dataset size")->required();
  exp_lb->add_option("--sizes", exl.cfg.sizes, "Sample sizes to probe")->required()->expected(-1);
  exp_lb->add_option("--trials", exl.cfg.trials, "Trials per size")->capture_default_str();
  exp_lb->add_option("--seed", exl.seed, "Master seed")->capture_default_str();
  exp_lb->add_option("--jobs", exl.jobs, "Worker threads (default: logical cores)");
  exp_lb->add_option("--curve-csv", exl.curve_csv, "Write the (size, failure_rate) CSV here");
  exp_lb->callback([&] { run_experiment_lowerbound(exl, g); });

  // Let -o/--progress be written after the subcommand name.
  for (CLI::App* sub : {mine_exact, bound, sample_mine, progressive, gen, gen_lb, gen_pl,
                        experiment, exp_static, exp_prog, exp_lb})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage error, regardless of CLI11's internal code
  } catch (const sm::resource_error& e) {
    std::fprintf(stderr, "resource error: %s\n", e.what());
    return 3;
  } catch (const sm::data_error& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
