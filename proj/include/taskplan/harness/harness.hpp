#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "taskplan/planner/planner.hpp"
#include "taskplan/sim/sim.hpp"
#include "taskplan/symbolic/symbolic.hpp"

// Experiment orchestration: the three canonical tasks, evaluation sweeps
// over model variants and splits, the search-time benchmark, data-efficiency
// curves, and persistence of every table as CSV + JSON (+ SVG plots).
namespace taskplan::harness {

enum class Task { Rearrange, Clean, Cook };
enum class Variant { Ours, OursNoPre, OursNoSeg, Daf, DafNoPre, Oracle };

const char* task_name(Task t);
const char* variant_name(Variant v);
Task parse_task(const std::string& s);
Variant parse_variant(const std::string& s);
std::string split_name(sim::Split s);

// Canonical goal text; every task is 4 steps from a non-degenerate start.
std::string task_goal(Task t);

// One evaluation episode, deterministic in (task, layout, split, trial).
// Sub-seeds are scanned until the start state satisfies no goal condition
// (and spawns cleanly), so the canonical plan length is exactly 4.
struct TaskInstance {
  sim::SceneState start;
  symbolic::Goal goal;
  uint64_t sim_seed = 0;  // accepted sub-seed, for provenance
};
TaskInstance make_task(Task t, int layout_id, sim::Split split,
                       uint64_t trial_seed);

// Whether a variant runs on the learned stack or straight on the simulator.
inline bool is_oracle(Variant v) { return v == Variant::Oracle; }
inline bool is_daf(Variant v) {
  return v == Variant::Daf || v == Variant::DafNoPre;
}

struct ExperimentConfig {
  Task task = Task::Clean;
  Variant variant = Variant::Ours;
  sim::Split split = sim::Split::Seen;
  std::vector<int> layouts = {0, 1, 2};
  int n_trials = 30;
  int depth = 4;
  std::vector<uint64_t> seeds = {0, 1, 2};  // training seeds

  // Checkpoint path templates; "{seed}" expands per training seed.
  // Oracle needs neither; joint (no-pretrain) checkpoints ignore pretrain.
  std::string dyn_ckpt;
  std::string pretrain_ckpt;

  // Search configuration for the learned stack. beam=0, budget=0 is the
  // exhaustive reference; the defaults keep single-core sweeps tractable.
  int beam = 16;
  double budget_s = 90.0;
  int daf_stride = 2;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
};

std::string expand_seed(const std::string& tmpl, uint64_t seed);

struct TrialResult {
  int trial = 0;
  int layout = 0;
  uint64_t sim_seed = 0;
  bool found = false;    // planner returned a plan
  bool success = false;  // executed plan satisfies the goal in sim
  int plan_len = 0;
  double confidence = 0.0;
  double plan_s = 0.0;
  long long nodes = 0;
  long long branches = 0;
};

struct SeedResult {
  uint64_t seed = 0;
  uint64_t dyn_fp = 0;  // checkpoint fingerprints, 0 for oracle
  uint64_t pre_fp = 0;
  std::vector<TrialResult> trials;
  double success_rate = 0.0;
  double mean_plan_s = 0.0;
};

struct ResultRecord {
  ExperimentConfig cfg;
  std::vector<SeedResult> per_seed;
  double mean = 0.0;  // arithmetic mean of per-seed success rates
  std::string to_json() const;
};

// Full sweep for one config: per training seed, n_trials episodes of
// plan-then-execute. Missing checkpoints fail before any trial runs.
ResultRecord run_eval(const ExperimentConfig& cfg, std::ostream* log);

// Search-time benchmark over depths, pruned vs per-pixel, on fixed
// instances. Entries that exhaust the budget report ">budget".
struct TimingRow {
  int depth = 0;
  std::string mode;  // "pruned" | "pixelwise"
  int rollouts = 0;
  double mean_s = 0.0, ci95_s = 0.0;
  long long mean_nodes = 0, mean_branches = 0;
  int over_budget = 0;  // rollouts stopped by the budget
};
struct TimingTable {
  std::vector<TimingRow> rows;
  double budget_s = 0.0;
  std::string to_json() const;
  std::string to_csv() const;
};
TimingTable run_timing(const ExperimentConfig& cfg,
                       const std::vector<int>& depths, int rollouts,
                       double budget_s, std::ostream* log);

// Success-vs-data curve: each fraction's checkpoints are trained outside
// (dyn_ckpt template has both "{seed}" and "{frac}") and evaluated here.
struct DataEffPoint {
  double fraction = 1.0;
  ResultRecord record;
};
struct DataEffCurve {
  std::vector<DataEffPoint> points;
  std::string to_json() const;
  std::string to_csv() const;
};
DataEffCurve run_data_efficiency(const ExperimentConfig& cfg,
                                 const std::vector<double>& fractions,
                                 std::ostream* log);

// Results directory: writes name.json + name.csv (+ name.svg for plots).
void write_text(const std::string& path, const std::string& text);
std::string eval_csv(const ResultRecord& r);
std::string success_bars_svg(const std::vector<ResultRecord>& records);
std::string data_eff_svg(const DataEffCurve& curve);

}  // namespace taskplan::harness
