#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "taskplan/core/io.hpp"
#include "taskplan/core/rng.hpp"
#include "taskplan/sim/sim.hpp"
#include "taskplan/symbolic/symbolic.hpp"

namespace taskplan::datagen {

// Seen/unseen instance pools shared by every corpus and by evaluation.
using sim::ObjectSplits;
ObjectSplits split_objects(uint64_t seed);

struct SceneSample {
  TensorU8 image;                  // [H, W, 3]
  TensorU8 masks;                  // [kNumObjects, H, W]
  symbolic::SymbolicState labels;  // == sim::eval_predicates(state)
  sim::SceneState state;
};

struct Trajectory {
  std::vector<sim::SceneState> states;  // length T+1: initial + one per step
  std::vector<sim::SkillCall> calls;    // length T
};

// One random scene: sampled layout, 2-5 movables with split-legal instances,
// positions drawn over the active support regions (occasionally the floor or
// the gripper), cooked/soaked flipped independently with p=0.5.
SceneSample gen_scene_sample(const ObjectSplits& splits, sim::Split split,
                             Pcg32& rng);

// One exploration rollout from a reset state. The same skill is never taken
// twice in a row, targets are drawn over skill-legal objects, and theta lands
// inside the target's rendered mask. No-op transitions are kept.
Trajectory gen_trajectory(int layout_id, const ObjectSplits& splits,
                          sim::Split split, int traj_len, Pcg32& rng);

// Record encodings used by the shard files. Scene records store the rendered
// pixels, label bits, the object table, and the generating state; exploration
// records store per-frame states, calls, and rendered frames.
io::Record scene_record(const SceneSample& s);
SceneSample scene_from_record(const io::Record& rec);
io::Record explore_record(const Trajectory& t);
Trajectory explore_from_record(const io::Record& rec);

// Datasets on disk: a directory holding manifest.json plus binary shards.
void write_scene_dataset(const std::string& dir, int n, sim::Split split,
                         uint64_t seed);
void write_explore_dataset(const std::string& dir, int n_traj_per_layout,
                           int traj_len, sim::Split split, uint64_t seed);

struct DatasetInfo {
  std::string kind;    // "scene" | "explore"
  std::string split;   // "seen" | "unseen"
  int n = 0;           // scene: samples; explore: trajectories across layouts
  int traj_len = 0;    // explore only
  uint64_t seed = 0;
  ObjectSplits splits;
  std::vector<std::string> shard_files;  // resolved paths, manifest order
};
DatasetInfo read_manifest(const std::string& dir);

std::vector<io::Record> load_records(const std::string& dir);
std::vector<SceneSample> load_scene_dataset(const std::string& dir);
// Drops the stored pixels; render() regenerates them bit-exactly on demand.
std::vector<Trajectory> load_explore_dataset(const std::string& dir);

}  // namespace taskplan::datagen
