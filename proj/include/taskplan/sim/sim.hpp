#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "taskplan/core/tensor.hpp"
#include "taskplan/sim/layout.hpp"
#include "taskplan/sim/scene.hpp"
#include "taskplan/symbolic/symbolic.hpp"

namespace taskplan::sim {

enum class Split : int { Seen = 0, Unseen = 1 };

inline constexpr int kPourOvershoot = 6;  // pour landing drifts +6 columns
inline constexpr int kGripperSlotRow = 4;  // slot center, top edge of image
inline constexpr int kGripperSlotCol = 32;

// Deterministic split of instance pools into seen/unseen sets.
struct SplitPools {
  std::vector<int> seen, unseen;
};
SplitPools split_indices(int pool, int n_seen, uint64_t seed, uint64_t stream);

struct ObjectSplits {
  SplitPools food, household, bowl, towel, pan;

  // Desk-scale pools: 14 food -> 10 seen, 8 household -> 6, 12 bowls -> 8;
  // towels and the pan are always seen.
  static ObjectSplits make(uint64_t seed);
};
const ObjectSplits& default_splits();

// First instance of the split's pool for each movable role; used when reset
// is not given explicit instances so that seeds vary positions only.
std::array<int, kNumMovable> canonical_instances(Split split);

// Fresh episode: fixtures per layout, movables spawned at uniform
// non-overlapping positions on their start fixtures. Deterministic in
// (layout_id, split, seed, instances).
SceneState reset(int layout_id, Split split, uint64_t seed,
                 const std::array<int, kNumMovable>* instances = nullptr);

// Ground-truth transition. Infeasible calls are no-ops (only step_count
// advances).
SceneState step(const SceneState& state, const SkillCall& call);

struct RenderOut {
  TensorU8 image;  // [H, W, 3]
  TensorU8 masks;  // [kNumObjects, H, W]
};
RenderOut render(const SceneState& state);

symbolic::SymbolicState eval_predicates(const SceneState& state);

// Support surfaces currently accepting placements: fixture tops (rim only
// where there is a basin/cavity), fixture interiors, and the surfaces of
// placed containers. `interior` distinguishes Inside- from OnTop-style rest.
struct RegionView {
  int owner;
  bool interior;
  Rect rect;       // bounding rect of the region
  Rect hole;       // carved-out area (fixture rims only)
  bool has_hole = false;

  bool contains(int r, int c) const {
    return rect.contains(r, c) && !(has_hole && hole.contains(r, c));
  }
};
std::vector<RegionView> placement_regions(const SceneState& state);

const Archetype& object_archetype(const ObjectRecord& o);

// Object center in world coordinates (footprint anchor).
std::pair<int, int> object_center(const ObjectRecord& o);

// Canonical JSON serialization; integers and booleans only, so replay is
// bit-exact.
std::string to_json(const SceneState& state);
SceneState state_from_json(const std::string& text);

}  // namespace taskplan::sim
