#pragma once

#include <array>
#include <string>

#include "taskplan/sim/archetypes.hpp"
#include "taskplan/sim/scene.hpp"

namespace taskplan::sim {

inline constexpr int kNumLayouts = 3;

struct Layout {
  std::string name;
  std::array<Rect, kNumFixtures> fixture_rect;
  std::array<Rect, kNumFixtures> fixture_interior;  // zero-area if none
  std::array<bool, kNumFixtures> has_interior = {};
  std::array<int, kNumMovable> spawn_fixture;  // movable role -> fixture id
};

// Loads config/layouts.json once (TASKPLAN_CONFIG env overrides the path,
// default is <source dir>/config/layouts.json).
const Layout& layout(int layout_id);

}  // namespace taskplan::sim
