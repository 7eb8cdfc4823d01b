#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace taskplan::sim {

inline constexpr int kH = 64;
inline constexpr int kW = 64;

// Fixed object roster. Every episode carries the same eleven ids so predicate
// keys, decoder heads, and planner targets stay stable across tasks.
inline constexpr int kSink = 0;
inline constexpr int kStove = 1;
inline constexpr int kOven = 2;
inline constexpr int kMicrowave = 3;
inline constexpr int kCounter = 4;
inline constexpr int kTable = 5;
inline constexpr int kPan = 6;
inline constexpr int kTowel = 7;
inline constexpr int kFood = 8;
inline constexpr int kHousehold = 9;
inline constexpr int kBowl = 10;
inline constexpr int kNumObjects = 11;
inline constexpr int kNumFixtures = 6;
inline constexpr int kNumMovable = 5;  // ids kPan..kBowl

enum class Category : int {
  Fixture = 0,
  Pan = 1,
  Towel = 2,
  Food = 3,
  Household = 4,
  Bowl = 5,
};

enum class Skill : int { Pick = 0, Place = 1, Pour = 2 };
inline constexpr int kNumSkills = 3;

// Support encoding: >= 0 is the supporting object's id.
inline constexpr int kSupportFloor = -1;  // lost to the floor, unreachable
inline constexpr int kSupportNone = -2;   // gripped or absent

struct ObjectRecord {
  int id = 0;
  Category category = Category::Fixture;
  int instance_id = 0;
  int row = 0, col = 0;  // top-left corner of the footprint bounding box
  bool cooked = false;
  bool soaked = false;
  int support = kSupportNone;
  bool present = true;

  bool operator==(const ObjectRecord&) const = default;
};

struct SceneState {
  int layout_id = 0;  // 0..2 for L1..L3
  int step_count = 0;
  int gripper = -1;  // object id or -1
  std::array<ObjectRecord, kNumObjects> objects;

  bool operator==(const SceneState&) const = default;
};

struct SkillCall {
  Skill skill = Skill::Pick;
  int theta_row = 0, theta_col = 0;
  int target_id = 0;

  bool operator==(const SkillCall&) const = default;
};

inline const char* object_name(int id) {
  static const char* names[kNumObjects] = {
      "sink", "stove", "oven",      "microwave", "counter", "table",
      "pan",  "towel", "food",      "household", "bowl"};
  return names[id];
}

inline const char* skill_name(Skill s) {
  switch (s) {
    case Skill::Pick: return "pick";
    case Skill::Place: return "place";
    case Skill::Pour: return "pour";
  }
  return "?";
}

inline bool is_fixture(int id) { return id < kNumFixtures; }

// Surfaces: objects that can support others (targets for place/pour).
inline bool is_surface(int id) {
  return is_fixture(id) || id == kPan || id == kBowl;
}

}  // namespace taskplan::sim
