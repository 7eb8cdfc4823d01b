#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "taskplan/sim/scene.hpp"

namespace taskplan::sim {

struct Rect {
  int r0 = 0, c0 = 0, r1 = 0, c1 = 0;  // half-open [r0,r1) x [c0,c1)

  bool contains(int r, int c) const {
    return r >= r0 && r < r1 && c >= c0 && c < c1;
  }
  int rows() const { return r1 - r0; }
  int cols() const { return c1 - c0; }
  int area() const { return rows() * cols(); }
  Rect shifted(int dr, int dc) const {
    return {r0 + dr, c0 + dc, r1 + dr, c1 + dc};
  }
  Rect inset(int by) const { return {r0 + by, c0 + by, r1 - by, c1 - by}; }
  bool operator==(const Rect&) const = default;
};

// Shape + color template for one object instance. Footprint masks are local
// (row-major h x w); `interior` is a local rect for pan surfaces and bowl
// interiors, empty otherwise.
struct Archetype {
  Category category = Category::Food;
  int h = 0, w = 0;
  std::vector<uint8_t> mask;
  std::array<uint8_t, 3> color = {0, 0, 0};
  Rect interior;  // zero-area when absent
  bool has_interior = false;

  bool pixel(int r, int c) const { return mask[size_t(r * w + c)] != 0; }
  int anchor_row() const { return h / 2; }
  int anchor_col() const { return w / 2; }
};

// Instance pools per movable role. Seen/unseen splits index into these.
int pool_size(Category cat);
const Archetype& archetype(Category cat, int instance_id);

// Fixture colors (interior drawn darker by the renderer).
std::array<uint8_t, 3> fixture_color(int fixture_id);

}  // namespace taskplan::sim
