#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "taskplan/sim/scene.hpp"

namespace taskplan::symbolic {

enum class Pred : int { OnTop = 0, Inside = 1, Cooked = 2, Soaked = 3, InGripper = 4 };

// One grounded predicate instance. Unary predicates leave b = -1.
struct Key {
  Pred pred;
  int a;
  int b;
  bool operator==(const Key&) const = default;
};

// The grounded vocabulary for the fixed roster: OnTop(a,b) and Inside(a,b)
// over movable a x surface b (a != b), plus Cooked/Soaked/InGripper over
// movables. Key order is fixed, so indices are stable across runs.
class Vocabulary {
 public:
  static const Vocabulary& instance();

  int size() const { return static_cast<int>(keys_.size()); }
  const Key& key(int idx) const { return keys_[size_t(idx)]; }
  int index(Pred p, int a, int b = -1) const;  // -1 if not in vocabulary
  std::string name(int idx) const;

 private:
  Vocabulary();
  std::vector<Key> keys_;
  std::vector<int> lut_;
};

// Full assignment over the vocabulary; confidence is optional and parallel.
struct SymbolicState {
  std::vector<uint8_t> bits;
  std::vector<float> conf;  // empty, or one probability per key

  bool get(int idx) const { return bits[size_t(idx)] != 0; }
  bool operator==(const SymbolicState& o) const { return bits == o.bits; }
};

struct Goal {
  std::vector<std::pair<int, bool>> conditions;  // (key index, required value)
};

// Grammar: cond ("&" cond)*, cond := [!]Name(arg{,arg}). Object names are the
// roster names (sink, stove, ..., bowl). Throws std::runtime_error naming the
// offending token on bad input.
Goal parse_goal(const std::string& text);
std::string render_goal(const Goal& goal);

bool satisfied(const SymbolicState& state, const Goal& goal);

// Canonical packed-bit token: equal assignments <=> equal tokens.
std::string state_key(const SymbolicState& state);

// Canonical JSON {"key-name": bool, ...} in vocabulary order.
std::string to_json(const SymbolicState& state);

}  // namespace taskplan::symbolic
