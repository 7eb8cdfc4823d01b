#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "taskplan/dynamics/dynamics.hpp"
#include "taskplan/pretrain/pretrain.hpp"
#include "taskplan/sim/sim.hpp"
#include "taskplan/symbolic/symbolic.hpp"

// Search-based task planning over a pluggable one-step transition backend:
// confidence-pruned next-state sampling feeds a depth-limited breadth-first
// search; the per-pixel baseline search it is benchmarked against shares the
// same enumeration and differs only in skipping the uniqueness dedup.
namespace taskplan::planner {

// One expansion edge: the skill call that produces it, the successor in the
// backend's own state representation, the decoded predicates, and the
// per-step confidence in (0, 1].
template <class State>
struct Candidate {
  sim::SkillCall call;
  State next;
  symbolic::SymbolicState decoded;
  double conf = 1.0;
};

// Mean probability assigned to the argmax class over all grounded keys.
// Exactly 1 for a ground-truth state, < 1 under an uncertain decoder.
double state_confidence(const symbolic::SymbolicState& s);

// (skill, target) pairs the environment exposes: pick over the five
// movables, place and pour over the eight support surfaces.
const std::vector<std::pair<sim::Skill, int>>& legal_pairs();

struct SearchStats {
  long long nodes_expanded = 0;  // expand() calls
  long long branches = 0;        // per-pixel successors enumerated
  long long kept = 0;            // candidates surviving per-pair dedup
  long long goal_hits = 0;       // candidates satisfying the goal
  std::vector<long long> frontier_per_depth;  // size entering each depth
  int depth_reached = 0;
  double wall_s = 0.0;
  bool budget_exhausted = false;
};

struct PlanResult {
  bool found = false;
  std::vector<sim::SkillCall> steps;
  double confidence = 0.0;
  symbolic::SymbolicState terminal;  // decoded state the plan ends in
  SearchStats stats;
};

// Exhaustive frontier and no budget are the reference semantics; beam and
// budget are evaluation-time concessions to single-core wall clock and are
// off by default.
struct SearchOptions {
  int beam = 0;             // > 0: keep only the top-k frontier states
  double budget_s = 0.0;    // > 0: wall budget; returns best plan so far
  long long max_nodes = 0;  // > 0: cap on expand() calls
};

// Lexicographic step order (skill, theta row, theta col, target).
bool step_less(const sim::SkillCall& a, const sim::SkillCall& b);

// Plan ranking: higher confidence, then fewer steps, then lexicographic
// step sequence. Total order => search results are order-independent.
bool plan_better(double ca, const std::vector<sim::SkillCall>& sa, double cb,
                 const std::vector<sim::SkillCall>& sb);

// Ground-truth transitions: the simulator itself as the model, exact
// predicates, confidence exactly 1. Successors enumerate every pixel of the
// target's rendered mask.
class OracleBackend {
 public:
  using State = sim::SceneState;
  symbolic::SymbolicState decode(const State& s) const;
  std::vector<Candidate<State>> expand(const State& s, bool dedup,
                                       long long* branches = nullptr);
};

// Learned transitions over per-object embeddings: target-conditioned effect
// vectors gated by the decoded target mask, transformer propagation, frozen
// decoders. In baseline mode the grounding disappears: a pixel grid is swept
// per skill and the model ignores the target entirely.
class LearnedBackend {
 public:
  using State = std::vector<float>;  // [kTokens * kDim]

  LearnedBackend(pretrain::Model<float>& pre, dynamics::Model<float>& dyn,
                 bool daf = false, int daf_stride = 2);

  symbolic::SymbolicState decode(const State& s);
  std::vector<Candidate<State>> expand(const State& s, bool dedup,
                                       long long* branches = nullptr);

 private:
  void expand_pair(const State& s, sim::Skill skill, int target,
                   const std::vector<int>& pixels, bool dedup,
                   std::vector<Candidate<State>>& out);

  pretrain::Model<float>* pre_;
  dynamics::Model<float>* dyn_;
  bool daf_;
  int stride_;
};

namespace detail {

double now_s();

// Per-depth dedup across parents: keep one representative per decoded
// symbolic state, the max-confidence one (first on ties).
template <class State>
struct Frontier {
  struct Node {
    State state;
    double conf = 1.0;
    std::vector<sim::SkillCall> steps;
    std::string key;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, size_t> index;

  void add(State&& s, double conf, std::vector<sim::SkillCall>&& steps,
           std::string&& key) {
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, nodes.size());
      nodes.push_back(Node{std::move(s), conf, std::move(steps), std::move(key)});
    } else if (conf > nodes[it->second].conf) {
      nodes[it->second] =
          Node{std::move(s), conf, std::move(steps), std::move(key)};
    }
  }
};

}  // namespace detail

// Breadth-first search, depth-limited to `depth` steps. Every candidate is
// goal-checked before dedup; goal-reaching candidates accumulate into the
// result buffer and the argmax-confidence plan is returned. Distinct decoded
// symbolic states are expanded at most once (shallowest depth, max-confidence
// representative); the per-pixel baseline below demonstrates what that saves.
template <class Backend>
PlanResult plan(Backend& be, const typename Backend::State& root,
                const symbolic::Goal& goal, int depth,
                const SearchOptions& opt = {}) {
  using State = typename Backend::State;
  const double t0 = detail::now_s();
  PlanResult res;
  SearchStats& st = res.stats;

  symbolic::SymbolicState d0 = be.decode(root);
  if (symbolic::satisfied(d0, goal)) {  // zero-step satisfaction
    res.found = true;
    res.confidence = 1.0;
    res.terminal = d0;
    st.frontier_per_depth.push_back(1);
    st.wall_s = detail::now_s() - t0;
    return res;
  }

  using Node = typename detail::Frontier<State>::Node;
  std::vector<Node> frontier;
  frontier.push_back(Node{root, 1.0, {}, symbolic::state_key(d0)});
  std::unordered_set<std::string> visited;
  visited.insert(frontier[0].key);
  st.frontier_per_depth.push_back(1);

  bool have = false;

  for (int d = 1; d <= depth && !frontier.empty(); ++d) {
    detail::Frontier<State> next;
    for (Node& nd : frontier) {
      if ((opt.budget_s > 0 && detail::now_s() - t0 > opt.budget_s) ||
          (opt.max_nodes > 0 && st.nodes_expanded >= opt.max_nodes)) {
        st.budget_exhausted = true;
        break;
      }
      ++st.nodes_expanded;
      auto cands = be.expand(nd.state, /*dedup=*/true, &st.branches);
      st.kept += static_cast<long long>(cands.size());
      for (auto& cd : cands) {
        const double c2 = nd.conf * cd.conf;
        std::vector<sim::SkillCall> steps2 = nd.steps;
        steps2.push_back(cd.call);
        if (symbolic::satisfied(cd.decoded, goal)) {
          ++st.goal_hits;
          if (!have || plan_better(c2, steps2, res.confidence, res.steps)) {
            have = true;
            res.confidence = c2;
            res.steps = steps2;
            res.terminal = cd.decoded;
          }
        }
        if (d == depth) continue;  // depth-limit: successors never expanded
        std::string key = symbolic::state_key(cd.decoded);
        if (visited.count(key)) continue;
        next.add(std::move(cd.next), c2, std::move(steps2), std::move(key));
      }
    }
    st.depth_reached = d;
    if (st.budget_exhausted) break;

    frontier = std::move(next.nodes);
    if (opt.beam > 0 && static_cast<int>(frontier.size()) > opt.beam) {
      std::sort(frontier.begin(), frontier.end(),
                [](const Node& a, const Node& b) {
                  if (a.conf != b.conf) return a.conf > b.conf;
                  return a.key < b.key;
                });
      frontier.resize(size_t(opt.beam));
    }
    for (const Node& nd : frontier) visited.insert(nd.key);
    if (d < depth) st.frontier_per_depth.push_back(
        static_cast<long long>(frontier.size()));

    // Admissible cutoff: per-step confidences are <= 1, so no descendant of
    // the frontier can beat a plan at least as confident and strictly
    // shorter. Never changes the returned plan.
    if (have) {
      double fmax = 0.0;
      for (const Node& nd : frontier) fmax = std::max(fmax, nd.conf);
      if (res.confidence >= fmax) break;
    }
  }

  res.found = have;
  st.wall_s = detail::now_s() - t0;
  return res;
}

// Baseline search: identical semantics except every enumerated pixel spawns
// its own branch (no uniqueness dedup, no visited set). Instrumented and
// budget-capped; exceeds its budget by at most one node expansion.
template <class Backend>
PlanResult plan_pixelwise(Backend& be, const typename Backend::State& root,
                          const symbolic::Goal& goal, int depth,
                          double budget_s = 1000.0) {
  using State = typename Backend::State;
  const double t0 = detail::now_s();
  PlanResult res;
  SearchStats& st = res.stats;

  symbolic::SymbolicState d0 = be.decode(root);
  if (symbolic::satisfied(d0, goal)) {
    res.found = true;
    res.confidence = 1.0;
    res.terminal = d0;
    st.frontier_per_depth.push_back(1);
    st.wall_s = detail::now_s() - t0;
    return res;
  }

  // The frontier stores full successor states; a hard size cap keeps the
  // depth >= 2 blow-up from exhausting memory before the time budget does.
  constexpr size_t kFrontierCap = 1500000;

  struct Node {
    State state;
    double conf;
    std::vector<sim::SkillCall> steps;
  };
  std::vector<Node> frontier;
  frontier.push_back(Node{root, 1.0, {}});
  st.frontier_per_depth.push_back(1);

  bool have = false;
  for (int d = 1; d <= depth && !frontier.empty(); ++d) {
    std::vector<Node> next;
    for (Node& nd : frontier) {
      if (detail::now_s() - t0 > budget_s || next.size() > kFrontierCap) {
        st.budget_exhausted = true;
        break;
      }
      ++st.nodes_expanded;
      auto cands = be.expand(nd.state, /*dedup=*/false, &st.branches);
      st.kept += static_cast<long long>(cands.size());
      for (auto& cd : cands) {
        const double c2 = nd.conf * cd.conf;
        std::vector<sim::SkillCall> steps2 = nd.steps;
        steps2.push_back(cd.call);
        if (symbolic::satisfied(cd.decoded, goal)) {
          ++st.goal_hits;
          if (!have || plan_better(c2, steps2, res.confidence, res.steps)) {
            have = true;
            res.confidence = c2;
            res.steps = steps2;
            res.terminal = cd.decoded;
          }
        }
        if (d < depth) next.push_back(Node{std::move(cd.next), c2,
                                           std::move(steps2)});
      }
    }
    st.depth_reached = d;
    if (st.budget_exhausted) break;
    frontier = std::move(next);
    if (d < depth) st.frontier_per_depth.push_back(
        static_cast<long long>(frontier.size()));
  }

  res.found = have;
  st.wall_s = detail::now_s() - t0;
  return res;
}

struct ExecuteResult {
  sim::SceneState state;
  bool success = false;
};

// Open-loop replay of a plan through the ground-truth simulator; success is
// goal satisfaction under exact predicates at the end.
ExecuteResult execute_plan(const sim::SceneState& s0,
                           const std::vector<sim::SkillCall>& steps,
                           const symbolic::Goal& goal);

}  // namespace taskplan::planner
