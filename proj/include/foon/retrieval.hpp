#pragma once

// Task-tree retrieval over a universal network.
//
// The goal-driven search keeps a FIFO list of objects still to be made and,
// for each, looks at every unit producing it; a unit whose inputs are all in
// the scene or already made is committed and its outputs become available.
// Unmade inputs of candidate units are appended to the list. A full pass
// with no progress means the goal cannot be made.
//
// In cost-minimal mode that first tree seeds a branch-and-bound search over
// "which unit makes each needed object" assignments, which returns a tree of
// least total motion cost (each unit counted once).

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "foon/error.hpp"
#include "foon/graph.hpp"

namespace foon {

class GoalNotInGraph : public Error {
 public:
  using Error::Error;
};

class Unreachable : public Error {
 public:
  using Error::Error;
};

using SceneInventory = std::vector<ObjectNode>;

struct MotionCostTable {
  std::map<std::string, double> costs;
  double default_cost = 1.0;

  double of(const std::string& motion) const;
};

/// "motion,cost" lines; an optional header row is skipped. Costs must be finite and >= 0.
MotionCostTable parse_cost_table(std::string_view csv, const std::string& source = "costs");

struct TaskTree {
  ObjectNode goal;
  std::vector<UnitId> unit_ids;  // into the source graph, dependency order
  std::vector<FunctionalUnit> units;
  double cost = 0.0;
  bool proven_optimal = false;
};

enum class SearchMode {
  FirstFound,   // goal-driven list search only
  CostMinimal,  // branch-and-bound on top of it
};

struct RetrievalOptions {
  SearchMode mode = SearchMode::CostMinimal;
  std::size_t node_budget = 2'000'000;  // branch-and-bound expansions before settling for the incumbent
};

TaskTree retrieve_task_tree(const FoonGraph& g, const ObjectNode& goal, const SceneInventory& scene,
                            const MotionCostTable& costs = {}, const RetrievalOptions& opts = {});

struct ValidationReport {
  bool valid = false;
  std::optional<std::size_t> failed_step;  // 0-based index into the tree
  std::string reason;

  explicit operator bool() const noexcept { return valid; }
};

/// Replays the tree against the scene: every step's inputs must already be
/// available, and the goal must be available at the end.
ValidationReport validate_task_tree(const FoonGraph& g, const TaskTree& tree, const SceneInventory& scene,
                                    const ObjectNode& goal);

/// Everything obtainable from `scene` by repeatedly firing units whose inputs are available.
std::set<ObjectNode> reachability_closure(const FoonGraph& g, const SceneInventory& scene);

struct TaskStep {
  std::string motion;
  std::vector<ObjectNode> inputs;
  std::vector<ObjectNode> outputs;
};

std::vector<TaskStep> task_sequence(const TaskTree& tree);

/// {"goal": ..., "cost": ..., "steps": [{"motion", "inputs", "outputs"}...]}
std::string task_tree_json(const TaskTree& tree);

}  // namespace foon
