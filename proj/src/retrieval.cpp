#include "foon/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "foon/ingest.hpp"

namespace foon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim_copy(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

// Working state shared by both search modes. Object nodes are addressed by
// node-list index.
class Planner {
 public:
  Planner(const FoonGraph& g, const MotionCostTable& costs, const SceneInventory& scene)
      : g_(g), in_scene_(g.node_count(), false), unit_cost_(g.unit_count()) {
    for (const auto& obj : scene) {
      if (auto n = g.find_object(obj)) in_scene_[*n] = true;
    }
    for (UnitId u = 0; u < g.unit_count(); ++u) unit_cost_[u] = costs.of(g.unit(u).unit.motion());
    compute_heuristic();
  }

  bool reachable(NodeIndex n) const { return best_[n] < kInf; }

  // Goal-driven list search. Returns units in commit order that make the goal.
  std::vector<UnitId> first_found(NodeIndex goal) const {
    const auto n_nodes = g_.node_count();
    std::vector<bool> solved = in_scene_;
    std::vector<double> cost(n_nodes, 0.0);
    std::vector<std::optional<UnitId>> solver(n_nodes);
    std::vector<bool> listed(n_nodes, false);
    std::vector<NodeIndex> search{goal};
    listed[goal] = true;
    std::vector<UnitId> committed;

    while (!solved[goal]) {
      bool progress = false;
      for (std::size_t k = 0; k < search.size(); ++k) {
        const NodeIndex current = search[k];
        if (solved[current]) continue;
        std::optional<UnitId> pick;
        double pick_cost = kInf;
        for (UnitId u : g_.producers(current)) {
          const auto& su = g_.unit(u);
          bool ready = true;
          double c = unit_cost_[u];
          for (NodeIndex in : su.input_nodes) {
            if (!solved[in]) {
              ready = false;
              if (!listed[in]) {
                listed[in] = true;
                search.push_back(in);
              }
            } else {
              c += cost[in];
            }
          }
          if (ready && c < pick_cost) {
            pick = u;
            pick_cost = c;
          }
        }
        if (!pick) continue;
        committed.push_back(*pick);
        for (NodeIndex out : g_.unit(*pick).output_nodes) {
          if (solved[out]) continue;
          solved[out] = true;
          cost[out] = pick_cost;
          solver[out] = *pick;
        }
        progress = true;
      }
      if (!progress && !solved[goal]) return {};
    }

    // Keep only the units the goal actually depends on.
    std::vector<bool> keep(g_.unit_count(), false);
    std::vector<NodeIndex> stack{goal};
    std::vector<bool> visited(n_nodes, false);
    while (!stack.empty()) {
      const auto n = stack.back();
      stack.pop_back();
      if (visited[n] || in_scene_[n]) continue;
      visited[n] = true;
      const UnitId u = *solver[n];
      keep[u] = true;
      for (NodeIndex in : g_.unit(u).input_nodes) stack.push_back(in);
    }
    std::vector<UnitId> out;
    for (UnitId u : committed) {
      if (keep[u]) {
        out.push_back(u);
        keep[u] = false;
      }
    }
    return out;
  }

  struct Best {
    std::vector<UnitId> units;
    double cost = kInf;
    bool exhausted = false;
  };

  Best branch_and_bound(NodeIndex goal, std::vector<UnitId> incumbent, std::size_t budget) {
    best_units_ = std::move(incumbent);
    best_cost_ = total_cost(best_units_);
    budget_ = budget;
    expansions_ = 0;
    exhausted_ = false;
    refcount_.assign(g_.unit_count(), 0);
    assigned_.assign(g_.node_count(), false);
    queue_.assign(1, goal);
    chosen_cost_ = 0.0;
    search(0);
    return {best_units_, best_cost_, exhausted_};
  }

  double total_cost(const std::vector<UnitId>& units) const {
    double c = 0.0;
    for (UnitId u : units) c += unit_cost_[u];
    return c;
  }

  // Fires the chosen units in insertion-order passes; empty when the goal is not produced.
  std::vector<UnitId> execution_order(const std::vector<UnitId>& chosen, NodeIndex goal) const {
    std::vector<UnitId> pending = chosen;
    std::sort(pending.begin(), pending.end());
    std::vector<bool> avail = in_scene_;
    std::vector<UnitId> order;
    bool changed = true;
    while (changed && !pending.empty()) {
      changed = false;
      for (auto it = pending.begin(); it != pending.end();) {
        const auto& su = g_.unit(*it);
        if (std::all_of(su.input_nodes.begin(), su.input_nodes.end(), [&](NodeIndex n) { return avail[n]; })) {
          for (NodeIndex out : su.output_nodes) avail[out] = true;
          order.push_back(*it);
          it = pending.erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
    if (!pending.empty() || !avail[goal]) return {};
    return order;
  }

 private:
  // Additive cost-to-make per object: 0 for scene objects, min over producers
  // of (unit cost + sum of input costs). Infinite means unreachable.
  void compute_heuristic() {
    best_.assign(g_.node_count(), kInf);
    unit_h_.assign(g_.unit_count(), kInf);
    for (NodeIndex n = 0; n < g_.node_count(); ++n) {
      if (in_scene_[n]) best_[n] = 0.0;
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (UnitId u = 0; u < g_.unit_count(); ++u) {
        const auto& su = g_.unit(u);
        double c = unit_cost_[u];
        for (NodeIndex in : su.input_nodes) c += best_[in];
        if (!(c < unit_h_[u])) continue;
        unit_h_[u] = c;
        for (NodeIndex out : su.output_nodes) {
          if (c < best_[out]) {
            best_[out] = c;
            changed = true;
          }
        }
      }
    }
  }

  std::vector<UnitId> candidates(NodeIndex n) const {
    std::vector<UnitId> out;
    for (UnitId u : g_.producers(n)) {
      if (unit_h_[u] < kInf && !g_.unit(u).unit.consumes(g_.object_at(n))) out.push_back(u);
    }
    std::stable_sort(out.begin(), out.end(), [&](UnitId a, UnitId b) { return unit_h_[a] < unit_h_[b]; });
    return out;
  }

  void search(std::size_t head) {
    if (exhausted_) return;
    if (++expansions_ > budget_) {
      exhausted_ = true;
      return;
    }
    if (chosen_cost_ >= best_cost_) return;

    while (head < queue_.size() && (in_scene_[queue_[head]] || assigned_[queue_[head]])) ++head;
    if (head == queue_.size()) {
      std::vector<UnitId> chosen;
      for (UnitId u = 0; u < refcount_.size(); ++u) {
        if (refcount_[u] > 0) chosen.push_back(u);
      }
      auto order = execution_order(chosen, queue_.front());
      if (!order.empty()) {
        best_units_ = std::move(order);
        best_cost_ = chosen_cost_;
      }
      return;
    }

    const NodeIndex n = queue_[head];
    assigned_[n] = true;
    for (UnitId p : candidates(n)) {
      const std::size_t mark = queue_.size();
      const bool fresh = refcount_[p]++ == 0;
      if (fresh) {
        chosen_cost_ += unit_cost_[p];
        for (NodeIndex in : g_.unit(p).input_nodes) {
          if (!in_scene_[in] && !assigned_[in]) queue_.push_back(in);
        }
      }
      search(head + 1);
      queue_.resize(mark);
      if (fresh) chosen_cost_ -= unit_cost_[p];
      --refcount_[p];
      if (exhausted_) break;
    }
    assigned_[n] = false;
  }

  const FoonGraph& g_;
  std::vector<bool> in_scene_;
  std::vector<double> unit_cost_;
  std::vector<double> best_;
  std::vector<double> unit_h_;

  std::vector<UnitId> best_units_;
  double best_cost_ = kInf;
  std::size_t budget_ = 0;
  std::size_t expansions_ = 0;
  bool exhausted_ = false;
  std::vector<int> refcount_;
  std::vector<bool> assigned_;
  std::vector<NodeIndex> queue_;
  double chosen_cost_ = 0.0;
};

}  // namespace

double MotionCostTable::of(const std::string& motion) const {
  if (auto it = costs.find(motion); it != costs.end()) return it->second;
  return default_cost;
}

MotionCostTable parse_cost_table(std::string_view csv, const std::string& source) {
  MotionCostTable table;
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_copy(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw ParseError(source, line_no, "expected motion,cost");
    const auto motion = normalize_label(line.substr(0, comma));
    const auto value = trim_copy(line.substr(comma + 1));
    if (line_no == 1 && motion == "motion" && value == "cost") continue;
    double cost = 0.0;
    try {
      std::size_t used = 0;
      cost = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ParseError(source, line_no, "cost '" + value + "' is not a number");
    }
    if (!std::isfinite(cost) || cost < 0) throw ParseError(source, line_no, "cost must be finite and >= 0");
    table.costs[motion] = cost;
  }
  return table;
}

TaskTree retrieve_task_tree(const FoonGraph& g, const ObjectNode& goal, const SceneInventory& scene,
                            const MotionCostTable& costs, const RetrievalOptions& opts) {
  TaskTree tree;
  tree.goal = goal;
  if (std::find(scene.begin(), scene.end(), goal) != scene.end()) {
    tree.proven_optimal = true;
    return tree;
  }
  const auto goal_node = g.find_object(goal);
  if (!goal_node) throw GoalNotInGraph("goal " + to_string(goal) + " is not in the network");

  Planner planner(g, costs, scene);
  auto units = planner.first_found(*goal_node);
  if (units.empty()) {
    throw Unreachable("goal " + to_string(goal) + " is unreachable from the given scene");
  }

  bool optimal = false;
  if (opts.mode == SearchMode::CostMinimal) {
    auto best = planner.branch_and_bound(*goal_node, units, opts.node_budget);
    units = std::move(best.units);
    optimal = !best.exhausted;
  }

  tree.unit_ids = units;
  for (UnitId u : units) tree.units.push_back(g.unit(u).unit);
  tree.cost = planner.total_cost(units);
  tree.proven_optimal = optimal;
  return tree;
}

ValidationReport validate_task_tree(const FoonGraph& g, const TaskTree& tree, const SceneInventory& scene,
                                    const ObjectNode& goal) {
  std::set<ObjectNode> available(scene.begin(), scene.end());
  for (std::size_t i = 0; i < tree.units.size(); ++i) {
    const auto& u = tree.units[i];
    if (!g.find_unit(u)) return {false, i, "step " + std::to_string(i + 1) + " is not a unit of the network"};
    for (const auto& in : u.inputs()) {
      if (!available.count(in)) {
        return {false, i, "step " + std::to_string(i + 1) + " needs " + to_string(in) + " which is not available"};
      }
    }
    available.insert(u.outputs().begin(), u.outputs().end());
  }
  if (!available.count(goal)) return {false, std::nullopt, "goal " + to_string(goal) + " is never produced"};
  return {true, std::nullopt, {}};
}

std::set<ObjectNode> reachability_closure(const FoonGraph& g, const SceneInventory& scene) {
  std::set<ObjectNode> closure(scene.begin(), scene.end());
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& su : g.units()) {
      const auto& u = su.unit;
      if (!std::all_of(u.inputs().begin(), u.inputs().end(), [&](const auto& n) { return closure.count(n) > 0; })) {
        continue;
      }
      for (const auto& out : u.outputs()) grew |= closure.insert(out).second;
    }
  }
  return closure;
}

std::vector<TaskStep> task_sequence(const TaskTree& tree) {
  std::vector<TaskStep> steps;
  steps.reserve(tree.units.size());
  for (const auto& u : tree.units) steps.push_back({u.motion(), u.inputs(), u.outputs()});
  return steps;
}

std::string task_tree_json(const TaskTree& tree) {
  using nlohmann::json;
  auto objects = [](const std::vector<ObjectNode>& v) {
    json arr = json::array();
    for (const auto& n : v) {
      arr.push_back({{"name", n.name}, {"states", n.states}, {"contents", n.contents}});
    }
    return arr;
  };
  json steps = json::array();
  for (const auto& step : task_sequence(tree)) {
    steps.push_back({{"motion", step.motion}, {"inputs", objects(step.inputs)}, {"outputs", objects(step.outputs)}});
  }
  json doc = {{"goal", to_string(tree.goal)}, {"cost", tree.cost}, {"steps", steps}};
  return doc.dump(2) + "\n";
}

}  // namespace foon
