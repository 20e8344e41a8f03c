#pragma once

// Bipartite object/motion network: node identity, functional units, the
// universal graph with its node list and adjacency, and the object-only
// projection used for centrality work.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace foon {

/// An object in a particular state, optionally holding other objects.
/// Identity is (name, states, contents), all compared as sets.
struct ObjectNode {
  std::string name;
  std::set<std::string> states;
  std::set<std::string> contents;

  auto operator<=>(const ObjectNode&) const = default;
  bool operator==(const ObjectNode&) const = default;
};

/// "name{s1,s2}" plus "[c1,c2]" when the object holds something.
std::string to_string(const ObjectNode& node);

/// Throws MalformedUnit when name or states are empty.
void check_object(const ObjectNode& node);

struct TimeWindow {
  long start = 0;
  long end = 0;

  bool operator==(const TimeWindow&) const = default;
};

using UnitId = std::size_t;
using NodeIndex = std::size_t;

struct MotionNode {
  std::string label;
  std::size_t instance = 0;  // unique per graph; equals the owning unit id
};

/// input objects -> one motion -> output objects.
///
/// Inputs and outputs keep their first-seen order for serialization, but a
/// repeated object is stored once and equality is set-based.
class FunctionalUnit {
 public:
  FunctionalUnit() = default;
  FunctionalUnit(std::vector<ObjectNode> inputs, std::string motion, std::vector<ObjectNode> outputs,
                 TimeWindow window = {});

  const std::vector<ObjectNode>& inputs() const noexcept { return inputs_; }
  const std::vector<ObjectNode>& outputs() const noexcept { return outputs_; }
  const std::string& motion() const noexcept { return motion_; }
  const TimeWindow& window() const noexcept { return window_; }

  void add_input(ObjectNode node);
  void add_output(ObjectNode node);
  void set_motion(std::string label) { motion_ = std::move(label); }
  void set_window(TimeWindow w) { window_ = w; }

  bool consumes(const ObjectNode& node) const;
  bool produces(const ObjectNode& node) const;

  /// Throws MalformedUnit on empty inputs, outputs, or motion label.
  void check() const;

 private:
  std::vector<ObjectNode> inputs_;
  std::string motion_;
  std::vector<ObjectNode> outputs_;
  TimeWindow window_;
};

/// Set-equality of inputs and outputs plus equal motion labels. Time windows are ignored.
bool unit_equals(const FunctionalUnit& a, const FunctionalUnit& b);

/// Order-independent identity of a unit, usable as a map key.
struct UnitKey {
  std::set<ObjectNode> inputs;
  std::string motion;
  std::set<ObjectNode> outputs;

  auto operator<=>(const UnitKey&) const = default;
  bool operator==(const UnitKey&) const = default;
};

UnitKey unit_key(const FunctionalUnit& u);

enum class NodeKind { Object, Motion };

struct NodeRef {
  NodeKind kind;
  std::size_t index;  // into objects() or motions()
};

struct Edge {
  NodeIndex from;
  NodeIndex to;
};

/// A unit as stored in a graph, with the node-list positions it touches.
struct StoredUnit {
  FunctionalUnit unit;
  std::vector<NodeIndex> input_nodes;
  NodeIndex motion_node;
  std::vector<NodeIndex> output_nodes;
};

/// The universal network. Grows only; node-list indices never move.
class FoonGraph {
 public:
  /// Appends `u`, reusing equal object nodes and creating a fresh motion instance.
  UnitId add_unit(const FunctionalUnit& u);

  /// First unit equal to `u` under unit_equals, if any.
  std::optional<UnitId> find_unit(const FunctionalUnit& u) const;

  std::optional<NodeIndex> find_object(const ObjectNode& node) const;

  std::size_t node_count() const noexcept { return node_list_.size(); }
  std::size_t object_count() const noexcept { return objects_.size(); }
  std::size_t motion_count() const noexcept { return motions_.size(); }
  std::size_t unit_count() const noexcept { return units_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return units_.empty(); }

  const std::vector<NodeRef>& node_list() const noexcept { return node_list_; }
  const std::vector<ObjectNode>& objects() const noexcept { return objects_; }
  const std::vector<MotionNode>& motions() const noexcept { return motions_; }
  const std::vector<StoredUnit>& units() const noexcept { return units_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  const StoredUnit& unit(UnitId id) const { return units_.at(id); }
  const ObjectNode& object_at(NodeIndex n) const;
  const MotionNode& motion_at(NodeIndex n) const;
  NodeKind kind_of(NodeIndex n) const { return node_list_.at(n).kind; }

  /// Node-list position of the i-th object node.
  NodeIndex object_node_index(std::size_t object) const { return object_nodes_.at(object); }

  const std::vector<NodeIndex>& successors(NodeIndex n) const { return out_.at(n); }
  const std::vector<NodeIndex>& predecessors(NodeIndex n) const { return in_.at(n); }

  /// Units whose outputs contain the object at node-list position `n`, in insertion order.
  const std::vector<UnitId>& producers(NodeIndex n) const { return producers_.at(n); }
  const std::vector<UnitId>& consumers(NodeIndex n) const { return consumers_.at(n); }

 private:
  NodeIndex intern_object(const ObjectNode& node);
  NodeIndex push_node(NodeRef ref);

  std::vector<NodeRef> node_list_;
  std::vector<ObjectNode> objects_;
  std::vector<NodeIndex> object_nodes_;
  std::vector<MotionNode> motions_;
  std::vector<StoredUnit> units_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeIndex>> out_;
  std::vector<std::vector<NodeIndex>> in_;
  std::vector<std::vector<UnitId>> producers_;
  std::vector<std::vector<UnitId>> consumers_;
  std::map<ObjectNode, NodeIndex> object_lookup_;
  std::map<UnitKey, UnitId> unit_lookup_;
};

/// 0/1 matrix over the node list; entry (i, j) is 1 iff node i -> node j.
Eigen::MatrixXi adjacency_matrix(const FoonGraph& g);

/// Object-only network: u -> v once per unit with u among its inputs and v among its outputs.
struct ObjectGraph {
  std::vector<ObjectNode> nodes;
  std::vector<std::string> labels;  // display label per node
  std::map<std::pair<std::size_t, std::size_t>, long> edges;

  std::size_t size() const noexcept { return nodes.size(); }
  long total_multiplicity() const;

  /// Dense directed multiplicity matrix, (i, j) = multiplicity of i -> j.
  Eigen::MatrixXd multiplicity_matrix() const;
};

ObjectGraph one_mode_projection(const FoonGraph& g);

/// Merges nodes sharing an object name, summing multiplicities. The merged
/// node keeps the name with the union of all states and contents; labels
/// become bare names.
ObjectGraph collapse_states(const ObjectGraph& og);

/// Deterministic Graphviz text: objects as circles, motions as boxes.
std::string export_dot(const FoonGraph& g);

}  // namespace foon
