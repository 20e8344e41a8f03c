#include "foon/graph.hpp"

#include <algorithm>

#include "foon/error.hpp"

namespace foon {

namespace {

std::string join(const std::set<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

void push_unique(std::vector<ObjectNode>& v, ObjectNode node) {
  if (std::find(v.begin(), v.end(), node) == v.end()) v.push_back(std::move(node));
}

}  // namespace

std::string to_string(const ObjectNode& node) {
  std::string out = node.name + "{" + join(node.states) + "}";
  if (!node.contents.empty()) out += "[" + join(node.contents) + "]";
  return out;
}

void check_object(const ObjectNode& node) {
  if (node.name.empty()) throw MalformedUnit("object node with empty name");
  if (node.states.empty()) throw MalformedUnit("object '" + node.name + "' has no state");
}

FunctionalUnit::FunctionalUnit(std::vector<ObjectNode> inputs, std::string motion,
                               std::vector<ObjectNode> outputs, TimeWindow window)
    : motion_(std::move(motion)), window_(window) {
  for (auto& n : inputs) add_input(std::move(n));
  for (auto& n : outputs) add_output(std::move(n));
}

void FunctionalUnit::add_input(ObjectNode node) { push_unique(inputs_, std::move(node)); }
void FunctionalUnit::add_output(ObjectNode node) { push_unique(outputs_, std::move(node)); }

bool FunctionalUnit::consumes(const ObjectNode& node) const {
  return std::find(inputs_.begin(), inputs_.end(), node) != inputs_.end();
}

bool FunctionalUnit::produces(const ObjectNode& node) const {
  return std::find(outputs_.begin(), outputs_.end(), node) != outputs_.end();
}

void FunctionalUnit::check() const {
  if (motion_.empty()) throw MalformedUnit("functional unit without a motion label");
  if (inputs_.empty()) throw MalformedUnit("functional unit '" + motion_ + "' has no inputs");
  if (outputs_.empty()) throw MalformedUnit("functional unit '" + motion_ + "' has no outputs");
  for (const auto& n : inputs_) check_object(n);
  for (const auto& n : outputs_) check_object(n);
}

UnitKey unit_key(const FunctionalUnit& u) {
  return UnitKey{{u.inputs().begin(), u.inputs().end()},
                 u.motion(),
                 {u.outputs().begin(), u.outputs().end()}};
}

bool unit_equals(const FunctionalUnit& a, const FunctionalUnit& b) {
  if (a.motion() != b.motion()) return false;
  if (a.inputs().size() != b.inputs().size() || a.outputs().size() != b.outputs().size()) return false;
  return unit_key(a) == unit_key(b);
}

NodeIndex FoonGraph::push_node(NodeRef ref) {
  node_list_.push_back(ref);
  out_.emplace_back();
  in_.emplace_back();
  producers_.emplace_back();
  consumers_.emplace_back();
  return node_list_.size() - 1;
}

NodeIndex FoonGraph::intern_object(const ObjectNode& node) {
  if (auto it = object_lookup_.find(node); it != object_lookup_.end()) return it->second;
  objects_.push_back(node);
  const NodeIndex n = push_node({NodeKind::Object, objects_.size() - 1});
  object_nodes_.push_back(n);
  object_lookup_.emplace(node, n);
  return n;
}

UnitId FoonGraph::add_unit(const FunctionalUnit& u) {
  u.check();
  const UnitId id = units_.size();
  StoredUnit stored{u, {}, 0, {}};

  for (const auto& obj : u.inputs()) stored.input_nodes.push_back(intern_object(obj));
  motions_.push_back(MotionNode{u.motion(), id});
  stored.motion_node = push_node({NodeKind::Motion, motions_.size() - 1});
  for (const auto& obj : u.outputs()) stored.output_nodes.push_back(intern_object(obj));

  for (NodeIndex in : stored.input_nodes) {
    edges_.push_back({in, stored.motion_node});
    out_[in].push_back(stored.motion_node);
    in_[stored.motion_node].push_back(in);
    consumers_[in].push_back(id);
  }
  for (NodeIndex outn : stored.output_nodes) {
    edges_.push_back({stored.motion_node, outn});
    out_[stored.motion_node].push_back(outn);
    in_[outn].push_back(stored.motion_node);
    producers_[outn].push_back(id);
  }

  unit_lookup_.try_emplace(unit_key(u), id);
  units_.push_back(std::move(stored));
  return id;
}

std::optional<UnitId> FoonGraph::find_unit(const FunctionalUnit& u) const {
  if (auto it = unit_lookup_.find(unit_key(u)); it != unit_lookup_.end()) return it->second;
  return std::nullopt;
}

std::optional<NodeIndex> FoonGraph::find_object(const ObjectNode& node) const {
  if (auto it = object_lookup_.find(node); it != object_lookup_.end()) return it->second;
  return std::nullopt;
}

const ObjectNode& FoonGraph::object_at(NodeIndex n) const {
  const auto& ref = node_list_.at(n);
  if (ref.kind != NodeKind::Object) throw std::out_of_range("node is not an object node");
  return objects_[ref.index];
}

const MotionNode& FoonGraph::motion_at(NodeIndex n) const {
  const auto& ref = node_list_.at(n);
  if (ref.kind != NodeKind::Motion) throw std::out_of_range("node is not a motion node");
  return motions_[ref.index];
}

Eigen::MatrixXi adjacency_matrix(const FoonGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  for (const auto& e : g.edges()) {
    m(static_cast<Eigen::Index>(e.from), static_cast<Eigen::Index>(e.to)) = 1;
  }
  return m;
}

long ObjectGraph::total_multiplicity() const {
  long total = 0;
  for (const auto& [_, m] : edges) total += m;
  return total;
}

Eigen::MatrixXd ObjectGraph::multiplicity_matrix() const {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [e, mult] : edges) {
    m(static_cast<Eigen::Index>(e.first), static_cast<Eigen::Index>(e.second)) = static_cast<double>(mult);
  }
  return m;
}

ObjectGraph one_mode_projection(const FoonGraph& g) {
  ObjectGraph og;
  og.nodes = g.objects();
  og.labels.reserve(og.nodes.size());
  for (const auto& n : og.nodes) og.labels.push_back(to_string(n));

  for (const auto& su : g.units()) {
    for (NodeIndex in : su.input_nodes) {
      for (NodeIndex outn : su.output_nodes) {
        ++og.edges[{g.node_list()[in].index, g.node_list()[outn].index}];
      }
    }
  }
  return og;
}

ObjectGraph collapse_states(const ObjectGraph& og) {
  ObjectGraph out;
  std::map<std::string, std::size_t> by_name;
  std::vector<std::size_t> remap(og.nodes.size());
  for (std::size_t i = 0; i < og.nodes.size(); ++i) {
    const auto& node = og.nodes[i];
    auto [it, inserted] = by_name.try_emplace(node.name, out.nodes.size());
    if (inserted) {
      out.nodes.push_back(ObjectNode{node.name, {}, {}});
      out.labels.push_back(node.name);
    }
    auto& merged = out.nodes[it->second];
    merged.states.insert(node.states.begin(), node.states.end());
    merged.contents.insert(node.contents.begin(), node.contents.end());
    remap[i] = it->second;
  }
  for (const auto& [e, mult] : og.edges) out.edges[{remap[e.first], remap[e.second]}] += mult;
  return out;
}

}  // namespace foon
