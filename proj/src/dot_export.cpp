#include <sstream>

#include "foon/graph.hpp"

namespace foon {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string export_dot(const FoonGraph& g) {
  std::ostringstream os;
  os << "digraph foon {\n";
  os << "  rankdir=LR;\n";
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    if (g.kind_of(i) == NodeKind::Object) {
      os << "  n" << i << " [shape=circle, style=filled, fillcolor=green, label="
         << quote(to_string(g.object_at(i))) << "];\n";
    } else {
      os << "  n" << i << " [shape=box, style=filled, fillcolor=red, label="
         << quote(g.motion_at(i).label) << "];\n";
    }
  }
  for (const auto& e : g.edges()) os << "  n" << e.from << " -> n" << e.to << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace foon
