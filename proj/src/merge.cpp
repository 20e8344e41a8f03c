#include "foon/merge.hpp"

#include "foon/error.hpp"

namespace foon {

MergeStats& MergeStats::operator+=(const MergeStats& other) {
  units_examined += other.units_examined;
  units_added += other.units_added;
  units_duplicated += other.units_duplicated;
  object_nodes_added += other.object_nodes_added;
  duplicates.insert(duplicates.end(), other.duplicates.begin(), other.duplicates.end());
  return *this;
}

MergeStats merge_unit(FoonGraph& g, const FunctionalUnit& u) {
  u.check();
  MergeStats delta;
  delta.units_examined = 1;
  if (g.find_unit(u)) {
    delta.units_duplicated = 1;
    return delta;
  }
  const auto before = g.object_count();
  g.add_unit(u);
  delta.units_added = 1;
  delta.object_nodes_added = g.object_count() - before;
  return delta;
}

std::pair<FoonGraph, MergeStats> merge_all(const std::vector<Subgraph>& subgraphs) {
  FoonGraph g;
  MergeStats stats;
  for (const auto& sub : subgraphs) {
    for (std::size_t i = 0; i < sub.units.size(); ++i) {
      MergeStats delta;
      try {
        delta = merge_unit(g, sub.units[i]);
      } catch (const MalformedUnit& e) {
        throw MalformedUnit(sub.source + ": unit " + std::to_string(i + 1) + ": " + e.what());
      }
      if (delta.units_duplicated) delta.duplicates.push_back(sub.source + ":" + std::to_string(i + 1));
      stats += delta;
    }
  }
  return {std::move(g), std::move(stats)};
}

FoonGraph graph_from_text(std::string_view text, const std::string& source) {
  auto sub = parse_subgraph(text, source, UnitOrder::AsWritten);
  return merge_all({sub}).first;
}

FoonGraph load_graph(const std::string& path) {
  return merge_all({read_subgraph_file(path, UnitOrder::AsWritten)}).first;
}

}  // namespace foon
