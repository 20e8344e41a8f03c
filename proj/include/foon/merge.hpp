#pragma once

#include <string>
#include <utility>
#include <vector>

#include "foon/graph.hpp"
#include "foon/ingest.hpp"

namespace foon {

struct MergeStats {
  std::size_t units_examined = 0;
  std::size_t units_added = 0;
  std::size_t units_duplicated = 0;
  std::size_t object_nodes_added = 0;
  // "source:unit#" for every unit dropped as a duplicate, first occurrence wins.
  std::vector<std::string> duplicates;

  MergeStats& operator+=(const MergeStats& other);
};

/// Adds `u` unless an equal unit is already present. Equal object nodes are
/// referenced rather than duplicated.
MergeStats merge_unit(FoonGraph& g, const FunctionalUnit& u);

/// Folds merge_unit over every unit of every subgraph, starting from an empty graph.
std::pair<FoonGraph, MergeStats> merge_all(const std::vector<Subgraph>& subgraphs);

/// Rebuilds a graph from a universal network file written by write order.
FoonGraph load_graph(const std::string& path);
FoonGraph graph_from_text(std::string_view text, const std::string& source = "universal");

}  // namespace foon
