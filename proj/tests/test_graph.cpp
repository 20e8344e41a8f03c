#include <algorithm>
#include <set>

#include "doctest.h"
#include "foon/error.hpp"
#include "foon/graph.hpp"
#include "foon/ingest.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace foon;

namespace {

ObjectNode obj(const std::string& name, std::set<std::string> states, std::set<std::string> contents = {}) {
  return ObjectNode{name, std::move(states), std::move(contents)};
}

FunctionalUnit chop_unit() {
  return FunctionalUnit({obj("tomato", {"whole"}), obj("knife", {"clean"})}, "chop",
                        {obj("tomato", {"chopped"}), obj("knife", {"dirty"})}, {5, 20});
}

void check_structure(const FoonGraph& g) {
  // bipartite
  for (const auto& e : g.edges()) REQUIRE(g.kind_of(e.from) != g.kind_of(e.to));
  // object uniqueness
  const std::set<ObjectNode> unique(g.objects().begin(), g.objects().end());
  REQUIRE(unique.size() == g.objects().size());
  // edge count identity
  std::size_t expected = 0;
  for (const auto& su : g.units()) expected += su.unit.inputs().size() + su.unit.outputs().size();
  REQUIRE(g.edge_count() == expected);
  // one motion per unit
  REQUIRE(g.motion_count() == g.unit_count());
}

}  // namespace

TEST_CASE("object identity is name, states and contents") {
  CHECK(obj("bowl", {"a", "b"}) == obj("bowl", {"b", "a"}));
  CHECK(obj("bowl", {"a"}) != obj("bowl", {"a"}, {"egg"}));
  CHECK(obj("bowl", {"a"}) != obj("pot", {"a"}));
  CHECK(to_string(obj("bowl", {"contains"}, {"salt", "egg"})) == "bowl{contains}[egg,salt]");
}

TEST_CASE("unit_equals") {
  const auto u = chop_unit();
  CHECK(unit_equals(u, u));

  auto slice = chop_unit();
  slice.set_motion("slice");
  CHECK_FALSE(unit_equals(u, slice));

  FunctionalUnit reversed({obj("knife", {"clean"}), obj("tomato", {"whole"})}, "chop",
                          {obj("knife", {"dirty"}), obj("tomato", {"chopped"})}, {100, 200});
  CHECK(unit_equals(u, reversed));
  CHECK(unit_equals(reversed, u));

  FunctionalUnit dup({obj("tomato", {"whole"}), obj("tomato", {"whole"}), obj("knife", {"clean"})}, "chop",
                     {obj("tomato", {"chopped"}), obj("knife", {"dirty"})});
  CHECK(dup.inputs().size() == 2);
  CHECK(unit_equals(u, dup));
}

TEST_CASE("add_unit") {
  SUBCASE("empty graph") {
    FoonGraph g;
    const auto id = g.add_unit(chop_unit());
    CHECK(id == 0);
    CHECK(g.object_count() == 4);
    CHECK(g.motion_count() == 1);
    CHECK(g.edge_count() == 4);
    check_structure(g);
  }
  SUBCASE("shared object is referenced") {
    FoonGraph g;
    g.add_unit(chop_unit());
    FunctionalUnit place({obj("tomato", {"chopped"}), obj("bowl", {"empty"})}, "pick-and-place",
                         {obj("bowl", {"contains"}, {"tomato"})});
    // brute-force union of object sets
    std::set<ObjectNode> all;
    for (const auto& u : {chop_unit(), place}) {
      all.insert(u.inputs().begin(), u.inputs().end());
      all.insert(u.outputs().begin(), u.outputs().end());
    }
    const auto chopped = *g.find_object(obj("tomato", {"chopped"}));
    const auto degree_before = g.successors(chopped).size() + g.predecessors(chopped).size();
    g.add_unit(place);
    CHECK(g.object_count() == all.size());
    CHECK(g.successors(chopped).size() + g.predecessors(chopped).size() == degree_before + 1);
    check_structure(g);
  }
  SUBCASE("malformed units are rejected") {
    FoonGraph g;
    FunctionalUnit no_out({obj("a", {"s"})}, "m", {});
    CHECK_THROWS_AS(g.add_unit(no_out), MalformedUnit);
    FunctionalUnit no_in({}, "m", {obj("a", {"s"})});
    CHECK_THROWS_AS(g.add_unit(no_in), MalformedUnit);
    FunctionalUnit stateless({obj("a", {})}, "m", {obj("a", {"s"})});
    CHECK_THROWS_AS(g.add_unit(stateless), MalformedUnit);
    CHECK(g.node_count() == 0);
  }
  SUBCASE("same motion label gets separate instances") {
    FoonGraph g;
    g.add_unit(chop_unit());
    g.add_unit(chop_unit());
    CHECK(g.motion_count() == 2);
    CHECK(g.motions()[0].instance != g.motions()[1].instance);
    CHECK(g.object_count() == 4);
  }
}

TEST_CASE("adjacency matrix") {
  FoonGraph empty;
  CHECK(adjacency_matrix(empty).size() == 0);

  FoonGraph g;
  g.add_unit(FunctionalUnit({obj("a", {"s"})}, "m", {obj("b", {"s"})}));
  const auto m = adjacency_matrix(g);
  REQUIRE(m.rows() == 3);
  CHECK(m.sum() == 2);
  CHECK(m(0, 1) == 1);  // A -> M
  CHECK(m(1, 2) == 1);  // M -> B

  SUBCASE("row sums equal out-degrees on the sample corpus") {
    std::vector<Subgraph> subs;
    for (const auto* name : {"tomato_salad", "guacamole", "pasta", "ribs_video1", "ribs_video2"}) {
      subs.push_back(read_subgraph_file(std::string(FOON_DATA_DIR) + "/corpus/" + name + ".foon"));
    }
    FoonGraph big;
    for (const auto& s : subs)
      for (const auto& u : s.units)
        if (!big.find_unit(u)) big.add_unit(u);
    const auto adj = adjacency_matrix(big);
    std::vector<std::size_t> recount(big.node_count(), 0);
    for (const auto& su : big.units()) {
      for (auto in : su.input_nodes) ++recount[in];
      recount[su.motion_node] += su.output_nodes.size();
    }
    for (NodeIndex i = 0; i < big.node_count(); ++i) {
      CHECK(static_cast<std::size_t>(adj.row(static_cast<Eigen::Index>(i)).sum()) == recount[i]);
      CHECK(big.successors(i).size() == recount[i]);
    }
  }
}

TEST_CASE("one-mode projection") {
  SUBCASE("two inputs one output") {
    FoonGraph g;
    g.add_unit(FunctionalUnit({obj("a", {"s"}), obj("b", {"s"})}, "m", {obj("c", {"s"})}));
    const auto og = one_mode_projection(g);
    CHECK(og.size() == 3);
    CHECK(og.edges.size() == 2);
    CHECK(og.edges.at({0, 2}) == 1);
    CHECK(og.edges.at({1, 2}) == 1);
  }
  SUBCASE("chop: every input to every output") {
    FoonGraph g;
    g.add_unit(chop_unit());
    const auto og = one_mode_projection(g);
    CHECK(og.edges.size() == 4);
    CHECK(og.total_multiplicity() == 4);
  }
  SUBCASE("empty") {
    FoonGraph g;
    const auto og = one_mode_projection(g);
    CHECK(og.size() == 0);
    CHECK(og.edges.empty());
  }
  SUBCASE("multiplicity counts units") {
    FoonGraph g;
    g.add_unit(FunctionalUnit({obj("a", {"s"})}, "m", {obj("b", {"s"})}));
    g.add_unit(FunctionalUnit({obj("a", {"s"})}, "n", {obj("b", {"s"})}));
    CHECK(one_mode_projection(g).edges.at({0, 1}) == 2);
  }
  SUBCASE("collapse states merges by name") {
    FoonGraph g;
    g.add_unit(chop_unit());
    const auto c = collapse_states(one_mode_projection(g));
    CHECK(c.size() == 2);
    CHECK(c.labels == std::vector<std::string>{"tomato", "knife"});
    CHECK(c.total_multiplicity() == 4);
    CHECK(c.edges.at({0, 0}) == 1);
  }
}

TEST_CASE("projection preserves object reachability (random graphs, brute-force BFS)") {
  testing::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    FoonGraph g;
    const auto units = testing::uniform(rng, 1, 6);
    for (std::size_t i = 0; i < units; ++i) g.add_unit(testing::random_unit(rng));
    if (g.node_count() > 30) continue;
    const auto og = one_mode_projection(g);

    // reachability in the projection via repeated relaxation
    const auto n = og.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (const auto& [e, _] : og.edges) reach[e.first][e.second] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;

    for (std::size_t i = 0; i < n; ++i) {
      const auto seen = testing::bfs_from(g, g.object_node_index(i));
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(reach[i][j] == seen[g.object_node_index(j)]);
      }
    }
  }
}

TEST_CASE("invariants hold after random add sequences") {
  testing::Rng rng(3);
  FoonGraph g;
  for (int i = 0; i < 200; ++i) {
    g.add_unit(testing::random_unit(rng));
    check_structure(g);
  }
}

TEST_CASE("DOT export") {
  FoonGraph empty;
  CHECK(export_dot(empty) == "digraph foon {\n  rankdir=LR;\n}\n");

  FoonGraph g;
  g.add_unit(FunctionalUnit({obj("a", {"s"})}, "m", {obj("b", {"s"})}));
  const auto dot = export_dot(g);
  CHECK(std::count(dot.begin(), dot.end(), ';') == 1 + 3 + 2);
  CHECK(dot.find("shape=circle") != std::string::npos);
  CHECK(dot.find("shape=box") != std::string::npos);
  CHECK(dot.find("n0 -> n1;") != std::string::npos);
  CHECK(dot.find("n1 -> n2;") != std::string::npos);
  CHECK(export_dot(g) == dot);

  FoonGraph quoted;
  quoted.add_unit(FunctionalUnit({obj("say \"hi\"", {"s"})}, "m", {obj("b", {"s"})}));
  CHECK(export_dot(quoted).find("label=\"say \\\"hi\\\"{s}\"") != std::string::npos);
}
