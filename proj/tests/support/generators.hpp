#pragma once

// Random FOON material for property tests. Pools are small on purpose so
// that units share objects and chain into each other.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "foon/graph.hpp"
#include "foon/ingest.hpp"

namespace foon::testing {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

struct Pools {
  std::vector<std::string> names{"tomato", "knife", "bowl", "egg", "pan", "olive oil", "salt", "spoon"};
  std::vector<std::string> states{"whole", "chopped", "clean", "dirty", "hot", "mixed"};
  std::vector<std::string> motions{"chop", "pour", "stir", "pick-and-place", "slice"};
};

inline ObjectNode random_object(Rng& rng, const Pools& p = {}) {
  ObjectNode n;
  n.name = p.names[uniform(rng, 0, p.names.size() - 1)];
  const auto k = uniform(rng, 1, 2);
  while (n.states.size() < k) n.states.insert(p.states[uniform(rng, 0, p.states.size() - 1)]);
  if (coin(rng, 0.2)) {
    const auto c = uniform(rng, 1, 2);
    while (n.contents.size() < c) n.contents.insert(p.names[uniform(rng, 0, p.names.size() - 1)]);
  }
  return n;
}

inline FunctionalUnit random_unit(Rng& rng, const Pools& p = {}) {
  FunctionalUnit u;
  const auto ni = uniform(rng, 1, 3);
  const auto no = uniform(rng, 1, 3);
  for (std::size_t i = 0; i < ni; ++i) u.add_input(random_object(rng, p));
  for (std::size_t i = 0; i < no; ++i) u.add_output(random_object(rng, p));
  u.set_motion(p.motions[uniform(rng, 0, p.motions.size() - 1)]);
  const long start = static_cast<long>(uniform(rng, 0, 500));
  u.set_window({start, start + static_cast<long>(uniform(rng, 0, 50))});
  return u;
}

/// A subgraph whose units are already in time-window order (as parse_subgraph returns them).
inline Subgraph random_subgraph(Rng& rng, std::size_t units, const std::string& source, const Pools& p = {}) {
  Subgraph s{source, {}};
  for (std::size_t i = 0; i < units; ++i) s.units.push_back(random_unit(rng, p));
  std::stable_sort(s.units.begin(), s.units.end(),
                   [](const auto& a, const auto& b) { return a.window().start < b.window().start; });
  return s;
}

/// Small planning instance: objects drawn from a fixed pool of single-state
/// nodes so that producers and consumers overlap heavily.
struct PlanningInstance {
  FoonGraph graph;
  std::vector<ObjectNode> pool;
};

inline std::vector<ObjectNode> planning_pool(std::size_t size) {
  std::vector<ObjectNode> pool;
  for (std::size_t i = 0; i < size; ++i) pool.push_back(ObjectNode{"obj" + std::to_string(i), {"s"}, {}});
  return pool;
}

inline PlanningInstance random_planning_instance(Rng& rng, std::size_t max_units, std::size_t pool_size = 9) {
  PlanningInstance inst;
  inst.pool = planning_pool(pool_size);
  const std::vector<std::string> motions{"a", "b", "c"};
  const auto units = uniform(rng, 1, max_units);
  for (std::size_t k = 0; k < units; ++k) {
    FunctionalUnit u;
    const auto ni = uniform(rng, 1, 3);
    const auto no = uniform(rng, 1, 2);
    for (std::size_t i = 0; i < ni; ++i) u.add_input(inst.pool[uniform(rng, 0, pool_size - 1)]);
    for (std::size_t i = 0; i < no; ++i) u.add_output(inst.pool[uniform(rng, 0, pool_size - 1)]);
    u.set_motion(motions[uniform(rng, 0, motions.size() - 1)]);
    inst.graph.add_unit(u);
  }
  return inst;
}

inline std::vector<ObjectNode> random_scene(Rng& rng, const std::vector<ObjectNode>& pool, double p = 0.35) {
  std::vector<ObjectNode> scene;
  for (const auto& n : pool) {
    if (coin(rng, p)) scene.push_back(n);
  }
  return scene;
}

}  // namespace foon::testing
