#ifndef SEEK_BASELINES_HPP
#define SEEK_BASELINES_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "seek/defaults.hpp"
#include "seek/global_planner.hpp"
#include "seek/rng.hpp"
#include "seek/scene_graph.hpp"

namespace seek {

// Word-distance stand-in between an object class and room types; smaller
// means more related.
struct SemanticDistance {
  std::string object;
  std::map<std::string, double> room_types;

  // Distance for a room type, floored; missing entries warn and count as 1.
  double dist(const std::string& room_type) const;

  // Default table derived from a prior row: 1 - P(object | room type).
  static SemanticDistance from_prior(const PriorTable& table, const std::string& object_class);
};

// Shared state for the reference planners. Each selection is emitted as a
// move-then-search pair of global actions.
struct BaselineState {
  std::set<int> selected;      // rooms already chosen this sweep
  int pending_search = -1;     // room whose search is owed after a move
  std::vector<int> order;      // random baseline: shuffled visit order
  std::size_t order_pos = 0;
  SemanticDistance semdist;    // semantic-utility baseline only
};

// Highest semantic utility 1 / (dist_sem * dist) among unselected rooms.
GlobalAction semantic_utility_next(BaselineState& state, const LayeredSceneGraph& graph,
                                   const CostMatrix& costs, Vec2 robot_position,
                                   const std::string& object_class);

// Nearest unselected room by move cost from the current room.
GlobalAction coverage_next(BaselineState& state, const CostMatrix& costs, Vec2 robot_position,
                           const LayeredSceneGraph& graph);

// Next room of a permutation shuffled once per episode.
GlobalAction random_next(BaselineState& state, Rng& rng);

}  // namespace seek

#endif  // SEEK_BASELINES_HPP
