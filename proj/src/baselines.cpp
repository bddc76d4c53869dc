#include "seek/baselines.hpp"

#include <algorithm>
#include <limits>

#include "seek/errors.hpp"
#include "seek/logging.hpp"
#include "seek/semantic_belief.hpp"

namespace seek {

double SemanticDistance::dist(const std::string& room_type) const {
  const auto it = room_types.find(room_type);
  if (it == room_types.end()) {
    log::info("semantic distance table has no entry for room type \"" + room_type +
              "\"; using 1.0");
    return 1.0;
  }
  return std::max(it->second, defaults::kSemDistFloor);
}

SemanticDistance SemanticDistance::from_prior(const PriorTable& table,
                                              const std::string& object_class) {
  SemanticDistance sd;
  sd.object = object_class;
  for (const std::string& type : table.room_types) {
    sd.room_types[type] =
        std::max(1.0 - table.room_prob(object_class, type), defaults::kSemDistFloor);
  }
  return sd;
}

namespace {

// Rooms not yet selected this sweep; wraps around once every room was
// selected (episodes normally end long before).
std::vector<int> unselected_rooms(BaselineState& state, const std::vector<int>& all) {
  std::vector<int> out;
  for (int r : all) {
    if (state.selected.count(r) == 0) out.push_back(r);
  }
  if (out.empty()) {
    state.selected.clear();
    return all;
  }
  return out;
}

GlobalAction select_room(BaselineState& state, int room) {
  state.selected.insert(room);
  state.pending_search = room;
  return {GlobalAction::Kind::kMove, room};
}

}  // namespace

GlobalAction semantic_utility_next(BaselineState& state, const LayeredSceneGraph& graph,
                                   const CostMatrix& costs, Vec2 robot_position,
                                   const std::string& object_class) {
  (void)object_class;  // the table is already specialized to the object
  if (state.pending_search >= 0) {
    const int room = state.pending_search;
    state.pending_search = -1;
    return {GlobalAction::Kind::kSearch, room};
  }
  const int current = nearest_room(graph, robot_position);
  const int ci = costs.index_of(current);
  const std::vector<int> cands = unselected_rooms(state, costs.room_ids);

  int best_room = -1;
  double best_u = -std::numeric_limits<double>::infinity();
  for (int room : cands) {  // ascending ids, so ties keep the lowest id
    const int ri = costs.index_of(room);
    const double d_geo = std::max(costs.move_cost[ci][ri], 1e-6);
    const double d_sem = state.semdist.dist(graph.node(room).label);
    const double u = 1.0 / (d_sem * d_geo);
    if (u > best_u) {
      best_u = u;
      best_room = room;
    }
  }
  return select_room(state, best_room);
}

GlobalAction coverage_next(BaselineState& state, const CostMatrix& costs, Vec2 robot_position,
                           const LayeredSceneGraph& graph) {
  if (state.pending_search >= 0) {
    const int room = state.pending_search;
    state.pending_search = -1;
    return {GlobalAction::Kind::kSearch, room};
  }
  const int current = nearest_room(graph, robot_position);
  const int ci = costs.index_of(current);
  const std::vector<int> cands = unselected_rooms(state, costs.room_ids);

  int best_room = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int room : cands) {
    const double d = costs.move_cost[ci][costs.index_of(room)];
    if (d < best_d) {
      best_d = d;
      best_room = room;
    }
  }
  return select_room(state, best_room);
}

GlobalAction random_next(BaselineState& state, Rng& rng) {
  if (state.pending_search >= 0) {
    const int room = state.pending_search;
    state.pending_search = -1;
    return {GlobalAction::Kind::kSearch, room};
  }
  if (state.order.empty()) throw StateError("random baseline has no room order");
  if (state.order_pos >= state.order.size()) {
    rng.shuffle(state.order);  // exhausted: fresh sweep
    state.order_pos = 0;
  }
  const int room = state.order[state.order_pos++];
  state.selected.insert(room);
  state.pending_search = room;
  return {GlobalAction::Kind::kMove, room};
}

}  // namespace seek
