#ifndef SEEK_GLOBAL_PLANNER_HPP
#define SEEK_GLOBAL_PLANNER_HPP

#include <string>
#include <utility>
#include <vector>

#include "seek/defaults.hpp"
#include "seek/scene_graph.hpp"
#include "seek/semantic_belief.hpp"

namespace seek {

struct GlobalAction {
  enum class Kind { kMove, kSearch };
  Kind kind = Kind::kSearch;
  int room_id = -1;

  bool operator==(const GlobalAction& o) const {
    return kind == o.kind && room_id == o.room_id;
  }
  std::string to_string() const;
};

// Room-level stochastic shortest path MDP. States are rooms plus an
// absorbing goal; per room the available actions are search(here) and
// move(there) for every other room. Reaching the goal is the only source
// of probability mass leaving the room chain:
//   move(j) from i: cost move_cost[i][j], goal w.p. goal_prob_move[j], else land in j
//   search(i):      cost search_cost[i],  goal w.p. goal_prob_search[i], else stay in i
struct MdpModel {
  std::vector<int> room_ids;
  std::vector<std::vector<double>> move_cost;
  std::vector<double> search_cost;
  std::vector<double> goal_prob_move;
  std::vector<double> goal_prob_search;

  std::size_t size() const { return room_ids.size(); }
};

struct ValueFunction {
  std::vector<int> room_ids;
  std::vector<double> cost_to_go;  // meters; the goal state is implicitly 0

  double at(int room_id) const;
};

struct Policy {
  std::vector<int> room_ids;
  std::vector<GlobalAction> actions;
  int iterations = 0;
  double residual = 0.0;

  const GlobalAction& action_for(int room_id) const;
};

// Assemble the MDP from cost tables and the current room belief.
// Goal probabilities are clamped to [eps_p, 1 - eps_p].
MdpModel build_mdp(const CostMatrix& costs, const RoomBelief& belief, double p_easy);

// Undiscounted Bellman iteration from J = 0 until the sup-norm residual
// drops below tol. Ties in the greedy policy break search-first, then
// lowest target room id.
std::pair<ValueFunction, Policy> value_iteration(const MdpModel& model,
                                                 double tol = defaults::kViTol,
                                                 int max_iter = defaults::kViMaxIter);

// Receding-horizon query: the action of the room nearest the robot.
GlobalAction next_action(const Policy& policy, const LayeredSceneGraph& graph,
                         Vec2 robot_position);

}  // namespace seek

#endif  // SEEK_GLOBAL_PLANNER_HPP
