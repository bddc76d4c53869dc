#include "seek/global_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seek/errors.hpp"

namespace seek {

std::string GlobalAction::to_string() const {
  return (kind == Kind::kMove ? "move(" : "search(") + std::to_string(room_id) + ")";
}

double ValueFunction::at(int room_id) const {
  for (std::size_t i = 0; i < room_ids.size(); ++i) {
    if (room_ids[i] == room_id) return cost_to_go[i];
  }
  throw InputError("value function has no state for room " + std::to_string(room_id));
}

const GlobalAction& Policy::action_for(int room_id) const {
  for (std::size_t i = 0; i < room_ids.size(); ++i) {
    if (room_ids[i] == room_id) return actions[i];
  }
  throw InputError("policy has no state for room " + std::to_string(room_id));
}

MdpModel build_mdp(const CostMatrix& costs, const RoomBelief& belief, double p_easy) {
  if (costs.room_ids.empty()) throw InputError("build_mdp: empty room set");
  const double lo = defaults::kEpsP;
  const double hi = 1.0 - defaults::kEpsP;

  MdpModel m;
  m.room_ids = costs.room_ids;
  m.move_cost = costs.move_cost;
  m.search_cost = costs.search_cost;
  m.goal_prob_move.reserve(m.size());
  m.goal_prob_search.reserve(m.size());
  for (int room_id : m.room_ids) {
    const auto it = belief.probs.find(room_id);
    if (it == belief.probs.end()) {
      throw InputError("build_mdp: belief is missing room " + std::to_string(room_id));
    }
    const double p = it->second;
    m.goal_prob_move.push_back(std::clamp(p_easy * p, lo, hi));
    m.goal_prob_search.push_back(std::clamp(p * defaults::kDSearch, lo, hi));
  }
  return m;
}

std::pair<ValueFunction, Policy> value_iteration(const MdpModel& model, double tol,
                                                 int max_iter) {
  if (model.size() == 0) throw InputError("value_iteration: empty model");
  if (tol <= 0.0) throw InputError("value_iteration: tol must be positive");
  const std::size_t n = model.size();

  std::vector<double> j(n, 0.0);
  std::vector<double> j_next(n, 0.0);
  double residual = std::numeric_limits<double>::infinity();
  int iter = 0;
  while (iter < max_iter) {
    ++iter;
    for (std::size_t i = 0; i < n; ++i) {
      double best = model.search_cost[i] + (1.0 - model.goal_prob_search[i]) * j[i];
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        const double v = model.move_cost[i][k] + (1.0 - model.goal_prob_move[k]) * j[k];
        best = std::min(best, v);
      }
      j_next[i] = best;
    }
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      residual = std::max(residual, std::abs(j_next[i] - j[i]));
    }
    j.swap(j_next);
    if (residual < tol) break;
  }
  if (residual >= tol) {
    throw ConvergenceError("value iteration did not converge after " +
                               std::to_string(max_iter) + " iterations (residual " +
                               std::to_string(residual) + ")",
                           residual);
  }

  Policy policy;
  policy.room_ids = model.room_ids;
  policy.iterations = iter;
  policy.residual = residual;
  policy.actions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Greedy action under the converged J; search wins ties, then the
    // lowest target room id (rooms are scanned in ascending-index order,
    // and room_ids ascend).
    double best = model.search_cost[i] + (1.0 - model.goal_prob_search[i]) * j[i];
    GlobalAction act{GlobalAction::Kind::kSearch, model.room_ids[i]};
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double v = model.move_cost[i][k] + (1.0 - model.goal_prob_move[k]) * j[k];
      if (v < best - 1e-12) {
        best = v;
        act = {GlobalAction::Kind::kMove, model.room_ids[k]};
      }
    }
    policy.actions[i] = act;
  }

  ValueFunction vf;
  vf.room_ids = model.room_ids;
  vf.cost_to_go = std::move(j);
  return {std::move(vf), std::move(policy)};
}

GlobalAction next_action(const Policy& policy, const LayeredSceneGraph& graph,
                         Vec2 robot_position) {
  return policy.action_for(nearest_room(graph, robot_position));
}

}  // namespace seek
