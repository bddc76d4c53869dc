#include "seek/local_controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seek/errors.hpp"
#include "seek/logging.hpp"

namespace seek {

const char* mode_name(ControllerMode m) {
  switch (m) {
    case ControllerMode::kNav: return "nav";
    case ControllerMode::kActiveSearch: return "active_search";
    case ControllerMode::kInspect: return "inspect";
    case ControllerMode::kDone: return "done";
  }
  return "?";
}

CandidateBelief candidate_update(CandidateBelief candidate, bool viewed) {
  const double like_real = viewed ? defaults::kViewReal : 1.0 - defaults::kViewReal;
  const double like_spurious = viewed ? defaults::kViewSpurious : 1.0 - defaults::kViewSpurious;
  const double e = candidate.existence;
  const double denom = like_real * e + like_spurious * (1.0 - e);
  candidate.existence = denom <= 0.0 ? 0.0 : like_real * e / denom;
  candidate.views_taken += 1;
  return candidate;
}

void absorb_position(CandidateBelief& candidate, Vec2 detection_position) {
  const double n = static_cast<double>(candidate.position_samples);
  candidate.estimate = (candidate.estimate * n + detection_position) * (1.0 / (n + 1.0));
  candidate.position_samples += 1;
}

namespace {

// Fixed scan order for shuffle neighbors: orthogonals first.
constexpr int kNbrOrder[8][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1},
                                 {1, 1}, {-1, 1}, {-1, -1}, {1, -1}};

std::optional<Cell> first_free_neighbor(const OccupancyGrid& grid, Cell c) {
  for (const auto& d : kNbrOrder) {
    const Cell n{c.x + d[0], c.y + d[1]};
    if (grid.step_allowed(c, n)) return n;
  }
  return std::nullopt;
}

}  // namespace

std::vector<Cell> plan_viewpoints(const CandidateBelief& candidate, const OccupancyGrid& grid,
                                  const RobotState& robot, double r_view) {
  const Vec2 est = candidate.estimate;
  const double margin = r_view + 3.0;
  const Cell lo = grid.cell_at({std::min(robot.position.x, est.x) - margin,
                                std::min(robot.position.y, est.y) - margin});
  const Cell hi = grid.cell_at({std::max(robot.position.x, est.x) + margin,
                                std::max(robot.position.y, est.y) + margin});
  const DistanceField field = grid_dijkstra_window(grid, robot.cell, lo, hi);

  struct Pick {
    Cell cell;
    double path_cost;
  };
  std::vector<Pick> picks;
  const double scan_r = 1.5;  // how far from the ideal ring point we will settle
  for (int k = 0; k < 3; ++k) {
    const double theta = 2.0943951023931953 * k;  // 0, 120, 240 degrees
    const Vec2 ideal{est.x + r_view * std::cos(theta), est.y + r_view * std::sin(theta)};
    const Cell c0 = grid.cell_at(ideal);
    const int span = static_cast<int>(std::ceil(scan_r / grid.cell_m()));
    Cell best{};
    double best_d = std::numeric_limits<double>::infinity();
    double best_cost = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int dy = -span; dy <= span; ++dy) {
      for (int dx = -span; dx <= span; ++dx) {
        const Cell c{c0.x + dx, c0.y + dy};
        if (!grid.is_free(c)) continue;
        const double cost = field.at(c);
        if (!std::isfinite(cost)) continue;
        const double d = distance(grid.center_of(c), ideal);
        if (d > scan_r) continue;
        if (!grid.line_of_sight(grid.center_of(c), est)) continue;  // must see the candidate
        if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && cost < best_cost - 1e-12)) {
          best = c;
          best_d = d;
          best_cost = cost;
          found = true;
        }
      }
    }
    if (found) picks.push_back({best, best_cost});
  }
  std::stable_sort(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) {
    if (a.path_cost != b.path_cost) return a.path_cost < b.path_cost;
    if (a.cell.y != b.cell.y) return a.cell.y < b.cell.y;
    return a.cell.x < b.cell.x;
  });
  std::vector<Cell> out;
  for (const Pick& p : picks) {
    if (std::find(out.begin(), out.end(), p.cell) == out.end()) out.push_back(p.cell);
  }
  if (!out.empty()) return out;

  // Unreachable ring: observe from where we stand, shuffling one cell to
  // let the sensor produce fresh passes.
  const auto nbr = first_free_neighbor(grid, robot.cell);
  if (!nbr) return {};
  return {*nbr, robot.cell, *nbr};
}

std::vector<int> plan_coverage_tour(const LayeredSceneGraph& graph, int room_id, int start_loc) {
  return greedy_tour(graph, room_id, start_loc);
}

LocalController::LocalController(const LayeredSceneGraph& graph, const OccupancyGrid& grid,
                                 std::string target_class, ControllerConfig config)
    : graph_(graph), grid_(grid), router_(grid), target_class_(std::move(target_class)),
      cfg_(config) {}

void LocalController::adopt_action(const GlobalAction& action, const RobotState& robot) {
  current_action_ = action;
  waypoints_.clear();
  waypoint_pos_ = 0;
  leg_.clear();
  const int anchor = room_anchor(graph_, action.room_id);
  if (action.kind == GlobalAction::Kind::kMove) {
    const int from = graph_.nearest_location(robot.position);
    const PathResult path = shortest_path(graph_, from, anchor);
    for (int id : path.node_ids) waypoints_.push_back(graph_.node(id).position);
  } else {
    for (int id : plan_coverage_tour(graph_, action.room_id, anchor)) {
      waypoints_.push_back(graph_.node(id).position);
    }
  }
}

bool LocalController::try_promote(const std::vector<Detection>& observations,
                                  const RobotState& robot) {
  const Detection* best = nullptr;
  for (const Detection& d : observations) {
    if (d.cls != target_class_ || d.confidence < cfg_.c_promote) continue;
    bool suppressed = false;
    for (const Vec2& s : suppressed_) {
      if (distance(d.position, s) < cfg_.r_suppress) {
        suppressed = true;
        break;
      }
    }
    if (suppressed) continue;
    if (best == nullptr || d.confidence > best->confidence) best = &d;
  }
  if (best == nullptr) return false;

  ++promotions_;
  resume_waypoint_ = leg_.empty() ? waypoint_pos_ : leg_target_;
  // Floor the seed so a single missed view cannot discard a real object.
  candidate_ = CandidateBelief{best->position,
                               std::max(best->confidence, defaults::kSeedExistence), 0, 1};
  viewed_window_ = false;
  window_ticks_ = 0;
  window_raw_ticks_ = 0;
  mode_ = ControllerMode::kActiveSearch;
  leg_.clear();
  viewpoints_.clear();
  viewpoint_pos_ = 0;
  if (candidate_->existence >= cfg_.c_inspect) {
    enter_inspect(robot);
  } else {
    viewpoints_ = plan_viewpoints(*candidate_, grid_, robot, cfg_.r_view);
  }
  return true;
}

void LocalController::enter_inspect(const RobotState& robot) {
  const Vec2 est = candidate_->estimate;
  if (distance(robot.position, est) <= 0.5 * cfg_.inspect_eps) {
    // Already on top of the candidate; inspect from here.
    inspect_cell_ = robot.cell;
    mode_ = ControllerMode::kInspect;
    leg_.clear();
    return;
  }
  const double margin = cfg_.inspect_eps + 4.0;
  const Cell lo = grid_.cell_at({std::min(robot.position.x, est.x) - margin,
                                 std::min(robot.position.y, est.y) - margin});
  const Cell hi = grid_.cell_at({std::max(robot.position.x, est.x) + margin,
                                 std::max(robot.position.y, est.y) + margin});
  const DistanceField field = grid_dijkstra_window(grid_, robot.cell, lo, hi);

  const Cell c0 = grid_.cell_at(est);
  const int span = static_cast<int>(std::ceil(cfg_.inspect_eps / grid_.cell_m())) + 1;
  Cell best{};
  double best_d = std::numeric_limits<double>::infinity();
  double best_cost = std::numeric_limits<double>::infinity();
  bool found = false;
  for (int dy = -span; dy <= span; ++dy) {
    for (int dx = -span; dx <= span; ++dx) {
      const Cell c{c0.x + dx, c0.y + dy};
      if (!grid_.is_free(c)) continue;
      const double d = distance(grid_.center_of(c), est);
      if (d > cfg_.inspect_eps) continue;
      const double cost = field.at(c);
      if (!std::isfinite(cost)) continue;
      if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && cost < best_cost - 1e-12)) {
        best = c;
        best_d = d;
        best_cost = cost;
        found = true;
      }
    }
  }
  if (!found) {
    throw InspectUnreachableError("no reachable free cell within " +
                                  std::to_string(cfg_.inspect_eps) + " m of candidate at (" +
                                  std::to_string(est.x) + ", " + std::to_string(est.y) + ")");
  }
  inspect_cell_ = best;
  mode_ = ControllerMode::kInspect;
  leg_.clear();
}

void LocalController::drop_candidate(const RobotState&) {
  suppressed_.push_back(candidate_->estimate);
  log::debug("candidate at (" + std::to_string(candidate_->estimate.x) + ", " +
             std::to_string(candidate_->estimate.y) + ") dropped after " +
             std::to_string(candidate_->views_taken) + " views");
  candidate_.reset();
  viewpoints_.clear();
  viewpoint_pos_ = 0;
  viewed_window_ = false;
  mode_ = ControllerMode::kNav;
  leg_.clear();
  waypoint_pos_ = std::min(waypoint_pos_, resume_waypoint_);
}

void LocalController::do_view(const RobotState& robot) {
  candidate_ = candidate_update(*candidate_, viewed_window_);
  log::debug("view " + std::to_string(candidate_->views_taken) + " at tick " +
             std::to_string(robot.tick) + " viewed=" + (viewed_window_ ? "1" : "0") +
             " existence=" + std::to_string(candidate_->existence));
  viewed_window_ = false;
  window_ticks_ = 0;
  window_raw_ticks_ = 0;
  if (candidate_->existence >= cfg_.c_inspect) {
    enter_inspect(robot);
  } else if (candidate_->existence <= cfg_.c_drop) {
    drop_candidate(robot);
  }
}

bool LocalController::plan_next_leg(const RobotState& robot) {
  while (leg_.empty() && waypoint_pos_ < waypoints_.size()) {
    const Cell target = grid_.cell_at(waypoints_[waypoint_pos_]);
    leg_target_ = waypoint_pos_;
    ++waypoint_pos_;
    if (target == robot.cell) continue;
    const auto path = router_.route(robot.cell, target);
    if (!path) {
      throw NoPathError("no grid path to waypoint (" +
                        std::to_string(waypoints_[leg_target_].x) + ", " +
                        std::to_string(waypoints_[leg_target_].y) + ")");
    }
    leg_.assign(path->cells.begin(), path->cells.end());
  }
  return !leg_.empty();
}

LocalController::StepResult LocalController::emit(const RobotState& robot,
                                                  const std::vector<Detection>& obs,
                                                  StepResult res) {
  if (sink_) {
    TickRecord rec;
    rec.tick = robot.tick;
    rec.mode = mode_;
    rec.pose = robot.position;
    rec.detections = obs;
    if (!res.command) {
      rec.command = res.action_complete ? "action_complete" : "none";
    } else if (res.command->kind == ControlCommand::Kind::kFinish) {
      rec.command = "finish";
    } else {
      rec.command = "step_to(" + std::to_string(res.command->target.x) + "," +
                    std::to_string(res.command->target.y) + ")";
    }
    sink_(rec);
  }
  return res;
}

LocalController::StepResult LocalController::step(const GlobalAction& action,
                                                  const std::vector<Detection>& observations,
                                                  const RobotState& robot) {
  if (!current_action_ || !(*current_action_ == action)) adopt_action(action, robot);

  switch (mode_) {
    case ControllerMode::kDone:
      return emit(robot, observations, {ControlCommand::finish(robot.position), false});
    case ControllerMode::kInspect:
      break;  // committed; observations are ignored
    case ControllerMode::kActiveSearch: {
      // Only passes that could have seen the candidate count as evidence.
      ++window_raw_ticks_;
      if (distance(robot.position, candidate_->estimate) <= cfg_.r_view + 1.0 &&
          grid_.line_of_sight(robot.position, candidate_->estimate)) {
        ++window_ticks_;
      }
      for (const Detection& d : observations) {
        if (d.cls != target_class_) continue;
        if (distance(d.position, candidate_->estimate) > cfg_.r_gate) continue;
        absorb_position(*candidate_, d.position);
        viewed_window_ = true;
      }
      // A view fires on viewpoint arrival once the sensing window spans
      // enough sighted passes; early arrivals shuffle in place until it
      // does. The raw-tick bound keeps an unobservable estimate from
      // stalling the loop.
      if (leg_.empty() && viewpoint_pos_ < viewpoints_.size() &&
          robot.cell == viewpoints_[viewpoint_pos_] &&
          (window_ticks_ >= cfg_.min_view_ticks ||
           window_raw_ticks_ >= 8 * cfg_.min_view_ticks)) {
        ++viewpoint_pos_;
        do_view(robot);
      }
      break;
    }
    case ControllerMode::kNav:
      try_promote(observations, robot);
      break;
  }

  // Movement dispatch under the (possibly updated) mode.
  if (mode_ == ControllerMode::kActiveSearch) {
    while (leg_.empty() && mode_ == ControllerMode::kActiveSearch) {
      if (viewpoint_pos_ >= viewpoints_.size()) {
        if (candidate_->views_taken >= cfg_.max_views) {
          drop_candidate(robot);
          break;
        }
        viewpoints_ = plan_viewpoints(*candidate_, grid_, robot, cfg_.r_view);
        viewpoint_pos_ = 0;
        if (viewpoints_.empty()) {
          drop_candidate(robot);
          break;
        }
        continue;
      }
      const Cell vp = viewpoints_[viewpoint_pos_];
      if (vp == robot.cell) {
        // Shuffle one cell out so the next arrival carries fresh passes.
        const auto nbr = first_free_neighbor(grid_, robot.cell);
        if (!nbr) {
          drop_candidate(robot);
          break;
        }
        leg_.push_back(*nbr);
        break;
      }
      const auto path = router_.route(robot.cell, vp, 20000);
      if (!path || path->cells.empty()) {
        ++viewpoint_pos_;  // unreachable viewpoint, try the next
        continue;
      }
      leg_.assign(path->cells.begin(), path->cells.end());
    }
    if (mode_ == ControllerMode::kActiveSearch) {
      const Cell next = leg_.front();
      leg_.pop_front();
      return emit(robot, observations, {ControlCommand::step_to(next), false});
    }
  }

  if (mode_ == ControllerMode::kInspect) {
    if (robot.cell == *inspect_cell_) {
      mode_ = ControllerMode::kDone;
      return emit(robot, observations, {ControlCommand::finish(robot.position), false});
    }
    if (leg_.empty()) {
      const auto path = router_.route(robot.cell, *inspect_cell_);
      if (!path || path->cells.empty()) {
        throw InspectUnreachableError("inspect cell became unreachable");
      }
      leg_.assign(path->cells.begin(), path->cells.end());
    }
    const Cell next = leg_.front();
    leg_.pop_front();
    return emit(robot, observations, {ControlCommand::step_to(next), false});
  }

  // kNav
  if (!plan_next_leg(robot)) {
    executed_actions_.push_back(*current_action_);
    current_action_.reset();  // force re-adoption of whatever comes next
    return emit(robot, observations, {std::nullopt, true});
  }
  const Cell next = leg_.front();
  leg_.pop_front();
  return emit(robot, observations, {ControlCommand::step_to(next), false});
}

}  // namespace seek
