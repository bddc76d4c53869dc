#ifndef SEEK_LOCAL_CONTROLLER_HPP
#define SEEK_LOCAL_CONTROLLER_HPP

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "seek/defaults.hpp"
#include "seek/global_planner.hpp"
#include "seek/occupancy_grid.hpp"
#include "seek/scene_graph.hpp"
#include "seek/world_sim.hpp"

namespace seek {

enum class ControllerMode { kNav, kActiveSearch, kInspect, kDone };

const char* mode_name(ControllerMode m);

// Belief over one tentative detection being a real target object.
struct CandidateBelief {
  Vec2 estimate;           // running mean of gated detection positions
  double existence = 0.0;  // probability the candidate is real
  int views_taken = 0;
  int position_samples = 0;
};

// Bayes update of the existence probability from one confirmation view.
CandidateBelief candidate_update(CandidateBelief candidate, bool viewed);

// Fold a detection position into the running-mean estimate.
void absorb_position(CandidateBelief& candidate, Vec2 detection_position);

struct ControllerConfig {
  double c_promote = defaults::kCPromote;
  double c_inspect = defaults::kCInspect;
  double c_drop = defaults::kCDrop;
  double r_view = defaults::kRViewM;
  double r_suppress = defaults::kRSuppressM;
  double r_gate = defaults::kRGateM;
  double inspect_eps = defaults::kEpsilonM;
  int max_views = defaults::kMaxViews;
  int min_view_ticks = defaults::kMinViewTicks;
};

// Confirmation viewpoints: the reachable free cells nearest the ideal ring
// of radius r_view around the estimate (headings 0/120/240 degrees),
// ordered by path cost from the robot. Falls back to a shuffle around the
// current cell when no ring cell is reachable.
std::vector<Cell> plan_viewpoints(const CandidateBelief& candidate, const OccupancyGrid& grid,
                                  const RobotState& robot,
                                  double r_view = defaults::kRViewM);

// The coverage ordering of a room's location nodes; identical to the tour
// behind CostMatrix::search_cost.
std::vector<int> plan_coverage_tour(const LayeredSceneGraph& graph, int room_id, int start_loc);

struct TickRecord {
  long tick = 0;
  ControllerMode mode = ControllerMode::kNav;
  Vec2 pose;
  std::string command;
  std::vector<Detection> detections;
};

// Finite-state local planner: executes global move/search actions as grid
// motion, confirms tentative detections through a viewpoint loop, and
// inspects confirmed targets.
class LocalController {
public:
  struct StepResult {
    std::optional<ControlCommand> command;  // empty only when action_complete
    bool action_complete = false;
  };

  LocalController(const LayeredSceneGraph& graph, const OccupancyGrid& grid,
                  std::string target_class, ControllerConfig config = {});

  StepResult step(const GlobalAction& action, const std::vector<Detection>& observations,
                  const RobotState& robot);

  ControllerMode mode() const { return mode_; }
  const std::optional<CandidateBelief>& candidate() const { return candidate_; }
  int promotions() const { return promotions_; }
  const std::vector<GlobalAction>& executed_actions() const { return executed_actions_; }
  const std::vector<Vec2>& suppressed_positions() const { return suppressed_; }

  // Per-tick trace sink; when set, every step emits one record.
  void set_trace_sink(std::function<void(const TickRecord&)> sink) { sink_ = std::move(sink); }

private:
  void adopt_action(const GlobalAction& action, const RobotState& robot);
  bool try_promote(const std::vector<Detection>& observations, const RobotState& robot);
  void enter_inspect(const RobotState& robot);
  void drop_candidate(const RobotState& robot);
  void do_view(const RobotState& robot);
  bool plan_next_leg(const RobotState& robot);
  StepResult emit(const RobotState& robot, const std::vector<Detection>& obs, StepResult res);

  const LayeredSceneGraph& graph_;
  const OccupancyGrid& grid_;
  GridRouter router_;
  std::string target_class_;
  ControllerConfig cfg_;

  ControllerMode mode_ = ControllerMode::kNav;
  std::optional<GlobalAction> current_action_;
  std::vector<Vec2> waypoints_;       // nav targets (graph node positions), front first
  std::size_t waypoint_pos_ = 0;      // next waypoint to plan toward
  std::size_t leg_target_ = 0;        // waypoint index served by the active leg
  std::size_t resume_waypoint_ = 0;   // where nav resumes after a dropped candidate
  std::deque<Cell> leg_;              // grid cells toward the active waypoint

  std::optional<CandidateBelief> candidate_;
  std::vector<Cell> viewpoints_;
  std::size_t viewpoint_pos_ = 0;
  bool viewed_window_ = false;        // gated detection seen since the last view
  int window_ticks_ = 0;              // sensing passes with sight of the estimate
  int window_raw_ticks_ = 0;          // all passes since the last view (deadlock escape)
  std::optional<Cell> inspect_cell_;

  std::vector<Vec2> suppressed_;
  int promotions_ = 0;
  std::vector<GlobalAction> executed_actions_;
  std::function<void(const TickRecord&)> sink_;
};

}  // namespace seek

#endif  // SEEK_LOCAL_CONTROLLER_HPP
