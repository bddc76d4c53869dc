#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <set>

#include "seek/errors.hpp"
#include "seek/json_io.hpp"
#include "seek/local_controller.hpp"
#include "seek/rng.hpp"

using namespace seek;

namespace {

std::string data_path(const std::string& name) {
  const char* dir = std::getenv("SEEK_DATA_DIR");
  if (dir != nullptr) return std::string(dir) + "/" + name;
  for (const char* prefix : {"data/", "../data/", "../../data/"}) {
    const std::string p = prefix + name;
    if (FILE* f = fopen(p.c_str(), "r")) {
      fclose(f);
      return p;
    }
  }
  return name;
}

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

struct Rig {
  LayeredSceneGraph graph;
  WorldModel world;
  RobotState robot;
  Rng rng{1};

  Rig(const FloorPlan& plan, Vec2 start, double spacing = 1.0) {
    graph = load_floor_plan(plan);
    sample_locations(graph, spacing);
    SensorParams quiet;  // the tests feed detections by hand
    quiet.p0 = 0.0;
    quiet.p_fp = 0.0;
    world = build_world(plan, {}, quiet);
    world.target_class = "target";
    robot = make_robot(world, start);
  }

  // One controller step followed by the world executing the command.
  LocalController::StepResult drive(LocalController& c, const GlobalAction& a,
                                    const std::vector<Detection>& obs) {
    const auto res = c.step(a, obs, robot);
    if (res.command && res.command->kind == ControlCommand::Kind::kStepTo) {
      step(world, robot, *res.command, rng);
    }
    return res;
  }
};

FloorPlan one_room_plan() {
  FloorPlan plan;
  plan.rooms.push_back({0, "office", rect(0, 0, 12, 12)});
  return plan;
}

}  // namespace

TEST_CASE("candidate_update is exact Bayes") {
  SUBCASE("spec examples") {
    CandidateBelief c{{0, 0}, 0.5, 0, 1};
    CHECK(candidate_update(c, true).existence == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(candidate_update(c, false).existence == doctest::Approx(0.1).epsilon(1e-12));
    c.existence = 1.0;
    CHECK(candidate_update(c, true).existence == doctest::Approx(1.0));
    CHECK(candidate_update(c, false).existence == doctest::Approx(1.0));
  }
  SUBCASE("closed-form oracle over a grid") {
    for (double e = 0.0; e <= 1.0 + 1e-9; e += 0.02) {
      CandidateBelief c{{0, 0}, e, 0, 1};
      const double up = 0.9 * e / (0.9 * e + 0.1 * (1.0 - e));
      const double down = 0.1 * e / (0.1 * e + 0.9 * (1.0 - e));
      CHECK(candidate_update(c, true).existence == doctest::Approx(up).epsilon(1e-12));
      CHECK(candidate_update(c, false).existence == doctest::Approx(down).epsilon(1e-12));
      CHECK(candidate_update(c, true).views_taken == 1);
    }
  }
}

TEST_CASE("absorb_position keeps a running mean") {
  CandidateBelief c{{2.0, 2.0}, 0.5, 0, 1};
  absorb_position(c, {4.0, 2.0});
  CHECK(c.estimate.x == doctest::Approx(3.0));
  absorb_position(c, {3.0, 5.0});
  CHECK(c.estimate.x == doctest::Approx(3.0));
  CHECK(c.estimate.y == doctest::Approx(3.0));
  CHECK(c.position_samples == 3);
}

TEST_CASE("viewpoints ring an open-room candidate at r_view") {
  Rig rig(one_room_plan(), {2.0, 2.0});
  const CandidateBelief cand{{6.0, 6.0}, 0.5, 0, 1};
  const auto vps = plan_viewpoints(cand, rig.world.grid, rig.robot);
  REQUIRE(vps.size() == 3);
  for (const Cell& c : vps) {
    const double d = distance(rig.world.grid.center_of(c), cand.estimate);
    CHECK(d == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("viewpoints avoid the far side of a wall") {
  FloorPlan plan;
  plan.rooms.push_back({0, "office", rect(0, 0, 6, 6)});
  plan.rooms.push_back({1, "office", rect(6, 0, 12, 6)});
  plan.doors.push_back({0, 1, {6.0, 1.0}, 0.9});
  Rig rig(plan, {3.0, 3.0});
  // candidate hugging the shared wall from the robot's side
  const CandidateBelief cand{{5.6, 4.5}, 0.5, 0, 1};
  const auto vps = plan_viewpoints(cand, rig.world.grid, rig.robot);
  REQUIRE(!vps.empty());
  for (const Cell& c : vps) {
    CHECK(rig.world.grid.center_of(c).x < 6.0);  // viewing side only
    CHECK(rig.world.grid.line_of_sight(rig.world.grid.center_of(c), cand.estimate));
  }
}

TEST_CASE("unreachable ring falls back to shuffling in place") {
  FloorPlan plan;
  plan.rooms.push_back({0, "closet", rect(0, 0, 0.9, 0.9)});
  Rig rig(plan, {0.45, 0.45}, 0.5);
  const CandidateBelief cand{{0.45, 0.45}, 0.5, 0, 1};
  const auto vps = plan_viewpoints(cand, rig.world.grid, rig.robot);
  REQUIRE(vps.size() == 3);
  for (const Cell& c : vps) {
    CHECK(distance(rig.world.grid.center_of(c), rig.robot.position) < 0.2);
  }
}

TEST_CASE("coverage tour equals the cost table for every office room") {
  LayeredSceneGraph g = load_floor_plan(load_floor_plan_file(data_path("office_21.json")));
  sample_locations(g, 1.0);
  const CostMatrix cm = room_cost_matrix(g);
  for (std::size_t i = 0; i < cm.room_ids.size(); ++i) {
    const int room = cm.room_ids[i];
    const std::vector<int> tour = plan_coverage_tour(g, room, room_anchor(g, room));
    CHECK(tour_length(g, tour) == doctest::Approx(cm.search_cost[i]));
    // every location of the room exactly once
    const std::vector<int> locs = g.room_locations(room);
    CHECK(tour.size() == locs.size());
    CHECK(std::set<int>(tour.begin(), tour.end()) == std::set<int>(locs.begin(), locs.end()));
  }
}

TEST_CASE("nav executes a move action to the room anchor and completes") {
  FloorPlan plan;
  plan.rooms.push_back({0, "office", rect(0, 0, 6, 6)});
  plan.rooms.push_back({1, "office", rect(6, 0, 12, 6)});
  plan.doors.push_back({0, 1, {6.0, 3.0}, 0.9});
  Rig rig(plan, {1.0, 1.0});
  LocalController ctrl(rig.graph, rig.world.grid, "target");
  const GlobalAction move_b{GlobalAction::Kind::kMove, 1};
  for (int i = 0; i < 1000; ++i) {
    const auto res = rig.drive(ctrl, move_b, {});
    if (res.action_complete) break;
    REQUIRE(res.command.has_value());
    REQUIRE(res.command->kind == ControlCommand::Kind::kStepTo);
  }
  CHECK(ctrl.mode() == ControllerMode::kNav);
  CHECK(ctrl.executed_actions().size() == 1);
  const Vec2 anchor = rig.graph.node(room_anchor(rig.graph, 1)).position;
  CHECK(distance(rig.robot.position, anchor) < 0.2);
}

TEST_CASE("a confident detection promotes, confirms, inspects, and finishes") {
  Rig rig(one_room_plan(), {2.0, 2.0});
  LocalController ctrl(rig.graph, rig.world.grid, "target");
  const GlobalAction search_here{GlobalAction::Kind::kSearch, 0};
  const Vec2 truth{7.0, 7.0};
  bool finished = false;
  int promotions_seen = 0;
  Vec2 finish_pos{};
  for (int i = 0; i < 3000 && !finished; ++i) {
    std::vector<Detection> obs;
    // the target is visible whenever the robot is within 5 m
    if (distance(rig.robot.position, truth) <= 5.0) obs.push_back({truth, "target", 0.5});
    const auto res = rig.drive(ctrl, search_here, obs);
    promotions_seen = ctrl.promotions();
    if (res.command && res.command->kind == ControlCommand::Kind::kFinish) {
      finished = true;
      finish_pos = res.command->finish_position;
    }
  }
  REQUIRE(finished);
  CHECK(promotions_seen == 1);
  CHECK(ctrl.mode() == ControllerMode::kDone);
  REQUIRE(ctrl.candidate().has_value());
  CHECK(ctrl.candidate()->existence >= 0.9);  // finish only above the inspect bar
  CHECK(distance(finish_pos, truth) <= 1.0);
  CHECK(distance(ctrl.candidate()->estimate, truth) < 0.3);
}

TEST_CASE("low-confidence detections are ignored in nav") {
  Rig rig(one_room_plan(), {2.0, 2.0});
  LocalController ctrl(rig.graph, rig.world.grid, "target");
  const GlobalAction search_here{GlobalAction::Kind::kSearch, 0};
  for (int i = 0; i < 10; ++i) {
    rig.drive(ctrl, search_here, {{{7.0, 7.0}, "target", 0.29}});
    CHECK(ctrl.mode() == ControllerMode::kNav);
  }
  CHECK(ctrl.promotions() == 0);
  // wrong class is also ignored
  rig.drive(ctrl, search_here, {{{7.0, 7.0}, "decoy", 0.99}});
  CHECK(ctrl.promotions() == 0);
}

TEST_CASE("a phantom candidate is dropped and its spot suppressed") {
  Rig rig(one_room_plan(), {2.0, 2.0});
  LocalController ctrl(rig.graph, rig.world.grid, "target");
  const GlobalAction search_here{GlobalAction::Kind::kSearch, 0};
  // one spurious detection, never seen again
  rig.drive(ctrl, search_here, {{{8.0, 8.0}, "target", 0.55}});
  CHECK(ctrl.mode() == ControllerMode::kActiveSearch);
  CHECK(ctrl.promotions() == 1);
  for (int i = 0; i < 500 && ctrl.mode() == ControllerMode::kActiveSearch; ++i) {
    rig.drive(ctrl, search_here, {});
  }
  CHECK(ctrl.mode() == ControllerMode::kNav);  // resumed, never inspected
  REQUIRE(ctrl.suppressed_positions().size() == 1);
  CHECK(distance(ctrl.suppressed_positions()[0], {8.0, 8.0}) < 1e-9);
  // re-detections near the suppressed spot do not promote again
  for (int i = 0; i < 10; ++i) {
    rig.drive(ctrl, search_here, {{{8.3, 8.2}, "target", 0.9}});
    CHECK(ctrl.mode() != ControllerMode::kActiveSearch);
  }
  CHECK(ctrl.promotions() == 1);
  // but a detection clear of the suppression radius does
  rig.drive(ctrl, search_here, {{{4.0, 8.0}, "target", 0.9}});
  CHECK(ctrl.promotions() == 2);
}

TEST_CASE("a confirmed candidate with no reachable cell nearby fails inspection") {
  // two rooms separated by a 3 m slab of wall; the candidate estimate sits
  // mid-slab, farther than inspect_eps from any free cell
  FloorPlan plan;
  plan.rooms.push_back({0, "a", rect(0, 0, 4, 4)});
  plan.rooms.push_back({1, "b", rect(7, 0, 11, 4)});
  Rig rig(plan, {2.0, 2.0});
  LocalController ctrl(rig.graph, rig.world.grid, "target");
  const GlobalAction search_here{GlobalAction::Kind::kSearch, 0};
  // confidence above c_inspect goes straight to inspection planning
  CHECK_THROWS_AS(ctrl.step(search_here, {{{5.5, 2.0}, "target", 0.97}}, rig.robot),
                  InspectUnreachableError);
}

TEST_CASE("search tour completes when undisturbed") {
  Rig rig(one_room_plan(), {1.0, 1.0});
  LocalController ctrl(rig.graph, rig.world.grid, "target");
  const GlobalAction search_here{GlobalAction::Kind::kSearch, 0};
  bool complete = false;
  double traveled_before = rig.robot.traveled_m;
  for (int i = 0; i < 5000 && !complete; ++i) {
    complete = rig.drive(ctrl, search_here, {}).action_complete;
  }
  CHECK(complete);
  // the walk covers at least the tour length
  const CostMatrix cm = room_cost_matrix(rig.graph);
  CHECK(rig.robot.traveled_m - traveled_before >= cm.search_cost[0] - 1.0);
}

TEST_CASE("single-location room tour is the node itself") {
  FloorPlan plan;
  plan.rooms.push_back({0, "closet", rect(0, 0, 1.4, 1.4)});
  LayeredSceneGraph g = load_floor_plan(plan);
  sample_locations(g, 1.0);
  REQUIRE(g.location_ids().size() == 1);
  const std::vector<int> tour = plan_coverage_tour(g, 0, g.location_ids()[0]);
  CHECK(tour == std::vector<int>{g.location_ids()[0]});
  CHECK(tour_length(g, tour) == 0.0);
}
