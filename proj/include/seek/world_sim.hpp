#ifndef SEEK_WORLD_SIM_HPP
#define SEEK_WORLD_SIM_HPP

#include <string>
#include <vector>

#include "seek/defaults.hpp"
#include "seek/geometry.hpp"
#include "seek/occupancy_grid.hpp"
#include "seek/rng.hpp"
#include "seek/scene_graph.hpp"

namespace seek {

struct SensorParams {
  double r_max = defaults::kRMaxM;        // detection range, meters
  double p0 = defaults::kP0;              // peak true-positive rate at zero range
  double sigma_pos = defaults::kSigmaPosM;  // position noise std (clipped at 4 sigma)
  double p_fp = defaults::kPFp;           // per-tick false-positive rate
  double sigma_conf = defaults::kSigmaConf;  // confidence noise std
};

struct ObjectInstance {
  std::string cls;
  Vec2 position;
};

// Ground-truth world: rasterized floor plan, object instances, and the
// probabilistic detector model.
struct WorldModel {
  OccupancyGrid grid;
  FloorPlan plan;
  std::vector<ObjectInstance> objects;
  SensorParams sensor;
  std::string target_class;  // class reported by spurious detections

  std::vector<const ObjectInstance*> instances_of(const std::string& cls) const;
};

struct RobotState {
  Cell cell;
  Vec2 position;           // cell center, meters
  double traveled_m = 0.0;  // exact sum of executed step costs
  long tick = 0;
};

struct Detection {
  Vec2 position;  // measured, meters
  std::string cls;
  double confidence = 0.0;
};

struct ControlCommand {
  enum class Kind { kStepTo, kFinish };
  Kind kind = Kind::kStepTo;
  Cell target{};          // kStepTo: adjacent free cell
  Vec2 finish_position{};  // kFinish: where the inspection happened

  static ControlCommand step_to(Cell c) { return {Kind::kStepTo, c, {}}; }
  static ControlCommand finish(Vec2 p) { return {Kind::kFinish, {}, p}; }
};

// Rasterize a floor plan (walls occupied, door openings carved free) and
// validate object placements.
WorldModel build_world(const FloorPlan& plan, std::vector<ObjectInstance> objects,
                       const SensorParams& sensor, double cell_m = defaults::kCellM);

// Place the robot at the nearest free cell center to `start`.
RobotState make_robot(const WorldModel& world, Vec2 start);

// One sensing pass from the robot's pose: range- and line-of-sight-gated
// true positives with linear falloff, plus an occasional spurious
// target-class detection at a random visible free cell.
std::vector<Detection> sense(const WorldModel& world, const RobotState& robot, Rng& rng);

// Execute one command (8-connected step or finish), then sense.
std::vector<Detection> step(const WorldModel& world, RobotState& robot,
                            const ControlCommand& command, Rng& rng);

// Length of the shortest grid path from `start` to any free cell within
// eps_m of an instance of the class; the SPL reference length.
double oracle_shortest_length(const WorldModel& world, Vec2 start, const std::string& cls,
                              double eps_m);

}  // namespace seek

#endif  // SEEK_WORLD_SIM_HPP
