#include "seek/world_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seek/errors.hpp"
#include "seek/logging.hpp"

namespace seek {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

std::vector<const ObjectInstance*> WorldModel::instances_of(const std::string& cls) const {
  std::vector<const ObjectInstance*> out;
  for (const ObjectInstance& o : objects) {
    if (o.cls == cls) out.push_back(&o);
  }
  return out;
}

WorldModel build_world(const FloorPlan& plan, std::vector<ObjectInstance> objects,
                       const SensorParams& sensor, double cell_m) {
  if (cell_m <= 0.0) throw InputError("cell_m must be positive");
  if (plan.rooms.empty()) throw InputError("world floor plan has no rooms");

  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-lo.x, -lo.y};
  for (const FloorPlan::Room& r : plan.rooms) {
    const auto [rlo, rhi] = r.polygon.bbox();
    lo.x = std::min(lo.x, rlo.x);
    lo.y = std::min(lo.y, rlo.y);
    hi.x = std::max(hi.x, rhi.x);
    hi.y = std::max(hi.y, rhi.y);
  }
  const int margin = 2;
  const Vec2 origin{lo.x - margin * cell_m, lo.y - margin * cell_m};
  const int width = static_cast<int>(std::ceil((hi.x - lo.x) / cell_m)) + 2 * margin;
  const int height = static_cast<int>(std::ceil((hi.y - lo.y) / cell_m)) + 2 * margin;

  WorldModel world;
  world.plan = plan;
  world.sensor = sensor;
  world.grid = OccupancyGrid(origin, cell_m, width, height);

  // Room interiors are free.
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Vec2 c = world.grid.center_of({x, y});
      for (const FloorPlan::Room& r : plan.rooms) {
        if (r.polygon.contains(c)) {
          world.grid.set_free({x, y}, true);
          break;
        }
      }
    }
  }
  // Walls along every polygon edge.
  for (const FloorPlan::Room& r : plan.rooms) {
    const std::size_t n = r.polygon.pts.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = r.polygon.pts[i];
      const Vec2 b = r.polygon.pts[(i + 1) % n];
      const double len = distance(a, b);
      const int steps = std::max(1, static_cast<int>(std::ceil(len / (cell_m / 3.0))));
      for (int s = 0; s <= steps; ++s) {
        const Vec2 p = a + (b - a) * (static_cast<double>(s) / steps);
        const Cell c = world.grid.cell_at(p);
        if (world.grid.in_bounds(c)) world.grid.set_free(c, false);
      }
    }
  }
  // Door openings.
  for (const FloorPlan::Door& d : plan.doors) {
    const double radius = std::max(d.width_m / 2.0, 1.5 * cell_m);
    const Cell center = world.grid.cell_at(d.position);
    const int span = static_cast<int>(std::ceil(radius / cell_m)) + 1;
    for (int dy = -span; dy <= span; ++dy) {
      for (int dx = -span; dx <= span; ++dx) {
        const Cell c{center.x + dx, center.y + dy};
        if (!world.grid.in_bounds(c)) continue;
        if (distance(world.grid.center_of(c), d.position) <= radius) {
          world.grid.set_free(c, true);
        }
      }
    }
  }

  for (std::size_t i = 0; i < objects.size(); ++i) {
    const Cell c = world.grid.cell_at(objects[i].position);
    if (!world.grid.is_free(c)) {
      throw InputError("objects[" + std::to_string(i) + "]: position (" +
                       std::to_string(objects[i].position.x) + ", " +
                       std::to_string(objects[i].position.y) + ") is not in free space");
    }
  }
  world.objects = std::move(objects);
  return world;
}

RobotState make_robot(const WorldModel& world, Vec2 start) {
  Cell c = world.grid.cell_at(start);
  if (!world.grid.is_free(c)) {
    // Snap to the nearest free cell within a small window.
    double best = std::numeric_limits<double>::infinity();
    Cell best_cell = c;
    for (int dy = -10; dy <= 10; ++dy) {
      for (int dx = -10; dx <= 10; ++dx) {
        const Cell cand{c.x + dx, c.y + dy};
        if (!world.grid.is_free(cand)) continue;
        const double d = distance(world.grid.center_of(cand), start);
        if (d < best) {
          best = d;
          best_cell = cand;
        }
      }
    }
    if (!world.grid.is_free(best_cell)) {
      throw InputError("start position (" + std::to_string(start.x) + ", " +
                       std::to_string(start.y) + ") is not near free space");
    }
    c = best_cell;
  }
  RobotState r;
  r.cell = c;
  r.position = world.grid.center_of(c);
  return r;
}

namespace {

// Isotropic Gaussian noise, resampled (then clamped) to stay within
// kNoiseClipSigmas standard deviations per component.
Vec2 clipped_noise(Rng& rng, double sigma) {
  const double clip = defaults::kNoiseClipSigmas * sigma;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double nx = rng.normal(0.0, sigma);
    const double ny = rng.normal(0.0, sigma);
    if (std::abs(nx) <= clip && std::abs(ny) <= clip) return {nx, ny};
  }
  return {0.0, 0.0};
}

}  // namespace

std::vector<Detection> sense(const WorldModel& world, const RobotState& robot, Rng& rng) {
  std::vector<Detection> out;
  const SensorParams& s = world.sensor;
  for (const ObjectInstance& obj : world.objects) {
    const double d = distance(obj.position, robot.position);
    if (d > s.r_max) continue;
    if (!world.grid.line_of_sight(robot.position, obj.position)) continue;
    const double p_detect = s.p0 * (1.0 - d / s.r_max);
    if (rng.uniform() >= p_detect) continue;
    Detection det;
    det.position = world.grid.clamp_to_bounds(obj.position + clipped_noise(rng, s.sigma_pos));
    det.cls = obj.cls;
    det.confidence = std::clamp(1.0 - d / s.r_max + rng.normal(0.0, s.sigma_conf), 0.0, 1.0);
    out.push_back(std::move(det));
  }
  // Spurious target-class detection at a random visible free cell.
  if (rng.uniform() < s.p_fp && !world.target_class.empty()) {
    const int span = static_cast<int>(std::ceil(s.r_max / world.grid.cell_m()));
    for (int attempt = 0; attempt < 64; ++attempt) {
      const int dx = static_cast<int>(rng.uniform_int(2 * span + 1)) - span;
      const int dy = static_cast<int>(rng.uniform_int(2 * span + 1)) - span;
      const Cell c{robot.cell.x + dx, robot.cell.y + dy};
      if (!world.grid.is_free(c)) continue;
      const Vec2 p = world.grid.center_of(c);
      if (distance(p, robot.position) > s.r_max) continue;
      if (!world.grid.line_of_sight(robot.position, p)) continue;
      out.push_back({p, world.target_class, rng.uniform(0.3, 0.6)});
      break;
    }
  }
  return out;
}

std::vector<Detection> step(const WorldModel& world, RobotState& robot,
                            const ControlCommand& command, Rng& rng) {
  if (command.kind == ControlCommand::Kind::kFinish) return {};
  const Cell to = command.target;
  if (!world.grid.step_allowed(robot.cell, to)) {
    throw SimContractError("illegal step from (" + std::to_string(robot.cell.x) + "," +
                           std::to_string(robot.cell.y) + ") to (" + std::to_string(to.x) + "," +
                           std::to_string(to.y) + ")");
  }
  const bool diagonal = to.x != robot.cell.x && to.y != robot.cell.y;
  robot.traveled_m += diagonal ? world.grid.cell_m() * kSqrt2 : world.grid.cell_m();
  robot.cell = to;
  robot.position = world.grid.center_of(to);
  robot.tick += 1;
  return sense(world, robot, rng);
}

double oracle_shortest_length(const WorldModel& world, Vec2 start, const std::string& cls,
                              double eps_m) {
  const auto instances = world.instances_of(cls);
  if (instances.empty()) {
    throw InputError("no instance of class \"" + cls + "\" in the world");
  }
  const RobotState r = make_robot(world, start);
  const std::vector<double> dist = grid_dijkstra(world.grid, r.cell);
  const int w = world.grid.width();
  double best = std::numeric_limits<double>::infinity();
  for (const ObjectInstance* obj : instances) {
    const Cell c = world.grid.cell_at(obj->position);
    const int span = static_cast<int>(std::ceil(eps_m / world.grid.cell_m())) + 1;
    for (int dy = -span; dy <= span; ++dy) {
      for (int dx = -span; dx <= span; ++dx) {
        const Cell cand{c.x + dx, c.y + dy};
        if (!world.grid.is_free(cand)) continue;
        if (distance(world.grid.center_of(cand), obj->position) > eps_m) continue;
        best = std::min(best, dist[static_cast<std::size_t>(cand.y) * w + cand.x]);
      }
    }
  }
  if (!std::isfinite(best)) {
    throw NoPathError("no reachable cell within " + std::to_string(eps_m) +
                      " m of any instance of \"" + cls + "\"");
  }
  return best;
}

}  // namespace seek
