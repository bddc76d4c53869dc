#include "seek/occupancy_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace seek {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

Cell OccupancyGrid::cell_at(Vec2 p) const {
  return {static_cast<int>(std::floor((p.x - origin_.x) / cell_m_)),
          static_cast<int>(std::floor((p.y - origin_.y) / cell_m_))};
}

Vec2 OccupancyGrid::center_of(Cell c) const {
  return {origin_.x + (c.x + 0.5) * cell_m_, origin_.y + (c.y + 0.5) * cell_m_};
}

Vec2 OccupancyGrid::clamp_to_bounds(Vec2 p) const {
  const double eps = 1e-9;
  return {std::clamp(p.x, origin_.x + eps, origin_.x + width_ * cell_m_ - eps),
          std::clamp(p.y, origin_.y + eps, origin_.y + height_ * cell_m_ - eps)};
}

bool OccupancyGrid::line_of_sight(Vec2 a, Vec2 b) const {
  // Amanatides-Woo voxel traversal from a to b. The walk is bounded by the
  // segment parameter, not by reaching b's cell: endpoints that sit exactly
  // on cell corners would otherwise let the ray march past them into walls.
  Cell cur = cell_at(a);
  if (!is_free(cur)) return false;

  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const int step_x = dx > 0 ? 1 : -1;
  const int step_y = dy > 0 ? 1 : -1;

  double t_max_x, t_delta_x;
  if (dx == 0.0) {
    t_max_x = std::numeric_limits<double>::infinity();
    t_delta_x = std::numeric_limits<double>::infinity();
  } else {
    const double next_x = origin_.x + (cur.x + (step_x > 0 ? 1 : 0)) * cell_m_;
    t_max_x = (next_x - a.x) / dx;
    t_delta_x = cell_m_ / std::abs(dx);
  }
  double t_max_y, t_delta_y;
  if (dy == 0.0) {
    t_max_y = std::numeric_limits<double>::infinity();
    t_delta_y = std::numeric_limits<double>::infinity();
  } else {
    const double next_y = origin_.y + (cur.y + (step_y > 0 ? 1 : 0)) * cell_m_;
    t_max_y = (next_y - a.y) / dy;
    t_delta_y = cell_m_ / std::abs(dy);
  }

  int guard = 4 * (width_ + height_) + 8;
  while (std::min(t_max_x, t_max_y) < 1.0 - 1e-12 && guard-- > 0) {
    if (t_max_x < t_max_y) {
      cur.x += step_x;
      t_max_x += t_delta_x;
    } else {
      cur.y += step_y;
      t_max_y += t_delta_y;
    }
    if (!is_free(cur)) return false;
  }
  return true;
}

bool OccupancyGrid::step_allowed(Cell from, Cell to) const {
  const int dx = to.x - from.x;
  const int dy = to.y - from.y;
  if (std::abs(dx) > 1 || std::abs(dy) > 1 || (dx == 0 && dy == 0)) return false;
  if (!is_free(to)) return false;
  if (dx != 0 && dy != 0) {
    if (!is_free({from.x + dx, from.y}) || !is_free({from.x, from.y + dy})) return false;
  }
  return true;
}

std::size_t OccupancyGrid::free_count() const {
  std::size_t n = 0;
  for (std::uint8_t v : occ_) n += (v == 0);
  return n;
}

namespace {

struct Neighbor {
  int dx, dy;
  double cost;  // multiples of cell_m
};
constexpr Neighbor kNeighbors[8] = {{1, 0, 1.0},      {-1, 0, 1.0},     {0, 1, 1.0},
                                    {0, -1, 1.0},     {1, 1, kSqrt2},   {1, -1, kSqrt2},
                                    {-1, 1, kSqrt2},  {-1, -1, kSqrt2}};

double octile(Cell a, Cell b) {
  const double dx = std::abs(a.x - b.x);
  const double dy = std::abs(a.y - b.y);
  return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
}

}  // namespace

std::optional<GridPath> grid_astar(const OccupancyGrid& grid, Cell start, Cell goal) {
  if (!grid.is_free(start) || !grid.is_free(goal)) return std::nullopt;
  if (start == goal) return GridPath{};

  const int w = grid.width();
  const int h = grid.height();
  const auto key = [w](Cell c) { return static_cast<std::size_t>(c.y) * w + c.x; };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(static_cast<std::size_t>(w) * h, inf);
  std::vector<std::int32_t> came(static_cast<std::size_t>(w) * h, -1);

  using QItem = std::pair<double, std::size_t>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> open;
  g[key(start)] = 0.0;
  open.push({octile(start, goal), key(start)});

  while (!open.empty()) {
    const auto [f, uk] = open.top();
    open.pop();
    const Cell u{static_cast<int>(uk % w), static_cast<int>(uk / w)};
    if (u == goal) break;
    if (f > g[uk] + octile(u, goal) + 1e-12) continue;
    for (const Neighbor& nb : kNeighbors) {
      const Cell v{u.x + nb.dx, u.y + nb.dy};
      if (!grid.step_allowed(u, v)) continue;
      const double cand = g[uk] + nb.cost;
      const std::size_t vk = key(v);
      if (cand < g[vk] - 1e-15) {
        g[vk] = cand;
        came[vk] = static_cast<std::int32_t>(uk);
        open.push({cand + octile(v, goal), vk});
      }
    }
  }
  if (g[key(goal)] == inf) return std::nullopt;

  GridPath path;
  path.length_m = g[key(goal)] * grid.cell_m();
  Cell cur = goal;
  while (cur != start) {
    path.cells.push_back(cur);
    const std::int32_t p = came[key(cur)];
    cur = {static_cast<int>(p % w), static_cast<int>(p / w)};
  }
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

double DistanceField::at(Cell c) const {
  if (!contains(c)) return std::numeric_limits<double>::infinity();
  const int w = hi.x - lo.x + 1;
  return d[static_cast<std::size_t>(c.y - lo.y) * w + (c.x - lo.x)];
}

DistanceField grid_dijkstra_window(const OccupancyGrid& grid, Cell start, Cell lo, Cell hi) {
  DistanceField field;
  field.lo = {std::max(lo.x, 0), std::max(lo.y, 0)};
  field.hi = {std::min(hi.x, grid.width() - 1), std::min(hi.y, grid.height() - 1)};
  const int w = field.hi.x - field.lo.x + 1;
  const int h = field.hi.y - field.lo.y + 1;
  const double inf = std::numeric_limits<double>::infinity();
  field.d.assign(static_cast<std::size_t>(std::max(w, 0)) * std::max(h, 0), inf);
  if (w <= 0 || h <= 0 || !field.contains(start) || !grid.is_free(start)) return field;

  const auto key = [&](Cell c) {
    return static_cast<std::size_t>(c.y - field.lo.y) * w + (c.x - field.lo.x);
  };
  using QItem = std::pair<double, std::size_t>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> open;
  field.d[key(start)] = 0.0;
  open.push({0.0, key(start)});
  while (!open.empty()) {
    const auto [d, uk] = open.top();
    open.pop();
    if (d > field.d[uk] + 1e-15) continue;
    const Cell u{static_cast<int>(uk % w) + field.lo.x, static_cast<int>(uk / w) + field.lo.y};
    for (const Neighbor& nb : kNeighbors) {
      const Cell v{u.x + nb.dx, u.y + nb.dy};
      if (!field.contains(v) || !grid.step_allowed(u, v)) continue;
      const double cand = d + nb.cost;
      const std::size_t vk = key(v);
      if (cand < field.d[vk] - 1e-15) {
        field.d[vk] = cand;
        open.push({cand, vk});
      }
    }
  }
  for (double& dv : field.d) {
    if (dv != inf) dv *= grid.cell_m();
  }
  return field;
}

GridRouter::GridRouter(const OccupancyGrid& grid)
    : grid_(grid),
      stamp_(static_cast<std::size_t>(grid.width()) * grid.height(), 0),
      g_(stamp_.size(), 0.0),
      came_(stamp_.size(), -1) {}

std::optional<GridPath> GridRouter::route(Cell start, Cell goal, std::size_t max_pops) {
  if (!grid_.is_free(start) || !grid_.is_free(goal)) return std::nullopt;
  if (start == goal) return GridPath{};
  ++generation_;
  const int w = grid_.width();
  const auto key = [w](Cell c) { return static_cast<std::size_t>(c.y) * w + c.x; };
  const auto g_at = [&](std::size_t k) {
    return stamp_[k] == generation_ ? g_[k] : std::numeric_limits<double>::infinity();
  };

  using QItem = std::pair<double, std::size_t>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> open;
  stamp_[key(start)] = generation_;
  g_[key(start)] = 0.0;
  came_[key(start)] = -1;
  open.push({octile(start, goal), key(start)});
  std::size_t pops = 0;
  bool found = false;
  while (!open.empty()) {
    const auto [f, uk] = open.top();
    open.pop();
    if (max_pops > 0 && ++pops > max_pops) return std::nullopt;
    const Cell u{static_cast<int>(uk % w), static_cast<int>(uk / w)};
    if (u == goal) {
      found = true;
      break;
    }
    if (f > g_at(uk) + octile(u, goal) + 1e-12) continue;
    for (const Neighbor& nb : kNeighbors) {
      const Cell v{u.x + nb.dx, u.y + nb.dy};
      if (!grid_.step_allowed(u, v)) continue;
      const double cand = g_at(uk) + nb.cost;
      const std::size_t vk = key(v);
      if (cand < g_at(vk) - 1e-15) {
        stamp_[vk] = generation_;
        g_[vk] = cand;
        came_[vk] = static_cast<std::int32_t>(uk);
        open.push({cand + octile(v, goal), vk});
      }
    }
  }
  if (!found) return std::nullopt;
  GridPath path;
  path.length_m = g_[key(goal)] * grid_.cell_m();
  Cell cur = goal;
  while (cur != start) {
    path.cells.push_back(cur);
    const std::int32_t p = came_[key(cur)];
    cur = {static_cast<int>(p % w), static_cast<int>(p / w)};
  }
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

std::vector<double> grid_dijkstra(const OccupancyGrid& grid, Cell start) {
  const int w = grid.width();
  const int h = grid.height();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(w) * h, inf);
  if (!grid.is_free(start)) return dist;
  const auto key = [w](Cell c) { return static_cast<std::size_t>(c.y) * w + c.x; };

  using QItem = std::pair<double, std::size_t>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> open;
  dist[key(start)] = 0.0;
  open.push({0.0, key(start)});
  while (!open.empty()) {
    const auto [d, uk] = open.top();
    open.pop();
    if (d > dist[uk] + 1e-15) continue;
    const Cell u{static_cast<int>(uk % w), static_cast<int>(uk / w)};
    for (const Neighbor& nb : kNeighbors) {
      const Cell v{u.x + nb.dx, u.y + nb.dy};
      if (!grid.step_allowed(u, v)) continue;
      const double cand = d + nb.cost;
      const std::size_t vk = key(v);
      if (cand < dist[vk] - 1e-15) {
        dist[vk] = cand;
        open.push({cand, vk});
      }
    }
  }
  for (double& d : dist) {
    if (d != inf) d *= grid.cell_m();
  }
  return dist;
}

}  // namespace seek
