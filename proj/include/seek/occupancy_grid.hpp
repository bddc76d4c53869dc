#ifndef SEEK_OCCUPANCY_GRID_HPP
#define SEEK_OCCUPANCY_GRID_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "seek/geometry.hpp"

namespace seek {

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Cell& o) const { return !(*this == o); }
};

// Planar occupancy grid. Cells are squares of side cell_m; cell (0,0) has
// its minimum corner at `origin`.
class OccupancyGrid {
public:
  OccupancyGrid() = default;
  OccupancyGrid(Vec2 origin, double cell_m, int width, int height)
      : origin_(origin), cell_m_(cell_m), width_(width), height_(height),
        occ_(static_cast<std::size_t>(width) * height, 1) {}

  Vec2 origin() const { return origin_; }
  double cell_m() const { return cell_m_; }
  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  bool is_free(Cell c) const { return in_bounds(c) && occ_[idx(c)] == 0; }
  void set_free(Cell c, bool free) { occ_[idx(c)] = free ? 0 : 1; }

  Cell cell_at(Vec2 p) const;
  Vec2 center_of(Cell c) const;
  Vec2 clamp_to_bounds(Vec2 p) const;

  // True when every cell crossed by the segment between the two points is
  // free (endpoints' cells included).
  bool line_of_sight(Vec2 a, Vec2 b) const;

  // 8-connected motion rule: target free, and for diagonals both adjacent
  // orthogonal cells free as well (no corner cutting).
  bool step_allowed(Cell from, Cell to) const;

  std::size_t free_count() const;

private:
  std::size_t idx(Cell c) const {
    return static_cast<std::size_t>(c.y) * width_ + c.x;
  }
  Vec2 origin_{};
  double cell_m_ = 0.1;
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> occ_;
};

struct GridPath {
  std::vector<Cell> cells;  // start excluded, goal included
  double length_m = 0.0;
};

// Octile-heuristic A* between cells; nullopt when unreachable.
std::optional<GridPath> grid_astar(const OccupancyGrid& grid, Cell start, Cell goal);

// Full-grid distances (meters) from `start`; infinity for unreachable cells.
std::vector<double> grid_dijkstra(const OccupancyGrid& grid, Cell start);

// Shortest distances restricted to a rectangular window of cells. Paths are
// not allowed to leave the window, so distances are an upper bound on the
// unrestricted ones.
struct DistanceField {
  Cell lo, hi;            // inclusive window corners
  std::vector<double> d;  // row-major over the window, meters

  bool contains(Cell c) const {
    return c.x >= lo.x && c.y >= lo.y && c.x <= hi.x && c.y <= hi.y;
  }
  double at(Cell c) const;
};
DistanceField grid_dijkstra_window(const OccupancyGrid& grid, Cell start, Cell lo, Cell hi);

// Repeat-call A* router with reusable scratch buffers; cheap for the many
// short legs the controller plans.
class GridRouter {
public:
  explicit GridRouter(const OccupancyGrid& grid);
  // max_pops bounds the search effort; 0 means unbounded.
  std::optional<GridPath> route(Cell start, Cell goal, std::size_t max_pops = 0);

private:
  const OccupancyGrid& grid_;
  std::vector<std::uint32_t> stamp_;
  std::vector<double> g_;
  std::vector<std::int32_t> came_;
  std::uint32_t generation_ = 0;
};

}  // namespace seek

#endif  // SEEK_OCCUPANCY_GRID_HPP
