#ifndef SEEK_SCENE_GRAPH_HPP
#define SEEK_SCENE_GRAPH_HPP

#include <map>
#include <string>
#include <vector>

#include "seek/defaults.hpp"
#include "seek/geometry.hpp"

namespace seek {

// Floor-plan document: rooms as simple polygons plus doors between them.
struct FloorPlan {
  struct Room {
    int id = 0;
    std::string label;
    Polygon polygon;
  };
  struct Door {
    int room_a = 0;
    int room_b = 0;
    Vec2 position;
    double width_m = 0.9;
  };
  std::string name;
  std::vector<Room> rooms;
  std::vector<Door> doors;

  const Room* find_room(int id) const;
};

struct GraphNode {
  int id = 0;
  int layer = 0;  // 1 = location/object, 2 = room, 3 = building
  Vec2 position;
  double heading = 0.0;  // accepted in inputs, unused by planning
  std::string label;
};

struct IntraEdge {
  int a = 0;
  int b = 0;
  double length_m = 0.0;
};

struct ParentEdge {
  int child = 0;
  int parent = 0;
};

// Hierarchical scene graph: location layer (sampled grid + door nodes +
// observed objects), room layer (one node per floor-plan room, node id ==
// declared room id), and a single building node.
//
// Immutable after construction except through load_floor_plan,
// sample_locations, and insert_object_node; read-only sharing across
// concurrent episodes is safe, mutation needs exclusive access.
class LayeredSceneGraph {
public:
  static constexpr int kLayerLocation = 1;
  static constexpr int kLayerRoom = 2;
  static constexpr int kLayerBuilding = 3;

  std::vector<GraphNode> nodes;
  std::vector<IntraEdge> intra_edges;
  std::vector<ParentEdge> parent_edges;
  int layer_count = 3;

  // Source geometry, kept for sampling and persistence.
  FloorPlan plan;
  double spacing_m = 0.0;  // 0 until sample_locations has run
  int building_id = -1;

  const GraphNode& node(int id) const;
  bool has_node(int id) const;
  int parent_of(int id) const;  // -1 if none
  std::vector<int> children_of(int id) const;
  std::vector<int> room_ids() const;

  // Layer-1 nodes labeled "location" (sampled grid and door nodes).
  std::vector<int> location_ids() const;
  // Location children of one room, in id order.
  std::vector<int> room_locations(int room_id) const;
  // Whether the given location node sits on a door.
  bool is_door_node(int id) const;

  int nearest_location(const Vec2& p) const;  // lowest id wins ties; -1 if none

  int next_node_id() const;

  void add_node(GraphNode n);
  void add_intra_edge(int a, int b);
  void add_parent_edge(int child, int parent);

private:
  std::vector<int> door_location_ids_;
  mutable std::map<int, std::size_t> index_;  // id -> nodes position, rebuilt lazily
  friend void sample_locations(LayeredSceneGraph&, double);
  friend struct GraphIo;
};

// Build the room/building layers from a floor plan. Location layer is left
// empty; call sample_locations next.
LayeredSceneGraph load_floor_plan(const FloorPlan& doc);

// Populate the location layer: an axis-aligned grid of pitch `spacing_m`
// inside every room (inset from walls), one node per door midpoint, and
// 4-neighborhood plus door-link edges.
void sample_locations(LayeredSceneGraph& graph, double spacing_m = defaults::kSpacingM);

struct PathResult {
  std::vector<int> node_ids;
  double length_m = 0.0;
};

// A* over the location layer with a straight-line heuristic.
PathResult shortest_path(const LayeredSceneGraph& graph, int from_loc, int to_loc);

struct CostMatrix {
  std::vector<int> room_ids;                   // ordering for both tables
  std::vector<std::vector<double>> move_cost;  // meters, room anchor to room anchor
  std::vector<double> search_cost;             // meters, greedy intra-room tour

  int index_of(int room_id) const;  // -1 if absent
};

// Shortest inter-room distances (between the location nodes nearest each
// room centroid) and greedy intra-room tour lengths.
CostMatrix room_cost_matrix(const LayeredSceneGraph& graph);

// The location node of `room_id` nearest the room centroid.
int room_anchor(const LayeredSceneGraph& graph, int room_id);

// Greedy nearest-neighbor ordering of a room's location nodes from
// `start_loc`; distance ties break toward the lower node id.
std::vector<int> greedy_tour(const LayeredSceneGraph& graph, int room_id, int start_loc);

// Sum of Euclidean leg lengths along a node sequence.
double tour_length(const LayeredSceneGraph& graph, const std::vector<int>& tour);

// Add an observed object: a layer-1 node linked to the nearest location
// node and parented to that node's room. Returns the new node id.
int insert_object_node(LayeredSceneGraph& graph, const std::string& object_class, Vec2 position);

// Room owning the location node nearest to `position`.
int nearest_room(const LayeredSceneGraph& graph, Vec2 position);

bool graphs_equal(const LayeredSceneGraph& a, const LayeredSceneGraph& b);

}  // namespace seek

#endif  // SEEK_SCENE_GRAPH_HPP
