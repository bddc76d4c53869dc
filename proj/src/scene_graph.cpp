#include "seek/scene_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <tuple>

#include "seek/errors.hpp"
#include "seek/logging.hpp"

namespace seek {

const FloorPlan::Room* FloorPlan::find_room(int id) const {
  for (const Room& r : rooms) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const GraphNode& LayeredSceneGraph::node(int id) const {
  if (index_.size() != nodes.size()) {
    index_.clear();
    for (std::size_t i = 0; i < nodes.size(); ++i) index_[nodes[i].id] = i;
  }
  const auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown node id " + std::to_string(id));
  return nodes[it->second];
}

bool LayeredSceneGraph::has_node(int id) const {
  if (index_.size() != nodes.size()) {
    index_.clear();
    for (std::size_t i = 0; i < nodes.size(); ++i) index_[nodes[i].id] = i;
  }
  return index_.count(id) > 0;
}

int LayeredSceneGraph::parent_of(int id) const {
  for (const ParentEdge& e : parent_edges) {
    if (e.child == id) return e.parent;
  }
  return -1;
}

std::vector<int> LayeredSceneGraph::children_of(int id) const {
  std::vector<int> out;
  for (const ParentEdge& e : parent_edges) {
    if (e.parent == id) out.push_back(e.child);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> LayeredSceneGraph::room_ids() const {
  std::vector<int> out;
  for (const GraphNode& n : nodes) {
    if (n.layer == kLayerRoom) out.push_back(n.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> LayeredSceneGraph::location_ids() const {
  std::vector<int> out;
  for (const GraphNode& n : nodes) {
    if (n.layer == kLayerLocation && n.label == "location") out.push_back(n.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> LayeredSceneGraph::room_locations(int room_id) const {
  std::vector<int> out;
  for (const ParentEdge& e : parent_edges) {
    if (e.parent != room_id) continue;
    const GraphNode& n = node(e.child);
    if (n.layer == kLayerLocation && n.label == "location") out.push_back(e.child);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool LayeredSceneGraph::is_door_node(int id) const {
  return std::find(door_location_ids_.begin(), door_location_ids_.end(), id) !=
         door_location_ids_.end();
}

int LayeredSceneGraph::nearest_location(const Vec2& p) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (const GraphNode& n : nodes) {
    if (n.layer != kLayerLocation || n.label != "location") continue;
    const double d = distance(n.position, p);
    if (d < best_d || (d == best_d && (best < 0 || n.id < best))) {
      best_d = d;
      best = n.id;
    }
  }
  return best;
}

int LayeredSceneGraph::next_node_id() const {
  int m = -1;
  for (const GraphNode& n : nodes) m = std::max(m, n.id);
  return m + 1;
}

void LayeredSceneGraph::add_node(GraphNode n) {
  if (n.layer < 1 || n.layer > layer_count) {
    throw InputError("node layer out of range: " + std::to_string(n.layer));
  }
  if (n.label.empty()) throw InputError("node label must be nonempty");
  if (has_node(n.id)) throw InputError("duplicate node id " + std::to_string(n.id));
  nodes.push_back(std::move(n));
}

void LayeredSceneGraph::add_intra_edge(int a, int b) {
  const GraphNode& na = node(a);
  const GraphNode& nb = node(b);
  if (na.layer != nb.layer) {
    throw InputError("intra-layer edge spans layers " + std::to_string(na.layer) + " and " +
                     std::to_string(nb.layer));
  }
  intra_edges.push_back({a, b, distance(na.position, nb.position)});
}

void LayeredSceneGraph::add_parent_edge(int child, int parent) {
  const GraphNode& nc = node(child);
  const GraphNode& np = node(parent);
  if (np.layer != nc.layer + 1) {
    throw InputError("parent edge must go exactly one layer up");
  }
  if (parent_of(child) >= 0) {
    throw InputError("node " + std::to_string(child) + " already has a parent");
  }
  parent_edges.push_back({child, parent});
}

LayeredSceneGraph load_floor_plan(const FloorPlan& doc) {
  if (doc.rooms.empty()) throw InputError("rooms: floor plan declares no rooms");
  std::set<int> ids;
  for (std::size_t i = 0; i < doc.rooms.size(); ++i) {
    const FloorPlan::Room& r = doc.rooms[i];
    if (r.label.empty()) {
      throw InputError("rooms[" + std::to_string(i) + "].label: empty label");
    }
    if (r.polygon.pts.size() < 3) {
      throw InputError("rooms[" + std::to_string(i) + "].polygon: fewer than 3 vertices");
    }
    if (!ids.insert(r.id).second) {
      throw InputError("rooms[" + std::to_string(i) + "].id: duplicate room id " +
                       std::to_string(r.id));
    }
    if (!r.polygon.is_simple()) {
      throw GeometryError("room " + std::to_string(r.id) + " polygon is not simple");
    }
  }
  for (std::size_t i = 0; i < doc.rooms.size(); ++i) {
    for (std::size_t j = i + 1; j < doc.rooms.size(); ++j) {
      if (polygons_overlap(doc.rooms[i].polygon, doc.rooms[j].polygon)) {
        throw GeometryError("rooms " + std::to_string(doc.rooms[i].id) + " and " +
                            std::to_string(doc.rooms[j].id) + " overlap");
      }
    }
  }
  for (std::size_t i = 0; i < doc.doors.size(); ++i) {
    const FloorPlan::Door& d = doc.doors[i];
    for (int rid : {d.room_a, d.room_b}) {
      if (ids.count(rid) == 0) {
        throw InputError("doors[" + std::to_string(i) + "].rooms: unknown room id " +
                         std::to_string(rid));
      }
    }
  }

  LayeredSceneGraph g;
  g.plan = doc;
  int max_id = 0;
  for (const FloorPlan::Room& r : doc.rooms) max_id = std::max(max_id, r.id);
  g.building_id = max_id + 1;

  Vec2 mean{};
  for (const FloorPlan::Room& r : doc.rooms) mean = mean + r.polygon.centroid();
  mean = mean * (1.0 / static_cast<double>(doc.rooms.size()));
  g.add_node({g.building_id, LayeredSceneGraph::kLayerBuilding, mean, 0.0,
              doc.name.empty() ? "building" : doc.name});

  for (const FloorPlan::Room& r : doc.rooms) {
    g.add_node({r.id, LayeredSceneGraph::kLayerRoom, r.polygon.centroid(), 0.0, r.label});
    g.add_parent_edge(r.id, g.building_id);
  }
  return g;
}

namespace {

// Interior grid candidate positions for one room: pitch `spacing`, anchored
// at the bbox corner plus the wall inset.
std::vector<std::pair<std::pair<int, int>, Vec2>> room_grid_points(const FloorPlan::Room& room,
                                                                   double spacing) {
  const double inset = defaults::kWallInsetM;
  const auto [lo, hi] = room.polygon.bbox();
  std::vector<std::pair<std::pair<int, int>, Vec2>> out;
  int i = 0;
  for (double x = lo.x + inset; x <= hi.x - inset + 1e-9; x += spacing, ++i) {
    int j = 0;
    for (double y = lo.y + inset; y <= hi.y - inset + 1e-9; y += spacing, ++j) {
      const Vec2 p{x, y};
      if (!room.polygon.contains(p)) continue;
      if (room.polygon.boundary_distance(p) < inset - 1e-9) continue;
      out.push_back({{i, j}, p});
    }
  }
  return out;
}

}  // namespace

void sample_locations(LayeredSceneGraph& graph, double spacing_m) {
  if (spacing_m <= 0.0) throw InputError("spacing must be positive");
  if (graph.room_ids().empty()) throw StateError("no rooms loaded");
  if (graph.spacing_m > 0.0) throw StateError("locations already sampled");
  graph.spacing_m = spacing_m;

  int next_id = graph.next_node_id();
  // Per room: grid index -> node id, for 4-neighborhood edges.
  std::map<int, std::map<std::pair<int, int>, int>> room_grids;
  std::map<int, std::vector<int>> room_interior;

  for (const FloorPlan::Room& room : graph.plan.rooms) {
    const auto [lo, hi] = room.polygon.bbox();
    if (spacing_m > hi.x - lo.x && spacing_m > hi.y - lo.y) {
      throw GeometryError("spacing " + std::to_string(spacing_m) + " exceeds the extent of room " +
                          std::to_string(room.id));
    }
    const auto pts = room_grid_points(room, spacing_m);
    if (pts.empty()) {
      throw GeometryError("room " + std::to_string(room.id) +
                          " is too small to hold a location node at spacing " +
                          std::to_string(spacing_m));
    }
    auto& grid = room_grids[room.id];
    for (const auto& [idx, p] : pts) {
      const int id = next_id++;
      graph.add_node({id, LayeredSceneGraph::kLayerLocation, p, 0.0, "location"});
      graph.add_parent_edge(id, room.id);
      grid[idx] = id;
      room_interior[room.id].push_back(id);
    }
    for (const auto& [idx, id] : grid) {
      const auto right = grid.find({idx.first + 1, idx.second});
      if (right != grid.end()) graph.add_intra_edge(id, right->second);
      const auto up = grid.find({idx.first, idx.second + 1});
      if (up != grid.end()) graph.add_intra_edge(id, up->second);
    }
    // Room-local connectivity check over the interior grid.
    std::map<int, std::vector<int>> adj;
    for (const auto& [idx, id] : grid) adj[id];
    for (const IntraEdge& e : graph.intra_edges) {
      if (adj.count(e.a) && adj.count(e.b)) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
      }
    }
    std::set<int> seen;
    std::queue<int> q;
    q.push(room_interior[room.id].front());
    seen.insert(room_interior[room.id].front());
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (seen.insert(v).second) q.push(v);
      }
    }
    if (seen.size() != room_interior[room.id].size()) {
      throw GeometryError("room " + std::to_string(room.id) +
                          " location grid is disconnected at spacing " +
                          std::to_string(spacing_m));
    }
  }

  const auto nearest_in = [&](const std::vector<int>& pool, const Vec2& p) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int id : pool) {
      const double d = distance(graph.node(id).position, p);
      if (d < best_d) {
        best_d = d;
        best = id;
      }
    }
    return best;
  };

  for (const FloorPlan::Door& door : graph.plan.doors) {
    const int id = next_id++;
    graph.add_node({id, LayeredSceneGraph::kLayerLocation, door.position, 0.0, "location"});
    graph.add_parent_edge(id, std::min(door.room_a, door.room_b));
    graph.door_location_ids_.push_back(id);
    for (int rid : {door.room_a, door.room_b}) {
      const int n = nearest_in(room_interior[rid], door.position);
      graph.add_intra_edge(id, n);
    }
  }
}

PathResult shortest_path(const LayeredSceneGraph& graph, int from_loc, int to_loc) {
  const GraphNode& from = graph.node(from_loc);
  const GraphNode& to = graph.node(to_loc);
  if (from.layer != LayeredSceneGraph::kLayerLocation ||
      to.layer != LayeredSceneGraph::kLayerLocation) {
    throw InputError("shortest_path endpoints must be layer-1 nodes");
  }
  if (from_loc == to_loc) return {{from_loc}, 0.0};

  std::map<int, std::vector<std::pair<int, double>>> adj;
  for (const IntraEdge& e : graph.intra_edges) {
    if (graph.node(e.a).layer != LayeredSceneGraph::kLayerLocation) continue;
    adj[e.a].push_back({e.b, e.length_m});
    adj[e.b].push_back({e.a, e.length_m});
  }

  // A* with straight-line heuristic (admissible: edge lengths are Euclidean).
  const auto h = [&](int id) { return distance(graph.node(id).position, to.position); };
  std::map<int, double> g_cost;
  std::map<int, int> came;
  using QItem = std::pair<double, int>;  // (f, node)
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> open;
  g_cost[from_loc] = 0.0;
  open.push({h(from_loc), from_loc});
  while (!open.empty()) {
    const auto [f, u] = open.top();
    open.pop();
    if (u == to_loc) break;
    const double gu = g_cost.at(u);
    if (f > gu + h(u) + 1e-12) continue;  // stale entry
    for (const auto& [v, w] : adj[u]) {
      const double cand = gu + w;
      auto it = g_cost.find(v);
      if (it == g_cost.end() || cand < it->second - 1e-15) {
        g_cost[v] = cand;
        came[v] = u;
        open.push({cand + h(v), v});
      }
    }
  }
  if (g_cost.find(to_loc) == g_cost.end()) {
    throw NoPathError("no path between location nodes " + std::to_string(from_loc) + " and " +
                      std::to_string(to_loc));
  }
  PathResult res;
  res.length_m = g_cost.at(to_loc);
  int cur = to_loc;
  while (cur != from_loc) {
    res.node_ids.push_back(cur);
    cur = came.at(cur);
  }
  res.node_ids.push_back(from_loc);
  std::reverse(res.node_ids.begin(), res.node_ids.end());
  return res;
}

int room_anchor(const LayeredSceneGraph& graph, int room_id) {
  const std::vector<int> locs = graph.room_locations(room_id);
  if (locs.empty()) {
    throw StateError("room " + std::to_string(room_id) + " has no sampled locations");
  }
  const Vec2 c = graph.node(room_id).position;
  int best = locs.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (int id : locs) {
    const double d = distance(graph.node(id).position, c);
    if (d < best_d) {
      best_d = d;
      best = id;
    }
  }
  return best;
}

std::vector<int> greedy_tour(const LayeredSceneGraph& graph, int room_id, int start_loc) {
  const std::vector<int> locs = graph.room_locations(room_id);
  if (locs.empty()) {
    throw StateError("room " + std::to_string(room_id) + " has no sampled locations");
  }
  if (std::find(locs.begin(), locs.end(), start_loc) == locs.end()) {
    throw InputError("tour start node " + std::to_string(start_loc) + " is not a location of room " +
                     std::to_string(room_id));
  }
  std::vector<int> tour{start_loc};
  std::set<int> remaining(locs.begin(), locs.end());
  remaining.erase(start_loc);
  int cur = start_loc;
  while (!remaining.empty()) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int id : remaining) {  // set iterates in id order, so ties pick the lowest id
      const double d = distance(graph.node(id).position, graph.node(cur).position);
      if (d < best_d) {
        best_d = d;
        best = id;
      }
    }
    tour.push_back(best);
    remaining.erase(best);
    cur = best;
  }
  return tour;
}

double tour_length(const LayeredSceneGraph& graph, const std::vector<int>& tour) {
  double len = 0.0;
  for (std::size_t i = 1; i < tour.size(); ++i) {
    len += distance(graph.node(tour[i - 1]).position, graph.node(tour[i]).position);
  }
  return len;
}

CostMatrix room_cost_matrix(const LayeredSceneGraph& graph) {
  CostMatrix cm;
  cm.room_ids = graph.room_ids();
  const std::size_t n = cm.room_ids.size();
  cm.move_cost.assign(n, std::vector<double>(n, 0.0));
  cm.search_cost.assign(n, 0.0);

  std::vector<int> anchors(n);
  for (std::size_t i = 0; i < n; ++i) anchors[i] = room_anchor(graph, cm.room_ids[i]);

  std::vector<std::pair<int, int>> unreachable;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      try {
        const double d = shortest_path(graph, anchors[i], anchors[j]).length_m;
        cm.move_cost[i][j] = d;
        cm.move_cost[j][i] = d;
      } catch (const NoPathError&) {
        unreachable.push_back({cm.room_ids[i], cm.room_ids[j]});
      }
    }
  }
  if (!unreachable.empty()) {
    std::string msg = "unreachable room pairs:";
    for (const auto& [a, b] : unreachable) {
      msg += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
    }
    throw NoPathError(msg);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<int> tour = greedy_tour(graph, cm.room_ids[i], anchors[i]);
    cm.search_cost[i] = tour.size() < 2 ? 0.0 : tour_length(graph, tour);
  }
  return cm;
}

int CostMatrix::index_of(int room_id) const {
  for (std::size_t i = 0; i < room_ids.size(); ++i) {
    if (room_ids[i] == room_id) return static_cast<int>(i);
  }
  return -1;
}

int insert_object_node(LayeredSceneGraph& graph, const std::string& object_class, Vec2 position) {
  const int nearest = graph.nearest_location(position);
  if (nearest < 0) throw StateError("cannot insert object: location layer is empty");
  const int id = graph.next_node_id();
  graph.add_node({id, LayeredSceneGraph::kLayerLocation, position, 0.0, object_class});
  graph.add_intra_edge(id, nearest);
  graph.add_parent_edge(id, graph.parent_of(nearest));
  return id;
}

int nearest_room(const LayeredSceneGraph& graph, Vec2 position) {
  const int loc = graph.nearest_location(position);
  if (loc < 0) throw StateError("nearest_room requires sampled locations");
  return graph.parent_of(loc);
}

bool graphs_equal(const LayeredSceneGraph& a, const LayeredSceneGraph& b) {
  if (a.layer_count != b.layer_count || a.spacing_m != b.spacing_m ||
      a.building_id != b.building_id || a.nodes.size() != b.nodes.size() ||
      a.intra_edges.size() != b.intra_edges.size() ||
      a.parent_edges.size() != b.parent_edges.size()) {
    return false;
  }
  auto node_key = [](const GraphNode& n) {
    return std::make_tuple(n.id, n.layer, n.position.x, n.position.y, n.heading, n.label);
  };
  std::vector<std::tuple<int, int, double, double, double, std::string>> na, nb;
  for (const GraphNode& n : a.nodes) na.push_back(node_key(n));
  for (const GraphNode& n : b.nodes) nb.push_back(node_key(n));
  std::sort(na.begin(), na.end());
  std::sort(nb.begin(), nb.end());
  if (na != nb) return false;

  auto edge_key = [](const IntraEdge& e) {
    return std::make_tuple(std::min(e.a, e.b), std::max(e.a, e.b), e.length_m);
  };
  std::vector<std::tuple<int, int, double>> ea, eb;
  for (const IntraEdge& e : a.intra_edges) ea.push_back(edge_key(e));
  for (const IntraEdge& e : b.intra_edges) eb.push_back(edge_key(e));
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  if (ea != eb) return false;

  std::vector<std::pair<int, int>> pa, pb;
  for (const ParentEdge& e : a.parent_edges) pa.push_back({e.child, e.parent});
  for (const ParentEdge& e : b.parent_edges) pb.push_back({e.child, e.parent});
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  return pa == pb;
}

}  // namespace seek
