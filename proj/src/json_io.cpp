#include "seek/json_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "seek/errors.hpp"
#include "seek/logging.hpp"

namespace seek {

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError(path + ": invalid JSON: " + e.what());
  }
  return doc;
}

void write_json(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open file for writing: " + path);
  out << doc.dump(2) << "\n";
}

const json& require(const json& doc, const char* field, const std::string& ctx) {
  if (!doc.contains(field)) throw InputError(ctx + "." + field + ": missing field");
  return doc[field];
}

double require_number(const json& doc, const char* field, const std::string& ctx) {
  const json& v = require(doc, field, ctx);
  if (!v.is_number()) throw InputError(ctx + "." + field + ": expected a number");
  return v.get<double>();
}

double require_prob(const json& v, const std::string& ctx) {
  if (!v.is_number()) throw InputError(ctx + ": expected a number");
  const double p = v.get<double>();
  if (p < 0.0 || p > 1.0) throw InputError(ctx + ": probability out of [0,1]");
  return p;
}

Vec2 parse_point(const json& v, const std::string& ctx) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw InputError(ctx + ": expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

void check_schema(const json& doc, const std::string& expected, const std::string& ctx) {
  if (!doc.contains("schema") || !doc["schema"].is_string() ||
      doc["schema"].get<std::string>() != expected) {
    throw InputError(ctx + ".schema: expected \"" + expected + "\"");
  }
}

FloorPlan parse_floor_plan(const json& doc, const std::string& ctx) {
  FloorPlan plan;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw InputError(ctx + ".name: expected a string");
    plan.name = doc["name"].get<std::string>();
  }
  const json& rooms = require(doc, "rooms", ctx);
  if (!rooms.is_array() || rooms.empty()) {
    throw InputError(ctx + ".rooms: expected a nonempty array");
  }
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    const std::string rctx = ctx + ".rooms[" + std::to_string(i) + "]";
    const json& r = rooms[i];
    FloorPlan::Room room;
    const json& id = require(r, "id", rctx);
    if (!id.is_number_integer()) throw InputError(rctx + ".id: expected an integer");
    room.id = id.get<int>();
    if (room.id < 0) throw InputError(rctx + ".id: must be nonnegative");
    const json& label = require(r, "label", rctx);
    if (!label.is_string() || label.get<std::string>().empty()) {
      throw InputError(rctx + ".label: expected a nonempty string");
    }
    room.label = label.get<std::string>();
    const json& poly = require(r, "polygon", rctx);
    if (!poly.is_array() || poly.size() < 3) {
      throw InputError(rctx + ".polygon: expected at least 3 vertices");
    }
    for (std::size_t k = 0; k < poly.size(); ++k) {
      room.polygon.pts.push_back(
          parse_point(poly[k], rctx + ".polygon[" + std::to_string(k) + "]"));
    }
    plan.rooms.push_back(std::move(room));
  }
  if (doc.contains("doors")) {
    const json& doors = doc["doors"];
    if (!doors.is_array()) throw InputError(ctx + ".doors: expected an array");
    for (std::size_t i = 0; i < doors.size(); ++i) {
      const std::string dctx = ctx + ".doors[" + std::to_string(i) + "]";
      const json& d = doors[i];
      FloorPlan::Door door;
      const json& rr = require(d, "rooms", dctx);
      if (!rr.is_array() || rr.size() != 2 || !rr[0].is_number_integer() ||
          !rr[1].is_number_integer()) {
        throw InputError(dctx + ".rooms: expected [room_id, room_id]");
      }
      door.room_a = rr[0].get<int>();
      door.room_b = rr[1].get<int>();
      door.position = parse_point(require(d, "position", dctx), dctx + ".position");
      door.width_m = require_number(d, "width_m", dctx);
      if (door.width_m <= 0.0) throw InputError(dctx + ".width_m: must be positive");
      plan.doors.push_back(door);
    }
  }
  return plan;
}

json floor_plan_to_json(const FloorPlan& plan) {
  json doc;
  doc["name"] = plan.name;
  doc["rooms"] = json::array();
  for (const FloorPlan::Room& r : plan.rooms) {
    json poly = json::array();
    for (const Vec2& p : r.polygon.pts) poly.push_back({p.x, p.y});
    doc["rooms"].push_back({{"id", r.id}, {"label", r.label}, {"polygon", poly}});
  }
  doc["doors"] = json::array();
  for (const FloorPlan::Door& d : plan.doors) {
    doc["doors"].push_back({{"rooms", {d.room_a, d.room_b}},
                            {"position", {d.position.x, d.position.y}},
                            {"width_m", d.width_m}});
  }
  return doc;
}

}  // namespace

FloorPlan load_floor_plan_file(const std::string& path) {
  return parse_floor_plan(read_json(path), path);
}

// Accessor for the graph's private sampling state during (de)serialization.
struct GraphIo {
  static void mark_door(LayeredSceneGraph& g, int id) { g.door_location_ids_.push_back(id); }
  static const std::vector<int>& door_ids(const LayeredSceneGraph& g) {
    return g.door_location_ids_;
  }
  static void set_spacing(LayeredSceneGraph& g, double s) { g.spacing_m = s; }
};

void save_graph_file(const LayeredSceneGraph& graph, const std::string& path) {
  json doc = floor_plan_to_json(graph.plan);
  doc["schema"] = "seek-dsg/1";

  json locations;
  locations["spacing_m"] = graph.spacing_m;
  locations["nodes"] = json::array();
  std::vector<const GraphNode*> locs, objects;
  for (const GraphNode& n : graph.nodes) {
    if (n.layer != LayeredSceneGraph::kLayerLocation) continue;
    (n.label == "location" ? locs : objects).push_back(&n);
  }
  std::sort(locs.begin(), locs.end(), [](auto* a, auto* b) { return a->id < b->id; });
  std::sort(objects.begin(), objects.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (const GraphNode* n : locs) {
    json jn{{"id", n->id},
            {"position", {n->position.x, n->position.y}},
            {"room", graph.parent_of(n->id)}};
    if (graph.is_door_node(n->id)) jn["door"] = true;
    locations["nodes"].push_back(std::move(jn));
  }
  locations["edges"] = json::array();
  std::vector<std::pair<int, int>> edges;
  for (const IntraEdge& e : graph.intra_edges) {
    const bool a_loc = graph.node(e.a).label == "location";
    const bool b_loc = graph.node(e.b).label == "location";
    if (a_loc && b_loc) edges.push_back({std::min(e.a, e.b), std::max(e.a, e.b)});
  }
  std::sort(edges.begin(), edges.end());
  for (const auto& [a, b] : edges) locations["edges"].push_back({a, b});
  doc["locations"] = std::move(locations);

  doc["objects"] = json::array();
  for (const GraphNode* n : objects) {
    int loc = -1;  // the location node the object hangs off
    for (const IntraEdge& e : graph.intra_edges) {
      if (e.a == n->id && graph.node(e.b).label == "location") loc = e.b;
      if (e.b == n->id && graph.node(e.a).label == "location") loc = e.a;
    }
    doc["objects"].push_back({{"id", n->id},
                              {"class", n->label},
                              {"position", {n->position.x, n->position.y}},
                              {"location", loc}});
  }
  write_json(doc, path);
}

LayeredSceneGraph load_graph_file(const std::string& path) {
  const json doc = read_json(path);
  check_schema(doc, "seek-dsg/1", path);
  LayeredSceneGraph graph = load_floor_plan(parse_floor_plan(doc, path));

  if (doc.contains("locations") && !doc["locations"].is_null()) {
    const json& locations = doc["locations"];
    const std::string lctx = path + ".locations";
    GraphIo::set_spacing(graph, require_number(locations, "spacing_m", lctx));
    const json& nodes = require(locations, "nodes", lctx);
    if (!nodes.is_array()) throw InputError(lctx + ".nodes: expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::string nctx = lctx + ".nodes[" + std::to_string(i) + "]";
      const json& n = nodes[i];
      const int id = static_cast<int>(require_number(n, "id", nctx));
      const Vec2 pos = parse_point(require(n, "position", nctx), nctx + ".position");
      const int room = static_cast<int>(require_number(n, "room", nctx));
      graph.add_node({id, LayeredSceneGraph::kLayerLocation, pos, 0.0, "location"});
      graph.add_parent_edge(id, room);
      if (n.contains("door") && n["door"].is_boolean() && n["door"].get<bool>()) {
        GraphIo::mark_door(graph, id);
      }
    }
    const json& edges = require(locations, "edges", lctx);
    if (!edges.is_array()) throw InputError(lctx + ".edges: expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const json& e = edges[i];
      if (!e.is_array() || e.size() != 2) {
        throw InputError(lctx + ".edges[" + std::to_string(i) + "]: expected [a, b]");
      }
      graph.add_intra_edge(e[0].get<int>(), e[1].get<int>());
    }
  }
  if (doc.contains("objects") && !doc["objects"].is_null()) {
    const json& objects = doc["objects"];
    if (!objects.is_array()) throw InputError(path + ".objects: expected an array");
    for (std::size_t i = 0; i < objects.size(); ++i) {
      const std::string octx = path + ".objects[" + std::to_string(i) + "]";
      const json& o = objects[i];
      const int id = static_cast<int>(require_number(o, "id", octx));
      const json& cls = require(o, "class", octx);
      if (!cls.is_string()) throw InputError(octx + ".class: expected a string");
      const Vec2 pos = parse_point(require(o, "position", octx), octx + ".position");
      const int loc = static_cast<int>(require_number(o, "location", octx));
      graph.add_node({id, LayeredSceneGraph::kLayerLocation, pos, 0.0,
                      cls.get<std::string>()});
      graph.add_intra_edge(id, loc);
      graph.add_parent_edge(id, graph.parent_of(loc));
    }
  }
  return graph;
}

PriorTable load_prior_table(const std::string& path) {
  const json doc = read_json(path);
  check_schema(doc, "seek-rsn/1", path);
  PriorTable table;
  const json& types = require(doc, "room_types", path);
  if (!types.is_array() || types.empty()) {
    throw InputError(path + ".room_types: expected a nonempty array");
  }
  for (const json& t : types) {
    if (!t.is_string()) throw InputError(path + ".room_types: entries must be strings");
    table.room_types.push_back(t.get<std::string>());
  }
  if (std::find(table.room_types.begin(), table.room_types.end(), "unknown") ==
      table.room_types.end()) {
    throw InputError(path + ".room_types: must include \"unknown\"");
  }
  const json& objects = require(doc, "objects", path);
  if (!objects.is_object()) throw InputError(path + ".objects: expected an object");
  for (const auto& [cls, spec] : objects.items()) {
    const std::string octx = path + ".objects[\"" + cls + "\"]";
    PriorTable::ObjectPrior prior;
    const json& probs = require(spec, "room_probs", octx);
    if (!probs.is_object()) throw InputError(octx + ".room_probs: expected an object");
    for (const auto& [type, p] : probs.items()) {
      prior.room_probs[type] = require_prob(p, octx + ".room_probs[\"" + type + "\"]");
    }
    prior.p_easy = require_prob(require(spec, "p_easy", octx), octx + ".p_easy");
    table.objects[cls] = std::move(prior);
  }
  return table;
}

SemanticDistance load_semdist_file(const std::string& path) {
  const json doc = read_json(path);
  check_schema(doc, "seek-semdist/1", path);
  SemanticDistance sd;
  const json& obj = require(doc, "object", path);
  if (!obj.is_string()) throw InputError(path + ".object: expected a string");
  sd.object = obj.get<std::string>();
  const json& types = require(doc, "room_types", path);
  if (!types.is_object()) throw InputError(path + ".room_types: expected an object");
  for (const auto& [type, d] : types.items()) {
    if (!d.is_number() || d.get<double>() < 0.0) {
      throw InputError(path + ".room_types[\"" + type + "\"]: expected a nonnegative number");
    }
    sd.room_types[type] = d.get<double>();
  }
  return sd;
}

WorldModel load_world_file(const std::string& path) {
  const json doc = read_json(path);
  check_schema(doc, "seek-world/1", path);
  const json& fp = require(doc, "floor_plan", path);
  if (!fp.is_string()) throw InputError(path + ".floor_plan: expected a path string");
  std::filesystem::path plan_path(fp.get<std::string>());
  if (plan_path.is_relative()) {
    plan_path = std::filesystem::path(path).parent_path() / plan_path;
  }
  const FloorPlan plan = load_floor_plan_file(plan_path.string());

  double cell_m = defaults::kCellM;
  if (doc.contains("cell_m")) cell_m = require_number(doc, "cell_m", path);

  SensorParams sensor;
  if (doc.contains("sensor")) {
    const json& s = doc["sensor"];
    const std::string sctx = path + ".sensor";
    if (s.contains("r_max")) sensor.r_max = require_number(s, "r_max", sctx);
    if (s.contains("p0")) sensor.p0 = require_prob(s["p0"], sctx + ".p0");
    if (s.contains("sigma_pos")) sensor.sigma_pos = require_number(s, "sigma_pos", sctx);
    if (s.contains("p_fp")) sensor.p_fp = require_prob(s["p_fp"], sctx + ".p_fp");
    if (s.contains("sigma_conf")) sensor.sigma_conf = require_number(s, "sigma_conf", sctx);
    if (sensor.r_max <= 0.0) throw InputError(sctx + ".r_max: must be positive");
    if (sensor.sigma_pos < 0.0 || sensor.sigma_conf < 0.0) {
      throw InputError(sctx + ": noise std must be nonnegative");
    }
  }

  std::vector<ObjectInstance> objects;
  if (doc.contains("objects")) {
    const json& objs = doc["objects"];
    if (!objs.is_array()) throw InputError(path + ".objects: expected an array");
    for (std::size_t i = 0; i < objs.size(); ++i) {
      const std::string octx = path + ".objects[" + std::to_string(i) + "]";
      const json& o = objs[i];
      const json& cls = require(o, "class", octx);
      if (!cls.is_string()) throw InputError(octx + ".class: expected a string");
      objects.push_back(
          {cls.get<std::string>(), parse_point(require(o, "position", octx), octx + ".position")});
    }
  }
  return build_world(plan, std::move(objects), sensor, cell_m);
}

}  // namespace seek
