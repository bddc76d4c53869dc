#ifndef SEEK_JSON_IO_HPP
#define SEEK_JSON_IO_HPP

#include <string>

#include "seek/baselines.hpp"
#include "seek/scene_graph.hpp"
#include "seek/semantic_belief.hpp"
#include "seek/world_sim.hpp"

namespace seek {

// Floor-plan document (units meters):
//   { "name": str, "rooms": [{"id", "label", "polygon": [[x,y],...]}],
//     "doors": [{"rooms": [a,b], "position": [x,y], "width_m": f}] }
FloorPlan load_floor_plan_file(const std::string& path);

// Sampled scene graph, schema "seek-dsg/1": the floor-plan container plus
// "locations" and "objects" sections.
LayeredSceneGraph load_graph_file(const std::string& path);
void save_graph_file(const LayeredSceneGraph& graph, const std::string& path);

// Prior table, schema "seek-rsn/1".
PriorTable load_prior_table(const std::string& path);

// Semantic distances, schema "seek-semdist/1".
SemanticDistance load_semdist_file(const std::string& path);

// World document, schema "seek-world/1"; the floor_plan path is resolved
// relative to the world file's directory.
WorldModel load_world_file(const std::string& path);

}  // namespace seek

#endif  // SEEK_JSON_IO_HPP
