#include "seek/semantic_belief.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "seek/errors.hpp"
#include "seek/logging.hpp"

namespace seek {

double PriorTable::room_prob(const std::string& object_class, const std::string& room_type) const {
  const auto obj = objects.find(object_class);
  if (obj == objects.end()) return 0.5;  // uniform fallback row
  const auto& probs = obj->second.room_probs;
  const auto it = probs.find(room_type);
  if (it != probs.end()) return it->second;
  const auto unk = probs.find("unknown");
  if (unk != probs.end()) return unk->second;
  return 0.5;
}

double PriorTable::p_easy(const std::string& object_class) const {
  const auto obj = objects.find(object_class);
  return obj == objects.end() ? 0.5 : obj->second.p_easy;
}

PriorStore::Counts PriorStore::get(const std::string& object_class, int room_id) const {
  const auto it = counts.find({object_class, room_id});
  return it == counts.end() ? Counts{} : it->second;
}

RoomBelief init_belief(const PriorTable& table, const LayeredSceneGraph& graph,
                       const PriorStore& store, const std::string& object_class) {
  RoomBelief belief;
  belief.object_class = object_class;
  if (!table.has_object(object_class)) {
    belief.low_confidence = true;
    log::info("object class \"" + object_class + "\" not in prior table; using uniform row");
  }
  for (int room_id : graph.room_ids()) {
    const std::string& type = graph.node(room_id).label;
    const double prior = table.room_prob(object_class, type);
    const PriorStore::Counts c = store.get(object_class, room_id);
    belief.probs[room_id] =
        (c.found + defaults::kKappa * prior) / (c.searched + defaults::kKappa);
  }
  return belief;
}

RoomBelief update(RoomBelief belief, const ObservationEvent& event, const PriorTable& table) {
  const auto it = belief.probs.find(event.room_id);
  if (it == belief.probs.end()) {
    throw InputError("observation event for unknown room " + std::to_string(event.room_id));
  }
  if (event.detected) {
    // Confirmed by the local controller; false positives are filtered
    // upstream, so the posterior is 1.
    it->second = 1.0;
    return belief;
  }
  const double d =
      event.mode == ObsMode::kSearch ? defaults::kDSearch : table.p_easy(belief.object_class);
  const double p = it->second;
  const double denom = p * (1.0 - d) + (1.0 - p);
  it->second = denom <= 0.0 ? 0.0 : p * (1.0 - d) / denom;
  return belief;
}

void episode_commit(PriorStore& store, const std::vector<ObservationEvent>& events,
                    const std::string& object_class) {
  std::set<int> searched_rooms;
  std::set<int> detected_rooms;
  for (const ObservationEvent& e : events) {
    if (e.mode == ObsMode::kSearch) searched_rooms.insert(e.room_id);
    if (e.detected) detected_rooms.insert(e.room_id);
  }
  for (int room : searched_rooms) {
    PriorStore::Counts& c = store.counts[{object_class, room}];
    c.searched += 1;
    if (detected_rooms.count(room) > 0) c.found += 1;
  }
}

double brier_score(const RoomBelief& belief, const std::set<int>& truth_rooms) {
  for (int r : truth_rooms) {
    if (belief.probs.count(r) == 0) {
      throw InputError("brier_score: truth room " + std::to_string(r) + " not in belief");
    }
  }
  if (belief.probs.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& [room, p] : belief.probs) {
    const double y = truth_rooms.count(room) > 0 ? 1.0 : 0.0;
    acc += (p - y) * (p - y);
  }
  return acc / static_cast<double>(belief.probs.size());
}

void save_store(const PriorStore& store, const std::string& path) {
  nlohmann::json doc;
  doc["schema"] = "seek-store/1";
  doc["counts"] = nlohmann::json::array();
  for (const auto& [key, c] : store.counts) {
    doc["counts"].push_back({{"object", key.first},
                             {"room", key.second},
                             {"found", c.found},
                             {"searched", c.searched}});
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot open store file for writing: " + path);
  out << doc.dump(2) << "\n";
}

PriorStore load_store(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open store file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("store file " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.contains("schema") || doc["schema"] != "seek-store/1") {
    throw InputError("store file " + path + ": schema: expected \"seek-store/1\"");
  }
  if (!doc.contains("counts") || !doc["counts"].is_array()) {
    throw InputError("store file " + path + ": counts: missing or not an array");
  }
  PriorStore store;
  std::size_t i = 0;
  for (const auto& row : doc["counts"]) {
    const std::string ctx = "store file " + path + ": counts[" + std::to_string(i++) + "]";
    for (const char* field : {"object", "room", "found", "searched"}) {
      if (!row.contains(field)) throw InputError(ctx + "." + field + ": missing");
    }
    if (!row["object"].is_string() || !row["room"].is_number_integer()) {
      throw InputError(ctx + ": object must be a string and room an integer");
    }
    PriorStore::Counts c{row["found"].get<int>(), row["searched"].get<int>()};
    if (c.found < 0 || c.searched < c.found) {
      throw InputError(ctx + ": counts must satisfy 0 <= found <= searched");
    }
    store.counts[{row["object"].get<std::string>(), row["room"].get<int>()}] = c;
  }
  return store;
}

}  // namespace seek
