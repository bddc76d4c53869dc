#ifndef SEEK_SEMANTIC_BELIEF_HPP
#define SEEK_SEMANTIC_BELIEF_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "seek/defaults.hpp"
#include "seek/geometry.hpp"
#include "seek/scene_graph.hpp"

namespace seek {

// Relational semantic knowledge: per-object probabilities of finding the
// object in each room type, plus how likely it is to be spotted just by
// entering a room (without a careful search).
struct PriorTable {
  struct ObjectPrior {
    std::map<std::string, double> room_probs;
    double p_easy = 0.5;
  };
  std::vector<std::string> room_types;  // canonical types plus "unknown"
  std::map<std::string, ObjectPrior> objects;

  bool has_object(const std::string& object_class) const {
    return objects.count(object_class) > 0;
  }
  // Probability for (object, room type); missing types fall back to the
  // object's "unknown" entry, unknown objects to the uniform 0.5 row.
  double room_prob(const std::string& object_class, const std::string& room_type) const;
  double p_easy(const std::string& object_class) const;
};

// Per-room probability of finding the target object. Entries are
// independent Bernoulli probabilities; they do not sum to one.
struct RoomBelief {
  std::string object_class;
  std::map<int, double> probs;  // room id -> probability
  bool low_confidence = false;  // set when the object class was not in the table

  double at(int room_id) const { return probs.at(room_id); }
};

// Cross-episode observation counts per (object class, room).
struct PriorStore {
  struct Counts {
    int found = 0;
    int searched = 0;
    bool operator==(const Counts& o) const = default;
  };
  std::map<std::pair<std::string, int>, Counts> counts;

  Counts get(const std::string& object_class, int room_id) const;
};

enum class ObsMode { kEntry, kSearch };

struct ObservationEvent {
  int room_id = -1;
  ObsMode mode = ObsMode::kEntry;
  bool detected = false;
  Vec2 position{};          // valid iff detected
  double confidence = 0.0;  // valid iff detected
};

// Count-blended belief initialization: for a room of type t,
//   p = (found + kappa * table[object][t]) / (searched + kappa).
RoomBelief init_belief(const PriorTable& table, const LayeredSceneGraph& graph,
                       const PriorStore& store, const std::string& object_class);

// Bayes update of the event's room. Negative observations shrink the entry
// with detection likelihood d (0.95 for search, p_easy for entry); positive
// (controller-confirmed) observations pin it to 1.
RoomBelief update(RoomBelief belief, const ObservationEvent& event, const PriorTable& table);

// Fold one finished episode into the store: every searched room gains a
// searched count, and a found count if the object turned up there.
void episode_commit(PriorStore& store, const std::vector<ObservationEvent>& events,
                    const std::string& object_class);

// Mean squared error of the belief against the indicator of true
// object-containing rooms; in [0, 1], lower is better.
double brier_score(const RoomBelief& belief, const std::set<int>& truth_rooms);

void save_store(const PriorStore& store, const std::string& path);
PriorStore load_store(const std::string& path);

}  // namespace seek

#endif  // SEEK_SEMANTIC_BELIEF_HPP
