#ifndef SEEK_EVAL_HARNESS_HPP
#define SEEK_EVAL_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "seek/baselines.hpp"
#include "seek/defaults.hpp"
#include "seek/global_planner.hpp"
#include "seek/local_controller.hpp"
#include "seek/scene_graph.hpp"
#include "seek/semantic_belief.hpp"
#include "seek/world_sim.hpp"

namespace seek {

struct ScenarioConfig {
  std::string world_path;
  std::string object_class;
  std::string prior_path;
  std::string semdist_path;  // optional; derived from the prior table when empty
  std::string store_path;    // optional initial store
  std::vector<Vec2> starts;
  std::string planner = "seek";  // seek | semantic_utility | coverage | random
  int episodes_per_start = 1;
  std::uint64_t suite_seed = 0;
  long t_max = defaults::kTMaxTicks;
  double epsilon_m = defaults::kEpsilonM;
  bool carry_over = false;
  double spacing_m = defaults::kSpacingM;
  std::string output_dir;  // optional; suite writes results.csv / report.json here
};

// Scenario document, schema "seek-scenario/1"; relative paths resolve
// against the scenario file's directory.
ScenarioConfig load_scenario(const std::string& path);

// Everything immutable that episodes share.
struct SuiteAssets {
  WorldModel world;
  LayeredSceneGraph graph;
  CostMatrix costs;
  PriorTable table;
  SemanticDistance semdist;
  std::set<int> truth_rooms;  // rooms containing target instances
};

SuiteAssets load_assets(const ScenarioConfig& config);

struct EpisodeResult {
  int episode = 0;
  std::uint64_t seed = 0;
  int start_index = 0;
  bool success = false;
  double path_len_m = 0.0;      // p_i
  double shortest_len_m = 0.0;  // l_i
  double spl = 0.0;             // S_i * l_i / max(p_i, l_i)
  long ticks = 0;
  std::vector<GlobalAction> actions;
  std::vector<double> brier;  // after init and after every global step
  std::string trace_path;
  std::string fail_reason;
};

// One seeded episode: receding-horizon planning, local execution, belief
// updates on completed actions; commits to the store iff carry_over.
EpisodeResult run_episode(const ScenarioConfig& config, const SuiteAssets& assets,
                          PriorStore& store, std::uint64_t seed, int start_index,
                          const std::string& trace_path = "");

struct SuiteReport {
  ScenarioConfig config;
  std::vector<EpisodeResult> episodes;
  double spl_mean = 0.0;
  double spl_std = 0.0;
};

// Episodes over starts x repeats with derived seeds. Writes results.csv and
// report.json when config.output_dir is set. Episodes run sequentially in
// declared order; with carry_over the store is threaded through them, so
// order is part of the contract.
SuiteReport run_suite(const ScenarioConfig& config);

// Mean SPL contribution; errors on an empty list.
double spl(const std::vector<EpisodeResult>& results);

std::string results_csv(const SuiteReport& report);
void write_suite_outputs(const SuiteReport& report, const std::string& dir);

}  // namespace seek

#endif  // SEEK_EVAL_HARNESS_HPP
