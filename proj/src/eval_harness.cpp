#include "seek/eval_harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "json.hpp"
#include "seek/errors.hpp"
#include "seek/json_io.hpp"
#include "seek/logging.hpp"
#include "seek/rng.hpp"

namespace seek {

using nlohmann::json;

namespace {

std::string resolve(const std::string& base_file, const std::string& p) {
  if (p.empty()) return p;
  std::filesystem::path fp(p);
  if (fp.is_absolute()) return p;
  return (std::filesystem::path(base_file).parent_path() / fp).string();
}

bool planner_known(const std::string& id) {
  return id == "seek" || id == "semantic_utility" || id == "coverage" || id == "random";
}

}  // namespace

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError(path + ": invalid JSON: " + e.what());
  }
  if (!doc.contains("schema") || doc["schema"] != "seek-scenario/1") {
    throw InputError(path + ".schema: expected \"seek-scenario/1\"");
  }
  ScenarioConfig cfg;
  const auto str = [&](const char* f, bool required) -> std::string {
    if (!doc.contains(f)) {
      if (required) throw InputError(path + "." + f + ": missing field");
      return "";
    }
    if (!doc[f].is_string()) throw InputError(path + "." + f + ": expected a string");
    return doc[f].get<std::string>();
  };
  cfg.world_path = resolve(path, str("world", true));
  cfg.object_class = str("object", true);
  cfg.prior_path = resolve(path, str("prior_table", true));
  cfg.semdist_path = resolve(path, str("semdist", false));
  cfg.store_path = resolve(path, str("store", false));
  cfg.output_dir = str("output", false);
  cfg.planner = doc.contains("planner") ? str("planner", true) : "seek";
  if (!planner_known(cfg.planner)) {
    throw InputError(path + ".planner: unknown planner \"" + cfg.planner + "\"");
  }
  if (!doc.contains("starts") || !doc["starts"].is_array() || doc["starts"].empty()) {
    throw InputError(path + ".starts: expected a nonempty array of [x, y]");
  }
  for (const json& s : doc["starts"]) {
    if (!s.is_array() || s.size() != 2) throw InputError(path + ".starts: expected [x, y] pairs");
    cfg.starts.push_back({s[0].get<double>(), s[1].get<double>()});
  }
  if (doc.contains("episodes_per_start")) cfg.episodes_per_start = doc["episodes_per_start"].get<int>();
  if (doc.contains("suite_seed")) cfg.suite_seed = doc["suite_seed"].get<std::uint64_t>();
  if (doc.contains("t_max")) cfg.t_max = doc["t_max"].get<long>();
  if (doc.contains("epsilon_m")) cfg.epsilon_m = doc["epsilon_m"].get<double>();
  if (doc.contains("carry_over")) cfg.carry_over = doc["carry_over"].get<bool>();
  if (doc.contains("spacing_m")) cfg.spacing_m = doc["spacing_m"].get<double>();
  if (cfg.t_max <= 0) throw InputError(path + ".t_max: must be positive");
  if (cfg.episodes_per_start <= 0) throw InputError(path + ".episodes_per_start: must be positive");
  if (cfg.epsilon_m <= 0.0) throw InputError(path + ".epsilon_m: must be positive");
  return cfg;
}

SuiteAssets load_assets(const ScenarioConfig& config) {
  SuiteAssets assets;
  assets.world = load_world_file(config.world_path);
  assets.graph = load_floor_plan(assets.world.plan);
  sample_locations(assets.graph, config.spacing_m);
  assets.costs = room_cost_matrix(assets.graph);
  assets.table = load_prior_table(config.prior_path);
  assets.semdist = config.semdist_path.empty()
                       ? SemanticDistance::from_prior(assets.table, config.object_class)
                       : load_semdist_file(config.semdist_path);
  for (const ObjectInstance& obj : assets.world.objects) {
    if (obj.cls == config.object_class) {
      assets.truth_rooms.insert(nearest_room(assets.graph, obj.position));
    }
  }
  return assets;
}

namespace {

// Global planner front-end shared by the harness loop.
class PlannerDriver {
public:
  PlannerDriver(const ScenarioConfig& cfg, const SuiteAssets& assets, std::uint64_t seed)
      : cfg_(cfg), assets_(assets), baseline_rng_(splitmix64(seed ^ 0x5EEDB45EULL)) {
    if (cfg.planner == "random") {
      state_.order = assets.costs.room_ids;
      baseline_rng_.shuffle(state_.order);
    } else if (cfg.planner == "semantic_utility") {
      state_.semdist = assets.semdist;
    }
  }

  GlobalAction next(const RobotState& robot, const RoomBelief& belief) {
    if (cfg_.planner == "seek") {
      const MdpModel model =
          build_mdp(assets_.costs, belief, assets_.table.p_easy(cfg_.object_class));
      auto [vf, policy] = value_iteration(model);
      return next_action(policy, assets_.graph, robot.position);
    }
    if (cfg_.planner == "semantic_utility") {
      return semantic_utility_next(state_, assets_.graph, assets_.costs, robot.position,
                                   cfg_.object_class);
    }
    if (cfg_.planner == "coverage") {
      return coverage_next(state_, assets_.costs, robot.position, assets_.graph);
    }
    return random_next(state_, baseline_rng_);
  }

private:
  const ScenarioConfig& cfg_;
  const SuiteAssets& assets_;
  BaselineState state_;
  Rng baseline_rng_;
};

double spl_contribution(bool success, double p, double l) {
  if (!success) return 0.0;
  const double denom = std::max(p, l);
  if (denom <= 0.0) return 1.0;  // degenerate start on top of the target
  return l / denom;
}

}  // namespace

EpisodeResult run_episode(const ScenarioConfig& config, const SuiteAssets& assets,
                          PriorStore& store, std::uint64_t seed, int start_index,
                          const std::string& trace_path) {
  if (start_index < 0 || start_index >= static_cast<int>(config.starts.size())) {
    throw InputError("start_index out of range");
  }
  EpisodeResult result;
  result.seed = seed;
  result.start_index = start_index;

  WorldModel world = assets.world;  // per-episode copy carries the target class
  world.target_class = config.object_class;
  Rng rng(seed);
  RobotState robot = make_robot(world, config.starts[start_index]);

  try {
    result.shortest_len_m =
        oracle_shortest_length(world, config.starts[start_index], config.object_class,
                               config.epsilon_m);
  } catch (const InputError&) {
    result.fail_reason = "no_instance";  // S = 0 semantics, episode still runs
  } catch (const NoPathError& e) {
    result.fail_reason = e.what();
  }

  RoomBelief belief = init_belief(assets.table, assets.graph, store, config.object_class);
  result.brier.push_back(brier_score(belief, assets.truth_rooms));

  ControllerConfig ctrl_cfg;
  ctrl_cfg.inspect_eps = config.epsilon_m;
  // Confirmation views must happen inside the sensor's range.
  ctrl_cfg.r_view = std::min(ctrl_cfg.r_view, 0.6 * world.sensor.r_max);
  LocalController controller(assets.graph, world.grid, config.object_class, ctrl_cfg);

  std::ofstream trace_out;
  if (!trace_path.empty()) {
    trace_out.open(trace_path);
    if (!trace_out) throw InputError("cannot open trace file: " + trace_path);
    result.trace_path = trace_path;
    controller.set_trace_sink([&trace_out](const TickRecord& rec) {
      json dets = json::array();
      for (const Detection& d : rec.detections) {
        dets.push_back({{"position", {d.position.x, d.position.y}},
                        {"class", d.cls},
                        {"confidence", d.confidence}});
      }
      const json line{{"tick", rec.tick},
                      {"mode", mode_name(rec.mode)},
                      {"pose", {rec.pose.x, rec.pose.y}},
                      {"command", rec.command},
                      {"detections", std::move(dets)}};
      trace_out << line.dump() << "\n";
    });
  }

  PlannerDriver driver(config, assets, seed);
  std::vector<ObservationEvent> events;
  GlobalAction action = driver.next(robot, belief);
  result.actions.push_back(action);
  std::vector<Detection> obs = sense(world, robot, rng);

  int instant_completions = 0;
  try {
    while (robot.tick < config.t_max) {
      const LocalController::StepResult res = controller.step(action, obs, robot);
      if (res.command && res.command->kind == ControlCommand::Kind::kFinish) {
        const Vec2 finish_pos = res.command->finish_position;
        for (const ObjectInstance* obj : world.instances_of(config.object_class)) {
          if (distance(obj->position, finish_pos) < config.epsilon_m) {
            result.success = true;
            break;
          }
        }
        const CandidateBelief& cand = *controller.candidate();
        ObservationEvent ev;
        ev.room_id = nearest_room(assets.graph, cand.estimate);
        ev.mode = (action.kind == GlobalAction::Kind::kSearch && ev.room_id == action.room_id)
                      ? ObsMode::kSearch
                      : ObsMode::kEntry;
        ev.detected = true;
        ev.position = cand.estimate;
        ev.confidence = cand.existence;
        events.push_back(ev);
        belief = update(std::move(belief), ev, assets.table);
        result.brier.push_back(brier_score(belief, assets.truth_rooms));
        if (!result.success && result.fail_reason.empty()) result.fail_reason = "wrong_object";
        break;
      }
      if (res.action_complete) {
        ObservationEvent ev;
        ev.room_id = action.room_id;
        ev.mode = action.kind == GlobalAction::Kind::kSearch ? ObsMode::kSearch : ObsMode::kEntry;
        ev.detected = false;
        events.push_back(ev);
        belief = update(std::move(belief), ev, assets.table);
        result.brier.push_back(brier_score(belief, assets.truth_rooms));
        action = driver.next(robot, belief);
        result.actions.push_back(action);
        if (++instant_completions > 8) {
          throw StateError("planner made no progress over 8 instant action completions");
        }
        continue;
      }
      instant_completions = 0;
      obs = step(world, robot, *res.command, rng);
    }
  } catch (const InspectUnreachableError& e) {
    result.fail_reason = e.what();
  } catch (const NoPathError& e) {
    result.fail_reason = e.what();
  }
  if (!result.success && result.fail_reason.empty()) result.fail_reason = "timeout";

  result.path_len_m = robot.traveled_m;
  result.ticks = robot.tick;
  result.spl = spl_contribution(result.success, result.path_len_m, result.shortest_len_m);
  if (config.carry_over) episode_commit(store, events, config.object_class);
  return result;
}

double spl(const std::vector<EpisodeResult>& results) {
  if (results.empty()) throw InputError("spl of an empty result list");
  double acc = 0.0;
  for (const EpisodeResult& r : results) acc += r.spl;
  return acc / static_cast<double>(results.size());
}

SuiteReport run_suite(const ScenarioConfig& config) {
  if (!planner_known(config.planner)) {
    throw InputError("unknown planner \"" + config.planner + "\"");
  }
  SuiteReport report;
  report.config = config;
  const SuiteAssets assets = load_assets(config);
  PriorStore store;
  if (!config.store_path.empty()) store = load_store(config.store_path);

  const int n = static_cast<int>(config.starts.size()) * config.episodes_per_start;
  for (int e = 0; e < n; ++e) {
    const int start_index = e % static_cast<int>(config.starts.size());
    const std::uint64_t seed = derive_seed(config.suite_seed, static_cast<std::uint64_t>(e));
    EpisodeResult r = run_episode(config, assets, store, seed, start_index);
    r.episode = e;
    log::info("episode " + std::to_string(e) + " planner=" + config.planner +
              " S=" + std::to_string(r.success ? 1 : 0) + " spl=" + std::to_string(r.spl));
    report.episodes.push_back(std::move(r));
  }

  double mean = 0.0;
  for (const EpisodeResult& r : report.episodes) mean += r.spl;
  mean /= static_cast<double>(report.episodes.size());
  double var = 0.0;
  for (const EpisodeResult& r : report.episodes) var += (r.spl - mean) * (r.spl - mean);
  report.spl_mean = mean;
  report.spl_std =
      report.episodes.size() > 1 ? std::sqrt(var / (report.episodes.size() - 1.0)) : 0.0;

  if (!config.output_dir.empty()) {
    write_suite_outputs(report, config.output_dir);
    if (config.carry_over) {
      save_store(store, (std::filesystem::path(config.output_dir) / "store.json").string());
    }
  }
  return report;
}

std::string results_csv(const SuiteReport& report) {
  std::string out =
      "episode,seed,start_index,planner,success,path_len_m,shortest_len_m,spl,ticks,"
      "brier_first,brier_last\n";
  char buf[256];
  for (const EpisodeResult& r : report.episodes) {
    std::snprintf(buf, sizeof(buf), "%d,%llu,%d,%s,%d,%.6f,%.6f,%.6f,%ld,%.6f,%.6f\n",
                  r.episode, static_cast<unsigned long long>(r.seed), r.start_index,
                  report.config.planner.c_str(), r.success ? 1 : 0, r.path_len_m,
                  r.shortest_len_m, r.spl, r.ticks, r.brier.empty() ? 0.0 : r.brier.front(),
                  r.brier.empty() ? 0.0 : r.brier.back());
    out += buf;
  }
  return out;
}

void write_suite_outputs(const SuiteReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(std::filesystem::path(dir) / "results.csv");
    if (!csv) throw InputError("cannot write results.csv under " + dir);
    csv << results_csv(report);
  }
  json doc;
  doc["schema"] = "seek-report/1";
  doc["config"] = {{"world", report.config.world_path},
                   {"object", report.config.object_class},
                   {"planner", report.config.planner},
                   {"episodes", report.episodes.size()},
                   {"suite_seed", report.config.suite_seed},
                   {"t_max", report.config.t_max},
                   {"epsilon_m", report.config.epsilon_m},
                   {"carry_over", report.config.carry_over}};
  doc["spl"] = {{report.config.planner, {{"mean", report.spl_mean}, {"std", report.spl_std}}}};
  doc["episodes"] = json::array();
  for (const EpisodeResult& r : report.episodes) {
    json actions = json::array();
    for (const GlobalAction& a : r.actions) actions.push_back(a.to_string());
    doc["episodes"].push_back({{"episode", r.episode},
                               {"seed", r.seed},
                               {"start_index", r.start_index},
                               {"success", r.success},
                               {"path_len_m", r.path_len_m},
                               {"shortest_len_m", r.shortest_len_m},
                               {"spl", r.spl},
                               {"ticks", r.ticks},
                               {"actions", std::move(actions)},
                               {"brier", r.brier},
                               {"fail_reason", r.fail_reason}});
  }
  std::ofstream rep(std::filesystem::path(dir) / "report.json");
  if (!rep) throw InputError("cannot write report.json under " + dir);
  rep << doc.dump(2) << "\n";
}

}  // namespace seek
