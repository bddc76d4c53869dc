// seek: build scene graphs from floor plans, inspect beliefs, solve global
// search policies, and run simulated object-goal navigation episodes.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "seek/defaults.hpp"
#include "seek/errors.hpp"
#include "seek/eval_harness.hpp"
#include "seek/json_io.hpp"
#include "seek/logging.hpp"

namespace {

using nlohmann::json;

int cmd_graph_build(const std::string& plan_path, double spacing, const std::string& out) {
  seek::LayeredSceneGraph graph = seek::load_floor_plan(seek::load_floor_plan_file(plan_path));
  seek::sample_locations(graph, spacing);
  seek::save_graph_file(graph, out);
  std::printf("graph: %zu rooms, %zu location nodes, %zu edges -> %s\n",
              graph.room_ids().size(), graph.location_ids().size(), graph.intra_edges.size(),
              out.c_str());
  return 0;
}

int cmd_plan(const std::string& dsg_path, const std::string& prior_path,
             const std::string& object, const std::string& store_path,
             const std::string& out) {
  const seek::LayeredSceneGraph graph = seek::load_graph_file(dsg_path);
  const seek::PriorTable table = seek::load_prior_table(prior_path);
  seek::PriorStore store;
  if (!store_path.empty()) store = seek::load_store(store_path);
  const seek::RoomBelief belief = seek::init_belief(table, graph, store, object);
  const seek::CostMatrix costs = seek::room_cost_matrix(graph);
  const seek::MdpModel model = seek::build_mdp(costs, belief, table.p_easy(object));
  const auto [vf, policy] = seek::value_iteration(model);

  json doc;
  doc["schema"] = "seek-policy/1";
  doc["object"] = object;
  doc["iterations"] = policy.iterations;
  doc["residual"] = policy.residual;
  json rooms;
  for (std::size_t i = 0; i < policy.room_ids.size(); ++i) {
    const int room = policy.room_ids[i];
    const seek::GlobalAction& a = policy.actions[i];
    rooms[std::to_string(room)] = {
        {"label", graph.node(room).label},
        {"cost_to_go_m", vf.cost_to_go[i]},
        {"action", a.kind == seek::GlobalAction::Kind::kSearch ? "search" : "move"},
        {"target", a.room_id},
        {"belief", belief.at(room)}};
  }
  doc["rooms"] = std::move(rooms);
  std::ofstream f(out);
  if (!f) throw seek::InputError("cannot open output file: " + out);
  f << doc.dump(2) << "\n";
  std::printf("policy for \"%s\": %zu rooms, %d iterations -> %s\n", object.c_str(),
              policy.room_ids.size(), policy.iterations, out.c_str());
  return 0;
}

int cmd_belief_show(const std::string& prior_path, const std::string& dsg_path,
                    const std::string& object, const std::string& store_path) {
  const seek::LayeredSceneGraph graph = seek::load_graph_file(dsg_path);
  const seek::PriorTable table = seek::load_prior_table(prior_path);
  seek::PriorStore store;
  if (!store_path.empty()) store = seek::load_store(store_path);
  const seek::RoomBelief belief = seek::init_belief(table, graph, store, object);
  std::printf("belief for \"%s\"%s\n", object.c_str(),
              belief.low_confidence ? " (low confidence: class not in table)" : "");
  std::printf("%6s  %-18s %s\n", "room", "label", "p");
  for (const auto& [room, p] : belief.probs) {
    std::printf("%6d  %-18s %.4f\n", room, graph.node(room).label.c_str(), p);
  }
  return 0;
}

int cmd_simulate(const std::string& scenario_path, long seed_override, bool has_seed,
                 const std::string& trace_path) {
  seek::ScenarioConfig cfg = seek::load_scenario(scenario_path);
  const seek::SuiteAssets assets = seek::load_assets(cfg);
  seek::PriorStore store;
  if (!cfg.store_path.empty()) store = seek::load_store(cfg.store_path);
  const std::uint64_t seed = has_seed ? static_cast<std::uint64_t>(seed_override)
                                      : seek::derive_seed(cfg.suite_seed, 0);
  const seek::EpisodeResult r =
      seek::run_episode(cfg, assets, store, seed, 0, trace_path);
  std::printf("planner=%s seed=%llu S=%d path=%.2fm shortest=%.2fm spl=%.4f ticks=%ld%s%s\n",
              cfg.planner.c_str(), static_cast<unsigned long long>(seed), r.success ? 1 : 0,
              r.path_len_m, r.shortest_len_m, r.spl, r.ticks,
              r.fail_reason.empty() ? "" : " reason=", r.fail_reason.c_str());
  std::printf("actions:");
  for (const seek::GlobalAction& a : r.actions) std::printf(" %s", a.to_string().c_str());
  std::printf("\n");
  return 0;
}

int cmd_eval(const std::string& scenario_path, const std::string& out_dir) {
  seek::ScenarioConfig cfg = seek::load_scenario(scenario_path);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const seek::SuiteReport report = seek::run_suite(cfg);
  std::printf("%s: %zu episodes, SPL mean %.4f std %.4f\n", cfg.planner.c_str(),
              report.episodes.size(), report.spl_mean, report.spl_std);
  if (!cfg.output_dir.empty()) {
    std::printf("wrote %s/results.csv and %s/report.json\n", cfg.output_dir.c_str(),
                cfg.output_dir.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seek: semantic object-goal navigation planning and simulation"};
  app.require_subcommand(1);

  // graph build
  auto* graph = app.add_subcommand("graph", "scene graph operations");
  graph->require_subcommand(1);
  auto* build = graph->add_subcommand("build", "build a scene graph from a floor plan");
  std::string plan_path, out_path;
  double spacing = seek::defaults::kSpacingM;
  build->add_option("floor_plan", plan_path, "floor plan JSON")->required();
  build->add_option("--spacing", spacing, "location grid pitch, meters");
  build->add_option("-o,--output", out_path, "output DSG file")->required();

  // plan
  auto* plan = app.add_subcommand("plan", "solve the global search policy");
  std::string dsg_path, prior_path, object, store_path, policy_out;
  plan->add_option("dsg", dsg_path, "scene graph file")->required();
  plan->add_option("prior", prior_path, "prior table file")->required();
  plan->add_option("--object", object, "target object class")->required();
  plan->add_option("--store", store_path, "observation-count store file");
  plan->add_option("-o,--output", policy_out, "policy JSON output")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run one episode of a scenario");
  std::string scenario_path, trace_path;
  long seed = 0;
  simulate->add_option("scenario", scenario_path, "scenario JSON")->required();
  auto* seed_opt = simulate->add_option("--seed", seed, "episode seed");
  simulate->add_option("--trace", trace_path, "write per-tick JSONL trace here");

  // eval
  auto* eval = app.add_subcommand("eval", "run a full suite and write reports");
  std::string eval_scenario, eval_out;
  eval->add_option("scenario", eval_scenario, "scenario JSON")->required();
  eval->add_option("-o,--output", eval_out, "report directory");

  // belief show
  auto* belief = app.add_subcommand("belief", "belief inspection");
  belief->require_subcommand(1);
  auto* show = belief->add_subcommand("show", "print the initialized room belief");
  std::string b_prior, b_dsg, b_object, b_store;
  show->add_option("prior", b_prior, "prior table file")->required();
  show->add_option("dsg", b_dsg, "scene graph file")->required();
  show->add_option("--object", b_object, "target object class")->required();
  show->add_option("--store", b_store, "observation-count store file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_graph_build(plan_path, spacing, out_path);
    if (plan->parsed()) return cmd_plan(dsg_path, prior_path, object, store_path, policy_out);
    if (simulate->parsed()) {
      return cmd_simulate(scenario_path, seed, seed_opt->count() > 0, trace_path);
    }
    if (eval->parsed()) return cmd_eval(eval_scenario, eval_out);
    if (show->parsed()) return cmd_belief_show(b_prior, b_dsg, b_object, b_store);
  } catch (const seek::InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const seek::GeometryError& e) {
    std::fprintf(stderr, "geometry error: %s\n", e.what());
    return 2;
  } catch (const seek::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
