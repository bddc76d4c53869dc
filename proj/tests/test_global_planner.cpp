#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <vector>

#include "seek/errors.hpp"
#include "seek/global_planner.hpp"
#include "seek/json_io.hpp"
#include "seek/rng.hpp"

using namespace seek;

namespace {

std::string data_path(const std::string& name) {
  const char* dir = std::getenv("SEEK_DATA_DIR");
  if (dir != nullptr) return std::string(dir) + "/" + name;
  for (const char* prefix : {"data/", "../data/", "../../data/"}) {
    const std::string p = prefix + name;
    if (FILE* f = fopen(p.c_str(), "r")) {
      fclose(f);
      return p;
    }
  }
  return name;
}

// Dense Gaussian elimination with partial pivoting; plenty for n <= 4.
std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double acc = rhs[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

// Evaluate one stationary deterministic policy by its linear fixed point.
// action[i] == i means search(i), otherwise move to room index action[i].
std::vector<double> evaluate_policy(const MdpModel& m, const std::vector<int>& action) {
  const std::size_t n = m.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = 1.0;
    if (action[i] == static_cast<int>(i)) {
      a[i][i] -= 1.0 - m.goal_prob_search[i];
      rhs[i] = m.search_cost[i];
    } else {
      a[i][action[i]] -= 1.0 - m.goal_prob_move[action[i]];
      rhs[i] = m.move_cost[i][action[i]];
    }
  }
  return solve_linear(std::move(a), std::move(rhs));
}

// Exhaustive minimum over every stationary deterministic policy.
std::vector<double> optimal_by_enumeration(const MdpModel& m) {
  const std::size_t n = m.size();
  std::vector<int> action(n, 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  const auto total = static_cast<std::size_t>(std::pow(n, n));
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rem = code;
    for (std::size_t i = 0; i < n; ++i) {
      action[i] = static_cast<int>(rem % n);
      rem /= n;
    }
    const std::vector<double> j = evaluate_policy(m, action);
    for (std::size_t i = 0; i < n; ++i) best[i] = std::min(best[i], j[i]);
  }
  return best;
}

MdpModel random_model(Rng& rng, std::size_t n) {
  MdpModel m;
  for (std::size_t i = 0; i < n; ++i) m.room_ids.push_back(static_cast<int>(i));
  m.move_cost.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = rng.uniform(1.0, 100.0);
      m.move_cost[i][j] = c;
      m.move_cost[j][i] = c;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    m.search_cost.push_back(rng.uniform(1.0, 100.0));
    m.goal_prob_search.push_back(rng.uniform(1e-3, 0.99));
    m.goal_prob_move.push_back(rng.uniform(1e-3, 0.99));
  }
  return m;
}

RoomBelief belief_over(const std::vector<int>& rooms, const std::vector<double>& probs) {
  RoomBelief b;
  b.object_class = "x";
  for (std::size_t i = 0; i < rooms.size(); ++i) b.probs[rooms[i]] = probs[i];
  return b;
}

}  // namespace

TEST_CASE("build_mdp clamps goal probabilities to the proper-policy floor") {
  CostMatrix costs;
  costs.room_ids = {0, 1};
  costs.move_cost = {{0, 5}, {5, 0}};
  costs.search_cost = {10, 10};
  SUBCASE("all-zero belief floors at eps") {
    const MdpModel m = build_mdp(costs, belief_over({0, 1}, {0.0, 0.0}), 0.5);
    for (double p : m.goal_prob_search) CHECK(p == doctest::Approx(1e-3));
    for (double p : m.goal_prob_move) CHECK(p == doctest::Approx(1e-3));
  }
  SUBCASE("certain belief gives d_search") {
    const MdpModel m = build_mdp(costs, belief_over({0, 1}, {1.0, 1.0}), 0.5);
    CHECK(m.goal_prob_search[0] == doctest::Approx(0.95));
    CHECK(m.goal_prob_move[0] == doctest::Approx(0.5));
  }
  SUBCASE("missing room in belief is an input error") {
    CHECK_THROWS_AS(build_mdp(costs, belief_over({0}, {0.5}), 0.5), InputError);
  }
  SUBCASE("empty room set is an input error") {
    CostMatrix empty;
    CHECK_THROWS_AS(build_mdp(empty, belief_over({}, {}), 0.5), InputError);
  }
}

TEST_CASE("the kitchen search is the most promising in the office scenario") {
  const LayeredSceneGraph g =
      load_floor_plan(load_floor_plan_file(data_path("office_21.json")));
  const PriorTable t = load_prior_table(data_path("priors.json"));
  CostMatrix costs;  // geometry-free: unit costs, belief is what matters here
  costs.room_ids = g.room_ids();
  const std::size_t n = costs.room_ids.size();
  costs.move_cost.assign(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) costs.move_cost[i][i] = 0.0;
  costs.search_cost.assign(n, 1.0);
  const PriorStore store;
  const RoomBelief b = init_belief(t, g, store, "fire extinguisher");
  const MdpModel m = build_mdp(costs, b, t.p_easy("fire extinguisher"));
  int kitchen = -1;
  for (int r : costs.room_ids) {
    if (g.node(r).label == "kitchen") kitchen = r;
  }
  REQUIRE(kitchen >= 0);
  const std::size_t ki = static_cast<std::size_t>(costs.index_of(kitchen));
  for (std::size_t i = 0; i < n; ++i) {
    if (i != ki) CHECK(m.goal_prob_search[ki] > m.goal_prob_search[i]);
  }
}

TEST_CASE("worked two-room example solves exactly") {
  MdpModel m;
  m.room_ids = {0, 1};  // A, B
  m.move_cost = {{0, 5}, {5, 0}};
  m.search_cost = {10, 10};
  m.goal_prob_search = {0.5, 1.0};
  m.goal_prob_move = {0.0, 0.0};
  const auto [vf, policy] = value_iteration(m, 1e-9, 1000);
  CHECK(vf.at(0) == 15.0);  // exact
  CHECK(vf.at(1) == 10.0);
  CHECK(policy.action_for(0) == GlobalAction{GlobalAction::Kind::kMove, 1});
  CHECK(policy.action_for(1) == GlobalAction{GlobalAction::Kind::kSearch, 1});
}

TEST_CASE("one-room model has the geometric-series closed form") {
  for (double c : {0.5, 1.0, 7.25, 40.0, 100.0}) {
    for (double p : {0.01, 0.05, 0.2, 0.5, 0.9, 0.999}) {
      MdpModel m;
      m.room_ids = {0};
      m.move_cost = {{0}};
      m.search_cost = {c};
      m.goal_prob_search = {p};
      m.goal_prob_move = {p};
      const auto [vf, policy] = value_iteration(m, 1e-13, 2000000);
      CHECK(vf.at(0) == doctest::Approx(c / p).epsilon(1e-9));
      CHECK(policy.action_for(0).kind == GlobalAction::Kind::kSearch);
    }
  }
}

TEST_CASE("goal state has zero cost-to-go by construction") {
  // J is defined over rooms; the absorbing goal contributes 0 to every
  // backup, so a certain search costs exactly its tour.
  MdpModel m;
  m.room_ids = {0};
  m.move_cost = {{0}};
  m.search_cost = {12.5};
  m.goal_prob_search = {1.0};
  m.goal_prob_move = {1.0};
  const auto [vf, policy] = value_iteration(m);
  CHECK(vf.at(0) == doctest::Approx(12.5));
}

TEST_CASE("value iteration matches exhaustive policy enumeration") {
  Rng rng(20240601);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.uniform_int(4);
    const MdpModel m = random_model(rng, n);
    const auto [vf, policy] = value_iteration(m, 1e-10, 1000000);
    const std::vector<double> expect = optimal_by_enumeration(m);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(vf.cost_to_go[i] == doctest::Approx(expect[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("scaling all costs scales J and keeps the policy") {
  Rng rng(5150);
  const MdpModel m = random_model(rng, 4);
  const auto [vf1, p1] = value_iteration(m, 1e-12, 1000000);
  MdpModel scaled = m;
  const double lambda = 7.5;
  for (auto& row : scaled.move_cost) {
    for (double& c : row) c *= lambda;
  }
  for (double& c : scaled.search_cost) c *= lambda;
  const auto [vf2, p2] = value_iteration(scaled, 1e-12, 1000000);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(vf2.cost_to_go[i] == doctest::Approx(lambda * vf1.cost_to_go[i]).epsilon(1e-7));
    CHECK(p2.actions[i] == p1.actions[i]);
  }
}

TEST_CASE("raising a room's probability never increases any J") {
  Rng rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    const MdpModel m = random_model(rng, 3);
    const auto [vf1, p1] = value_iteration(m, 1e-12, 1000000);
    MdpModel better = m;
    const std::size_t r = rng.uniform_int(3);
    better.goal_prob_search[r] = std::min(0.999, better.goal_prob_search[r] + 0.3);
    better.goal_prob_move[r] = std::min(0.999, better.goal_prob_move[r] + 0.3);
    const auto [vf2, p2] = value_iteration(better, 1e-12, 1000000);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(vf2.cost_to_go[i] <= vf1.cost_to_go[i] + 1e-7);
    }
  }
}

TEST_CASE("policy actions attain the Bellman minimum under J") {
  Rng rng(4242);
  const MdpModel m = random_model(rng, 4);
  const auto [vf, policy] = value_iteration(m, 1e-12, 1000000);
  for (std::size_t i = 0; i < m.size(); ++i) {
    double best = m.search_cost[i] + (1.0 - m.goal_prob_search[i]) * vf.cost_to_go[i];
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (k == i) continue;
      best = std::min(best, m.move_cost[i][k] + (1.0 - m.goal_prob_move[k]) * vf.cost_to_go[k]);
    }
    const GlobalAction& a = policy.actions[i];
    const double stored =
        a.kind == GlobalAction::Kind::kSearch
            ? m.search_cost[i] + (1.0 - m.goal_prob_search[i]) * vf.cost_to_go[i]
            : m.move_cost[i][m.room_ids[std::distance(
                  m.room_ids.begin(),
                  std::find(m.room_ids.begin(), m.room_ids.end(), a.room_id))]] +
                  (1.0 - m.goal_prob_move[a.room_id]) * vf.cost_to_go[a.room_id];
    CHECK(stored == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("identical inputs give bit-identical results") {
  Rng rng(777);
  const MdpModel m = random_model(rng, 4);
  const auto [vf1, p1] = value_iteration(m);
  const auto [vf2, p2] = value_iteration(m);
  CHECK(std::memcmp(vf1.cost_to_go.data(), vf2.cost_to_go.data(),
                    vf1.cost_to_go.size() * sizeof(double)) == 0);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(p1.actions[i] == p2.actions[i]);
}

TEST_CASE("non-convergence raises with the residual attached") {
  MdpModel m;
  m.room_ids = {0};
  m.move_cost = {{0}};
  m.search_cost = {10.0};
  m.goal_prob_search = {1e-3};
  m.goal_prob_move = {1e-3};
  try {
    value_iteration(m, 1e-12, 3);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 1e-12);
  }
}

TEST_CASE("next_action resolves the nearest room") {
  FloorPlan plan;
  plan.rooms.push_back({0, "kitchen", Polygon{{{0, 0}, {4, 0}, {4, 4}, {0, 4}}}});
  plan.rooms.push_back({1, "office", Polygon{{{4, 0}, {8, 0}, {8, 4}, {4, 4}}}});
  plan.doors.push_back({0, 1, {4.0, 2.0}, 0.9});
  LayeredSceneGraph g = load_floor_plan(plan);
  sample_locations(g, 1.0);
  Policy policy;
  policy.room_ids = {0, 1};
  policy.actions = {{GlobalAction::Kind::kSearch, 0}, {GlobalAction::Kind::kMove, 0}};
  CHECK(next_action(policy, g, {1.0, 1.0}) == GlobalAction{GlobalAction::Kind::kSearch, 0});
  CHECK(next_action(policy, g, {7.0, 2.0}) == GlobalAction{GlobalAction::Kind::kMove, 0});
}
