#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "seek/baselines.hpp"
#include "seek/rng.hpp"
#include "seek/semantic_belief.hpp"

using namespace seek;

namespace {

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

// four rooms in a row with doors between neighbors
struct Row {
  LayeredSceneGraph graph;
  CostMatrix costs;

  Row() {
    FloorPlan plan;
    const char* labels[4] = {"kitchen", "office", "lounge", "toilet"};
    for (int i = 0; i < 4; ++i) {
      plan.rooms.push_back({i, labels[i], rect(i * 4.0, 0, i * 4.0 + 4.0, 4.0)});
    }
    for (int i = 0; i < 3; ++i) plan.doors.push_back({i, i + 1, {i * 4.0 + 4.0, 2.0}, 0.9});
    graph = load_floor_plan(plan);
    sample_locations(graph, 1.0);
    costs = room_cost_matrix(graph);
  }
};

SemanticDistance table_for(const std::map<std::string, double>& dists) {
  SemanticDistance sd;
  sd.object = "x";
  sd.room_types = dists;
  return sd;
}

}  // namespace

TEST_CASE("semantic utility prefers the semantically closer room at equal distance") {
  Row row;
  BaselineState st;
  // robot in room 1; rooms 0 and 2 are symmetric neighbors
  st.semdist = table_for({{"kitchen", 0.1}, {"lounge", 0.9}, {"office", 0.5}, {"toilet", 0.5}});
  st.selected = {1, 3};
  const Vec2 robot = row.graph.node(1).position;
  const GlobalAction a = semantic_utility_next(st, row.graph, row.costs, robot, "x");
  CHECK(a.kind == GlobalAction::Kind::kMove);
  CHECK(a.room_id == 0);  // dist_sem 0.1 beats 0.9
}

TEST_CASE("semantic utility prefers the nearer room at equal semantic distance") {
  Row row;
  BaselineState st;
  st.semdist = table_for({{"kitchen", 0.5}, {"lounge", 0.5}, {"office", 0.5}, {"toilet", 0.5}});
  st.selected = {0, 1};  // candidates: 2 (near) and 3 (far)
  const Vec2 robot = row.graph.node(1).position;
  const GlobalAction a = semantic_utility_next(st, row.graph, row.costs, robot, "x");
  CHECK(a.room_id == 2);
}

TEST_CASE("semantic utility matches direct formula evaluation") {
  Row row;
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    BaselineState st;
    std::map<std::string, double> d;
    for (const char* t : {"kitchen", "office", "lounge", "toilet"}) {
      d[t] = rng.uniform(0.01, 1.0);
    }
    st.semdist = table_for(d);
    const int current = static_cast<int>(rng.uniform_int(4));
    const Vec2 robot = row.graph.node(current).position;
    // oracle: argmax of 1 / (dist_sem * dist) with the same floors
    int best = -1;
    double best_u = -1;
    for (int rm = 0; rm < 4; ++rm) {
      const double geo = std::max(row.costs.move_cost[row.costs.index_of(current)]
                                                     [row.costs.index_of(rm)],
                                  1e-6);
      const double sem = std::max(d[row.graph.node(rm).label], 0.05);
      const double u = 1.0 / (sem * geo);
      if (u > best_u) {
        best_u = u;
        best = rm;
      }
    }
    const GlobalAction a = semantic_utility_next(st, row.graph, row.costs, robot, "x");
    CHECK(a.room_id == best);
  }
}

TEST_CASE("a missing semantic entry falls back to distance 1") {
  SemanticDistance sd = table_for({{"kitchen", 0.2}});
  CHECK(sd.dist("kitchen") == doctest::Approx(0.2));
  CHECK(sd.dist("ballroom") == doctest::Approx(1.0));
  // the floor applies to tiny table entries
  sd.room_types["kitchen"] = 0.001;
  CHECK(sd.dist("kitchen") == doctest::Approx(0.05));
}

TEST_CASE("semantic distance derives from the prior as 1 - p") {
  PriorTable t;
  t.room_types = {"kitchen", "office", "unknown"};
  t.objects["mug"] = {{{"kitchen", 0.9}, {"office", 0.3}, {"unknown", 0.15}}, 0.1};
  const SemanticDistance sd = SemanticDistance::from_prior(t, "mug");
  CHECK(sd.dist("kitchen") == doctest::Approx(0.1));
  CHECK(sd.dist("office") == doctest::Approx(0.7));
}

TEST_CASE("coverage picks the nearest unvisited room") {
  Row row;
  BaselineState st;
  st.selected = {1};
  const Vec2 robot = row.graph.node(1).position;
  const GlobalAction a = coverage_next(st, row.costs, robot, row.graph);
  CHECK(a.kind == GlobalAction::Kind::kMove);
  CHECK((a.room_id == 0 || a.room_id == 2));  // symmetric neighbors; lowest id wins ties upstream
  // then the matching search
  const GlobalAction b = coverage_next(st, row.costs, robot, row.graph);
  CHECK(b.kind == GlobalAction::Kind::kSearch);
  CHECK(b.room_id == a.room_id);
}

TEST_CASE("coverage sequence equals a brute-force greedy replay") {
  Row row;
  BaselineState st;
  Vec2 robot = row.graph.node(0).position;
  std::set<int> oracle_visited;
  int oracle_current = 0;
  for (int k = 0; k < 4; ++k) {
    const GlobalAction mv = coverage_next(st, row.costs, robot, row.graph);
    REQUIRE(mv.kind == GlobalAction::Kind::kMove);
    // oracle: nearest unvisited by move_cost, lowest id on ties
    int best = -1;
    double best_d = 1e18;
    for (int rm = 0; rm < 4; ++rm) {
      if (oracle_visited.count(rm)) continue;
      const double d =
          row.costs.move_cost[row.costs.index_of(oracle_current)][row.costs.index_of(rm)];
      if (d < best_d) {
        best_d = d;
        best = rm;
      }
    }
    CHECK(mv.room_id == best);
    oracle_visited.insert(best);
    oracle_current = best;
    robot = row.graph.node(best).position;  // as if the move completed
    const GlobalAction se = coverage_next(st, row.costs, robot, row.graph);
    CHECK(se.kind == GlobalAction::Kind::kSearch);
    CHECK(se.room_id == best);
  }
}

TEST_CASE("coverage restarts after exhausting every room") {
  Row row;
  BaselineState st;
  st.selected = {0, 1, 2, 3};
  const GlobalAction a = coverage_next(st, row.costs, row.graph.node(3).position, row.graph);
  CHECK(a.kind == GlobalAction::Kind::kMove);  // a fresh sweep began
  CHECK(st.selected.count(a.room_id) == 1);
  CHECK(st.selected.size() == 1);
}

TEST_CASE("random baseline is reproducible and uniform") {
  Row row;
  SUBCASE("same seed, same order") {
    for (int rep = 0; rep < 3; ++rep) {
      BaselineState st;
      st.order = row.costs.room_ids;
      Rng rng(991);
      rng.shuffle(st.order);
      BaselineState st2;
      st2.order = row.costs.room_ids;
      Rng rng2(991);
      rng2.shuffle(st2.order);
      CHECK(st.order == st2.order);
    }
  }
  SUBCASE("first room is uniform over seeds") {
    const int n_rooms = 4;
    std::map<int, int> first_count;
    const int n = 10000;
    for (int s = 0; s < n; ++s) {
      std::vector<int> order = row.costs.room_ids;
      Rng rng(static_cast<std::uint64_t>(s));
      rng.shuffle(order);
      first_count[order[0]]++;
    }
    const double expect = static_cast<double>(n) / n_rooms;
    const double sigma = std::sqrt(n * (1.0 / n_rooms) * (1.0 - 1.0 / n_rooms));
    for (const auto& [room, count] : first_count) {
      CHECK(std::abs(count - expect) <= 3.5 * sigma);
    }
  }
  SUBCASE("single-room order yields that room") {
    BaselineState st;
    st.order = {7};
    Rng rng(5);
    const GlobalAction a = random_next(st, rng);
    CHECK(a == GlobalAction{GlobalAction::Kind::kMove, 7});
    CHECK(random_next(st, rng) == GlobalAction{GlobalAction::Kind::kSearch, 7});
  }
}

TEST_CASE("every baseline covers all rooms within one sweep of selections") {
  Row row;
  // coverage
  {
    BaselineState st;
    Vec2 robot = row.graph.node(2).position;
    std::set<int> seen;
    for (int k = 0; k < 4; ++k) {
      const GlobalAction mv = coverage_next(st, row.costs, robot, row.graph);
      CHECK(seen.insert(mv.room_id).second);  // never reselected early
      coverage_next(st, row.costs, robot, row.graph);
      robot = row.graph.node(mv.room_id).position;
    }
    CHECK(seen.size() == 4);
  }
  // semantic utility
  {
    BaselineState st;
    st.semdist = table_for({{"kitchen", 0.3}, {"office", 0.6}, {"lounge", 0.2}, {"toilet", 0.9}});
    Vec2 robot = row.graph.node(0).position;
    std::set<int> seen;
    for (int k = 0; k < 4; ++k) {
      const GlobalAction mv = semantic_utility_next(st, row.graph, row.costs, robot, "x");
      CHECK(seen.insert(mv.room_id).second);
      semantic_utility_next(st, row.graph, row.costs, robot, "x");
      robot = row.graph.node(mv.room_id).position;
    }
    CHECK(seen.size() == 4);
  }
  // random
  {
    BaselineState st;
    st.order = row.costs.room_ids;
    Rng rng(404);
    rng.shuffle(st.order);
    std::set<int> seen;
    for (int k = 0; k < 4; ++k) {
      const GlobalAction mv = random_next(st, rng);
      CHECK(seen.insert(mv.room_id).second);
      random_next(st, rng);
    }
    CHECK(seen.size() == 4);
  }
}
