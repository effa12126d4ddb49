#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"

#include "hydromission/maps.hpp"
#include "hydromission/missionplan.hpp"
#include "hydromission/terrain.hpp"

using namespace hydromission;

namespace {

TerrainGrid open_water(int px = 200, double cell = 10.0) {
    GrayImage img;
    img.width = px;
    img.height = px;
    img.pixels.assign(static_cast<std::size_t>(px) * px, 255);
    return cluster_map(img, 3, cell, 1000.0);
}

void add_edge(TaskGraph& g, int a, int b, double dist, double duration, double priority) {
    TaskEdge e;
    e.a = a;
    e.b = b;
    e.distance = dist;
    e.duration = duration;
    e.priority = priority;
    g.edges.push_back(e);
}

TaskGraph hand_graph_six() {
    // 0 (start) - 1, 0 - 2, 1 - 2, 1 - 3, 2 - 4, 3 - 4, 3 - 5, 4 - 5 (dest)
    TaskGraph g;
    for (int i = 0; i < 6; ++i) g.waypoints.push_back({100.0 * i, 0.0, 0.0});
    add_edge(g, 0, 1, 1000.0, 100.0, 2.0);
    add_edge(g, 0, 2, 1200.0, 150.0, 4.0);
    add_edge(g, 1, 2, 800.0, 100.0, 1.0);
    add_edge(g, 1, 3, 900.0, 200.0, 5.0);
    add_edge(g, 2, 4, 1100.0, 120.0, 8.0);
    add_edge(g, 3, 4, 700.0, 90.0, 2.5);
    add_edge(g, 3, 5, 1300.0, 60.0, 6.0);
    add_edge(g, 4, 5, 1000.0, 80.0, 3.0);
    g.start = 0;
    g.dest = 5;
    return g;
}

// Exhaustive enumeration of valid start-to-dest walks (no repeated node
// or edge, strict budget) used as the optimality oracle.
struct Enumerator {
    const TaskGraph& graph;
    const MissionCostInputs& inputs;
    double t_available;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<int> best_nodes;

    void dfs(int node, std::vector<bool>& visited, std::vector<bool>& used_edge,
             std::vector<int>& nodes, std::vector<int>& edge_ids, double elapsed) {
        if (node == graph.dest) {
            TaskSequence seq;
            seq.nodes = nodes;
            seq.edge_ids = edge_ids;
            seq.expected_time = elapsed;
            const double c = mission_cost(graph, seq, inputs);
            if (c < best_cost) {
                best_cost = c;
                best_nodes = nodes;
            }
            return;
        }
        const auto adj = graph.adjacency();
        for (int e : adj[static_cast<std::size_t>(node)]) {
            const TaskEdge& edge = graph.edges[static_cast<std::size_t>(e)];
            if (edge.traversed || used_edge[static_cast<std::size_t>(e)]) continue;
            const int other = edge.a == node ? edge.b : edge.a;
            if (visited[static_cast<std::size_t>(other)]) continue;
            const double t = graph.edge_time(e, inputs.speed);
            if (elapsed + t >= t_available) continue;
            visited[static_cast<std::size_t>(other)] = true;
            used_edge[static_cast<std::size_t>(e)] = true;
            nodes.push_back(other);
            edge_ids.push_back(e);
            dfs(other, visited, used_edge, nodes, edge_ids, elapsed + t);
            nodes.pop_back();
            edge_ids.pop_back();
            visited[static_cast<std::size_t>(other)] = false;
            used_edge[static_cast<std::size_t>(e)] = false;
        }
    }

    double run(int start) {
        std::vector<bool> visited(graph.waypoints.size(), false);
        std::vector<bool> used_edge(graph.edges.size(), false);
        std::vector<int> nodes = {start};
        std::vector<int> edge_ids;
        visited[static_cast<std::size_t>(start)] = true;
        dfs(start, visited, used_edge, nodes, edge_ids, 0.0);
        return best_cost;
    }
};

}  // namespace

TEST_CASE("edge time arithmetic") {
    TaskGraph g;
    g.waypoints = {{0, 0, 0}, {1000, 0, 0}};
    add_edge(g, 0, 1, 1000.0, 100.0, 1.0);
    CHECK(g.edge_time(0, 2.0) == doctest::Approx(600.0));
}

TEST_CASE("degenerate collocated waypoints give a zero-distance edge") {
    TaskGraph g;
    g.waypoints = {{50, 50, 0}, {50, 50, 0}};
    add_edge(g, 0, 1, 0.0, 250.0, 1.0);
    CHECK(g.edge_time(0, 2.0) == doctest::Approx(250.0));
}

TEST_CASE("forty-node generated graph is connected with water waypoints") {
    const TerrainGrid terrain = open_water(1000);
    GraphParams params;  // 40 nodes, k = 5
    Rng rng(12);
    const TaskGraph g = generate_graph(terrain, params, rng);
    CHECK(g.node_count() == 40);
    CHECK(g.start != g.dest);
    for (const Vec3& p : g.waypoints) {
        CHECK(terrain.class_at(p.x, p.y) == CellClass::Water);
    }
    const auto sp = shortest_times_to(g, g.dest, 2.0);
    CHECK(std::isfinite(sp[static_cast<std::size_t>(g.start)]));
    for (const TaskEdge& e : g.edges) {
        CHECK(e.distance ==
              doctest::Approx(distance(g.waypoints[static_cast<std::size_t>(e.a)],
                                       g.waypoints[static_cast<std::size_t>(e.b)])));
        CHECK(e.priority >= 1.0);
        CHECK(e.priority <= 10.0);
        CHECK(e.duration >= 60.0);
        CHECK(e.duration <= 600.0);
    }
}

TEST_CASE("line graph decodes to the forced walk") {
    TaskGraph g;
    g.waypoints = {{0, 0, 0}, {100, 0, 0}, {200, 0, 0}};
    add_edge(g, 0, 1, 100.0, 10.0, 1.0);
    add_edge(g, 1, 2, 100.0, 10.0, 1.0);
    g.start = 0;
    g.dest = 2;
    const TaskSequence seq = decode_sequence(g, {0.0, 0.0, 0.0}, 0, 2, 1e6, 2.0);
    CHECK(seq.feasible);
    CHECK(seq.nodes == std::vector<int>{0, 1, 2});
}

TEST_CASE("tight budget admits only the direct edge") {
    TaskGraph g;
    g.waypoints = {{0, 0, 0}, {100, 0, 0}, {200, 0, 0}};
    add_edge(g, 0, 1, 1000.0, 100.0, 1.0);
    add_edge(g, 1, 2, 1000.0, 100.0, 1.0);
    add_edge(g, 0, 2, 1500.0, 50.0, 1.0);
    g.start = 0;
    g.dest = 2;
    // direct: 1500/2 + 50 = 800; detour: 2 * 600 = 1200
    const TaskSequence seq = decode_sequence(g, {0.0, 100.0, 0.0}, 0, 2, 900.0, 2.0);
    CHECK(seq.feasible);
    CHECK(seq.nodes == std::vector<int>{0, 2});
}

TEST_CASE("six-node decode matches the hand-simulated greedy trace") {
    const TaskGraph g = hand_graph_six();
    // priorities per node; ample budget
    // at 0: neighbors 1 (p 50) and 2 (p 80) -> 2
    // at 2: unvisited neighbors 1 (50), 4 (60) -> 4
    // at 4: unvisited neighbors 3 (10), 5 (70) -> 5 = destination
    const std::vector<double> pr = {0.0, 50.0, 80.0, 10.0, 60.0, 70.0};
    const TaskSequence seq = decode_sequence(g, pr, 0, 5, 1e6, 2.0);
    CHECK(seq.feasible);
    CHECK(seq.nodes == std::vector<int>{0, 2, 4, 5});
    const double expected =
        g.edge_time(g.find_edge(0, 2), 2.0) + g.edge_time(g.find_edge(2, 4), 2.0) +
        g.edge_time(g.find_edge(4, 5), 2.0);
    CHECK(seq.expected_time == doctest::Approx(expected));
}

TEST_CASE("raising a candidate's priority redirects the decoder") {
    const TaskGraph g = hand_graph_six();
    std::vector<double> pr = {0.0, 50.0, 80.0, 10.0, 60.0, 70.0};
    pr[1] = 95.0;  // now beats node 2 at the first decision
    const TaskSequence seq = decode_sequence(g, pr, 0, 5, 1e6, 2.0);
    REQUIRE(seq.nodes.size() >= 2);
    CHECK(seq.nodes[1] == 1);
}

TEST_CASE("decode validates its priority vector") {
    const TaskGraph g = hand_graph_six();
    CHECK_THROWS(decode_sequence(g, {0.0, 0.0}, 0, 5, 1e6, 2.0));
    CHECK_THROWS(decode_sequence(g, {0.0, 0.0, 0.0, 0.0, 0.0, 300.0}, 0, 5, 1e6, 2.0));
}

TEST_CASE("decoded sequences satisfy every validity criterion") {
    const TaskGraph g = hand_graph_six();
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> pr(6);
        for (double& v : pr) v = rng.uniform(kPriorityLow, kPriorityHigh);
        const TaskSequence seq = decode_sequence(g, pr, 0, 5, 5000.0, 2.0);
        if (!seq.feasible) continue;
        CHECK(validate_sequence(g, seq, 5000.0, 2.0).empty());
        // edge ids line up with consecutive node pairs
        REQUIRE(seq.edge_ids.size() + 1 == seq.nodes.size());
        for (std::size_t i = 0; i < seq.edge_ids.size(); ++i) {
            CHECK(seq.edge_ids[i] == g.find_edge(seq.nodes[i], seq.nodes[i + 1]));
        }
    }
}

TEST_CASE("validation reports a repeated node") {
    const TaskGraph g = hand_graph_six();
    TaskSequence seq;
    seq.nodes = {0, 1, 2, 1, 3, 5};
    const auto violated = validate_sequence(g, seq, 1e6, 2.0);
    CHECK(std::find(violated.begin(), violated.end(), SequenceCriterion::NodeRepeated) !=
          violated.end());
}

TEST_CASE("budget criterion is strict at equality") {
    TaskGraph g;
    g.waypoints = {{0, 0, 0}, {100, 0, 0}};
    add_edge(g, 0, 1, 1000.0, 100.0, 1.0);
    g.start = 0;
    g.dest = 1;
    TaskSequence seq;
    seq.nodes = {0, 1};
    seq.edge_ids = {0};
    const auto violated = validate_sequence(g, seq, 600.0, 2.0);  // exactly t_ij
    CHECK(std::find(violated.begin(), violated.end(), SequenceCriterion::TimeBudget) !=
          violated.end());
    CHECK(validate_sequence(g, seq, 600.1, 2.0).empty());
}

TEST_CASE("cost is zero when leg time exactly fills the budget") {
    TaskGraph g;
    g.waypoints = {{0, 0, 0}, {100, 0, 0}};
    add_edge(g, 0, 1, 1000.0, 100.0, 1.0);
    g.start = 0;
    g.dest = 1;
    TaskSequence seq;
    seq.nodes = {0, 1};
    seq.edge_ids = {0};
    MissionCostInputs inputs;
    inputs.phi1 = 1.0;
    inputs.phi2 = 0.0;
    inputs.t_available = 700.0;
    inputs.speed = 2.0;
    // leg cost 600 + duration 100 = 700 = budget, and expected 600 < 700
    CHECK(mission_cost(g, seq, inputs, {600.0}) == doctest::Approx(0.0));
}

TEST_CASE("priority term of the cost") {
    TaskGraph g;
    g.waypoints = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    add_edge(g, 0, 1, 10.0, 0.0, 2.0);
    add_edge(g, 1, 2, 10.0, 0.0, 4.0);
    TaskSequence seq;
    seq.nodes = {0, 1, 2};
    seq.edge_ids = {0, 1};
    MissionCostInputs inputs;
    inputs.phi1 = 0.0;
    inputs.phi2 = 1.0;
    inputs.t_available = 1e6;
    inputs.speed = 2.0;
    CHECK(mission_cost(g, seq, inputs, {5.0, 5.0}) == doctest::Approx(0.75));
}

TEST_CASE("missing leg costs are rejected") {
    TaskGraph g;
    g.waypoints = {{0, 0, 0}, {1, 0, 0}};
    add_edge(g, 0, 1, 10.0, 0.0, 2.0);
    TaskSequence seq;
    seq.nodes = {0, 1};
    seq.edge_ids = {0};
    MissionCostInputs inputs;
    CHECK_THROWS(mission_cost(g, seq, inputs, {}));
}

TEST_CASE("over-budget sequences pay the large additive penalty") {
    TaskGraph g;
    g.waypoints = {{0, 0, 0}, {100, 0, 0}};
    add_edge(g, 0, 1, 1000.0, 100.0, 1.0);
    TaskSequence seq;
    seq.nodes = {0, 1};
    seq.edge_ids = {0};
    MissionCostInputs inputs;
    inputs.t_available = 500.0;  // expected 600 >= 500
    inputs.speed = 2.0;
    CHECK(mission_cost(g, seq, inputs) >= 1e6);
}

TEST_CASE("single-edge graph always plans the direct hop") {
    TaskGraph g;
    g.waypoints = {{0, 0, 0}, {2000, 0, 0}};
    add_edge(g, 0, 1, 2000.0, 100.0, 3.0);
    g.start = 0;
    g.dest = 1;
    MissionCostInputs inputs;
    inputs.t_available = 5000.0;
    BboConfig config;
    config.population = 10;
    config.iterations = 5;
    config.rate_model = RateModel::Constant;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const MissionPlanResult r = plan_mission(g, 0, 1, 5000.0, inputs, config, seed);
        CHECK(r.best.feasible);
        CHECK(r.best.nodes == std::vector<int>{0, 1});
    }
}

TEST_CASE("planner matches the exhaustive oracle on the six-node graph") {
    const TaskGraph g = hand_graph_six();
    MissionCostInputs inputs;
    inputs.t_available = 4000.0;
    inputs.speed = 2.0;
    Enumerator oracle{g, inputs, 4000.0};
    const double best = oracle.run(0);
    REQUIRE(std::isfinite(best));

    BboConfig config;
    config.population = 60;
    config.iterations = 80;
    config.rate_model = RateModel::Constant;
    config.max_mutation = 0.5;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const MissionPlanResult r = plan_mission(g, 0, 5, 4000.0, inputs, config, seed);
        REQUIRE(r.best.feasible);
        const double cost = mission_cost(g, r.best, inputs);
        CHECK(cost >= best - 1e-9);  // enumeration lower-bounds the planner
        if (cost <= 1.01 * best) ++hits;
    }
    CHECK(hits >= 19);
}

TEST_CASE("replanning the untouched problem cannot be worse than the initial plan") {
    const TaskGraph g = hand_graph_six();
    MissionCostInputs inputs;
    inputs.t_available = 4000.0;
    BboConfig config;
    config.population = 40;
    config.iterations = 40;
    config.rate_model = RateModel::Constant;
    config.max_mutation = 0.5;
    const MissionPlanResult initial = plan_mission(g, 0, 5, 4000.0, inputs, config, 9);
    const MissionPlanResult again = replan_mission(g, 0, 4000.0, inputs, config, 9);
    CHECK(mission_cost(g, again.best, inputs) <=
          mission_cost(g, initial.best, inputs) + 1e-9);
}

TEST_CASE("replanning at the destination returns the empty remaining sequence") {
    const TaskGraph g = hand_graph_six();
    MissionCostInputs inputs;
    BboConfig config;
    const MissionPlanResult r = replan_mission(g, 5, 1000.0, inputs, config, 1);
    CHECK(r.best.feasible);
    CHECK(r.best.nodes == std::vector<int>{5});
    CHECK(r.best.edge_ids.empty());
}

TEST_CASE("replanning requires positive residual time") {
    const TaskGraph g = hand_graph_six();
    MissionCostInputs inputs;
    BboConfig config;
    CHECK_THROWS(replan_mission(g, 2, 0.0, inputs, config, 1));
}

TEST_CASE("replan after two traversed edges matches enumeration on the reduced graph") {
    TaskGraph g = hand_graph_six();
    // vehicle walked 0 -> 2 -> 4; those edges leave the planning set
    g.edges[static_cast<std::size_t>(g.find_edge(0, 2))].traversed = true;
    g.edges[static_cast<std::size_t>(g.find_edge(2, 4))].traversed = true;

    MissionCostInputs inputs;
    inputs.t_available = 2500.0;
    inputs.speed = 2.0;
    Enumerator oracle{g, inputs, 2500.0};
    const double best = oracle.run(4);
    REQUIRE(std::isfinite(best));

    BboConfig config;
    config.population = 40;
    config.iterations = 60;
    config.rate_model = RateModel::Constant;
    config.max_mutation = 0.5;
    const MissionPlanResult r = replan_mission(g, 4, 2500.0, inputs, config, 13);
    REQUIRE(r.best.feasible);
    MissionCostInputs residual = inputs;
    residual.t_available = 2500.0;
    CHECK(mission_cost(g, r.best, residual) == doctest::Approx(best).epsilon(0.01));
    // the replanned walk never reuses a traversed edge
    for (int e : r.best.edge_ids) {
        CHECK_FALSE(g.edges[static_cast<std::size_t>(e)].traversed);
    }
}

TEST_CASE("planning toward an unreachable destination throws") {
    TaskGraph g;
    g.waypoints = {{0, 0, 0}, {100, 0, 0}, {200, 0, 0}};
    add_edge(g, 0, 1, 100.0, 10.0, 1.0);
    g.start = 0;
    g.dest = 2;  // isolated
    MissionCostInputs inputs;
    BboConfig config;
    CHECK_THROWS(plan_mission(g, 0, 2, 1000.0, inputs, config, 1));
}
