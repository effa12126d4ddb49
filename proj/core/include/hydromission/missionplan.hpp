#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hydromission/bbo.hpp"
#include "hydromission/geometry.hpp"
#include "hydromission/rng.hpp"
#include "hydromission/terrain.hpp"

namespace hydromission {

struct TaskEdge {
    int a = 0;
    int b = 0;
    double distance = 0.0;   // Euclidean between waypoints
    double duration = 0.0;   // delta, task completion time, s
    double priority = 1.0;   // rho > 0
    bool traversed = false;  // excluded from future planning once set
};

struct TaskGraph {
    std::vector<Vec3> waypoints;
    std::vector<TaskEdge> edges;  // undirected
    int start = 0;
    int dest = 0;

    int node_count() const { return static_cast<int>(waypoints.size()); }
    // edge ids incident to each node
    std::vector<std::vector<int>> adjacency() const;
    int find_edge(int a, int b) const;  // -1 if absent
    double edge_time(int edge_id, double speed) const {
        return edges[static_cast<std::size_t>(edge_id)].distance / speed +
               edges[static_cast<std::size_t>(edge_id)].duration;
    }
};

// Priority range the decoder reads; visited nodes drop far below it.
constexpr double kPriorityLow = -200.0;
constexpr double kPriorityHigh = 100.0;

struct GraphParams {
    int nodes = 40;
    int k_nearest = 5;
    double rho_min = 1.0, rho_max = 10.0;      // edge priority range
    double delta_min = 60.0, delta_max = 600.0;  // task duration range, s
};

// Random waypoints uniform over the terrain volume (resampled until they
// land in Water), k-nearest connectivity, Euclidean edge distances.
// Start and destination are the pair of waypoints farthest apart.
// Throws if start and destination end up disconnected.
TaskGraph generate_graph(const TerrainGrid& terrain, const GraphParams& params, Rng& rng);

struct TaskSequence {
    std::vector<int> nodes;
    std::vector<int> edge_ids;  // consecutive-pair edges
    std::vector<double> priority_vector;
    double expected_time = 0.0;  // sum of t_ij over selected edges
    double total_priority = 0.0;
    bool feasible = false;
    std::string infeasibility;
};

// Greedy priority-vector decode: from the start node repeatedly move to
// the adjacent unvisited node of highest priority that can still reach
// the destination within the budget (shortest-path time lookahead).
// Dead ends fall back to the shortest path to the destination through
// unvisited nodes; if that fails too the sequence is infeasible.
TaskSequence decode_sequence(const TaskGraph& graph, const std::vector<double>& priorities,
                             int start, int dest, double t_available, double speed);

enum class SequenceCriterion {
    Endpoints,      // begins at start, ends at destination
    EdgesExist,     // every consecutive pair is a graph edge
    NodeRepeated,   // no node appears twice
    EdgeRepeated,   // no edge traversed twice
    TimeBudget,     // total expected time < T_Available (strict)
};

std::string to_string(SequenceCriterion c);

std::vector<SequenceCriterion> validate_sequence(const TaskGraph& graph, const TaskSequence& seq,
                                                 double t_available, double speed);

struct MissionCostInputs {
    double phi1 = 1.0;
    double phi2 = 100.0;
    double t_available = 14400.0;
    double speed = 2.0;
};

// Cost of a selected edge set: Phi1 * |sum(leg_cost + delta) - T_Available|
// + Phi2 * sum(1 / rho), with a large additive penalty when the budget is
// exceeded. leg_costs must carry one entry per selected edge (realized
// path cost, or the d/|v| estimate before any path exists).
double mission_cost(const TaskGraph& graph, const TaskSequence& seq,
                    const MissionCostInputs& inputs, const std::vector<double>& leg_costs);

// Convenience: leg costs taken as the d/|v| estimates.
double mission_cost(const TaskGraph& graph, const TaskSequence& seq,
                    const MissionCostInputs& inputs);

struct MissionPlanResult {
    TaskSequence best;
    BboResult history;
    double tightest_gap = std::numeric_limits<double>::infinity();  // smallest budget overshoot seen
};

MissionPlanResult plan_mission(const TaskGraph& graph, int start, int dest, double t_available,
                               const MissionCostInputs& inputs, const BboConfig& config,
                               std::uint64_t seed);

// Same problem on the working graph minus traversed edges, starting from
// the vehicle's current node with the residual budget.
MissionPlanResult replan_mission(const TaskGraph& graph, int current_node, double t_residual,
                                 const MissionCostInputs& inputs, const BboConfig& config,
                                 std::uint64_t seed);

// Shortest-path times (d/|v| + delta per edge) from every node to dest,
// ignoring traversed edges. Unreachable nodes get +inf.
std::vector<double> shortest_times_to(const TaskGraph& graph, int dest, double speed);

}  // namespace hydromission
