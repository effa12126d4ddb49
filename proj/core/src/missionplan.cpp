#include "hydromission/missionplan.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace hydromission {

std::vector<std::vector<int>> TaskGraph::adjacency() const {
    std::vector<std::vector<int>> adj(waypoints.size());
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        adj[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].a)].push_back(e);
        adj[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].b)].push_back(e);
    }
    return adj;
}

int TaskGraph::find_edge(int a, int b) const {
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        const TaskEdge& edge = edges[static_cast<std::size_t>(e)];
        if ((edge.a == a && edge.b == b) || (edge.a == b && edge.b == a)) {
            return e;
        }
    }
    return -1;
}

TaskGraph generate_graph(const TerrainGrid& terrain, const GraphParams& params, Rng& rng) {
    if (params.nodes < 2) {
        throw std::invalid_argument("generate_graph: need at least 2 nodes");
    }
    TaskGraph graph;
    graph.waypoints.reserve(static_cast<std::size_t>(params.nodes));
    for (int i = 0; i < params.nodes; ++i) {
        Vec3 p;
        for (int attempt = 0; attempt < 10000; ++attempt) {
            p = Vec3{rng.uniform(0.0, terrain.extent_x() - 1e-6),
                     rng.uniform(0.0, terrain.extent_y() - 1e-6),
                     rng.uniform(0.0, terrain.depth_extent)};
            if (terrain.class_at(p.x, p.y) == CellClass::Water) {
                break;
            }
        }
        graph.waypoints.push_back(p);
    }

    const int k = std::min(params.k_nearest, params.nodes - 1);
    for (int i = 0; i < params.nodes; ++i) {
        std::vector<std::pair<double, int>> neighbors;
        for (int j = 0; j < params.nodes; ++j) {
            if (j != i) {
                neighbors.emplace_back(distance(graph.waypoints[static_cast<std::size_t>(i)],
                                                graph.waypoints[static_cast<std::size_t>(j)]),
                                       j);
            }
        }
        std::partial_sort(neighbors.begin(), neighbors.begin() + k, neighbors.end());
        for (int m = 0; m < k; ++m) {
            const int j = neighbors[static_cast<std::size_t>(m)].second;
            if (graph.find_edge(i, j) >= 0) {
                continue;
            }
            TaskEdge edge;
            edge.a = i;
            edge.b = j;
            edge.distance = neighbors[static_cast<std::size_t>(m)].first;
            edge.duration = rng.uniform(params.delta_min, params.delta_max);
            edge.priority = rng.uniform(params.rho_min, params.rho_max);
            graph.edges.push_back(edge);
        }
    }

    // start/destination: the farthest-apart waypoint pair
    double best = -1.0;
    for (int i = 0; i < params.nodes; ++i) {
        for (int j = i + 1; j < params.nodes; ++j) {
            const double d = distance(graph.waypoints[static_cast<std::size_t>(i)],
                                      graph.waypoints[static_cast<std::size_t>(j)]);
            if (d > best) {
                best = d;
                graph.start = i;
                graph.dest = j;
            }
        }
    }

    const std::vector<double> sp = shortest_times_to(graph, graph.dest, 1.0);
    if (!std::isfinite(sp[static_cast<std::size_t>(graph.start)])) {
        throw std::runtime_error("generate_graph: start and destination are disconnected");
    }
    return graph;
}

std::vector<double> shortest_times_to(const TaskGraph& graph, int dest, double speed) {
    const std::size_t n = graph.waypoints.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    dist[static_cast<std::size_t>(dest)] = 0.0;
    const std::vector<std::vector<int>> adj = graph.adjacency();
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, dest);
    while (!heap.empty()) {
        const auto [d, node] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(node)]) {
            continue;
        }
        for (int e : adj[static_cast<std::size_t>(node)]) {
            const TaskEdge& edge = graph.edges[static_cast<std::size_t>(e)];
            if (edge.traversed) {
                continue;
            }
            const int other = edge.a == node ? edge.b : edge.a;
            const double nd = d + graph.edge_time(e, speed);
            if (nd < dist[static_cast<std::size_t>(other)]) {
                dist[static_cast<std::size_t>(other)] = nd;
                heap.emplace(nd, other);
            }
        }
    }
    return dist;
}

namespace {

// Dijkstra from `from` to dest restricted to unvisited nodes; returns the
// node path (excluding `from`) or empty when unreachable.
struct FallbackPath {
    std::vector<int> nodes;
    std::vector<int> edge_ids;
    double time = 0.0;
};

FallbackPath shortest_path_through_unvisited(const TaskGraph& graph, int from, int dest,
                                             const std::vector<bool>& visited, double speed) {
    const std::size_t n = graph.waypoints.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> via_edge(n, -1);
    std::vector<int> prev(n, -1);
    dist[static_cast<std::size_t>(from)] = 0.0;
    const std::vector<std::vector<int>> adj = graph.adjacency();
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, from);
    while (!heap.empty()) {
        const auto [d, node] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(node)]) {
            continue;
        }
        for (int e : adj[static_cast<std::size_t>(node)]) {
            const TaskEdge& edge = graph.edges[static_cast<std::size_t>(e)];
            if (edge.traversed) {
                continue;
            }
            const int other = edge.a == node ? edge.b : edge.a;
            if (other != dest && visited[static_cast<std::size_t>(other)]) {
                continue;
            }
            const double nd = d + graph.edge_time(e, speed);
            if (nd < dist[static_cast<std::size_t>(other)]) {
                dist[static_cast<std::size_t>(other)] = nd;
                via_edge[static_cast<std::size_t>(other)] = e;
                prev[static_cast<std::size_t>(other)] = node;
                heap.emplace(nd, other);
            }
        }
    }
    FallbackPath out;
    if (!std::isfinite(dist[static_cast<std::size_t>(dest)])) {
        return out;
    }
    out.time = dist[static_cast<std::size_t>(dest)];
    for (int node = dest; node != from; node = prev[static_cast<std::size_t>(node)]) {
        out.nodes.push_back(node);
        out.edge_ids.push_back(via_edge[static_cast<std::size_t>(node)]);
    }
    std::reverse(out.nodes.begin(), out.nodes.end());
    std::reverse(out.edge_ids.begin(), out.edge_ids.end());
    return out;
}

TaskSequence decode_impl(const TaskGraph& graph, const std::vector<double>& priorities, int start,
                         int dest, double t_available, double speed,
                         const std::vector<double>& sp_to_dest) {
    TaskSequence seq;
    seq.priority_vector = priorities;
    seq.nodes.push_back(start);
    if (start == dest) {
        seq.feasible = true;
        return seq;
    }

    const std::vector<std::vector<int>> adj = graph.adjacency();
    std::vector<bool> visited(graph.waypoints.size(), false);
    visited[static_cast<std::size_t>(start)] = true;
    int current = start;
    double elapsed = 0.0;

    while (current != dest) {
        int best_node = -1;
        int best_edge = -1;
        double best_priority = -std::numeric_limits<double>::infinity();
        for (int e : adj[static_cast<std::size_t>(current)]) {
            const TaskEdge& edge = graph.edges[static_cast<std::size_t>(e)];
            if (edge.traversed) {
                continue;
            }
            const int other = edge.a == current ? edge.b : edge.a;
            if (visited[static_cast<std::size_t>(other)]) {
                continue;
            }
            const double t_edge = graph.edge_time(e, speed);
            // admissible only if the destination stays reachable in budget
            if (elapsed + t_edge + sp_to_dest[static_cast<std::size_t>(other)] >= t_available) {
                continue;
            }
            const double p = priorities[static_cast<std::size_t>(other)];
            if (p > best_priority || (p == best_priority && other < best_node)) {
                best_priority = p;
                best_node = other;
                best_edge = e;
            }
        }
        if (best_node < 0) {
            // dead end: direct to destination through unvisited nodes
            const FallbackPath fb =
                shortest_path_through_unvisited(graph, current, dest, visited, speed);
            if (fb.nodes.empty() || elapsed + fb.time >= t_available) {
                seq.infeasibility = "destination unreachable within the time budget";
                return seq;
            }
            for (std::size_t i = 0; i < fb.nodes.size(); ++i) {
                seq.nodes.push_back(fb.nodes[i]);
                seq.edge_ids.push_back(fb.edge_ids[i]);
            }
            elapsed += fb.time;
            current = dest;
            break;
        }
        elapsed += graph.edge_time(best_edge, speed);
        seq.nodes.push_back(best_node);
        seq.edge_ids.push_back(best_edge);
        visited[static_cast<std::size_t>(best_node)] = true;
        current = best_node;
    }

    seq.expected_time = elapsed;
    for (int e : seq.edge_ids) {
        seq.total_priority += graph.edges[static_cast<std::size_t>(e)].priority;
    }
    seq.feasible = true;
    return seq;
}

}  // namespace

TaskSequence decode_sequence(const TaskGraph& graph, const std::vector<double>& priorities,
                             int start, int dest, double t_available, double speed) {
    if (priorities.size() != graph.waypoints.size()) {
        throw std::invalid_argument("decode_sequence: priority vector length must match node count");
    }
    for (double p : priorities) {
        if (p < kPriorityLow || p > kPriorityHigh) {
            throw std::invalid_argument("decode_sequence: priority value out of range");
        }
    }
    const std::vector<double> sp = shortest_times_to(graph, dest, speed);
    return decode_impl(graph, priorities, start, dest, t_available, speed, sp);
}

std::string to_string(SequenceCriterion c) {
    switch (c) {
        case SequenceCriterion::Endpoints: return "sequence must begin at start and end at destination";
        case SequenceCriterion::EdgesExist: return "sequence uses an edge not present in the graph";
        case SequenceCriterion::NodeRepeated: return "sequence visits a node more than once";
        case SequenceCriterion::EdgeRepeated: return "sequence traverses an edge more than once";
        case SequenceCriterion::TimeBudget: return "total expected time must be below the available time";
    }
    return "unknown criterion";
}

std::vector<SequenceCriterion> validate_sequence(const TaskGraph& graph, const TaskSequence& seq,
                                                 double t_available, double speed) {
    std::vector<SequenceCriterion> violated;
    if (seq.nodes.empty() || seq.nodes.front() != graph.start || seq.nodes.back() != graph.dest) {
        violated.push_back(SequenceCriterion::Endpoints);
    }
    bool missing_edge = false;
    double total_time = 0.0;
    std::vector<int> used_edges;
    for (std::size_t i = 1; i < seq.nodes.size(); ++i) {
        const int e = graph.find_edge(seq.nodes[i - 1], seq.nodes[i]);
        if (e < 0) {
            missing_edge = true;
            continue;
        }
        used_edges.push_back(e);
        total_time += graph.edge_time(e, speed);
    }
    if (missing_edge) {
        violated.push_back(SequenceCriterion::EdgesExist);
    }
    std::vector<int> nodes_sorted = seq.nodes;
    std::sort(nodes_sorted.begin(), nodes_sorted.end());
    if (std::adjacent_find(nodes_sorted.begin(), nodes_sorted.end()) != nodes_sorted.end()) {
        violated.push_back(SequenceCriterion::NodeRepeated);
    }
    std::sort(used_edges.begin(), used_edges.end());
    if (std::adjacent_find(used_edges.begin(), used_edges.end()) != used_edges.end()) {
        violated.push_back(SequenceCriterion::EdgeRepeated);
    }
    if (!(total_time < t_available)) {
        violated.push_back(SequenceCriterion::TimeBudget);
    }
    return violated;
}

double mission_cost(const TaskGraph& graph, const TaskSequence& seq,
                    const MissionCostInputs& inputs, const std::vector<double>& leg_costs) {
    if (leg_costs.size() != seq.edge_ids.size()) {
        throw std::invalid_argument("mission_cost: one leg cost required per selected edge");
    }
    double time_term = 0.0;
    double priority_term = 0.0;
    double expected = 0.0;
    for (std::size_t i = 0; i < seq.edge_ids.size(); ++i) {
        const TaskEdge& edge = graph.edges[static_cast<std::size_t>(seq.edge_ids[i])];
        time_term += leg_costs[i] + edge.duration;
        priority_term += 1.0 / edge.priority;
        expected += graph.edge_time(seq.edge_ids[i], inputs.speed);
    }
    double cost = inputs.phi1 * std::abs(time_term - inputs.t_available) +
                  inputs.phi2 * priority_term;
    if (expected >= inputs.t_available) {
        cost += 1e6 + (expected - inputs.t_available);  // budget overdraft penalty
    }
    return cost;
}

double mission_cost(const TaskGraph& graph, const TaskSequence& seq,
                    const MissionCostInputs& inputs) {
    std::vector<double> legs;
    legs.reserve(seq.edge_ids.size());
    for (int e : seq.edge_ids) {
        legs.push_back(graph.edges[static_cast<std::size_t>(e)].distance / inputs.speed);
    }
    return mission_cost(graph, seq, inputs, legs);
}

namespace {

class MissionEncoding : public Encoding {
  public:
    MissionEncoding(const TaskGraph& graph, int start, int dest, double t_available,
                    const MissionCostInputs& inputs)
        : graph_(graph),
          start_(start),
          dest_(dest),
          t_available_(t_available),
          inputs_(inputs),
          sp_to_dest_(shortest_times_to(graph, dest, inputs.speed)) {
        inputs_.t_available = t_available;
    }

    std::vector<double> random_solution(Rng& rng) override {
        std::vector<double> siv(graph_.waypoints.size());
        for (int attempt = 0; attempt < 50; ++attempt) {
            for (double& v : siv) {
                v = rng.uniform(kPriorityLow, kPriorityHigh);
            }
            if (decode(siv).feasible) {
                break;
            }
        }
        return siv;
    }

    Evaluation evaluate(const std::vector<double>& siv) override {
        const TaskSequence seq = decode(siv);
        if (!seq.feasible) {
            return {1e9, 1.0};
        }
        const double gap = t_available_ - seq.expected_time;
        tightest_gap_ = std::min(tightest_gap_, gap);
        return {mission_cost(graph_, seq, inputs_), 0.0};
    }

    void mutate(std::vector<double>& siv, double rate, Rng& rng) override {
        const double span = kPriorityHigh - kPriorityLow;
        for (double& v : siv) {
            if (rng.uniform(0.0, 1.0) < rate) {
                v += rng.normal(0.0, 0.1 * span);
            }
        }
    }

    bool repair(std::vector<double>& siv) override {
        for (double& v : siv) {
            v = std::clamp(v, kPriorityLow, kPriorityHigh);
        }
        return decode(siv).feasible;
    }

    std::string infeasibility_reason(const std::vector<double>& siv) override {
        const TaskSequence seq = decode(siv);
        return seq.infeasibility.empty() ? "no feasible task sequence" : seq.infeasibility;
    }

    TaskSequence decode(const std::vector<double>& siv) {
        if (siv == memo_key_) {
            return memo_value_;
        }
        TaskSequence seq = decode_impl(graph_, siv, start_, dest_, t_available_, inputs_.speed,
                                       sp_to_dest_);
        memo_key_ = siv;
        memo_value_ = seq;
        return seq;
    }

    double tightest_gap() const { return tightest_gap_; }

  private:
    const TaskGraph& graph_;
    int start_;
    int dest_;
    double t_available_;
    MissionCostInputs inputs_;
    std::vector<double> sp_to_dest_;
    std::vector<double> memo_key_;
    TaskSequence memo_value_;
    double tightest_gap_ = std::numeric_limits<double>::infinity();
};

}  // namespace

MissionPlanResult plan_mission(const TaskGraph& graph, int start, int dest, double t_available,
                               const MissionCostInputs& inputs, const BboConfig& config,
                               std::uint64_t seed) {
    const std::vector<double> sp = shortest_times_to(graph, dest, inputs.speed);
    if (!std::isfinite(sp[static_cast<std::size_t>(start)])) {
        throw std::runtime_error("plan_mission: destination unreachable from start");
    }
    MissionEncoding encoding(graph, start, dest, t_available, inputs);
    MissionPlanResult result;
    result.history = run_bbo(encoding, config, seed);
    result.best = encoding.decode(result.history.best.siv);
    result.tightest_gap = encoding.tightest_gap();
    if (!result.best.feasible && result.best.infeasibility.empty()) {
        result.best.infeasibility = "no feasible task sequence found";
    }
    return result;
}

MissionPlanResult replan_mission(const TaskGraph& graph, int current_node, double t_residual,
                                 const MissionCostInputs& inputs, const BboConfig& config,
                                 std::uint64_t seed) {
    if (t_residual <= 0.0) {
        throw std::invalid_argument("replan_mission: residual time must be > 0");
    }
    if (current_node == graph.dest) {
        MissionPlanResult result;
        result.best.nodes.push_back(graph.dest);
        result.best.feasible = true;  // already arrived, empty remaining sequence
        return result;
    }
    MissionCostInputs residual_inputs = inputs;
    residual_inputs.t_available = t_residual;
    return plan_mission(graph, current_node, graph.dest, t_residual, residual_inputs, config, seed);
}

}  // namespace hydromission
