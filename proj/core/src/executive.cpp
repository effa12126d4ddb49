#include "hydromission/executive.hpp"

#include <chrono>
#include <stdexcept>

namespace hydromission {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Success: return "Success";
        case Outcome::Failure: return "Failure";
        case Outcome::Infeasible: return "Infeasible";
    }
    return "Unknown";
}

ReplanDecision check_replan_trigger(double realized_time, double expected_time) {
    return realized_time > expected_time ? ReplanDecision::ReplanMission : ReplanDecision::Continue;
}

MissionTrace run_mission(World& world, TaskGraph graph, const ExecutiveConfig& config,
                         std::uint64_t seed) {
    const auto wall_start = std::chrono::steady_clock::now();
    MissionTrace trace;
    trace.ledger.t_available = config.t_available;

    // The planner sees a slightly reduced budget so realized leg times
    // that run over their estimates do not overdraw the real one.
    const double plan_budget = config.planning_margin * config.t_available;
    MissionCostInputs inputs = config.mission_inputs;
    inputs.t_available = plan_budget;
    inputs.speed = config.vehicle.water_speed;

    auto mission_seed = [&](int call) { return derive_seed(seed, 0x1u, static_cast<std::uint64_t>(call)); };
    auto path_seed = [&](int call) { return derive_seed(seed, 0x2u, static_cast<std::uint64_t>(call)); };

    MissionPlanResult plan;
    try {
        plan = plan_mission(graph, graph.start, graph.dest, plan_budget, inputs,
                            config.mission_bbo, mission_seed(trace.mission_plan_calls));
    } catch (const std::exception& e) {
        trace.outcome = Outcome::Infeasible;
        trace.note = e.what();
        trace.graph = std::move(graph);
        return trace;
    }
    ++trace.mission_plan_calls;
    trace.mission_cpu += config.mission_seconds_per_eval * static_cast<double>(plan.history.evaluations);
    trace.sequences.push_back(plan.best);
    trace.mission_histories.push_back({plan.history.best_history, plan.history.mean_history,
                                       plan.history.mean_violation_history,
                                       plan.history.evaluations});
    if (!plan.best.feasible) {
        trace.outcome = Outcome::Infeasible;
        trace.note = plan.best.infeasibility;
        trace.graph = std::move(graph);
        return trace;
    }
    trace.ledger.cost_mission = plan.history.best.cost;

    TaskSequence seq = plan.best;
    std::size_t leg_index = 0;
    int current = seq.nodes.front();
    const double dt_series = config.t_available / static_cast<double>(config.t_series);

    while (current != graph.dest) {
        const int next = seq.nodes[leg_index + 1];
        const int edge_id = seq.edge_ids[leg_index];
        const TaskEdge& edge = graph.edges[static_cast<std::size_t>(edge_id)];

        world.advance(dt_series);
        const WorldSnapshot snap = world.snapshot();

        PathProblem problem;
        problem.start = graph.waypoints[static_cast<std::size_t>(current)];
        problem.goal = graph.waypoints[static_cast<std::size_t>(next)];
        problem.world = &snap;
        problem.vehicle = config.vehicle;
        problem.spline = config.spline;
        problem.weights = config.weights;

        const PathPlanResult path = plan_path(problem, config.path_bbo, path_seed(trace.path_plan_calls));
        ++trace.path_plan_calls;
        trace.path_cpu += config.path_seconds_per_eval * static_cast<double>(path.history.evaluations);

        LegRecord leg;
        leg.from = current;
        leg.to = next;
        leg.edge_id = edge_id;
        leg.expected_time = graph.edge_time(edge_id, config.vehicle.water_speed);
        leg.nominal_time = path.best.cost.nominal_time;
        leg.ground_time = path.best.cost.ground_time;
        leg.task_duration = edge.duration;
        leg.realized_time =
            config.realized_time_scale * path.best.cost.ground_time + edge.duration;
        leg.cost = path.best.cost;
        leg.samples = path.best.samples;
        leg.best_history = path.history.best_history;
        leg.mean_history = path.history.mean_history;
        leg.mean_violation_history = path.history.mean_violation_history;

        trace.ledger.accrued += leg.realized_time;
        graph.edges[static_cast<std::size_t>(edge_id)].traversed = true;
        current = next;
        ++leg_index;

        if (trace.ledger.residual() <= 0.0) {
            trace.legs.push_back(std::move(leg));
            trace.outcome = Outcome::Failure;
            trace.note = "time budget exhausted";
            trace.graph = std::move(graph);
            const auto wall_end = std::chrono::steady_clock::now();
            trace.wall_seconds = std::chrono::duration<double>(wall_end - wall_start).count();
            return trace;
        }
        if (current == graph.dest) {
            trace.legs.push_back(std::move(leg));
            break;
        }

        if (check_replan_trigger(leg.realized_time, leg.expected_time) ==
            ReplanDecision::ReplanMission) {
            leg.replan_triggered = true;
            MissionPlanResult replan;
            bool replan_failed = false;
            std::string failure_note;
            try {
                replan = replan_mission(graph, current,
                                        config.planning_margin * trace.ledger.residual(), inputs,
                                        config.mission_bbo, mission_seed(trace.mission_plan_calls));
            } catch (const std::exception& e) {
                replan_failed = true;
                failure_note = e.what();
            }
            ++trace.mission_plan_calls;
            ++trace.ledger.replan_count;
            const double model_time =
                config.trigger_check_seconds +
                config.mission_seconds_per_eval * static_cast<double>(replan.history.evaluations);
            trace.ledger.compute_samples.push_back(model_time);
            trace.mission_cpu +=
                config.mission_seconds_per_eval * static_cast<double>(replan.history.evaluations);
            trace.legs.push_back(std::move(leg));

            if (replan_failed || !replan.best.feasible) {
                trace.outcome = Outcome::Infeasible;
                trace.note = replan_failed ? failure_note : replan.best.infeasibility;
                trace.graph = std::move(graph);
                const auto wall_end = std::chrono::steady_clock::now();
                trace.wall_seconds = std::chrono::duration<double>(wall_end - wall_start).count();
                return trace;
            }
            trace.sequences.push_back(replan.best);
            trace.mission_histories.push_back({replan.history.best_history,
                                               replan.history.mean_history,
                                               replan.history.mean_violation_history,
                                               replan.history.evaluations});
            trace.ledger.cost_mission = replan.history.best.cost;
            seq = replan.best;
            leg_index = 0;
            if (seq.nodes.size() < 2) {
                break;  // replan says we are already at the destination
            }
        } else {
            trace.legs.push_back(std::move(leg));
        }
    }

    trace.outcome = trace.ledger.residual() > 0.0 ? Outcome::Success : Outcome::Failure;
    trace.graph = std::move(graph);
    const auto wall_end = std::chrono::steady_clock::now();
    trace.wall_seconds = std::chrono::duration<double>(wall_end - wall_start).count();
    return trace;
}

}  // namespace hydromission
