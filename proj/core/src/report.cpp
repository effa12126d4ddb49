#include "hydromission/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hydromission {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

json history_json(const std::vector<double>& best, const std::vector<double>& mean,
                  const std::vector<double>& mean_violation) {
    return json{{"best", best}, {"mean", mean}, {"mean_violation", mean_violation}};
}

json cost_json(const CostBreakdown& c) {
    return json{{"length", c.length},
                {"nominal_time", c.nominal_time},
                {"ground_time", c.ground_time},
                {"surge_violation", c.surge_violation},
                {"sway_violation", c.sway_violation},
                {"heading_violation", c.heading_violation},
                {"coast_hits", c.coast_hits},
                {"obstacle_hits", c.obstacle_hits},
                {"uncertain_risk", c.uncertain_risk},
                {"total", c.total}};
}

json samples_json(const std::vector<PathState>& samples) {
    json arr = json::array();
    for (const auto& s : samples) {
        arr.push_back(json::array(
            {s.position.x, s.position.y, s.position.z, s.psi, s.theta}));
    }
    return arr;
}

json mission_plan_event(int index, const TaskSequence& seq, const PlanHistoryRecord& hist) {
    return json{{"event", "mission_plan"},
                {"index", index},
                {"nodes", seq.nodes},
                {"edge_ids", seq.edge_ids},
                {"expected_time", seq.expected_time},
                {"total_priority", seq.total_priority},
                {"history", history_json(hist.best_history, hist.mean_history,
                                         hist.mean_violation_history)},
                {"evaluations", hist.evaluations}};
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_trace_jsonl(const MissionTrace& trace, const std::string& path) {
    auto out = open_out(path);
    std::size_t plan_index = 0;
    if (plan_index < trace.sequences.size()) {
        out << mission_plan_event(0, trace.sequences[0], trace.mission_histories[0]).dump()
            << '\n';
        ++plan_index;
    }
    for (std::size_t i = 0; i < trace.legs.size(); ++i) {
        const LegRecord& leg = trace.legs[i];
        json e{{"event", "leg"},
               {"index", i},
               {"from", leg.from},
               {"to", leg.to},
               {"edge_id", leg.edge_id},
               {"expected_time", leg.expected_time},
               {"nominal_time", leg.nominal_time},
               {"ground_time", leg.ground_time},
               {"task_duration", leg.task_duration},
               {"realized_time", leg.realized_time},
               {"replan_triggered", leg.replan_triggered},
               {"cost", cost_json(leg.cost)},
               {"path", samples_json(leg.samples)},
               {"history", history_json(leg.best_history, leg.mean_history,
                                        leg.mean_violation_history)}};
        out << e.dump() << '\n';
        if (leg.replan_triggered && plan_index < trace.sequences.size()) {
            out << mission_plan_event(static_cast<int>(plan_index), trace.sequences[plan_index],
                                      trace.mission_histories[plan_index])
                       .dump()
                << '\n';
            ++plan_index;
        }
    }
    json summary{{"event", "summary"},
                 {"outcome", to_string(trace.outcome)},
                 {"t_available", trace.ledger.t_available},
                 {"t_mission", trace.ledger.accrued},
                 {"t_residual", trace.ledger.residual()},
                 {"replans", trace.ledger.replan_count},
                 {"compute_samples", trace.ledger.compute_samples},
                 {"cost_mission", trace.ledger.cost_mission},
                 {"cost_total", trace.ledger.cost_total()},
                 {"legs", trace.legs.size()},
                 {"mission_plan_calls", trace.mission_plan_calls},
                 {"path_plan_calls", trace.path_plan_calls},
                 {"mission_cpu", trace.mission_cpu},
                 {"path_cpu", trace.path_cpu},
                 {"note", trace.note}};
    out << summary.dump() << '\n';
}

std::vector<json> read_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open trace: " + path);
    std::vector<json> events;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        events.push_back(json::parse(line));
    }
    return events;
}

std::string summary_csv_header() {
    return "run,seed,outcome,t_available,t_mission,t_residual,replans,cost_mission,"
           "cost_total,legs,path_calls,mission_cpu,path_cpu";
}

std::string summary_csv_row(int run, std::uint64_t seed, const MissionTrace& trace) {
    std::ostringstream row;
    row << run << ',' << seed << ',' << to_string(trace.outcome) << ','
        << format_number(trace.ledger.t_available) << ','
        << format_number(trace.ledger.accrued) << ','
        << format_number(trace.ledger.residual()) << ',' << trace.ledger.replan_count << ','
        << format_number(trace.ledger.cost_mission) << ','
        << format_number(trace.ledger.cost_total()) << ',' << trace.legs.size() << ','
        << trace.path_plan_calls << ',' << format_number(trace.mission_cpu) << ','
        << format_number(trace.path_cpu);
    return row.str();
}

void write_summary_csv(const std::vector<std::string>& rows, const std::string& path) {
    auto out = open_out(path);
    out << summary_csv_header() << '\n';
    for (const auto& row : rows) out << row << '\n';
}

void write_convergence_csv(const std::vector<json>& events, const std::string& path) {
    // Cost/violation per iteration of the first leg's path planner run.
    const json* leg = nullptr;
    for (const auto& e : events) {
        if (e.value("event", "") == "leg") {
            leg = &e;
            break;
        }
    }
    if (!leg) throw std::runtime_error("trace contains no leg events");
    const auto& hist = (*leg)["history"];
    const auto& best = hist["best"];
    const auto& mean = hist["mean"];
    const auto& viol = hist["mean_violation"];
    auto out = open_out(path);
    out << "iteration,best_cost,mean_cost,mean_violation\n";
    for (std::size_t i = 0; i < best.size(); ++i) {
        out << i << ',' << format_number(best[i].get<double>()) << ','
            << format_number(mean[i].get<double>()) << ','
            << format_number(viol[i].get<double>()) << '\n';
    }
}

void write_path3d_csv(const std::vector<json>& events, const std::string& path) {
    auto out = open_out(path);
    out << "s,X,Y,Z,psi,theta\n";
    double s = 0.0;
    bool have_prev = false;
    Vec3 prev;
    for (const auto& e : events) {
        if (e.value("event", "") != "leg") continue;
        for (const auto& sample : e["path"]) {
            Vec3 p{sample[0].get<double>(), sample[1].get<double>(), sample[2].get<double>()};
            if (have_prev) s += distance(prev, p);
            prev = p;
            have_prev = true;
            out << format_number(s) << ',' << format_number(p.x) << ',' << format_number(p.y)
                << ',' << format_number(p.z) << ',' << format_number(sample[3].get<double>())
                << ',' << format_number(sample[4].get<double>()) << '\n';
        }
    }
}

void write_timebudget_csv(const std::string& summary_csv_path, const std::string& path) {
    std::ifstream in(summary_csv_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open summary: " + summary_csv_path);
    std::string line;
    if (!std::getline(in, line) || line != summary_csv_header()) {
        throw std::runtime_error("unexpected summary header in " + summary_csv_path);
    }
    auto out = open_out(path);
    out << "run,T_Mission,T_Residual\n";
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        out << fields[0] << ',' << fields[4] << ',' << fields[5] << '\n';
    }
}

void write_cputime_csv(const std::string& summary_csv_path, const std::string& path) {
    std::ifstream in(summary_csv_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open summary: " + summary_csv_path);
    std::string line;
    if (!std::getline(in, line) || line != summary_csv_header()) {
        throw std::runtime_error("unexpected summary header in " + summary_csv_path);
    }
    auto out = open_out(path);
    out << "run,mission_cpu,path_cpu,mission_share,path_share\n";
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        const double mission_cpu = std::stod(fields[11]);
        const double path_cpu = std::stod(fields[12]);
        const double total = mission_cpu + path_cpu;
        const double ms = total > 0.0 ? mission_cpu / total : 0.0;
        const double ps = total > 0.0 ? path_cpu / total : 0.0;
        out << fields[0] << ',' << fields[11] << ',' << fields[12] << ','
            << format_number(ms) << ',' << format_number(ps) << '\n';
    }
}

void write_leg_times_csv(const std::vector<MissionTrace>& traces, const std::string& path) {
    auto out = open_out(path);
    out << "run,leg,expected_time,realized_time\n";
    for (std::size_t run = 0; run < traces.size(); ++run) {
        const auto& legs = traces[run].legs;
        for (std::size_t i = 0; i < legs.size(); ++i) {
            out << run << ',' << i << ',' << format_number(legs[i].expected_time) << ','
                << format_number(legs[i].realized_time) << '\n';
        }
    }
}

void write_current_raster_csv(const WorldSnapshot& snapshot, int resolution,
                              const std::string& path) {
    if (!snapshot.terrain) throw std::runtime_error("snapshot has no terrain");
    if (resolution < 2) throw std::runtime_error("raster resolution must be at least 2");
    const double ex = snapshot.terrain->extent_x();
    const double ey = snapshot.terrain->extent_y();
    auto out = open_out(path);
    out << "x,y,u,v,magnitude\n";
    for (int j = 0; j < resolution; ++j) {
        for (int i = 0; i < resolution; ++i) {
            const double x = ex * (i + 0.5) / resolution;
            const double y = ey * (j + 0.5) / resolution;
            const CurrentSample c = snapshot.field.sample({x, y, 0.0});
            out << format_number(x) << ',' << format_number(y) << ',' << format_number(c.u)
                << ',' << format_number(c.v) << ',' << format_number(c.magnitude) << '\n';
        }
    }
}

}  // namespace hydromission
