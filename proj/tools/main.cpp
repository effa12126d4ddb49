#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "hydromission/report.hpp"
#include "hydromission/scenario.hpp"

namespace fs = std::filesystem;
using namespace hydromission;

namespace {

const char* kConfigKeyHelp = R"(Scenario keys (all optional, defaults applied):
  map.{type,path,width,height,cell_size,islands,seed}
      type: synthetic-open | synthetic-archipelago | pgm (path required)
  depth_extent, layers, t_series, t_available, planning_margin, output_dir
  vortices[].{layer,center,strength,radius,vertical_scale,update_rate,
              sigma.{center_x,center_y,radius,strength}}
  obstacles[].{kind,position,radius,uncertainty,velocity}
      kind: static | afloat | self_motivated
  random_obstacles.{static,afloat,self_motivated,radius_min,radius_max,
                    uncertainty_min,uncertainty_max,intrinsic_speed}
  obstacle_growth_rate
  vehicle.{water_speed,surge_max,sway_max,turn_max}
  graph.{nodes,k_nearest,rho_min,rho_max,delta_min,delta_max}
  mission.{phi1,phi2}
  bbo.path / bbo.mission: {population,iterations,max_immigration,max_emigration,
      max_mutation,species_max,elites,rate_model,constant_mu,constant_lambda}
  spline.{control_points,order,samples_per_span}
  weights.{surge,sway,heading,collision}
  seeds.{world,graph,planner}
Env: HYDROMISSION_OUT overrides the output directory.)";

fs::path resolve_out_dir(const std::string& flag_out, const Scenario& s) {
    if (!flag_out.empty()) return flag_out;
    if (const char* env = std::getenv("HYDROMISSION_OUT"); env && *env) return env;
    return s.output_dir;
}

struct RunSeeds {
    std::uint64_t world, graph, planner;
};

RunSeeds seeds_for(const Scenario& s, std::uint64_t base, std::uint64_t run_index) {
    return {derive_seed(base, s.seeds.world, run_index),
            derive_seed(base, s.seeds.graph, run_index),
            derive_seed(base, s.seeds.planner, run_index)};
}

MissionTrace run_one(const Scenario& s, const TerrainGrid& terrain, const RunSeeds& seeds) {
    World world = build_world(s, terrain, seeds.world);
    TaskGraph graph = build_scenario_graph(s, terrain, seeds.graph);
    return run_mission(world, std::move(graph), make_executive_config(s), seeds.planner);
}

void write_config_echo(const Scenario& s, const fs::path& dir) {
    std::ofstream out(dir / "config.json", std::ios::binary);
    out << scenario_to_json(s).dump(2) << '\n';
}

int cmd_run(const std::string& scenario_path, std::uint64_t seed, const std::string& out_flag) {
    const Scenario s = load_scenario(scenario_path);
    const fs::path dir = resolve_out_dir(out_flag, s);
    fs::create_directories(dir);
    write_config_echo(s, dir);

    const TerrainGrid terrain = build_terrain(s);
    const RunSeeds seeds = seeds_for(s, seed, 0);
    const MissionTrace trace = run_one(s, terrain, seeds);

    write_trace_jsonl(trace, (dir / "trace.jsonl").string());
    write_summary_csv({summary_csv_row(0, seeds.planner, trace)}, (dir / "summary.csv").string());

    const auto events = read_jsonl((dir / "trace.jsonl").string());
    if (!trace.legs.empty()) {
        write_convergence_csv(events, (dir / "convergence.csv").string());
        write_path3d_csv(events, (dir / "path3d.csv").string());
    }
    {
        // Initial flow field for overlaying the executed path polylines.
        World raster_world = build_world(s, terrain, seeds.world);
        write_current_raster_csv(raster_world.snapshot(), 50,
                                 (dir / "current_raster.csv").string());
    }
    std::cout << to_string(trace.outcome) << " t_mission=" << format_number(trace.ledger.accrued)
              << " t_residual=" << format_number(trace.ledger.residual())
              << " replans=" << trace.ledger.replan_count << " legs=" << trace.legs.size()
              << '\n';
    return 0;
}

int cmd_montecarlo(const std::string& scenario_path, int runs, std::uint64_t seed_base,
                   const std::string& out_flag, int jobs) {
    const Scenario s = load_scenario(scenario_path);
    const fs::path dir = resolve_out_dir(out_flag, s);
    fs::create_directories(dir);
    write_config_echo(s, dir);

    const TerrainGrid terrain = build_terrain(s);
    std::vector<MissionTrace> traces(static_cast<std::size_t>(runs));
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::string error_message;

    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= runs || failed.load()) return;
            const RunSeeds seeds = seeds_for(s, seed_base, static_cast<std::uint64_t>(i));
            try {
                traces[static_cast<std::size_t>(i)] = run_one(s, terrain, seeds);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                failed.store(true);
                error_message = "run " + std::to_string(i) + " (planner seed " +
                                std::to_string(seeds.planner) + ") failed: " + e.what();
                return;
            }
        }
    };
    if (jobs < 1) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(jobs, runs); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) {
        std::cerr << "error: " << error_message << '\n';
        return 1;
    }

    std::vector<std::string> rows;
    for (int i = 0; i < runs; ++i) {
        const RunSeeds seeds = seeds_for(s, seed_base, static_cast<std::uint64_t>(i));
        rows.push_back(summary_csv_row(i, seeds.planner, traces[static_cast<std::size_t>(i)]));
        char name[32];
        std::snprintf(name, sizeof(name), "trace_%03d.jsonl", i);
        write_trace_jsonl(traces[static_cast<std::size_t>(i)], (dir / name).string());
    }
    const std::string summary = (dir / "summary.csv").string();
    write_summary_csv(rows, summary);
    write_timebudget_csv(summary, (dir / "timebudget.csv").string());
    write_cputime_csv(summary, (dir / "cputime.csv").string());
    write_leg_times_csv(traces, (dir / "leg_times.csv").string());

    int successes = 0;
    for (const auto& t : traces) successes += t.outcome == Outcome::Success ? 1 : 0;
    std::cout << successes << "/" << runs << " runs succeeded; summary: " << summary << '\n';
    return 0;
}

int cmd_plotdata(const std::string& input, const std::string& kind, std::string out_file) {
    if (out_file.empty()) {
        fs::path base = kind + ".csv";
        if (const char* env = std::getenv("HYDROMISSION_OUT"); env && *env) {
            fs::create_directories(env);
            base = fs::path(env) / base;
        }
        out_file = base.string();
    }
    if (kind == "convergence") {
        write_convergence_csv(read_jsonl(input), out_file);
    } else if (kind == "path3d") {
        write_path3d_csv(read_jsonl(input), out_file);
    } else if (kind == "timebudget") {
        write_timebudget_csv(input, out_file);
    } else {
        write_cputime_csv(input, out_file);
    }
    std::cout << out_file << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Underwater mission and path planning simulator"};
    app.footer(kConfigKeyHelp);
    app.require_subcommand(1);

    std::string scenario_path, out_flag, trace_path, kind, plot_out;
    std::uint64_t seed = 0, seed_base = 0;
    int runs = 100, jobs = 0;

    auto* run = app.add_subcommand("run", "Execute one mission and write its artifacts");
    run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--seed", seed, "Run seed (mixed with the scenario's seed block)");
    run->add_option("--out", out_flag, "Output directory (overrides scenario and env)");

    auto* mc = app.add_subcommand("montecarlo", "Execute N independent seeded missions");
    mc->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    mc->add_option("--runs", runs, "Number of missions")->check(CLI::PositiveNumber);
    mc->add_option("--seed-base", seed_base, "Base seed; run i derives its own seeds from it");
    mc->add_option("--out", out_flag, "Output directory (overrides scenario and env)");
    mc->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");

    auto* plot = app.add_subcommand("plotdata", "Extract plot-ready CSV series");
    plot->add_option("trace", trace_path, "Trace .jsonl (convergence, path3d) or summary .csv "
                                          "(timebudget, cputime)")
        ->required();
    plot->add_option("--kind", kind, "Series kind")
        ->required()
        ->check(CLI::IsMember({"convergence", "path3d", "timebudget", "cputime"}));
    plot->add_option("--out", plot_out, "Output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario_path, seed, out_flag);
        if (mc->parsed()) return cmd_montecarlo(scenario_path, runs, seed_base, out_flag, jobs);
        return cmd_plotdata(trace_path, kind, plot_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
