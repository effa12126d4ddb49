#include <benchmark/benchmark.h>

#include "hydromission/maps.hpp"
#include "hydromission/missionplan.hpp"
#include "hydromission/pathplan.hpp"
#include "hydromission/world.hpp"

using namespace hydromission;

namespace {

TerrainGrid open_water(int px = 300, double cell = 10.0) {
    GrayImage img;
    img.width = px;
    img.height = px;
    img.pixels.assign(static_cast<std::size_t>(px) * px, 255);
    return cluster_map(img, 3, cell, 1000.0);
}

CurrentField demo_field() {
    std::vector<VortexParams> vortices(4);
    for (int i = 0; i < 4; ++i) {
        vortices[static_cast<std::size_t>(i)].center = {700.0 + 500.0 * i, 900.0 + 300.0 * i};
        vortices[static_cast<std::size_t>(i)].strength = 900.0 + 200.0 * i;
        vortices[static_cast<std::size_t>(i)].radius = 600.0;
        vortices[static_cast<std::size_t>(i)].layer = i % 4;
    }
    return CurrentField(std::move(vortices), 4, 1000.0);
}

void bm_current_sample(benchmark::State& state) {
    const CurrentField field = demo_field();
    double x = 0.0;
    for (auto _ : state) {
        x += 1.0;
        benchmark::DoNotOptimize(field.sample({1000.0 + std::fmod(x, 500.0), 1200.0, 250.0}));
    }
}
BENCHMARK(bm_current_sample);

void bm_spline_eval(benchmark::State& state) {
    const std::vector<Vec3> cp = {{0, 0, 0},     {400, 300, 50}, {900, 200, 120},
                                  {1400, 700, 80}, {1900, 500, 200}, {2400, 900, 150}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_spline(cp, 3, 81));
    }
}
BENCHMARK(bm_spline_eval);

void bm_path_cost(benchmark::State& state) {
    static const TerrainGrid terrain = open_water();
    World world(terrain, demo_field(), {}, 3);
    static const WorldSnapshot snap = world.snapshot();
    PathProblem problem;
    problem.start = {400.0, 400.0, 100.0};
    problem.goal = {2600.0, 2600.0, 300.0};
    problem.world = &snap;
    problem.bounds = make_bounds(problem.start, problem.goal, terrain);
    const std::vector<Vec3> cp = {problem.start,       {900, 700, 150},  {1300, 1200, 200},
                                  {1800, 1700, 220},   {2200, 2200, 260}, problem.goal};
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_candidate(cp, problem));
    }
}
BENCHMARK(bm_path_cost);

void bm_sequence_decode(benchmark::State& state) {
    static const TerrainGrid terrain = open_water();
    Rng rng(5);
    GraphParams params;
    static const TaskGraph graph = generate_graph(terrain, params, rng);
    Rng prio_rng(9);
    std::vector<double> priorities(static_cast<std::size_t>(graph.node_count()));
    for (double& p : priorities) p = prio_rng.uniform(kPriorityLow, kPriorityHigh);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            decode_sequence(graph, priorities, graph.start, graph.dest, 14400.0, 2.0));
    }
}
BENCHMARK(bm_sequence_decode);

}  // namespace

BENCHMARK_MAIN();
