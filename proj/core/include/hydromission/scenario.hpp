#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hydromission/executive.hpp"
#include "hydromission/world.hpp"

namespace hydromission {

struct MapConfig {
    std::string type = "synthetic-open";  // synthetic-open | synthetic-archipelago | pgm
    std::string path;                     // pgm only
    int width = 1000;
    int height = 1000;
    double cell_size = 10.0;  // meters per pixel
    int islands = 12;         // synthetic-archipelago only
    std::uint64_t seed = 7;
};

struct RandomObstacleConfig {
    int static_count = 0;
    int afloat_count = 0;
    int self_motivated_count = 0;
    double radius_min = 50.0, radius_max = 150.0;
    double uncertainty_min = 0.0, uncertainty_max = 5.0;
    double intrinsic_speed = 0.2;  // m/s for self-motivated obstacles
};

struct ScenarioSeeds {
    std::uint64_t world = 1;
    std::uint64_t graph = 2;
    std::uint64_t planner = 3;
};

struct Scenario {
    MapConfig map;
    double depth_extent = 1000.0;
    int layers = 4;
    int t_series = 4;
    std::vector<VortexParams> vortices;
    std::vector<Obstacle> obstacles;  // explicit roster
    RandomObstacleConfig random_obstacles;
    double obstacle_growth_rate = 0.01;
    VehicleModel vehicle;
    GraphParams graph;
    double t_available = 14400.0;
    double planning_margin = 0.97;  // budget fraction the mission planner may fill
    MissionCostInputs mission_inputs;
    BboConfig bbo_path;
    BboConfig bbo_mission;
    SplineConfig spline;
    PathWeights weights;
    ScenarioSeeds seeds;
    std::string output_dir = "out";
};

// Parses a scenario, applying defaults for absent keys and rejecting
// unknown ones with a path-qualified diagnostic.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

// Fully resolved configuration (all defaults applied).
nlohmann::json scenario_to_json(const Scenario& s);

TerrainGrid build_terrain(const Scenario& s);
World build_world(const Scenario& s, const TerrainGrid& terrain, std::uint64_t world_seed);
TaskGraph build_scenario_graph(const Scenario& s, const TerrainGrid& terrain,
                               std::uint64_t graph_seed);
ExecutiveConfig make_executive_config(const Scenario& s);

// Default parameter sets for the two planners.
BboConfig default_path_bbo();
BboConfig default_mission_bbo();

}  // namespace hydromission
