#include "hydromission/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace hydromission {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
        throw std::runtime_error("scenario: " + where + " must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) {
            throw std::runtime_error("scenario: unknown key '" + where + "." + key + "'");
        }
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

MapConfig parse_map(const json& j) {
    MapConfig m;
    check_keys(j, "map", {"type", "path", "width", "height", "cell_size", "islands", "seed"});
    read(j, "type", m.type);
    read(j, "path", m.path);
    read(j, "width", m.width);
    read(j, "height", m.height);
    read(j, "cell_size", m.cell_size);
    read(j, "islands", m.islands);
    read(j, "seed", m.seed);
    if (m.type != "synthetic-open" && m.type != "synthetic-archipelago" && m.type != "pgm") {
        throw std::runtime_error("scenario: map.type must be synthetic-open, synthetic-archipelago or pgm");
    }
    return m;
}

VortexParams parse_vortex(const json& j, const std::string& where) {
    VortexParams v;
    check_keys(j, where,
               {"layer", "center", "strength", "radius", "vertical_scale", "update_rate", "sigma"});
    read(j, "layer", v.layer);
    if (j.contains("center")) {
        const auto& c = j.at("center");
        v.center = Vec2{c.at(0).get<double>(), c.at(1).get<double>()};
    }
    read(j, "strength", v.strength);
    read(j, "radius", v.radius);
    read(j, "vertical_scale", v.vertical_scale);
    read(j, "update_rate", v.update_rate);
    if (j.contains("sigma")) {
        const json& s = j.at("sigma");
        check_keys(s, where + ".sigma", {"center_x", "center_y", "radius", "strength"});
        read(s, "center_x", v.sigma_center_x);
        read(s, "center_y", v.sigma_center_y);
        read(s, "radius", v.sigma_radius);
        read(s, "strength", v.sigma_strength);
    }
    return v;
}

Obstacle parse_obstacle(const json& j, const std::string& where) {
    Obstacle o;
    check_keys(j, where, {"kind", "position", "radius", "uncertainty", "velocity"});
    std::string kind = "static";
    read(j, "kind", kind);
    if (kind == "static") {
        o.kind = ObstacleKind::Static;
    } else if (kind == "afloat") {
        o.kind = ObstacleKind::Afloat;
    } else if (kind == "self_motivated") {
        o.kind = ObstacleKind::SelfMotivated;
    } else {
        throw std::runtime_error("scenario: " + where + ".kind must be static, afloat or self_motivated");
    }
    if (j.contains("position")) {
        const auto& p = j.at("position");
        o.position = Vec3{p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()};
    }
    read(j, "radius", o.radius);
    read(j, "uncertainty", o.uncertainty);
    if (j.contains("velocity")) {
        const auto& p = j.at("velocity");
        o.intrinsic_velocity = Vec3{p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()};
    }
    return o;
}

BboConfig parse_bbo(const json& j, const std::string& where, BboConfig base) {
    check_keys(j, where,
               {"population", "iterations", "max_immigration", "max_emigration", "max_mutation",
                "species_max", "elites", "rate_model", "constant_mu", "constant_lambda"});
    read(j, "population", base.population);
    read(j, "iterations", base.iterations);
    read(j, "max_immigration", base.max_immigration);
    read(j, "max_emigration", base.max_emigration);
    read(j, "max_mutation", base.max_mutation);
    read(j, "species_max", base.species_max);
    read(j, "elites", base.elites);
    if (j.contains("rate_model")) {
        const std::string model = j.at("rate_model").get<std::string>();
        if (model == "rank_linear") {
            base.rate_model = RateModel::RankLinear;
        } else if (model == "constant") {
            base.rate_model = RateModel::Constant;
        } else {
            throw std::runtime_error("scenario: " + where + ".rate_model must be rank_linear or constant");
        }
    }
    read(j, "constant_mu", base.constant_mu);
    read(j, "constant_lambda", base.constant_lambda);
    return base;
}

}  // namespace

BboConfig default_path_bbo() {
    BboConfig c;
    c.population = 100;
    c.iterations = 100;
    c.max_mutation = 0.1;
    c.rate_model = RateModel::RankLinear;
    c.elites = 2;
    return c;
}

BboConfig default_mission_bbo() {
    BboConfig c;
    c.population = 150;
    c.iterations = 200;
    c.max_mutation = 0.5;
    c.rate_model = RateModel::Constant;
    c.constant_mu = 0.2;
    c.constant_lambda = 0.8;
    c.elites = 2;
    return c;
}

Scenario parse_scenario(const json& j) {
    Scenario s;
    s.bbo_path = default_path_bbo();
    s.bbo_mission = default_mission_bbo();
    check_keys(j, "scenario",
               {"map", "depth_extent", "layers", "t_series", "vortices", "obstacles",
                "random_obstacles", "obstacle_growth_rate", "vehicle", "graph", "t_available",
                "planning_margin", "mission", "bbo", "spline", "weights", "seeds", "output_dir"});
    if (j.contains("map")) {
        s.map = parse_map(j.at("map"));
    }
    read(j, "depth_extent", s.depth_extent);
    read(j, "layers", s.layers);
    read(j, "t_series", s.t_series);
    if (j.contains("vortices")) {
        int i = 0;
        for (const json& v : j.at("vortices")) {
            s.vortices.push_back(parse_vortex(v, "vortices[" + std::to_string(i++) + "]"));
        }
    }
    if (j.contains("obstacles")) {
        int i = 0;
        for (const json& o : j.at("obstacles")) {
            s.obstacles.push_back(parse_obstacle(o, "obstacles[" + std::to_string(i++) + "]"));
        }
    }
    if (j.contains("random_obstacles")) {
        const json& r = j.at("random_obstacles");
        check_keys(r, "random_obstacles",
                   {"static", "afloat", "self_motivated", "radius_min", "radius_max",
                    "uncertainty_min", "uncertainty_max", "intrinsic_speed"});
        read(r, "static", s.random_obstacles.static_count);
        read(r, "afloat", s.random_obstacles.afloat_count);
        read(r, "self_motivated", s.random_obstacles.self_motivated_count);
        read(r, "radius_min", s.random_obstacles.radius_min);
        read(r, "radius_max", s.random_obstacles.radius_max);
        read(r, "uncertainty_min", s.random_obstacles.uncertainty_min);
        read(r, "uncertainty_max", s.random_obstacles.uncertainty_max);
        read(r, "intrinsic_speed", s.random_obstacles.intrinsic_speed);
    }
    read(j, "obstacle_growth_rate", s.obstacle_growth_rate);
    if (j.contains("vehicle")) {
        const json& v = j.at("vehicle");
        check_keys(v, "vehicle", {"water_speed", "surge_max", "sway_max", "turn_max"});
        read(v, "water_speed", s.vehicle.water_speed);
        read(v, "surge_max", s.vehicle.surge_max);
        read(v, "sway_max", s.vehicle.sway_max);
        read(v, "turn_max", s.vehicle.turn_max);
    }
    if (j.contains("graph")) {
        const json& g = j.at("graph");
        check_keys(g, "graph",
                   {"nodes", "k_nearest", "rho_min", "rho_max", "delta_min", "delta_max"});
        read(g, "nodes", s.graph.nodes);
        read(g, "k_nearest", s.graph.k_nearest);
        read(g, "rho_min", s.graph.rho_min);
        read(g, "rho_max", s.graph.rho_max);
        read(g, "delta_min", s.graph.delta_min);
        read(g, "delta_max", s.graph.delta_max);
    }
    read(j, "t_available", s.t_available);
    read(j, "planning_margin", s.planning_margin);
    if (s.planning_margin <= 0.0 || s.planning_margin > 1.0) {
        throw std::runtime_error("scenario.planning_margin must be in (0, 1]");
    }
    if (j.contains("mission")) {
        const json& m = j.at("mission");
        check_keys(m, "mission", {"phi1", "phi2"});
        read(m, "phi1", s.mission_inputs.phi1);
        read(m, "phi2", s.mission_inputs.phi2);
    }
    if (j.contains("bbo")) {
        const json& b = j.at("bbo");
        check_keys(b, "bbo", {"path", "mission"});
        if (b.contains("path")) {
            s.bbo_path = parse_bbo(b.at("path"), "bbo.path", s.bbo_path);
        }
        if (b.contains("mission")) {
            s.bbo_mission = parse_bbo(b.at("mission"), "bbo.mission", s.bbo_mission);
        }
    }
    if (j.contains("spline")) {
        const json& sp = j.at("spline");
        check_keys(sp, "spline", {"control_points", "order", "samples_per_span"});
        read(sp, "control_points", s.spline.control_points);
        read(sp, "order", s.spline.order);
        read(sp, "samples_per_span", s.spline.samples_per_span);
    }
    if (j.contains("weights")) {
        const json& w = j.at("weights");
        check_keys(w, "weights", {"surge", "sway", "heading", "collision"});
        read(w, "surge", s.weights.surge);
        read(w, "sway", s.weights.sway);
        read(w, "heading", s.weights.heading);
        read(w, "collision", s.weights.collision);
    }
    if (j.contains("seeds")) {
        const json& sd = j.at("seeds");
        check_keys(sd, "seeds", {"world", "graph", "planner"});
        read(sd, "world", s.seeds.world);
        read(sd, "graph", s.seeds.graph);
        read(sd, "planner", s.seeds.planner);
    }
    read(j, "output_dir", s.output_dir);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open scenario file: " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("scenario parse error in " + path + ": " + e.what());
    }
    return parse_scenario(j);
}

nlohmann::json scenario_to_json(const Scenario& s) {
    json j;
    j["map"] = {{"type", s.map.type},     {"path", s.map.path},
                {"width", s.map.width},   {"height", s.map.height},
                {"cell_size", s.map.cell_size}, {"islands", s.map.islands},
                {"seed", s.map.seed}};
    j["depth_extent"] = s.depth_extent;
    j["layers"] = s.layers;
    j["t_series"] = s.t_series;
    j["vortices"] = json::array();
    for (const VortexParams& v : s.vortices) {
        j["vortices"].push_back({{"layer", v.layer},
                                 {"center", {v.center.x, v.center.y}},
                                 {"strength", v.strength},
                                 {"radius", v.radius},
                                 {"vertical_scale", v.vertical_scale},
                                 {"update_rate", v.update_rate},
                                 {"sigma",
                                  {{"center_x", v.sigma_center_x},
                                   {"center_y", v.sigma_center_y},
                                   {"radius", v.sigma_radius},
                                   {"strength", v.sigma_strength}}}});
    }
    j["obstacles"] = json::array();
    for (const Obstacle& o : s.obstacles) {
        const char* kind = o.kind == ObstacleKind::Static ? "static"
                           : o.kind == ObstacleKind::Afloat ? "afloat" : "self_motivated";
        j["obstacles"].push_back(
            {{"kind", kind},
             {"position", {o.position.x, o.position.y, o.position.z}},
             {"radius", o.radius},
             {"uncertainty", o.uncertainty},
             {"velocity", {o.intrinsic_velocity.x, o.intrinsic_velocity.y, o.intrinsic_velocity.z}}});
    }
    j["random_obstacles"] = {{"static", s.random_obstacles.static_count},
                             {"afloat", s.random_obstacles.afloat_count},
                             {"self_motivated", s.random_obstacles.self_motivated_count},
                             {"radius_min", s.random_obstacles.radius_min},
                             {"radius_max", s.random_obstacles.radius_max},
                             {"uncertainty_min", s.random_obstacles.uncertainty_min},
                             {"uncertainty_max", s.random_obstacles.uncertainty_max},
                             {"intrinsic_speed", s.random_obstacles.intrinsic_speed}};
    j["obstacle_growth_rate"] = s.obstacle_growth_rate;
    j["vehicle"] = {{"water_speed", s.vehicle.water_speed},
                    {"surge_max", s.vehicle.surge_max},
                    {"sway_max", s.vehicle.sway_max},
                    {"turn_max", s.vehicle.turn_max}};
    j["graph"] = {{"nodes", s.graph.nodes},         {"k_nearest", s.graph.k_nearest},
                  {"rho_min", s.graph.rho_min},     {"rho_max", s.graph.rho_max},
                  {"delta_min", s.graph.delta_min}, {"delta_max", s.graph.delta_max}};
    j["t_available"] = s.t_available;
    j["planning_margin"] = s.planning_margin;
    j["mission"] = {{"phi1", s.mission_inputs.phi1}, {"phi2", s.mission_inputs.phi2}};
    auto bbo_json = [](const BboConfig& c) {
        return json{{"population", c.population},
                    {"iterations", c.iterations},
                    {"max_immigration", c.max_immigration},
                    {"max_emigration", c.max_emigration},
                    {"max_mutation", c.max_mutation},
                    {"species_max", c.species_max},
                    {"elites", c.elites},
                    {"rate_model", c.rate_model == RateModel::RankLinear ? "rank_linear" : "constant"},
                    {"constant_mu", c.constant_mu},
                    {"constant_lambda", c.constant_lambda}};
    };
    j["bbo"] = {{"path", bbo_json(s.bbo_path)}, {"mission", bbo_json(s.bbo_mission)}};
    j["spline"] = {{"control_points", s.spline.control_points},
                   {"order", s.spline.order},
                   {"samples_per_span", s.spline.samples_per_span}};
    j["weights"] = {{"surge", s.weights.surge},
                    {"sway", s.weights.sway},
                    {"heading", s.weights.heading},
                    {"collision", s.weights.collision}};
    j["seeds"] = {{"world", s.seeds.world}, {"graph", s.seeds.graph}, {"planner", s.seeds.planner}};
    j["output_dir"] = s.output_dir;
    return j;
}

TerrainGrid build_terrain(const Scenario& s) {
    GrayImage image;
    if (s.map.type == "pgm") {
        image = load_pgm(s.map.path);
    } else if (s.map.type == "synthetic-archipelago") {
        image = make_archipelago_map(s.map.width, s.map.height, s.map.islands, s.map.seed).image;
    } else {
        image = make_open_water_map(s.map.width, s.map.height);
    }
    return cluster_map(image, 3, s.map.cell_size, s.depth_extent);
}

World build_world(const Scenario& s, const TerrainGrid& terrain, std::uint64_t world_seed) {
    CurrentField field(s.vortices, s.layers, s.depth_extent);
    std::vector<Obstacle> obstacles = s.obstacles;

    Rng rng(derive_seed(world_seed, 0x0b5));
    auto water_point = [&]() {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            Vec3 p{rng.uniform(0.0, terrain.extent_x() - 1e-6),
                   rng.uniform(0.0, terrain.extent_y() - 1e-6),
                   rng.uniform(0.0, terrain.depth_extent)};
            if (terrain.class_at(p.x, p.y) == CellClass::Water) {
                return p;
            }
        }
        return Vec3{terrain.extent_x() / 2, terrain.extent_y() / 2, 0.0};
    };
    auto add_random = [&](int count, ObstacleKind kind) {
        for (int i = 0; i < count; ++i) {
            Obstacle o;
            o.kind = kind;
            o.position = water_point();
            o.radius = rng.uniform(s.random_obstacles.radius_min, s.random_obstacles.radius_max);
            o.uncertainty =
                rng.uniform(s.random_obstacles.uncertainty_min, s.random_obstacles.uncertainty_max);
            if (kind == ObstacleKind::SelfMotivated) {
                const double heading = rng.uniform(0.0, 6.283185307179586);
                o.intrinsic_velocity = Vec3{s.random_obstacles.intrinsic_speed * std::cos(heading),
                                            s.random_obstacles.intrinsic_speed * std::sin(heading), 0.0};
            }
            obstacles.push_back(o);
        }
    };
    add_random(s.random_obstacles.static_count, ObstacleKind::Static);
    add_random(s.random_obstacles.afloat_count, ObstacleKind::Afloat);
    add_random(s.random_obstacles.self_motivated_count, ObstacleKind::SelfMotivated);

    return World(terrain, std::move(field), std::move(obstacles), world_seed,
                 s.obstacle_growth_rate);
}

TaskGraph build_scenario_graph(const Scenario& s, const TerrainGrid& terrain,
                               std::uint64_t graph_seed) {
    // k-nearest graphs occasionally come out disconnected; redraw the
    // topology deterministically until one connects.
    for (int attempt = 0;; ++attempt) {
        Rng rng(derive_seed(graph_seed, 0x6772, static_cast<std::uint64_t>(attempt)));
        try {
            return generate_graph(terrain, s.graph, rng);
        } catch (const std::exception&) {
            if (attempt >= 31) throw;
        }
    }
}

ExecutiveConfig make_executive_config(const Scenario& s) {
    ExecutiveConfig c;
    c.t_available = s.t_available;
    c.t_series = s.t_series;
    c.mission_inputs = s.mission_inputs;
    c.mission_inputs.t_available = s.t_available;
    c.mission_inputs.speed = s.vehicle.water_speed;
    c.mission_bbo = s.bbo_mission;
    c.path_bbo = s.bbo_path;
    c.spline = s.spline;
    c.weights = s.weights;
    c.vehicle = s.vehicle;
    c.planning_margin = s.planning_margin;
    return c;
}

}  // namespace hydromission
