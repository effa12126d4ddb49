#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hydromission/executive.hpp"

namespace hydromission {

// Stable numeric formatting shared by every emitted file, so identical
// runs produce byte-identical artifacts.
std::string format_number(double v);

// Line-delimited JSON: one mission_plan event per planner call, one leg
// event per traversed leg, one summary event at the end.
void write_trace_jsonl(const MissionTrace& trace, const std::string& path);
std::vector<nlohmann::json> read_jsonl(const std::string& path);

std::string summary_csv_header();
std::string summary_csv_row(int run, std::uint64_t seed, const MissionTrace& trace);
void write_summary_csv(const std::vector<std::string>& rows, const std::string& path);

// Plot-ready CSV extraction.
void write_convergence_csv(const std::vector<nlohmann::json>& events, const std::string& path);
void write_path3d_csv(const std::vector<nlohmann::json>& events, const std::string& path);
void write_timebudget_csv(const std::string& summary_csv_path, const std::string& path);
void write_cputime_csv(const std::string& summary_csv_path, const std::string& path);

// Monte Carlo aggregates: paired expected/realized leg times per run.
void write_leg_times_csv(const std::vector<MissionTrace>& traces, const std::string& path);

// Magnitude raster of the current field's top layer, for overlaying
// path polylines on the flow.
void write_current_raster_csv(const WorldSnapshot& snapshot, int resolution,
                              const std::string& path);

}  // namespace hydromission
