#pragma once

#include <string>

#include "embedplan/cost.hpp"
#include "embedplan/plan.hpp"
#include "embedplan/simulator.hpp"
#include "embedplan/types.hpp"

namespace embedplan {

/// Plan serialization with stable key order and fixed float formatting, so
/// identical inputs produce byte-identical files.
std::string plan_to_json(const PlacementPlan& plan, const CostEstimate& cost);
PlacementPlan plan_from_json(const std::string& json_text);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Top-level run report: spec digest, plan summary, cost, optional simulation
/// block, and the planner's wall-clock time (the one intentionally
/// non-deterministic field).
struct RunReport {
  std::string spec_digest;
  int physical_tables = 0;
  int offchip_tables = 0;
  int onchip_tables = 0;
  int cartesian_pairs = 0;
  CostEstimate cost;
  bool has_simulation = false;
  SimulationReport simulation;
  double planner_wall_ms = 0;
};

RunReport make_run_report(const std::string& digest, const PlacementPlan& plan,
                          const CostEstimate& cost, double planner_wall_ms);
std::string run_report_to_json(const RunReport& report);

}  // namespace embedplan
