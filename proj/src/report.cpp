#include "embedplan/report.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace embedplan {

namespace {

using ordered_json = nlohmann::ordered_json;

// fixed 6-decimal formatting keeps report files byte-stable
ordered_json fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return ordered_json::parse(buf);
}

ordered_json cost_json(const CostEstimate& cost) {
  ordered_json c;
  c["dram_rounds"] = cost.dram_rounds;
  c["onchip_critical_ns"] = fixed(cost.onchip_critical_ns);
  c["dram_critical_ns"] = fixed(cost.dram_critical_ns);
  c["lookup_latency_ns"] = fixed(cost.lookup_latency_ns);
  c["total_bytes"] = cost.total_bytes;
  c["overhead_ratio"] = fixed(cost.overhead_ratio);
  return c;
}

ordered_json simulation_json(const SimulationReport& report) {
  ordered_json s;
  s["single_item_latency_ns"] = fixed(report.single_item_latency_ns);
  s["bottleneck_stage_ns"] = fixed(report.bottleneck_stage_ns);
  s["steady_throughput_items_per_s"] = fixed(report.steady_throughput_items_per_s);
  s["item_count"] = report.item_count;
  s["makespan_ns"] = fixed(report.makespan_ns);
  s["stages"] = ordered_json::array();
  for (std::size_t i = 0; i < report.stages.size(); ++i) {
    ordered_json stage;
    stage["name"] = report.stages[i].name;
    stage["ns"] = fixed(report.stages[i].ns);
    stage["utilization"] = fixed(report.stage_utilization[i]);
    s["stages"].push_back(stage);
  }
  return s;
}

}  // namespace

std::string plan_to_json(const PlacementPlan& plan, const CostEstimate& cost) {
  ordered_json out;
  out["cartesian_pairs"] = ordered_json::array();
  for (const auto& [a, b] : plan.cartesian_pairs)
    out["cartesian_pairs"].push_back(ordered_json::array({a, b}));
  out["physical_tables"] = ordered_json::array();
  for (const auto& phys : plan.physicals) {
    ordered_json p;
    p["members"] = ordered_json::array();
    for (const auto& m : phys.members) {
      ordered_json member;
      member["table"] = m.table_id;
      member["rows"] = m.rows;
      member["dim"] = m.dim;
      p["members"].push_back(member);
    }
    p["elem_bits"] = phys.elem_bits;
    p["rows"] = phys.rows();
    p["dim"] = phys.dim();
    p["byte_size"] = phys.byte_size();
    out["physical_tables"].push_back(p);
  }
  out["onchip_assignment"] = plan.onchip_assignment;
  out["dram_assignment"] = plan.dram_assignment;
  out["concat_map"] = ordered_json::array();
  for (const auto& slice : plan.concat_map) {
    ordered_json s;
    s["table"] = slice.table_id;
    s["physical"] = slice.physical_index;
    s["offset"] = slice.offset;
    s["length"] = slice.length;
    out["concat_map"].push_back(s);
  }
  out["cost"] = cost_json(cost);
  return out.dump(2) + "\n";
}

PlacementPlan plan_from_json(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(std::string("invalid plan JSON: ") + err.what());
  }
  PlacementPlan plan;
  try {
    for (const auto& p : doc.at("physical_tables")) {
      PhysicalTable phys;
      phys.elem_bits = p.at("elem_bits").get<std::uint32_t>();
      for (const auto& m : p.at("members"))
        phys.members.push_back({m.at("table").get<int>(), m.at("rows").get<std::uint64_t>(),
                                m.at("dim").get<std::uint32_t>()});
      plan.physicals.push_back(std::move(phys));
    }
    for (const auto& pair : doc.at("cartesian_pairs"))
      plan.cartesian_pairs.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    plan.onchip_assignment = doc.at("onchip_assignment").get<std::vector<std::vector<int>>>();
    plan.dram_assignment = doc.at("dram_assignment").get<std::vector<std::vector<int>>>();
    for (const auto& s : doc.at("concat_map"))
      plan.concat_map.push_back({s.at("table").get<int>(), s.at("physical").get<int>(),
                                 s.at("offset").get<std::uint32_t>(),
                                 s.at("length").get<std::uint32_t>()});
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(std::string("plan JSON has the wrong shape: ") + err.what());
  }
  return plan;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunReport make_run_report(const std::string& digest, const PlacementPlan& plan,
                          const CostEstimate& cost, double planner_wall_ms) {
  RunReport report;
  report.spec_digest = digest;
  report.physical_tables = static_cast<int>(plan.physicals.size());
  for (const auto& ch : plan.dram_assignment)
    report.offchip_tables += static_cast<int>(ch.size());
  for (const auto& bank : plan.onchip_assignment)
    report.onchip_tables += static_cast<int>(bank.size());
  report.cartesian_pairs = static_cast<int>(plan.cartesian_pairs.size());
  report.cost = cost;
  report.planner_wall_ms = planner_wall_ms;
  return report;
}

std::string run_report_to_json(const RunReport& report) {
  ordered_json out;
  out["spec_digest"] = report.spec_digest;
  ordered_json plan;
  plan["physical_tables"] = report.physical_tables;
  plan["offchip_tables"] = report.offchip_tables;
  plan["onchip_tables"] = report.onchip_tables;
  plan["cartesian_pairs"] = report.cartesian_pairs;
  out["plan"] = plan;
  out["cost"] = cost_json(report.cost);
  if (report.has_simulation) out["simulation"] = simulation_json(report.simulation);
  out["planner_wall_ms"] = fixed(report.planner_wall_ms);
  return out.dump(2) + "\n";
}

}  // namespace embedplan
