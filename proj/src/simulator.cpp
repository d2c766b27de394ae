#include "embedplan/simulator.hpp"

#include <algorithm>
#include <sstream>

namespace embedplan {

LookupStats simulate_lookup(const CostEstimate& cost, const PipelineConfig& config,
                            std::uint64_t query_count) {
  LookupStats stats;
  stats.per_query_ns = cost.lookup_latency_ns + config.lookup_overhead_ns;
  stats.query_count = query_count;
  stats.total_ns = stats.per_query_ns * static_cast<double>(query_count);
  return stats;
}

std::vector<StageTiming> pipeline_stages(const ModelSpec& model, const CostEstimate& cost,
                                         const PipelineConfig& config) {
  if (config.parallel_macs <= 0 || config.clock_ghz <= 0 || config.broadcast_ns <= 0 ||
      config.gather_ns <= 0)
    throw ValidationError("pipeline_config", "stage parameters must be positive");

  std::vector<StageTiming> stages;
  stages.push_back({"lookup", cost.lookup_latency_ns + config.lookup_overhead_ns});

  std::vector<std::uint64_t> widths;
  widths.push_back(model.sum_dims());
  for (auto h : model.hidden_dims) widths.push_back(h);
  widths.push_back(1);  // CTR output

  for (std::size_t layer = 0; layer + 1 < widths.size(); ++layer) {
    std::string tag = layer + 2 < widths.size() ? "fc" + std::to_string(layer) : "fc_out";
    double macs = static_cast<double>(widths[layer]) * static_cast<double>(widths[layer + 1]) *
                  model.lookups_per_table;
    stages.push_back({tag + ".broadcast", config.broadcast_ns});
    stages.push_back({tag + ".gemm", macs / (config.parallel_macs * config.clock_ghz)});
    stages.push_back({tag + ".gather", config.gather_ns});
  }
  return stages;
}

double pipeline_makespan(const std::vector<StageTiming>& stages, std::uint64_t item_count) {
  double sum = 0, max_stage = 0;
  for (const auto& s : stages) {
    sum += s.ns;
    max_stage = std::max(max_stage, s.ns);
  }
  return sum + static_cast<double>(item_count - 1) * max_stage;
}

SimulationReport simulate_pipeline(const ModelSpec& model, const CostEstimate& cost,
                                   const PipelineConfig& config, std::uint64_t item_count) {
  if (item_count < 1) throw ValidationError("item_count", "must be >= 1");
  SimulationReport report;
  report.stages = pipeline_stages(model, cost, config);
  for (const auto& s : report.stages) {
    report.single_item_latency_ns += s.ns;
    report.bottleneck_stage_ns = std::max(report.bottleneck_stage_ns, s.ns);
  }
  report.steady_throughput_items_per_s = 1e9 / report.bottleneck_stage_ns;
  report.item_count = item_count;
  report.makespan_ns = pipeline_makespan(report.stages, item_count);
  report.stage_utilization.reserve(report.stages.size());
  for (const auto& s : report.stages)
    report.stage_utilization.push_back(s.ns / report.bottleneck_stage_ns);
  return report;
}

std::string report_stages_csv(const SimulationReport& report) {
  std::ostringstream out;
  out << "stage,ns,utilization\n";
  char line[160];
  for (std::size_t i = 0; i < report.stages.size(); ++i) {
    std::snprintf(line, sizeof line, "%s,%.6f,%.6f\n", report.stages[i].name.c_str(),
                  report.stages[i].ns, report.stage_utilization[i]);
    out << line;
  }
  return out.str();
}

}  // namespace embedplan
