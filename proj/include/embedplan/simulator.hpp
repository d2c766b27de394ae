#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "embedplan/cost.hpp"
#include "embedplan/types.hpp"

namespace embedplan {

/// Stage timing parameters. Each FC layer contributes three pipeline
/// sub-stages: input broadcast, GEMM, and result gathering, where
/// gemm_ns = in_dim * out_dim * lookups / (parallel_macs * clock_ghz).
/// lookup_overhead_ns models fixed per-lookup costs (controller setup, FIFO
/// hand-off) outside the channel-parallel access model.
struct PipelineConfig {
  double parallel_macs = 4096;
  double clock_ghz = 0.2;
  double broadcast_ns = 2000;
  double gather_ns = 2000;
  double lookup_overhead_ns = 0;
};

struct StageTiming {
  std::string name;
  double ns = 0;
};

struct LookupStats {
  double per_query_ns = 0;
  double total_ns = 0;  // query_count * per_query_ns, unpipelined
  std::uint64_t query_count = 0;
};

struct SimulationReport {
  std::vector<StageTiming> stages;
  double single_item_latency_ns = 0;       // sum of stage times
  double bottleneck_stage_ns = 0;          // max stage time
  double steady_throughput_items_per_s = 0;  // 1 / max stage time
  std::uint64_t item_count = 0;
  double makespan_ns = 0;  // single_item_latency + (items - 1) * max stage
  std::vector<double> stage_utilization;  // stage time / max stage time
};

/// Per-query lookup latency for a placed model: channels work in parallel,
/// accesses within a channel are sequential, so the critical path equals the
/// cost model's lookup latency (plus the configured fixed overhead).
LookupStats simulate_lookup(const CostEstimate& cost, const PipelineConfig& config,
                            std::uint64_t query_count);

/// Stage list for the full inference pipeline: lookup, then three sub-stages
/// per FC layer (hidden layers and the 1-wide output layer).
std::vector<StageTiming> pipeline_stages(const ModelSpec& model, const CostEstimate& cost,
                                         const PipelineConfig& config);

/// Closed-form makespan of a linear pipeline with unit-item stages.
double pipeline_makespan(const std::vector<StageTiming>& stages, std::uint64_t item_count);

SimulationReport simulate_pipeline(const ModelSpec& model, const CostEstimate& cost,
                                   const PipelineConfig& config, std::uint64_t item_count);

/// Per-stage CSV (name,ns,utilization) for plotting.
std::string report_stages_csv(const SimulationReport& report);

}  // namespace embedplan
