#pragma once

#include <cstdint>

#include "embedplan/plan.hpp"
#include "embedplan/types.hpp"

namespace embedplan {

/// Lookup-stage cost of a placement. Off-chip channels operate independently
/// and in parallel; accesses on one channel are sequential, so the critical
/// path is set by the most loaded channel (the "DRAM access rounds").
struct CostEstimate {
  int dram_rounds = 0;            // max accesses on any off-chip channel
  double onchip_critical_ns = 0;  // max over banks of accesses * onchip_access_ns
  double dram_critical_ns = 0;    // dram_rounds * dram_access_ns
  double lookup_latency_ns = 0;   // max of the two critical paths
  std::uint64_t total_bytes = 0;
  double overhead_ratio = 1.0;    // total_bytes / original model bytes
};

CostEstimate cost(const ModelSpec& model, const PlacementPlan& plan,
                  const MemoryHierarchySpec& hierarchy);

}  // namespace embedplan
