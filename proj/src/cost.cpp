#include "embedplan/cost.hpp"

#include <algorithm>

namespace embedplan {

CostEstimate cost(const ModelSpec& model, const PlacementPlan& plan,
                  const MemoryHierarchySpec& hierarchy) {
  CostEstimate est;
  const int lookups = model.lookups_per_table;

  int max_channel_accesses = 0;
  for (const auto& ch : plan.dram_assignment)
    max_channel_accesses =
        std::max(max_channel_accesses, static_cast<int>(ch.size()) * lookups);
  est.dram_rounds = max_channel_accesses;
  est.dram_critical_ns = max_channel_accesses * hierarchy.dram_access_ns;

  int max_bank_accesses = 0;
  for (const auto& bank : plan.onchip_assignment)
    max_bank_accesses = std::max(max_bank_accesses, static_cast<int>(bank.size()) * lookups);
  est.onchip_critical_ns = max_bank_accesses * hierarchy.onchip_access_ns;

  est.lookup_latency_ns = std::max(est.onchip_critical_ns, est.dram_critical_ns);
  est.total_bytes = plan.total_bytes();
  est.overhead_ratio = plan.cartesian_pairs.empty() && est.total_bytes == model.total_bytes()
                           ? 1.0
                           : static_cast<double>(est.total_bytes) /
                                 static_cast<double>(model.total_bytes());
  return est;
}

}  // namespace embedplan
