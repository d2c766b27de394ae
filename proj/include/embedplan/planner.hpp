#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "embedplan/cartesian.hpp"
#include "embedplan/cost.hpp"
#include "embedplan/plan.hpp"
#include "embedplan/types.hpp"

namespace embedplan {

struct PlanResult {
  PlacementPlan plan;
  CostEstimate cost;
};

struct PlannerOptions {
  bool enable_cartesian = true;
  std::uint64_t product_cap_bytes = kDefaultProductCapBytes;
};

struct BruteForceOptions {
  int limit = 8;           // refuse models with more tables
  int max_group_size = 2;  // >2 additionally explores chained (k-ary) products
  std::uint64_t product_cap_bytes = kDefaultProductCapBytes;
};

/// Places physical tables across the hierarchy: the smallest tables are cached
/// on-chip as long as each bank's sequential access time stays within the
/// off-chip critical path; the rest go to off-chip channels largest-first,
/// each to the channel with the fewest tables (ties by byte load, then index).
/// Throws InfeasibleError when some table fits no channel.
PlacementPlan allocate_to_banks(const ModelSpec& model,
                                const std::vector<PhysicalTable>& tables,
                                const MemoryHierarchySpec& hierarchy);

/// Builds a plan from an explicit list of Cartesian pairs (table ids) and
/// allocates it. Pairs must be disjoint; products beyond the cap are rejected.
PlanResult plan_from_pairs(const ModelSpec& model, const MemoryHierarchySpec& hierarchy,
                           const std::vector<std::pair<int, int>>& pairs,
                           std::uint64_t product_cap_bytes = kDefaultProductCapBytes);

/// Heuristic search over Cartesian candidate counts: for each even n the n
/// smallest tables are paired smallest-with-largest (pairs whose product would
/// exceed the cap stay single), allocated, and costed; the plan with minimal
/// lookup latency wins, ties broken by minimal total storage.
PlanResult heuristic_plan(const ModelSpec& model, const MemoryHierarchySpec& hierarchy,
                          const PlannerOptions& options = {});

/// Exhaustive reference planner for small models: enumerates every pairing
/// (optionally k-ary grouping), every on-chip subset, and every bank/channel
/// packing up to bin symmetry. Returns the global optimum of
/// (lookup_latency_ns, total_bytes) over all valid plans.
PlanResult brute_force_plan(const ModelSpec& model, const MemoryHierarchySpec& hierarchy,
                            const BruteForceOptions& options = {});

}  // namespace embedplan
